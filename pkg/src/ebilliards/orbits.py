"""Closed-form construction of the triangular orbit family.

Every boundary point P1 = (a cos t, b sin t) is the first vertex of exactly
one counterclockwise triangular billiard orbit.  The other two vertices come
from explicit rational expressions in (x1, y1, cos alpha, sin alpha); the
exit angle alpha against the boundary normal is fixed by the closure
condition.  Constructions here are cross-validated against the elastic map
in :mod:`ebilliards.billiard`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .billiard import (
    Ellipse,
    OffBoundaryError,
    Ray,
    billiard_constants,
    gradient_f,
    next_bounce,
    reflect,
)

TAU = 2.0 * math.pi

# |f(p) - 1| allowed for orbit vertices
VERTEX_BOUNDARY_ATOL = 1e-10
# reflected-direction mismatch allowed at each vertex
BISECTION_ATOL = 1e-9
# relative perimeter mismatch against the family constant
PERIMETER_RTOL = 1e-9


@dataclass(frozen=True)
class Orbit:
    """One member of the triangular orbit family.

    t is the boundary parameter of p1; cos_alpha the exit-angle cosine at p1.
    Vertices are ordered counterclockwise.
    """

    t: float
    p1: np.ndarray
    p2: np.ndarray
    p3: np.ndarray
    cos_alpha: float

    @property
    def vertices(self) -> np.ndarray:
        return np.array([self.p1, self.p2, self.p3])

    @property
    def perimeter(self) -> float:
        v = self.vertices
        return float(
            np.linalg.norm(v[1] - v[0])
            + np.linalg.norm(v[2] - v[1])
            + np.linalg.norm(v[0] - v[2])
        )


def exit_cos_alpha(e: Ellipse, x1: float) -> float:
    """Cosine of the closing exit angle at a vertex with abscissa x1.

    Measured against the boundary normal; depends on x1 only through x1^2.
    """
    if abs(x1) > e.a:
        raise ValueError(f"|x1| = {abs(x1)!r} exceeds the semi-major axis")
    a2 = e.a * e.a
    gamma = billiard_constants(e).gamma
    return a2 * e.b * gamma / math.sqrt(a2 * a2 - (a2 - e.b * e.b) * x1 * x1)


def orbit_from_vertex(e: Ellipse, p1, validate: bool = True) -> Orbit:
    """The counterclockwise triangular orbit through boundary point p1."""
    p1 = np.asarray(p1, dtype=float)
    if abs(e.value(p1) - 1.0) > VERTEX_BOUNDARY_ATOL:
        raise OffBoundaryError(
            f"vertex {p1.tolist()} is off the boundary (f={e.value(p1)!r})"
        )
    ca, p2x, p2y, p3x, p3y = _kernels.orbit_vertices(
        e.a, e.b, float(p1[0]), float(p1[1])
    )
    t = math.atan2(p1[1] / e.b, p1[0] / e.a) % TAU
    orbit = Orbit(
        t=t,
        p1=p1,
        p2=np.array([p2x, p2y]),
        p3=np.array([p3x, p3y]),
        cos_alpha=ca,
    )
    if validate:
        _check_orbit(e, orbit)
    return orbit


def orbit_at_parameter(e: Ellipse, t: float, validate: bool = True) -> Orbit:
    """Orbit through P1(t) = (a cos t, b sin t); t wraps modulo 2*pi."""
    return orbit_from_vertex(e, e.boundary_point(t % TAU), validate=validate)


def orbit_sweep(e: Ellipse, ts) -> tuple[np.ndarray, np.ndarray]:
    """Batch construction: vertex array (n, 3, 2) and exit cosines (n,)."""
    return _kernels.orbit_sweep(e.a, e.b, ts)


def orbit_launch_ray(e: Ellipse, p1) -> Ray:
    """Ray leaving p1 at the closing exit angle from the inward normal.

    Feeding this to the elastic map must reproduce the closed-form vertices;
    the counterclockwise branch (non-negative exit sine) is selected.
    """
    p1 = np.asarray(p1, dtype=float)
    g = gradient_f(e, p1)
    n_in = -g / math.hypot(g[0], g[1])
    tang = np.array([n_in[1], -n_in[0]])
    ca = exit_cos_alpha(e, float(p1[0]))
    sa = math.sqrt(max(1.0 - ca * ca, 0.0))
    return Ray(origin=p1, direction=ca * n_in + sa * tang)


def closure_residual(e: Ellipse, orbit: Orbit) -> float:
    """Distance by which the elastic map misses p1 after three bounces,
    starting from p1 toward p2.  Near zero only for true orbits."""
    d = orbit.p2 - orbit.p1
    ray = Ray(origin=orbit.p1, direction=d / math.hypot(d[0], d[1]))
    for _ in range(3):
        ray = next_bounce(e, ray)
    return float(np.linalg.norm(ray.origin - orbit.p1))


def _check_orbit(e: Ellipse, orbit: Orbit) -> None:
    """Construction postconditions: vertices on the boundary, normals bisect,
    perimeter equals the family constant."""
    v = orbit.vertices
    for p in v:
        if abs(e.value(p) - 1.0) > VERTEX_BOUNDARY_ATOL:
            raise AssertionError(
                f"orbit vertex {p.tolist()} off boundary (f={e.value(p)!r})"
            )
    for i in range(3):
        prev_v = v[(i + 2) % 3]
        cur = v[i]
        nxt = v[(i + 1) % 3]
        d_in = cur - prev_v
        d_in /= math.hypot(d_in[0], d_in[1])
        d_out = nxt - cur
        d_out /= math.hypot(d_out[0], d_out[1])
        resid = np.linalg.norm(reflect(d_in, gradient_f(e, cur)) - d_out)
        if resid > BISECTION_ATOL:
            raise AssertionError(
                f"normal fails to bisect at vertex {i + 1} (residual {resid!r})"
            )
    L = billiard_constants(e).L
    if abs(orbit.perimeter - L) > PERIMETER_RTOL * L:
        raise AssertionError(
            f"perimeter {orbit.perimeter!r} deviates from family value {L!r}"
        )
