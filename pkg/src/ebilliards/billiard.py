"""Ellipse geometry and the elastic billiard map.

The map implemented here is the measurement side of every cross-check in the
package: closed-form constructions elsewhere are validated against
trajectories it produces.  Conventions:

* the table boundary is (x/a)^2 + (y/b)^2 = 1 with a > b > 0;
* directions are unit vectors; bounce points are re-projected onto the
  boundary after every reflection;
* every chord of a trajectory is tangent to one confocal conic, identified
  by the parameter lambda of ``line_caustic_parameter``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels

# |f(x,y) - 1| allowed for user-supplied boundary points
BOUNDARY_ATOL = 1e-9
# residual after internal re-projection
PROJECTED_ATOL = 1e-12
# aspect ratios at or below 1 + this are flagged ill-conditioned in reports
NEAR_CIRCLE_RTOL = 1e-7


class OffBoundaryError(ValueError):
    """Ray origin or orbit vertex does not lie on the ellipse."""


class DegenerateChordError(ValueError):
    """Chord quadratic has no forward root (tangential or outward ray)."""


class CenterChordError(ValueError):
    """Chord through the center has no finite caustic parameter."""


@dataclass(frozen=True)
class Ellipse:
    """Axis-aligned ellipse with strict semi-axis ordering a > b > 0."""

    a: float
    b: float

    def __post_init__(self):
        if not (self.a > self.b > 0.0):
            raise ValueError(
                f"requires a > b > 0, got a={self.a!r}, b={self.b!r}"
            )

    def value(self, p) -> float:
        """Quadratic form (x/a)^2 + (y/b)^2; equals 1 on the boundary."""
        x, y = float(p[0]), float(p[1])
        return (x / self.a) ** 2 + (y / self.b) ** 2

    def boundary_point(self, t: float) -> np.ndarray:
        return np.array([self.a * math.cos(t), self.b * math.sin(t)])

    def focal_half_distance(self) -> float:
        return math.sqrt(self.a * self.a - self.b * self.b)

    @property
    def near_circular(self) -> bool:
        return self.a / self.b <= 1.0 + NEAR_CIRCLE_RTOL

    def project(self, p) -> np.ndarray:
        """Newton steps along the gradient onto the boundary."""
        p = np.asarray(p, dtype=float).copy()
        for _ in range(3):
            g = gradient_f(self, p)
            p += (1.0 - self.value(p)) / float(g @ g) * g
            if abs(self.value(p) - 1.0) <= PROJECTED_ATOL:
                break
        return p


@dataclass(frozen=True)
class BilliardConstants:
    """Derived constants of the triangular-orbit family.

    c2      a^2 - b^2
    delta   sqrt(a^4 - a^2 b^2 + b^4)
    gamma   conserved bounce quantity (half the normal velocity component)
    L       perimeter, identical for every member of the family
    a_c,b_c semi-axes of the confocal caustic shared by the family
    r_star  radius of the stationary cosine circle, equal to 1/gamma
    """

    c2: float
    delta: float
    gamma: float
    L: float
    a_c: float
    b_c: float
    r_star: float


def billiard_constants(e: Ellipse) -> BilliardConstants:
    """All family constants from closed forms.

    The forms are evaluated through cancellation-free factorizations
    (e.g. gamma = sqrt(3/(2*delta + a^2 + b^2)), algebraically identical to
    sqrt(2*delta - a^2 - b^2)/c^2), so near-circular inputs lose no digits.
    r_star is computed along two routes and cross-checked.
    """
    a, b = e.a, e.b
    a2, b2 = a * a, b * b
    c2 = a2 - b2
    delta = math.sqrt(a2 * a2 - a2 * b2 + b2 * b2)
    gamma = math.sqrt(3.0 / (2.0 * delta + a2 + b2))
    L = 2.0 * (delta + a2 + b2) * gamma
    a_c = a * a2 / (delta + b2)
    b_c = b * b2 / (a2 + delta)
    r_star = math.sqrt((a2 + b2 + 2.0 * delta) / 3.0)
    alt = 1.0 / gamma
    if abs(r_star - alt) > 1e-12 * alt:
        raise AssertionError(
            f"cosine-circle radius routes disagree: {r_star!r} vs {alt!r}"
        )
    return BilliardConstants(
        c2=c2, delta=delta, gamma=gamma, L=L, a_c=a_c, b_c=b_c, r_star=r_star
    )


def gradient_f(e: Ellipse, p) -> np.ndarray:
    """Gradient of the boundary form, 2*(x/a^2, y/b^2)."""
    return np.array([2.0 * p[0] / (e.a * e.a), 2.0 * p[1] / (e.b * e.b)])


def reflect(direction, normal) -> np.ndarray:
    """Mirror a vector across the plane orthogonal to ``normal``."""
    d = np.asarray(direction, dtype=float)
    n = np.asarray(normal, dtype=float)
    n = n / math.hypot(n[0], n[1])
    return d - 2.0 * float(d @ n) * n


@dataclass(frozen=True)
class Ray:
    """Boundary point plus unit direction.  Build with :func:`make_ray`."""

    origin: np.ndarray
    direction: np.ndarray


def make_ray(e: Ellipse, origin, direction) -> Ray:
    """Validated ray: origin snapped onto the boundary, direction normalized.

    Raises OffBoundaryError when the origin misses the boundary by more than
    BOUNDARY_ATOL in the quadratic form.
    """
    origin = np.asarray(origin, dtype=float)
    direction = np.asarray(direction, dtype=float)
    if abs(e.value(origin) - 1.0) > BOUNDARY_ATOL:
        raise OffBoundaryError(
            f"origin {origin.tolist()} is off the boundary "
            f"(f={e.value(origin)!r}); project it onto the ellipse first"
        )
    norm = math.hypot(direction[0], direction[1])
    if norm == 0.0:
        raise ValueError("direction must be nonzero")
    return Ray(origin=e.project(origin), direction=direction / norm)


def joachimsthal(e: Ellipse, ray: Ray) -> float:
    """Conserved bounce quantity: half the |dot| of the unit direction with
    the boundary gradient.  Identical at every bounce of one trajectory."""
    if abs(e.value(ray.origin) - 1.0) > BOUNDARY_ATOL:
        raise OffBoundaryError(
            f"ray origin off boundary (f={e.value(ray.origin)!r})"
        )
    g = gradient_f(e, ray.origin)
    return 0.5 * abs(float(ray.direction @ g))


def next_bounce(e: Ellipse, ray: Ray) -> Ray:
    """Advance the ray to the next boundary collision and reflect it."""
    if abs(e.value(ray.origin) - 1.0) > BOUNDARY_ATOL:
        raise OffBoundaryError(
            f"ray origin off boundary (f={e.value(ray.origin)!r})"
        )
    px, py, ex, ey, ok = _kernels.bounce_step(
        e.a, e.b,
        float(ray.origin[0]), float(ray.origin[1]),
        float(ray.direction[0]), float(ray.direction[1]),
    )
    if not ok:
        raise DegenerateChordError(
            "direction is tangential (or points outward); no forward chord"
        )
    return Ray(origin=np.array([px, py]), direction=np.array([ex, ey]))


def trajectory(e: Ellipse, ray: Ray, n: int) -> list[Ray]:
    """n elastic bounces starting from ``ray``.

    Returns n+1 rays: the (re-projected) start state followed by the state
    after each bounce.
    """
    if n < 1:
        raise ValueError(f"need at least one bounce, got n={n}")
    start = make_ray(e, ray.origin, ray.direction)
    pts, dirs, count = _kernels.bounce_path(
        e.a, e.b,
        float(start.origin[0]), float(start.origin[1]),
        float(start.direction[0]), float(start.direction[1]),
        n,
    )
    if count < n:
        raise DegenerateChordError(
            f"chord degenerated at bounce {count + 1} of {n}"
        )
    return [
        Ray(origin=pts[i].copy(), direction=dirs[i].copy())
        for i in range(n + 1)
    ]


def line_caustic_parameter(e: Ellipse, point, direction) -> float:
    """Parameter lambda of the confocal conic tangent to the given line.

    For the line written u*x + v*y = 1 this is
    (a^2 u^2 + b^2 v^2 - 1) / (u^2 + v^2); the tangent conic is
    x^2/(a^2 - lambda) + y^2/(b^2 - lambda) = 1.  Lines through the center
    have no such normal form and are rejected.
    """
    p = np.asarray(point, dtype=float)
    d = np.asarray(direction, dtype=float)
    norm = math.hypot(d[0], d[1])
    if norm == 0.0:
        raise ValueError("direction must be nonzero")
    nx, ny = -d[1] / norm, d[0] / norm
    k = nx * p[0] + ny * p[1]
    if abs(k) <= 1e-12 * e.a:
        raise CenterChordError("chord passes through the center")
    return e.a * e.a * nx * nx + e.b * e.b * ny * ny - k * k


def chord_caustic_parameter(e: Ellipse, p, q) -> float:
    """Caustic parameter of the chord through two boundary points."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    return line_caustic_parameter(e, p, q - p)


def caustic_kind(e: Ellipse, lam: float) -> str:
    """Classify the tangent confocal conic: 'ellipse' or 'hyperbola'."""
    if lam >= e.a * e.a:
        raise ValueError(f"caustic parameter {lam!r} outside confocal range")
    return "ellipse" if lam < e.b * e.b else "hyperbola"


def segment_crosses_foci(e: Ellipse, p, q) -> bool:
    """Whether the open segment pq crosses the open segment between the foci.

    This is the geometric counterpart of the caustic classification: chords
    passing between the foci touch a confocal hyperbola, all others a
    confocal ellipse.
    """
    c = e.focal_half_distance()
    y1, y2 = float(p[1]), float(q[1])
    if y1 == 0.0 or y2 == 0.0 or (y1 > 0.0) == (y2 > 0.0):
        return False
    x0 = float(p[0]) + (float(q[0]) - float(p[0])) * (-y1) / (y2 - y1)
    return abs(x0) < c
