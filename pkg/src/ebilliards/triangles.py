"""General-triangle metrics, barycentric centers, and derived triangles.

Triangles are plain (3, 2) float arrays.  Side i is the side opposite
vertex i, matching the usual barycentric conventions.  Centers are computed
as normalized barycentric combinations of the vertices (Kimberling weight
functions), which is more robust than intersecting cevians.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

# |signed area| <= this * (longest side)^2 counts as degenerate
DEGENERACY_RTOL = 1e-14


class DegenerateTriangleError(ValueError):
    """Vertices are (numerically) collinear."""


class CenterKind(Enum):
    """Triangle centers used here, in Kimberling's X_i indexing."""

    X1 = "X1"   # incenter
    X2 = "X2"   # barycenter
    X3 = "X3"   # circumcenter
    X5 = "X5"   # nine-point center
    X6 = "X6"   # symmedian point
    X9 = "X9"   # mittenpunkt


@dataclass(frozen=True)
class TriangleMetrics:
    """Side lengths, perimeter, area, the three classical radii, and the
    interior angles (radians); theta_i sits at vertex i."""

    s1: float
    s2: float
    s3: float
    perimeter: float
    area: float
    r: float
    R: float
    r9: float
    theta1: float
    theta2: float
    theta3: float

    @property
    def sides(self) -> tuple[float, float, float]:
        return (self.s1, self.s2, self.s3)

    @property
    def angles(self) -> tuple[float, float, float]:
        return (self.theta1, self.theta2, self.theta3)


@dataclass(frozen=True)
class Circle:
    center: np.ndarray
    radius: float


def _cross(u, v) -> float:
    return float(u[0] * v[1] - u[1] * v[0])


def as_triangle(tri) -> np.ndarray:
    t = np.asarray(tri, dtype=float)
    if t.shape != (3, 2):
        raise ValueError(f"expected a (3, 2) vertex array, got shape {t.shape}")
    return t


def signed_area(tri) -> float:
    """Positive for counterclockwise vertex order."""
    t = as_triangle(tri)
    return 0.5 * _cross(t[1] - t[0], t[2] - t[0])


def _check_nondegenerate(t: np.ndarray) -> float:
    area2 = abs(_cross(t[1] - t[0], t[2] - t[0]))
    longest = max(
        float(np.linalg.norm(t[1] - t[0])),
        float(np.linalg.norm(t[2] - t[1])),
        float(np.linalg.norm(t[0] - t[2])),
    )
    if area2 <= 2.0 * DEGENERACY_RTOL * longest * longest:
        raise DegenerateTriangleError(
            f"triangle is degenerate (area {0.5 * area2!r} at scale {longest!r})"
        )
    return 0.5 * area2


def metrics(tri) -> TriangleMetrics:
    """All scalar metrics of a triangle."""
    t = as_triangle(tri)
    area = _check_nondegenerate(t)
    s1 = float(np.linalg.norm(t[2] - t[1]))
    s2 = float(np.linalg.norm(t[0] - t[2]))
    s3 = float(np.linalg.norm(t[1] - t[0]))
    perimeter = s1 + s2 + s3
    r = area / (0.5 * perimeter)
    R = s1 * s2 * s3 / (4.0 * area)
    thetas = []
    for i in range(3):
        u = t[(i + 1) % 3] - t[i]
        w = t[(i + 2) % 3] - t[i]
        # two-argument arctangent of (|cross|, dot) is stable near right angles
        thetas.append(math.atan2(abs(_cross(u, w)), float(u @ w)))
    return TriangleMetrics(
        s1=s1, s2=s2, s3=s3, perimeter=perimeter, area=area,
        r=r, R=R, r9=0.5 * R,
        theta1=thetas[0], theta2=thetas[1], theta3=thetas[2],
    )


def barycentric_point(tri, weights) -> np.ndarray:
    """Cartesian point of homogeneous barycentric weights w.r.t. ``tri``."""
    t = as_triangle(tri)
    w = np.asarray(weights, dtype=float)
    total = float(w.sum())
    if total == 0.0:
        raise ValueError("barycentric weights sum to zero")
    return (w[:, None] * t).sum(axis=0) / total


def center(tri, kind: CenterKind) -> np.ndarray:
    """Cartesian coordinates of the requested triangle center."""
    t = as_triangle(tri)
    m = metrics(t)
    s1, s2, s3 = m.sides
    sq1, sq2, sq3 = s1 * s1, s2 * s2, s3 * s3
    if kind is CenterKind.X1:
        return barycentric_point(t, (s1, s2, s3))
    if kind is CenterKind.X2:
        return barycentric_point(t, (1.0, 1.0, 1.0))
    if kind is CenterKind.X3:
        return barycentric_point(
            t,
            (
                sq1 * (sq2 + sq3 - sq1),
                sq2 * (sq3 + sq1 - sq2),
                sq3 * (sq1 + sq2 - sq3),
            ),
        )
    if kind is CenterKind.X5:
        # midpoint of circumcenter and orthocenter (the latter via Euler line)
        o = center(t, CenterKind.X3)
        g = barycentric_point(t, (1.0, 1.0, 1.0))
        h = 3.0 * g - 2.0 * o
        return 0.5 * (o + h)
    if kind is CenterKind.X6:
        return barycentric_point(t, (sq1, sq2, sq3))
    if kind is CenterKind.X9:
        return barycentric_point(
            t,
            (
                s1 * (s2 + s3 - s1),
                s2 * (s3 + s1 - s2),
                s3 * (s1 + s2 - s3),
            ),
        )
    raise ValueError(f"unsupported center kind {kind!r}")


def excentral(tri) -> np.ndarray:
    """Triangle of the three excenters.

    Vertex i of the result is the excenter opposite vertex i, so taking the
    orthic triangle of the result recovers ``tri`` with matching indices.
    """
    t = as_triangle(tri)
    m = metrics(t)
    s1, s2, s3 = m.sides
    return np.array(
        [
            barycentric_point(t, (-s1, s2, s3)),
            barycentric_point(t, (s1, -s2, s3)),
            barycentric_point(t, (s1, s2, -s3)),
        ]
    )


def _foot(p, a, b) -> np.ndarray:
    """Foot of the perpendicular from p onto line (a, b)."""
    d = b - a
    return a + float((p - a) @ d) / float(d @ d) * d


def orthic(tri) -> np.ndarray:
    """Triangle of the altitude feet; vertex i is the foot from vertex i."""
    t = as_triangle(tri)
    _check_nondegenerate(t)
    return np.array(
        [
            _foot(t[0], t[1], t[2]),
            _foot(t[1], t[2], t[0]),
            _foot(t[2], t[0], t[1]),
        ]
    )


def extouch(tri) -> np.ndarray:
    """Triangle of the excircle touch points, one on each side.

    The touch point on side i splits it by the classical semiperimeter
    tangent lengths: distances s - s_k to the adjacent vertices.
    """
    t = as_triangle(tri)
    m = metrics(t)
    s = 0.5 * m.perimeter
    s1, s2, s3 = m.sides
    return np.array(
        [
            barycentric_point(t, (0.0, s - s2, s - s3)),
            barycentric_point(t, (s - s1, 0.0, s - s3)),
            barycentric_point(t, (s - s1, s - s2, 0.0)),
        ]
    )


def intouch(tri) -> np.ndarray:
    """Contact triangle of the incircle: feet of the perpendiculars from the
    incenter onto the sides.  Vertex i lies on side i."""
    t = as_triangle(tri)
    inc = center(t, CenterKind.X1)
    return np.array(
        [
            _foot(inc, t[1], t[2]),
            _foot(inc, t[2], t[0]),
            _foot(inc, t[0], t[1]),
        ]
    )


def cosine_circle(tri) -> tuple[Circle, np.ndarray]:
    """Circle through the six side intersections of the three lines drawn
    through the symmedian point parallel to the orthic triangle's sides.

    Returns the circle (centered at the symmedian point, radius = RMS of the
    six center distances) and the six points, ordered side by side.
    """
    t = as_triangle(tri)
    k = center(t, CenterKind.X6)
    feet = orthic(t)
    pts = []
    for i in range(3):
        j, l = (i + 1) % 3, (i + 2) % 3
        d = feet[j] - feet[l]
        for other in (j, l):
            edge = t[other] - t[i]
            det = _cross(d, edge)
            if abs(det) <= 1e-14 * float(np.linalg.norm(d)) * float(
                np.linalg.norm(edge)
            ):
                raise ValueError(
                    "construction line is parallel to a side; "
                    "cosine circle undefined"
                )
            # solve k + x*d = t[i] + y*edge for x
            rhs = t[i] - k
            x = _cross(rhs, edge) / det
            pts.append(k + x * d)
    pts = np.array(pts)
    dists = np.linalg.norm(pts - k, axis=1)
    return Circle(center=k, radius=float(np.sqrt(np.mean(dists**2)))), pts
