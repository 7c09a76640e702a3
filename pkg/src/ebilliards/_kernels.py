"""Numerically hot kernels, JIT-compiled with numba when available.

Two code paths exist for each kernel:

* a scalar loop compiled with ``numba.njit`` (the default), and
* a fallback that runs without numba: the bounce loop as plain Python,
  the family sweep as vectorized numpy.

The fallback is selected by setting ``EBILLIARDS_DISABLE_NUMBA=1`` in the
environment (or automatically when numba is not importable, or when numba's
own ``NUMBA_DISABLE_JIT`` is active).  ``benchmarks/bench_kernels.py``
compares the two paths.

Kernels work on raw floats/arrays only; validation and the object API live
in the higher-level modules.
"""

from __future__ import annotations

import math
import os

import numpy as np

DISABLE_ENV = "EBILLIARDS_DISABLE_NUMBA"

# Chords shorter than this fraction of the semi-major axis are treated as
# tangential (degenerate) in the bounce step.
DEGENERATE_CHORD_RTOL = 1e-12


def _numba_enabled() -> bool:
    if os.environ.get(DISABLE_ENV, "0") not in ("", "0"):
        return False
    try:
        import numba
    except ImportError:
        return False
    return not numba.config.DISABLE_JIT


NUMBA_ENABLED = _numba_enabled()

if NUMBA_ENABLED:
    from numba import njit

    def _jit(fn):
        return njit(cache=True)(fn)
else:

    def _jit(fn):
        return fn


@_jit
def bounce_step(a, b, ox, oy, dx, dy):
    """One elastic bounce: next boundary point and reflected unit direction.

    Returns (px, py, ex, ey, ok).  ok is False for a tangential or outward
    direction (no forward chord).
    """
    inv_a2 = 1.0 / (a * a)
    inv_b2 = 1.0 / (b * b)
    # chord parameter s along origin + s*direction; s = 0 is the current point
    qa = dx * dx * inv_a2 + dy * dy * inv_b2
    qb = 2.0 * (ox * dx * inv_a2 + oy * dy * inv_b2)
    qc = ox * ox * inv_a2 + oy * oy * inv_b2 - 1.0
    disc = qb * qb - 4.0 * qa * qc
    if disc <= 0.0:
        return 0.0, 0.0, 0.0, 0.0, False
    # Vieta-style root split: q/qa is the far root, qc/q the spurious near-zero
    # one (the current point); this avoids cancellation for grazing chords.
    root = math.sqrt(disc)
    q = -0.5 * (qb + (root if qb >= 0.0 else -root))
    s = q / qa
    if s <= DEGENERATE_CHORD_RTOL * a:
        return 0.0, 0.0, 0.0, 0.0, False
    px = ox + s * dx
    py = oy + s * dy
    # one Newton step along the gradient keeps the point on the boundary
    gx = 2.0 * px * inv_a2
    gy = 2.0 * py * inv_b2
    g2 = gx * gx + gy * gy
    f = px * px * inv_a2 + py * py * inv_b2
    corr = (1.0 - f) / g2
    px += corr * gx
    py += corr * gy
    # elastic reflection about the (re-evaluated) normal, then renormalize
    gx = 2.0 * px * inv_a2
    gy = 2.0 * py * inv_b2
    g2 = gx * gx + gy * gy
    dot = dx * gx + dy * gy
    ex = dx - 2.0 * dot * gx / g2
    ey = dy - 2.0 * dot * gy / g2
    inv_norm = 1.0 / math.sqrt(ex * ex + ey * ey)
    return px, py, ex * inv_norm, ey * inv_norm, True


@_jit
def bounce_path(a, b, ox, oy, dx, dy, n):
    """Iterate the bounce step n times.

    Returns (points, directions, count): arrays of shape (n+1, 2) holding the
    start state in row 0, and the number of successful bounces (count < n
    means the chord degenerated at that index).
    """
    pts = np.empty((n + 1, 2))
    dirs = np.empty((n + 1, 2))
    pts[0, 0] = ox
    pts[0, 1] = oy
    dirs[0, 0] = dx
    dirs[0, 1] = dy
    count = 0
    for i in range(n):
        px, py, ex, ey, ok = bounce_step(a, b, ox, oy, dx, dy)
        if not ok:
            break
        ox, oy, dx, dy = px, py, ex, ey
        pts[i + 1, 0] = px
        pts[i + 1, 1] = py
        dirs[i + 1, 0] = ex
        dirs[i + 1, 1] = ey
        count += 1
    return pts, dirs, count


@_jit
def orbit_vertices(a, b, x1, y1):
    """Closed-form second and third vertex of the triangular orbit through
    (x1, y1), with the exit cosine.

    Returns (cos_alpha, p2x, p2y, p3x, p3y).  The sine of the exit angle is
    taken non-negative, which selects the counterclockwise orbit.
    """
    a2 = a * a
    b2 = b * b
    c2 = a2 - b2
    delta = math.sqrt(a2 * a2 - a2 * b2 + b2 * b2)
    # sqrt(2*delta - a^2 - b^2) / c^2 rewritten without the subtraction,
    # using 4*delta^2 - (a^2+b^2)^2 = 3*c^4
    gamma = math.sqrt(3.0 / (2.0 * delta + a2 + b2))
    ca = a2 * b * gamma / math.sqrt(a2 * a2 - c2 * x1 * x1)
    sa = math.sqrt(max(1.0 - ca * ca, 0.0))

    a4 = a2 * a2
    b4 = b2 * b2
    a6 = a4 * a2
    b6 = b4 * b2
    ca2 = ca * ca
    casa = ca * sa
    x1_2 = x1 * x1
    x1_3 = x1_2 * x1
    y1_2 = y1 * y1
    y1_3 = y1_2 * y1

    p2x = (
        -b4 * ((a2 + b2) * ca2 - a2) * x1_3
        - 2.0 * a4 * b2 * casa * x1_2 * y1
        + a4 * ((a2 - 3.0 * b2) * ca2 + b2) * x1 * y1_2
        - 2.0 * a6 * casa * y1_3
    )
    p2y = (
        2.0 * b6 * casa * x1_3
        + b4 * ((b2 - 3.0 * a2) * ca2 + a2) * x1_2 * y1
        + 2.0 * a2 * b4 * casa * x1 * y1_2
        - a4 * ((a2 + b2) * ca2 - b2) * y1_3
    )
    q2 = (
        b4 * (a2 - c2 * ca2) * x1_2
        + a4 * (b2 + c2 * ca2) * y1_2
        - 2.0 * a2 * b2 * c2 * casa * x1 * y1
    )

    p3x = (
        b4 * (a2 - (b2 + a2) * ca2) * x1_3
        + 2.0 * a4 * b2 * casa * x1_2 * y1
        + a4 * (ca2 * (a2 - 3.0 * b2) + b2) * x1 * y1_2
        + 2.0 * a6 * casa * y1_3
    )
    p3y = (
        -2.0 * b6 * casa * x1_3
        + b4 * (a2 + (b2 - 3.0 * a2) * ca2) * x1_2 * y1
        - 2.0 * a2 * b4 * casa * x1 * y1_2
        + a4 * (b2 - (b2 + a2) * ca2) * y1_3
    )
    q3 = (
        b4 * (a2 - c2 * ca2) * x1_2
        + a4 * (b2 + c2 * ca2) * y1_2
        + 2.0 * a2 * b2 * c2 * casa * x1 * y1
    )

    return ca, p2x / q2, p2y / q2, p3x / q3, p3y / q3


def _orbit_sweep_loop(a, b, ts):
    """Scalar-loop family sweep (the numba path)."""
    n = ts.shape[0]
    verts = np.empty((n, 3, 2))
    cosas = np.empty(n)
    for i in range(n):
        x1 = a * math.cos(ts[i])
        y1 = b * math.sin(ts[i])
        ca, p2x, p2y, p3x, p3y = orbit_vertices(a, b, x1, y1)
        verts[i, 0, 0] = x1
        verts[i, 0, 1] = y1
        verts[i, 1, 0] = p2x
        verts[i, 1, 1] = p2y
        verts[i, 2, 0] = p3x
        verts[i, 2, 1] = p3y
        cosas[i] = ca
    return verts, cosas


def _orbit_sweep_numpy(a, b, ts):
    """Vectorized family sweep (the pure-numpy fallback path)."""
    a2 = a * a
    b2 = b * b
    c2 = a2 - b2
    delta = math.sqrt(a2 * a2 - a2 * b2 + b2 * b2)
    gamma = math.sqrt(3.0 / (2.0 * delta + a2 + b2))

    x1 = a * np.cos(ts)
    y1 = b * np.sin(ts)
    ca = a2 * b * gamma / np.sqrt(a2 * a2 - c2 * x1 * x1)
    sa = np.sqrt(np.maximum(1.0 - ca * ca, 0.0))

    a4 = a2 * a2
    b4 = b2 * b2
    a6 = a4 * a2
    b6 = b4 * b2
    ca2 = ca * ca
    casa = ca * sa
    x1_2 = x1 * x1
    x1_3 = x1_2 * x1
    y1_2 = y1 * y1
    y1_3 = y1_2 * y1

    p2x = (
        -b4 * ((a2 + b2) * ca2 - a2) * x1_3
        - 2.0 * a4 * b2 * casa * x1_2 * y1
        + a4 * ((a2 - 3.0 * b2) * ca2 + b2) * x1 * y1_2
        - 2.0 * a6 * casa * y1_3
    )
    p2y = (
        2.0 * b6 * casa * x1_3
        + b4 * ((b2 - 3.0 * a2) * ca2 + a2) * x1_2 * y1
        + 2.0 * a2 * b4 * casa * x1 * y1_2
        - a4 * ((a2 + b2) * ca2 - b2) * y1_3
    )
    q2 = (
        b4 * (a2 - c2 * ca2) * x1_2
        + a4 * (b2 + c2 * ca2) * y1_2
        - 2.0 * a2 * b2 * c2 * casa * x1 * y1
    )

    p3x = (
        b4 * (a2 - (b2 + a2) * ca2) * x1_3
        + 2.0 * a4 * b2 * casa * x1_2 * y1
        + a4 * (ca2 * (a2 - 3.0 * b2) + b2) * x1 * y1_2
        + 2.0 * a6 * casa * y1_3
    )
    p3y = (
        -2.0 * b6 * casa * x1_3
        + b4 * (a2 + (b2 - 3.0 * a2) * ca2) * x1_2 * y1
        - 2.0 * a2 * b4 * casa * x1 * y1_2
        + a4 * (b2 - (b2 + a2) * ca2) * y1_3
    )
    q3 = (
        b4 * (a2 - c2 * ca2) * x1_2
        + a4 * (b2 + c2 * ca2) * y1_2
        + 2.0 * a2 * b2 * c2 * casa * x1 * y1
    )

    verts = np.empty((ts.shape[0], 3, 2))
    verts[:, 0, 0] = x1
    verts[:, 0, 1] = y1
    verts[:, 1, 0] = p2x / q2
    verts[:, 1, 1] = p2y / q2
    verts[:, 2, 0] = p3x / q3
    verts[:, 2, 1] = p3y / q3
    return verts, ca


_orbit_sweep_jit = _jit(_orbit_sweep_loop)


def orbit_sweep(a, b, ts):
    """Vertices (n, 3, 2) and exit cosines (n,) for a whole t-sweep."""
    ts = np.ascontiguousarray(ts, dtype=np.float64)
    if NUMBA_ENABLED:
        return _orbit_sweep_jit(a, b, ts)
    return _orbit_sweep_numpy(a, b, ts)
