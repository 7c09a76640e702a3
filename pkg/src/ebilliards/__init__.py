"""Triangular orbit families in elliptic billiards.

Constructs the one-parameter family of triangular (3-bounce) billiard
orbits in an ellipse, computes triangle centers and derived triangles for
each member, and certifies the family's conserved quantities against an
independent elastic-map simulation.
"""

from .billiard import (
    BilliardConstants,
    CenterChordError,
    DegenerateChordError,
    Ellipse,
    OffBoundaryError,
    Ray,
    billiard_constants,
    caustic_kind,
    chord_caustic_parameter,
    gradient_f,
    joachimsthal,
    line_caustic_parameter,
    make_ray,
    next_bounce,
    reflect,
    segment_crosses_foci,
    trajectory,
)
from .invariants import (
    ConicFit,
    ExtremalRadii,
    InvariantReport,
    caustic_area_ratio,
    classify_locus,
    extremal_radii,
    fit_conic,
    inradius_to_circumradius,
    invariant_report,
    locus_trace,
    ratio_inflection,
    sweep_extremal_radii,
)
from .orbits import (
    Orbit,
    closure_residual,
    exit_cos_alpha,
    orbit_at_parameter,
    orbit_from_vertex,
    orbit_launch_ray,
    orbit_sweep,
)
from .triangles import (
    CenterKind,
    Circle,
    DegenerateTriangleError,
    TriangleMetrics,
    center,
    cosine_circle,
    excentral,
    extouch,
    intouch,
    metrics,
    orthic,
    signed_area,
)

__version__ = "0.1.0"

__all__ = [
    "BilliardConstants",
    "CenterChordError",
    "CenterKind",
    "Circle",
    "ConicFit",
    "DegenerateChordError",
    "DegenerateTriangleError",
    "Ellipse",
    "ExtremalRadii",
    "InvariantReport",
    "OffBoundaryError",
    "Orbit",
    "Ray",
    "TriangleMetrics",
    "billiard_constants",
    "caustic_area_ratio",
    "caustic_kind",
    "center",
    "chord_caustic_parameter",
    "classify_locus",
    "closure_residual",
    "cosine_circle",
    "excentral",
    "exit_cos_alpha",
    "extouch",
    "extremal_radii",
    "fit_conic",
    "gradient_f",
    "inradius_to_circumradius",
    "intouch",
    "invariant_report",
    "joachimsthal",
    "line_caustic_parameter",
    "locus_trace",
    "make_ray",
    "metrics",
    "next_bounce",
    "orbit_at_parameter",
    "orbit_from_vertex",
    "orbit_launch_ray",
    "orbit_sweep",
    "orthic",
    "ratio_inflection",
    "reflect",
    "segment_crosses_foci",
    "signed_area",
    "sweep_extremal_radii",
    "trajectory",
]
