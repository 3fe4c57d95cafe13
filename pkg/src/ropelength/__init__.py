"""Distortion thickness, curvature thickness and ropelength of polygonal curves."""

from .critical import (
    CriticalPair,
    c1,
    c2,
    doubly_critical_pairs,
    edge_clearance_sigma1,
    find_self_critical,
    schur_check,
    sigma_k,
)
from .curve import (
    Curve,
    CurvePoint,
    arc_distance,
    build_curve,
    has_corners,
    load_curve,
    min_radius_of_curvature,
    opposite_point,
    point_at,
    save_curve,
)
from .distortion import (
    FAST,
    PairRecord,
    RopelengthResult,
    ScanConfig,
    ThicknessResult,
    distortion_thickness,
    max_distortion,
    opposite_distortion,
    pair_distortion,
    ropelength,
    solve_kb,
)
from .errors import ThicknessError

__version__ = "0.1.0"
