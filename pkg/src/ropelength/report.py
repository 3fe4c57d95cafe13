"""Thickness report shared by the command line and the optimizer."""

from __future__ import annotations

import dataclasses
import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import critical
from .curve import Curve, CurvePoint, min_radius_of_curvature
from .distortion import (
    PairRecord,
    ScanConfig,
    distortion_thickness,
    max_distortion,
    opposite_distortion,
)
from .errors import NoConvergence, NotEmbedded, TooFewEdges

SIG_DIGITS = 12
SYMBOLIC = {"pi/3": math.pi / 3, "pi/2": math.pi / 2}


def parse_symbolic(text) -> float:
    """Parse a number, accepting pi/3 and pi/2 exactly."""
    if isinstance(text, (int, float)):
        return float(text)
    t = str(text).strip().lower().replace(" ", "")
    if t in SYMBOLIC:
        return SYMBOLIC[t]
    return float(t)


def label(x: float) -> str:
    """Stable map key for a parameter value."""
    for name, v in SYMBOLIC.items():
        if x == v:
            return name
    return f"{x:.{SIG_DIGITS}g}"


def jsonable(obj):
    """Convert to JSON-ready data: inf as the string "inf", floats to 12 significant digits."""
    if isinstance(obj, (bool, np.bool_)) or obj is None or isinstance(obj, str):
        return bool(obj) if isinstance(obj, np.bool_) else obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        if math.isnan(x):
            return "nan"
        return float(f"{x:.{SIG_DIGITS}g}")
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _point(p: CurvePoint) -> dict:
    return {"component": p.component, "s": p.s, "position": p.position, "corner": p.corner}


def _witness(kind: str, w) -> dict:
    if isinstance(w, PairRecord):
        return {
            "quantity": kind,
            "a": _point(w.a),
            "b": _point(w.b),
            "chord": w.chord,
            "arc": w.arc,
            "distortion": w.distortion,
        }
    return {
        "quantity": kind,
        "a": _point(w.a),
        "b": _point(w.b),
        "chord": w.chord,
        "residuals": list(w.residuals),
        "kind": w.kind,
    }


@dataclass
class ThicknessReport:
    name: str
    n: int
    components: int
    length: float
    delta: float
    delta_opp: float | None
    tau: dict
    tau_status: dict
    r: float
    c1: float
    c2: float
    sigma: dict
    clearance: float | None
    ropelength: dict
    ratios: dict
    witnesses: list = field(default_factory=list)
    config: dict = field(default_factory=dict)
    wall_time: float = 0.0

    def to_json(self) -> dict:
        return jsonable(self)


def measure(
    curve: Curve,
    b_list,
    k_list,
    config: ScanConfig = ScanConfig(),
    clearance_skip: int = 1,
    extra_config: dict | None = None,
) -> ThicknessReport:
    """Compute every functional on one curve."""
    t0 = time.perf_counter()
    witnesses = []
    try:
        delta, w = max_distortion(curve, config)
        witnesses.append(_witness("delta", w))
    except NotEmbedded:
        delta = math.inf
    delta_opp = None
    if curve.n_components == 1 and curve.closed[0]:
        delta_opp, w = opposite_distortion(curve)
        witnesses.append(_witness("delta_opp", w))
    tau, status, rope = {}, {}, {}
    for b in b_list:
        res = distortion_thickness(curve, b, config)
        tau[label(b)] = res.value
        status[label(b)] = res.status
        if res.witness is not None:
            witnesses.append(_witness(f"tau[{label(b)}]", res.witness))
        if math.isinf(res.value):
            rope[label(b)] = 0.0
        elif res.value == 0.0:
            rope[label(b)] = math.inf
        else:
            rope[label(b)] = curve.total_length / res.value
    r = min_radius_of_curvature(curve).min_circumradius
    c1 = critical.c1(curve, config)
    try:
        c2, w2 = critical.c2(curve, config)
    except NoConvergence:
        c2, w2 = math.nan, None
    if w2 is not None:
        witnesses.append(_witness("c2", w2))
    sigma = {label(k): critical.sigma_k(curve, k, c2, config) for k in k_list}
    try:
        clearance = critical.edge_clearance_sigma1(curve, clearance_skip)
    except TooFewEdges:
        clearance = None
    ratios = {}
    for b in b_list:
        for k in k_list:
            t, s = tau[label(b)], sigma[label(k)]
            ratios[f"{label(b)}|{label(k)}"] = math.inf if s == 0 else t / s
    cfg = dataclasses.asdict(config)
    cfg["clearance_skip"] = clearance_skip
    cfg["b"] = [label(b) for b in b_list]
    cfg["k"] = [label(k) for k in k_list]
    if extra_config:
        cfg.update(extra_config)
    return ThicknessReport(
        name=curve.name,
        n=curve.n_vertices,
        components=curve.n_components,
        length=curve.total_length,
        delta=delta,
        delta_opp=delta_opp,
        tau=tau,
        tau_status=status,
        r=r,
        c1=c1,
        c2=c2,
        sigma=sigma,
        clearance=clearance,
        ropelength=rope,
        ratios=ratios,
        witnesses=witnesses,
        config=cfg,
        wall_time=time.perf_counter() - t0,
    )
