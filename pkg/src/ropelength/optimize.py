"""Ropelength minimization by simulated annealing with an isotopy guard.

A move displaces one vertex by less than guard_fraction times the current
clearance (the smallest distance between non-adjacent edges). Since only the
two edges at that vertex move, and each of their points moves by less than
the clearance, no two edges can pass through each other during the move.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .critical import _edge_gap
from .curve import Curve, external_angles
from .distortion import FAST, ScanConfig, ropelength
from .errors import BadParameters, InitialNotEmbedded
from .geometry import segment_distance
from .report import ThicknessReport, measure


@dataclass(frozen=True)
class AnnealConfig:
    b: float = math.pi / 3
    steps: int = 10000
    initial_temperature: float = 0.5
    cooling_rate: float = 0.9995
    max_step: float = 0.02
    guard_fraction: float = 0.25
    seed: int = 0
    rescale_every: int = 500
    clearance_skip: int = 1
    final_config: ScanConfig = ScanConfig()

    def __post_init__(self):
        if not 0 < self.cooling_rate < 1:
            raise BadParameters("cooling_rate must lie in (0, 1)")
        if not 0 < self.guard_fraction <= 0.5:
            raise BadParameters("guard_fraction must lie in (0, 0.5]")
        if self.steps < 0:
            raise BadParameters("steps must be nonnegative")
        if not 1 < self.b <= math.pi / 2:
            raise BadParameters("b must lie in (1, pi/2]")
        if self.max_step <= 0 or self.initial_temperature < 0 or self.rescale_every < 0:
            raise BadParameters("max_step must be positive, temperature and rescale_every nonnegative")


@dataclass(frozen=True)
class BestSeen:
    objective: float
    curve: Curve
    step: int


@dataclass
class AnnealState:
    curve: Curve
    objective: float
    clearance: float
    step_index: int
    rng_state: dict
    best_seen: BestSeen
    accept_count: int = 0
    reject_count: int = 0
    temperature: float = 0.0
    best_full_objective: float = math.nan


@dataclass(frozen=True)
class TrajectoryRow:
    step: int
    objective: float
    clearance: float
    temperature: float


def objective(curve: Curve, b: float, config: ScanConfig = ScanConfig()) -> float:
    """Ropelength L / tau_b (inf when the thickness vanishes)."""
    if not 1 < b <= math.pi / 2:
        raise BadParameters("b must lie in (1, pi/2]")
    return ropelength(curve, b, config).value


class _EdgeDistances:
    """Distances between every pair of edges more than m steps apart, kept current."""

    def __init__(self, curve: Curve, m: int):
        E = curve.n_edges
        ei, fi = np.meshgrid(np.arange(E), np.arange(E), indexing="ij")
        self.eligible = _edge_gap(curve, ei, fi) > m
        self.D = np.full((E, E), np.inf)
        i, j = np.nonzero(self.eligible)
        d, _, _ = segment_distance(curve.edge_start[i], curve.edge_vec[i], curve.edge_start[j], curve.edge_vec[j])
        self.D[i, j] = d

    @property
    def clearance(self) -> float:
        return float(self.D.min())

    def trial(self, curve: Curve, edges):
        """Matrix and clearance after the given edges moved (curve holds the new geometry)."""
        D = self.D.copy()
        for e in edges:
            j = np.nonzero(self.eligible[e])[0]
            d, _, _ = segment_distance(curve.edge_start[e], curve.edge_vec[e], curve.edge_start[j], curve.edge_vec[j])
            D[e, j] = d
            D[j, e] = d
        return D, float(D.min())

    def scale(self, factor: float):
        self.D = self.D * factor


def _incident_edges(curve: Curve, comp: int, v: int):
    sl = curve.edge_slice(comp)
    n_e = sl.stop - sl.start
    out = []
    if v < n_e:
        out.append(sl.start + v)
    if v > 0:
        out.append(sl.start + v - 1)
    elif curve.closed[comp]:
        out.append(sl.stop - 1)
    return out


def _ball_step(rng, dim: int, radius: float) -> np.ndarray:
    d = rng.standard_normal(dim)
    d /= np.linalg.norm(d)
    return d * radius * rng.random() ** (1.0 / dim)


def anneal(initial: Curve, config: AnnealConfig = AnnealConfig()) -> tuple[AnnealState, list[TrajectoryRow]]:
    """Metropolis chain on vertex positions; returns the final state and the trajectory."""
    dist = _EdgeDistances(initial, config.clearance_skip)
    clearance = dist.clearance
    if not clearance > 0:
        raise InitialNotEmbedded(f"initial curve has clearance {clearance}")
    rng = np.random.default_rng(config.seed)
    curve = initial
    obj = objective(curve, config.b, FAST)
    temp = config.initial_temperature
    best = BestSeen(obj, curve, 0)
    traj = [TrajectoryRow(0, obj, clearance, temp)]
    sizes = [len(c) for c in curve.components]
    offsets = np.cumsum([0] + sizes)
    accepted = rejected = 0
    for step in range(1, config.steps + 1):
        g = int(rng.integers(offsets[-1]))
        comp = int(np.searchsorted(offsets, g, side="right") - 1)
        v = g - int(offsets[comp])
        radius = min(config.max_step, config.guard_fraction * clearance)
        move = _ball_step(rng, curve.dimension, radius)
        comps = [c.copy() for c in curve.components]
        comps[comp][v] += move
        trial = curve.with_components(comps)
        D, trial_clear = dist.trial(trial, _incident_edges(trial, comp, v))
        ok = trial_clear > 0
        new_obj = objective(trial, config.b, FAST) if ok else math.inf
        delta = new_obj - obj
        u = rng.random()
        if ok and (delta <= 0 or (temp > 0 and u < math.exp(-delta / temp))):
            curve, obj, clearance = trial, new_obj, trial_clear
            dist.D = D
            accepted += 1
            if config.rescale_every and accepted % config.rescale_every == 0 and math.isfinite(obj) and obj > 0:
                tau = curve.total_length / obj
                curve = curve.scaled(1.0 / tau)
                dist.scale(1.0 / tau)
                clearance = dist.clearance
                best = BestSeen(best.objective, best.curve, best.step)
            if obj < best.objective:
                best = BestSeen(obj, curve, step)
        else:
            rejected += 1
        temp *= config.cooling_rate
        traj.append(TrajectoryRow(step, obj, clearance, temp))
    state = AnnealState(
        curve=curve,
        objective=obj,
        clearance=clearance,
        step_index=config.steps,
        rng_state=rng.bit_generator.state,
        best_seen=best,
        accept_count=accepted,
        reject_count=rejected,
        temperature=temp,
    )
    state.best_full_objective = objective(best.curve, config.b, config.final_config)
    return state, traj


def final_report(state: AnnealState, k_list, b_list, config: ScanConfig = ScanConfig()) -> ThicknessReport:
    """Thickness report on the best curve rescaled to unit thickness at the first b."""
    curve = state.best_seen.curve
    tau = ropelength(curve, b_list[0], config).thickness
    if math.isfinite(tau) and tau > 0:
        curve = curve.scaled(1.0 / tau)
    report = measure(curve, b_list, k_list, config)
    report.config["best_step"] = state.best_seen.step
    report.config["accepted"] = state.accept_count
    report.config["rejected"] = state.reject_count
    report.config["straight_fraction"] = straight_fraction(curve)
    return report


def straight_fraction(curve: Curve, threshold: float = 1e-3) -> float:
    """Fraction of vertices whose turning angle is below threshold."""
    angles = np.concatenate([external_angles(curve, c) for c in range(curve.n_components)])
    return float(np.mean(angles < threshold)) if len(angles) else 0.0


def write_trajectory_csv(path, trajectory) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["step", "objective", "clearance", "temperature"])
        for row in trajectory:
            w.writerow([row.step, repr(row.objective), repr(row.clearance), repr(row.temperature)])
