"""Report-only probes: minimal projection diameter and a ball-thickness upper bound."""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import ConvexHull

from . import critical
from .curve import Curve, corner_vertices
from .errors import BadDimension, BadParameters, NoConvergence
from .geometry import point_segment_distance, segment_distance

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ProjectionResult:
    best_direction: np.ndarray
    min_diameter: float
    ratio: float
    directions: np.ndarray = field(repr=False, default=None)
    diameters: np.ndarray = field(repr=False, default=None)


@dataclass(frozen=True)
class BallProbe:
    center: np.ndarray
    diameter: float
    component_count: int
    source: str = ""


@dataclass(frozen=True)
class BallConfig:
    n_radii: int = 64
    tolerance: float = 1e-9
    closest_pairs: int = 16
    corner_epsilon: float = 0.01
    corner_threshold: float = 1e-3


# -- projections ---------------------------------------------------------------


def _diameter(points: np.ndarray) -> float:
    """Exact diameter of a finite point set (hull vertices, then all pairs)."""
    if len(points) < 2:
        return 0.0
    if points.shape[1] == 1:
        return float(points.max() - points.min())
    try:
        pts = points[ConvexHull(points).vertices]
    except Exception:  # degenerate (collinear) sets
        pts = points
    d = pts[:, None, :] - pts[None, :, :]
    return float(np.sqrt(np.einsum("ijk,ijk->ij", d, d).max()))


def _fibonacci_sphere(n: int) -> np.ndarray:
    i = np.arange(n) + 0.5
    z = 1 - 2 * i / n
    phi = math.pi * (3 - math.sqrt(5)) * i
    rho = np.sqrt(1 - z * z)
    return np.column_stack([rho * np.cos(phi), rho * np.sin(phi), z])


def _projected_diameter(verts: np.ndarray, u: np.ndarray) -> float:
    dim = verts.shape[1]
    if dim == 2:
        perp = np.array([-u[1], u[0]])
        return _diameter((verts @ perp)[:, None])
    # orthonormal basis of the plane orthogonal to u
    a = np.array([1.0, 0, 0]) if abs(u[0]) < 0.9 else np.array([0, 1.0, 0])
    e1 = np.cross(u, a)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(u, e1)
    return _diameter(verts @ np.column_stack([e1, e2]))


def min_projection_diameter(curve: Curve, n_directions: int = 256) -> ProjectionResult:
    """Smallest diameter of the vertex set projected orthogonally to a direction."""
    dim = curve.dimension
    if dim not in (2, 3):
        raise BadDimension(f"projection probe needs dimension 2 or 3, got {dim}")
    if n_directions < 64:
        raise BadParameters("n_directions must be at least 64")
    verts = np.vstack(curve.components)
    if dim == 2:
        ang = math.pi * np.arange(n_directions) / n_directions
        dirs = np.column_stack([np.cos(ang), np.sin(ang)])
        spacing = math.pi / n_directions
    else:
        dirs = _fibonacci_sphere(n_directions)
        spacing = math.sqrt(4 * math.pi / n_directions)
    diam = np.array([_projected_diameter(verts, u) for u in dirs])
    i = int(np.argmin(diam))
    best_u, best_d = dirs[i], float(diam[i])
    # one local pass around the best direction
    if dim == 2:
        a0 = math.atan2(best_u[1], best_u[0])
        local = [np.array([math.cos(a), math.sin(a)]) for a in a0 + np.linspace(-spacing, spacing, 33)]
    else:
        a = np.array([1.0, 0, 0]) if abs(best_u[0]) < 0.9 else np.array([0, 1.0, 0])
        e1 = np.cross(best_u, a)
        e1 /= np.linalg.norm(e1)
        e2 = np.cross(best_u, e1)
        g = np.linspace(-spacing, spacing, 9)
        local = [best_u + x * e1 + y * e2 for x in g for y in g]
        local = [w / np.linalg.norm(w) for w in local]
    for u in local:
        d = _projected_diameter(verts, u)
        if d < best_d:
            best_u, best_d = u, d
    return ProjectionResult(best_u, best_d, best_d * math.pi / curve.total_length, dirs, diam)


# -- ball thickness --------------------------------------------------------------


def ball_components(curve: Curve, center, radius: float) -> tuple[int, bool]:
    """Number of arcs of the curve inside the closed ball, and whether a closed component lies wholly inside."""
    center = np.asarray(center, dtype=float)
    x, v = curve.edge_start, curve.edge_vec
    w = x - center
    a = np.einsum("ij,ij->i", v, v)
    bq = 2 * np.einsum("ij,ij->i", v, w)
    cq = np.einsum("ij,ij->i", w, w) - radius * radius
    disc = bq * bq - 4 * a * cq
    sq = np.sqrt(np.maximum(disc, 0.0))
    lo = np.where(disc >= 0, (-bq - sq) / (2 * a), np.inf)
    hi = np.where(disc >= 0, (-bq + sq) / (2 * a), -np.inf)
    lo, hi = np.maximum(lo, 0.0), np.minimum(hi, 1.0)
    r2 = radius * radius
    start_in = cq <= 0.0
    end_in = np.einsum("ij,ij->i", w + v, w + v) <= r2
    # vertex membership decides continuity, so roundoff in the roots cannot split an arc
    hit = (lo <= hi) | start_in | end_in
    count = 0
    whole = False
    for c in range(curve.n_components):
        sl = curve.edge_slice(c)
        h, si = hit[sl], start_in[sl]
        if not np.any(h):
            continue
        if curve.closed[c] and np.all(si):
            whole = True
            count += 1
            continue
        cont = si.copy()
        if not curve.closed[c]:
            cont[0] = False
        count += int(np.sum(h & ~cont))
    return count, whole


def _is_bad(curve, center, radius):
    n, whole = ball_components(curve, center, radius)
    return n >= 2 or whole, n


def probe_center(curve: Curve, center, config: BallConfig = BallConfig(), source: str = "") -> BallProbe | None:
    """Smallest ball about ``center`` whose intersection with the curve is not a single arc."""
    center = np.asarray(center, dtype=float)
    d0, _ = point_segment_distance(center, curve.edge_start, curve.edge_vec)
    r0 = float(d0.min())
    r_max = float(np.linalg.norm(np.vstack(curve.components) - center, axis=1).max()) * (1 + 1e-9) + 1e-12
    radii = np.concatenate([[r0 * (1 + 1e-9) + 1e-15], np.linspace(r0, r_max, config.n_radii + 1)[1:]])
    good = 0.0
    for rad in radii:
        bad, n = _is_bad(curve, center, rad)
        if bad:
            break
        good = rad
    else:
        return None
    lo, hi = good, rad
    while hi - lo > config.tolerance * max(hi, 1e-300):
        mid = 0.5 * (lo + hi)
        bad_mid, n_mid = _is_bad(curve, center, mid)
        if bad_mid:
            hi, n = mid, n_mid
        else:
            lo = mid
    return BallProbe(center, 2 * hi, n, source)


def _candidate_centers(curve: Curve, config: BallConfig):
    out = []
    try:
        for p in critical.doubly_critical_pairs(curve):
            out.append((0.5 * (p.a.position + p.b.position), "doubly_critical"))
    except NoConvergence:
        log.warning("doubly critical refinement failed; skipping those ball centers")
    E = curve.n_edges
    ei, fi = np.triu_indices(E, k=1)
    keep = critical._edge_gap(curve, ei, fi) > 1
    ei, fi = ei[keep], fi[keep]
    if len(ei):
        d, s, t = segment_distance(curve.edge_start[ei], curve.edge_vec[ei], curve.edge_start[fi], curve.edge_vec[fi])
        for k in np.argsort(d, kind="stable")[: config.closest_pairs]:
            pa = curve.edge_start[ei[k]] + s[k] * curve.edge_vec[ei[k]]
            pb = curve.edge_start[fi[k]] + t[k] * curve.edge_vec[fi[k]]
            out.append((0.5 * (pa + pb), "closest_edges"))
    if not curve.smooth_sampling:
        unit = curve.edge_vec / curve.edge_len[:, None]
        for comp, vtx in corner_vertices(curve, config.corner_threshold):
            sl = curve.edge_slice(comp)
            prev_e, _ = curve.edge_neighbors(comp)
            e_out = sl.start + vtx
            e_in = int(prev_e[vtx])
            if e_in < 0 or e_out >= sl.stop:
                continue
            bis = unit[e_out] - unit[e_in]
            nb = np.linalg.norm(bis)
            if nb == 0:
                continue
            eps = config.corner_epsilon * min(curve.edge_len[e_in], curve.edge_len[e_out])
            out.append((curve.components[comp][vtx] + eps * bis / nb, "near_corner"))
    return out


def ball_probes(curve: Curve, config: BallConfig = BallConfig()) -> list[BallProbe]:
    probes = []
    for center, source in _candidate_centers(curve, config):
        p = probe_center(curve, center, config, source)
        if p is not None:
            probes.append(p)
    return probes


def estimate_tB(curve: Curve, config: BallConfig = BallConfig()) -> tuple[float, BallProbe | None]:
    """Upper bound on the ball thickness: the smallest diameter found over all probes."""
    probes = ball_probes(curve, config)
    if not probes:
        return math.inf, None
    best = min(probes, key=lambda p: (p.diameter, tuple(p.center)))
    return best.diameter, best


def write_projection_csv(path, result: ProjectionResult) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["direction_index", "diameter"])
        for i, d in enumerate(result.diameters):
            w.writerow([i, repr(float(d))])


def write_ball_csv(path, probes) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        dim = len(probes[0].center) if probes else 0
        w.writerow([f"center_{i}" for i in range(dim)] + ["diameter", "components", "source"])
        for p in probes:
            w.writerow([repr(float(x)) for x in p.center] + [repr(p.diameter), p.component_count, p.source])
