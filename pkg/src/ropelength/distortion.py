"""Distortion, opposite-point distortion, distortion thickness and ropelength.

For a fixed first point p the curve splits into straight pieces on which the
arclength distance from p is linear and the squared chord is quadratic, so the
best partner on every piece has a closed form.  Searches therefore scan p over
a coarse arclength grid, solve every piece exactly, and refine p by batched
golden-section search around the best candidates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .curve import Curve, CurvePoint, arc_distance, external_angles, point_at
from .errors import (
    IdenticalPoints,
    InvalidB,
    MultiComponent,
    NotClosed,
    NotEmbedded,
    OutOfRange,
)
from .geometry import golden_minimize, map_chunks, segment_distance

ATTAIN_TOL = 1e-6
TOP_K = 32
_CHUNK_ELEMENTS = 400_000


@dataclass(frozen=True)
class PairRecord:
    a: CurvePoint
    b: CurvePoint
    chord: float
    arc: float
    distortion: float
    crit_residual_a: float
    crit_residual_b: float


@dataclass(frozen=True)
class ScanConfig:
    """Search resolution.

    ``coarse_samples_per_component`` below the vertex count means "vertices only";
    ``refine_iterations=0`` skips golden-section refinement.
    """

    coarse_samples_per_component: int = 256
    refine_iterations: int = 60
    refine_tolerance: float = 1e-10
    top_k: int = TOP_K
    threads: int = 1

    def __post_init__(self):
        if self.refine_tolerance <= 0:
            raise ValueError("refine_tolerance must be positive")
        if self.refine_iterations < 0 or self.top_k < 1:
            raise ValueError("refine_iterations must be >= 0 and top_k >= 1")


FAST = ScanConfig(coarse_samples_per_component=0, refine_iterations=0)


@dataclass(frozen=True)
class ThicknessResult:
    """Distortion thickness with its witness.

    ``status`` is "attained" (witness distortion strictly above b), "boundary"
    (witness sits on the level set distortion == b) or "empty" (no pair qualifies).
    """

    value: float
    witness: PairRecord | None
    status: str
    b: float


@dataclass(frozen=True)
class RopelengthResult:
    value: float
    thickness: float
    infinite_thickness: bool


# -- pair quantities -------------------------------------------------------


def _residuals(curve: Curve, a: CurvePoint, b: CurvePoint, chord: float):
    if chord == 0.0:
        return 0.0, 0.0
    ta = curve.tangents(a.component, a.s)
    tb = curve.tangents(b.component, b.s)
    d = (a.position - b.position) / chord
    return float(ta @ d), float(tb @ d)


def pair_distortion(curve: Curve, a: CurvePoint, b: CurvePoint) -> PairRecord:
    arc = arc_distance(curve, a, b)
    chord = float(np.linalg.norm(a.position - b.position))
    if a.component == b.component and arc == 0.0:
        raise IdenticalPoints(f"points coincide at s={a.s} on component {a.component}")
    if math.isinf(arc) or chord == 0.0:
        dist = math.inf
    else:
        dist = arc / chord
    ra, rb = _residuals(curve, a, b, chord)
    return PairRecord(a, b, chord, arc, dist, ra, rb)


def _pair(curve, ca, sa, cb, sb) -> PairRecord:
    return pair_distortion(curve, point_at(curve, ca, sa), point_at(curve, cb, sb))


# -- sampling ----------------------------------------------------------------


def sample_arclengths(curve: Curve, component: int, count: int, midpoints: bool = True) -> np.ndarray:
    """All vertices of a component plus extra points spread over its edges.

    With ``midpoints`` every edge receives at least one interior sample.
    ``count <= 0`` means vertices only.
    """
    cum = curve.cum_arclength[component]
    verts = cum[:-1] if curve.closed[component] else cum
    if count <= 0:
        return np.array(verts)
    lens = np.diff(cum)
    extra = max(count - len(verts), 0)
    share = lens / lens.sum() * extra
    k = np.floor(share).astype(int)
    left = extra - k.sum()
    if left > 0:
        k[np.argsort(-(share - k), kind="stable")[:left]] += 1
    if midpoints:
        k = np.maximum(k, 1)
    pts = [verts]
    for e in np.nonzero(k)[0]:
        frac = np.arange(1, k[e] + 1) / (k[e] + 1)
        pts.append(cum[e] + frac * lens[e])
    return np.sort(np.concatenate(pts))


def _samples(curve: Curve, config: ScanConfig):
    out = []
    for ci in range(curve.n_components):
        s = sample_arclengths(curve, ci, config.coarse_samples_per_component)
        out.append((ci, s))
    return out


# -- piece decomposition -------------------------------------------------------


@dataclass
class _Pieces:
    """Straight pieces seen from a batch of points p (leading axis = batch).

    Along a piece the partner is x0 + u*v for u in [0, 1] and its arclength
    distance from p is arc0 + rate*u (arc0 = inf across components).  The
    arclength of the partner is t_near + sgn*u*rate.
    """

    p: np.ndarray
    x0: np.ndarray
    v: np.ndarray
    arc0: np.ndarray
    rate: np.ndarray
    t_near: np.ndarray
    sgn: np.ndarray
    comp: np.ndarray
    c0: np.ndarray = field(init=False)
    c1: np.ndarray = field(init=False)
    c2: np.ndarray = field(init=False)

    def __post_init__(self):
        w = self.x0 - self.p[:, None, :]
        self.c0 = np.einsum("bpi,bpi->bp", w, w)
        self.c1 = 2.0 * np.einsum("bpi,bpi->bp", w, self.v)
        self.c2 = np.einsum("bpi,bpi->bp", self.v, self.v)

    def chord(self, u):
        return np.sqrt(np.maximum(self.c0 + u * (self.c1 + u * self.c2), 0.0))

    def arc(self, u):
        return self.arc0 + self.rate * u


def _own_pieces(curve: Curve, comp: int, s: np.ndarray, p: np.ndarray):
    L = curve.length(comp)
    cum = curve.cum_arclength[comp]
    B = len(s)
    snap = 1e-12 * max(L, 1.0)
    if curve.closed[comp]:
        anti = np.mod(s + L / 2.0, L)
        bp = np.concatenate([np.broadcast_to(cum[:-1], (B, len(cum) - 1)), s[:, None], anti[:, None]], axis=1)
        bp.sort(axis=1)
        ends = np.concatenate([bp[:, 1:], bp[:, :1] + L], axis=1)
        starts = bp
        mid = 0.5 * (starts + ends)
        dm = np.mod(mid - s[:, None], L)
        inc = dm < L / 2.0
        near = np.where(inc, starts, ends)
        far = np.where(inc, ends, starts)
        dn = np.mod(near - s[:, None], L)
        arc0 = np.minimum(dn, L - dn)
    else:
        bp = np.concatenate([np.broadcast_to(cum, (B, len(cum))), s[:, None]], axis=1)
        bp.sort(axis=1)
        starts, ends = bp[:, :-1], bp[:, 1:]
        mid = 0.5 * (starts + ends)
        inc = mid >= s[:, None]
        near = np.where(inc, starts, ends)
        far = np.where(inc, ends, starts)
        arc0 = np.abs(near - s[:, None])
    rate = ends - starts
    x0 = curve.positions(comp, near)
    x1 = curve.positions(comp, far)
    # pieces that start at p itself must start exactly at p
    at_p = arc0 <= snap
    arc0 = np.where(at_p, 0.0, arc0)
    x0 = np.where(at_p[..., None], p[:, None, :], x0)
    v = x1 - x0
    sgn = np.where(inc, 1.0, -1.0)
    comp_arr = np.full(near.shape, comp)
    return x0, v, arc0, rate, near, sgn, comp_arr


def _pieces(curve: Curve, comp: int, s: np.ndarray, include_other=True) -> _Pieces:
    s = curve.wrap(comp, np.asarray(s, dtype=float))
    p = curve.positions(comp, s)
    parts = [_own_pieces(curve, comp, s, p)]
    if include_other and curve.n_components > 1:
        mask = curve.edge_comp != comp
        B = len(s)
        n = int(mask.sum())
        x0 = np.broadcast_to(curve.edge_start[mask], (B, n, curve.dimension))
        v = np.broadcast_to(curve.edge_vec[mask], (B, n, curve.dimension))
        parts.append(
            (
                x0,
                v,
                np.full((B, n), np.inf),
                np.broadcast_to(curve.edge_len[mask], (B, n)),
                np.broadcast_to(curve.edge_s0[mask], (B, n)),
                np.ones((B, n)),
                np.broadcast_to(curve.edge_comp[mask], (B, n)),
            )
        )
    cols = [np.concatenate([np.asarray(part[i]) for part in parts], axis=1) for i in range(7)]
    return _Pieces(p, *cols)


# -- exact per-piece kernels ----------------------------------------------------


def _max_ratio(pc: _Pieces, scale: float):
    """Max over each piece of arc/chord. Returns (value, u); inf flags coincidence."""
    finite = np.isfinite(pc.arc0)
    A = np.where(finite, pc.arc0, 0.0)
    r = pc.rate
    num = A * pc.c1 / 2.0 - r * pc.c0
    den = r * pc.c1 / 2.0 - A * pc.c2
    with np.errstate(divide="ignore", invalid="ignore"):
        us = np.where(np.abs(den) > 0, num / den, 0.0)
    us = np.clip(np.nan_to_num(us), 0.0, 1.0)
    best = np.full(A.shape, -np.inf)
    best_u = np.zeros(A.shape)
    eps = 1e-12 * scale
    for u in (np.zeros_like(A), np.ones_like(A), us):
        arc = A + r * u
        ch = pc.chord(u)
        with np.errstate(divide="ignore", invalid="ignore"):
            val = arc / ch
        val = np.where(ch <= eps, np.where(arc <= eps, 1.0, np.inf), val)
        better = val > best
        best = np.where(better, val, best)
        best_u = np.where(better, u, best_u)
    best = np.where(finite, best, np.inf)
    return best, best_u


def _min_chord_over(pc: _Pieces, b: float):
    """Min chord over each piece restricted to pairs with distortion > b."""
    finite = np.isfinite(pc.arc0)
    A = np.where(finite, pc.arc0, 0.0)
    r = pc.rate
    b2 = b * b
    qa = r * r - b2 * pc.c2
    qb = 2.0 * A * r - b2 * pc.c1
    qc = A * A - b2 * pc.c0
    lin = np.abs(qa) <= 1e-13 * (r * r + b2 * pc.c2 + 1e-300)
    lo = np.zeros_like(A)
    hi = np.ones_like(A)
    # concave quadratic (b > 1): positive strictly between its roots
    disc = qb * qb - 4.0 * qa * qc
    sq = np.sqrt(np.maximum(disc, 0.0))
    qq = -0.5 * (qb + np.where(qb >= 0, sq, -sq))
    with np.errstate(divide="ignore", invalid="ignore"):
        r1 = np.where(qa != 0, qq / qa, 0.0)
        r2 = np.where(qq != 0, qc / qq, 0.0)
    rl = np.minimum(r1, r2)
    rh = np.maximum(r1, r2)
    quad_ok = (disc > 0) & (qa < 0)
    lo_q = np.maximum(0.0, rl)
    hi_q = np.minimum(1.0, rh)
    # linear fallback (b == 1 or zero-length pieces)
    with np.errstate(divide="ignore", invalid="ignore"):
        root = np.where(qb != 0, -qc / qb, 0.0)
    lo_l = np.where(qb > 0, np.maximum(0.0, root), 0.0)
    hi_l = np.where(qb < 0, np.minimum(1.0, root), 1.0)
    lin_ok = np.where(qb == 0, qc > 0, lo_l < hi_l)
    lo = np.where(lin, lo_l, lo_q)
    hi = np.where(lin, hi_l, hi_q)
    ok = np.where(lin, lin_ok, quad_ok & (lo_q < hi_q))
    zero_piece = r <= 0
    ok = np.where(zero_piece, qc > 0, ok)
    lo = np.where(finite, lo, 0.0)
    hi = np.where(finite, hi, 1.0)
    ok = np.where(finite, ok, True)
    with np.errstate(divide="ignore", invalid="ignore"):
        ustar = np.where(pc.c2 > 0, -pc.c1 / (2.0 * pc.c2), 0.0)
    u = np.clip(ustar, lo, hi)
    ch = np.where(ok, pc.chord(u), np.inf)
    return ch, u


# -- batched evaluation at arbitrary first points -------------------------------------


def _eval(curve: Curve, comp: int, s: np.ndarray, kind: str, b: float | None, threads=1, include_other=True):
    """Best partner for each first point.

    Returns (value, piece comp, partner arclength, exact partner u) per point.
    ``kind`` is "max" (distortion) or "tau" (thickness at level b).
    """
    s = np.asarray(s, dtype=float)
    n_pieces = curve.n_edges + 2
    chunk = max(1, _CHUNK_ELEMENTS // n_pieces)
    scale = curve.total_length

    def run(i0, i1):
        pc = _pieces(curve, comp, s[i0:i1], include_other)
        if kind == "max":
            val, u = _max_ratio(pc, scale)
            j = np.argmax(val, axis=1)
        else:
            val, u = _min_chord_over(pc, b)
            j = np.argmin(val, axis=1)
        rows = np.arange(len(j))
        uu = u[rows, j]
        t = pc.t_near[rows, j] + pc.sgn[rows, j] * uu * pc.rate[rows, j]
        return val[rows, j], pc.comp[rows, j], t

    parts = map_chunks(run, len(s), chunk, threads)
    if not parts:
        return np.array([]), np.array([], dtype=int), np.array([])
    return tuple(np.concatenate(x) for x in zip(*parts))


def _refine(curve, comp, s_coarse, vals, kind, b, config, include_other=True):
    """Golden-section refinement of the first point around the top candidates.

    Returns list of (value, comp_a, s_a, comp_b, t_b) candidates.
    """
    sign = -1.0 if kind == "max" else 1.0
    out = [
        (float(v), comp, float(sa), None, None)
        for v, sa in zip(vals, s_coarse)
    ]
    if config.refine_iterations == 0 or len(s_coarse) == 0:
        return out
    order = np.lexsort((s_coarse, sign * vals))
    top = order[: config.top_k]
    top = top[np.isfinite(vals[top])]
    if len(top) == 0:
        return out
    L = curve.length(comp)
    n = len(s_coarse)
    if curve.closed[comp]:
        prev_s = np.where(top > 0, s_coarse[top - 1], s_coarse[-1] - L)
        next_s = np.where(top < n - 1, s_coarse[(top + 1) % n], s_coarse[0] + L)
    else:
        prev_s = s_coarse[np.maximum(top - 1, 0)]
        next_s = s_coarse[np.minimum(top + 1, n - 1)]

    def f(x):
        v = _eval(curve, comp, x, kind, b, config.threads, include_other)[0]
        return sign * v

    xs, ys = golden_minimize(f, prev_s, next_s, config.refine_tolerance, config.refine_iterations)
    xs = curve.wrap(comp, xs)
    out.extend((float(sign * y), comp, float(x), None, None) for x, y in zip(xs, ys))
    return out


def _search(curve: Curve, kind: str, b: float | None, config: ScanConfig, include_other=True):
    """Global best first point over all components; returns (value, comp_a, s_a, comp_b, t_b)."""
    cands = []
    for comp, s in _samples(curve, config):
        vals = _eval(curve, comp, s, kind, b, config.threads, include_other)[0]
        cands.extend(_refine(curve, comp, s, vals, kind, b, config, include_other))
    sign = -1.0 if kind == "max" else 1.0
    # deterministic reduction: best value, then smallest (component, s)
    best = min(cands, key=lambda c: (sign * c[0], c[1], c[2]))
    val, comp, sa = best[0], best[1], best[2]
    _, cb, tb = _eval(curve, comp, np.array([sa]), kind, b, 1, include_other)
    return val, comp, sa, int(cb[0]), float(curve.wrap(int(cb[0]), tb[0]))


# -- public operations ----------------------------------------------------------------


def _closest_cross_pair(curve: Curve):
    best = (math.inf, None)
    for ca in range(curve.n_components):
        for cb in range(ca + 1, curve.n_components):
            sa, sb = curve.edge_slice(ca), curve.edge_slice(cb)
            d, s, t = segment_distance(
                curve.edge_start[sa][:, None], curve.edge_vec[sa][:, None],
                curve.edge_start[sb][None], curve.edge_vec[sb][None],
            )
            i, j = np.unravel_index(np.argmin(d), d.shape)
            if d[i, j] < best[0]:
                ea, eb = sa.start + i, sb.start + j
                best = (
                    float(d[i, j]),
                    (ca, curve.edge_s0[ea] + s[i, j] * curve.edge_len[ea],
                     cb, curve.edge_s0[eb] + t[i, j] * curve.edge_len[eb]),
                )
    return best


def max_distortion(curve: Curve, config: ScanConfig = ScanConfig()) -> tuple[float, PairRecord]:
    """Supremum of arc/chord over distinct pairs, with a witness pair."""
    if curve.n_components > 1:
        _, (ca, sa, cb, sb) = _closest_cross_pair(curve)
        return math.inf, _pair(curve, ca, sa, cb, sb)
    val, ca, sa, cb, tb = _search(curve, "max", None, config)
    if math.isinf(val):
        raise NotEmbedded("curve passes through itself", pair=(ca, sa, cb, tb))
    w = _pair(curve, ca, sa, cb, tb)
    return max(val, w.distortion), w


def opposite_distortion(curve: Curve) -> tuple[float, PairRecord]:
    """Supremum of distortion over opposite pairs (p, p*), computed exactly.

    Between consecutive breakpoints (vertices and their opposite points) both
    p and p* move linearly, so the chord is the root of a quadratic in s.
    """
    if curve.n_components > 1:
        raise MultiComponent("opposite distortion needs a single component")
    if not curve.closed[0]:
        raise NotClosed("opposite distortion needs a closed curve")
    L = curve.length(0)
    cum = curve.cum_arclength[0][:-1]
    bp = np.unique(np.concatenate([cum, np.mod(cum - L / 2.0, L)]))
    s0 = bp
    s1 = np.concatenate([bp[1:], [bp[0] + L]])
    p0, p1 = curve.positions(0, s0), curve.positions(0, s1)
    q0, q1 = curve.positions(0, s0 + L / 2.0), curve.positions(0, s1 + L / 2.0)
    w0 = p0 - q0
    dw = (p1 - q1) - w0
    a = np.einsum("ij,ij->i", dw, dw)
    c = np.einsum("ij,ij->i", w0, dw)
    with np.errstate(divide="ignore", invalid="ignore"):
        u = np.clip(np.where(a > 0, -c / a, 0.0), 0.0, 1.0)
    chord = np.linalg.norm(w0 + u[:, None] * dw, axis=1)
    i = int(np.argmin(chord))
    if chord[i] == 0.0:
        raise NotEmbedded("opposite points coincide")
    s = float(np.mod(s0[i] + u[i] * (s1[i] - s0[i]), L))
    w = _pair(curve, 0, s, 0, (s + L / 2.0) % L)
    return (L / 2.0) / float(chord[i]), w


def _corner_distortion(curve: Curve) -> float:
    """Largest limit of distortion for pairs shrinking onto a vertex."""
    best = 1.0
    for c in range(curve.n_components):
        ang = external_angles(curve, c)
        if len(ang):
            m = float(ang.max())
            best = max(best, math.inf if m >= math.pi else 1.0 / math.cos(m / 2))
    return best


def distortion_thickness(curve: Curve, b: float, config: ScanConfig = ScanConfig()) -> ThicknessResult:
    """Infimum of chord length over pairs whose distortion exceeds b."""
    if not b >= 1.0:
        raise InvalidB(f"b must be at least 1, got {b}")
    if _corner_distortion(curve) > b:
        # pairs straddling a sharp vertex reach distortion 1/cos(angle/2) at every scale
        return ThicknessResult(0.0, None, "boundary", b)
    val, ca, sa, cb, tb = _search(curve, "tau", b, config)
    if math.isinf(val):
        return ThicknessResult(math.inf, None, "empty", b)
    a = point_at(curve, ca, sa)
    q = point_at(curve, cb, tb)
    if ca == cb and arc_distance(curve, a, q) == 0.0:
        # pairs shrinking onto a point: the infimum is zero and never attained
        return ThicknessResult(0.0, None, "boundary", b)
    w = pair_distortion(curve, a, q)
    status = "boundary" if abs(w.distortion - b) < ATTAIN_TOL else "attained"
    return ThicknessResult(val, w, status, b)


def solve_kb(b: float) -> float:
    """The k in (0, 2] with arcsin(k/2)/(k/2) = b, by bisection to full precision."""
    if not (1.0 <= b <= math.pi / 2):
        raise OutOfRange(f"b must lie in [1, pi/2], got {b}")
    if b == 1.0:
        return 0.0

    def g(k):
        x = k / 2.0
        return math.asin(x) / x - b

    lo, hi = 0.0, 2.0
    if g(hi) <= 0.0:
        return hi
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi) or hi - lo <= 1e-16:
            break
        if g(mid) > 0.0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def ropelength(curve: Curve, b: float, config: ScanConfig = ScanConfig()) -> RopelengthResult:
    """Total length over distortion thickness; 0 (flagged) when thickness is infinite."""
    tau = distortion_thickness(curve, b, config).value
    if math.isinf(tau):
        return RopelengthResult(0.0, tau, True)
    if tau == 0.0:
        return RopelengthResult(math.inf, tau, False)
    return RopelengthResult(curve.total_length / tau, tau, False)
