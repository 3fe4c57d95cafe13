"""Self-critical and doubly self-critical pairs, c1, c2 and curvature thickness.

Smooth samplings use tangents interpolated between vertex tangents, which
makes the criticality residuals continuous; roots are bracketed on the vertex
grid and polished by bisection (single residual) or damped Newton (pairs).
Declared polygons use edge tangents: a vertex is critical when the one-sided
residuals differ in sign, and pairs are enumerated exactly edge by edge.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .curve import Curve, CurvePoint, has_corners, min_radius_of_curvature, point_at
from .distortion import ScanConfig, sample_arclengths
from .errors import NoConvergence, TooFewEdges
from .geometry import bisect_roots, golden_minimize, segment_distance

log = logging.getLogger(__name__)

ROOT_TOL = 1e-8
SYMMETRY_TOL = 1e-6


@dataclass(frozen=True)
class CriticalPair:
    a: CurvePoint
    b: CurvePoint
    chord: float
    residuals: tuple[float, float]
    kind: str


# -- vectorized evaluation over mixed components -----------------------------------


def _pos_tan(curve: Curve, comps, s):
    comps = np.asarray(comps)
    s = np.asarray(s, dtype=float)
    pos = np.empty(s.shape + (curve.dimension,))
    tan = np.empty_like(pos)
    for c in np.unique(comps):
        m = comps == c
        pos[m] = curve.positions(int(c), s[m])
        tan[m] = curve.tangents(int(c), s[m])
    return pos, tan


def _residuals(curve, ca, sa, cb, sb):
    """Chord-normalized (T_a.(a-b), T_b.(a-b)) and the chord."""
    pa, ta = _pos_tan(curve, ca, sa)
    pb, tb = _pos_tan(curve, cb, sb)
    d = pa - pb
    chord = np.linalg.norm(d, axis=-1)
    safe = np.where(chord > 0, chord, 1.0)
    f1 = np.einsum("...i,...i->...", ta, d) / safe
    f2 = np.einsum("...i,...i->...", tb, d) / safe
    return f1, f2, chord


def _critical_pair(curve, ca, sa, cb, sb, kind=None) -> CriticalPair:
    a = point_at(curve, int(ca), float(sa))
    b = point_at(curve, int(cb), float(sb))
    f1, f2, chord = _residuals(curve, ca, sa, cb, sb)
    f1, f2, chord = float(f1), float(f2), float(chord)
    if kind is None:
        if abs(f1) < ROOT_TOL and abs(f2) < ROOT_TOL:
            kind = "doubly_self_critical"
        elif abs(f1 + f2) < SYMMETRY_TOL:
            # T_a.(a-b) == T_b.(b-a)
            kind = "symmetric"
        else:
            kind = "self_critical"
    return CriticalPair(a, b, chord, (f1, f2), kind)


def _vertex_grid(curve: Curve):
    comps, s, gidx = [], [], []
    for c in range(curve.n_components):
        cum = curve.cum_arclength[c]
        sv = cum[:-1] if curve.closed[c] else cum
        comps.append(np.full(len(sv), c))
        s.append(sv)
    return np.concatenate(comps), np.concatenate(s)


def _edge_of(curve: Curve, comp: int, s):
    """Global index of the edge containing arclength s (following edge at vertices)."""
    idx, _, _ = curve.locate(comp, s)
    return curve.edge_slice(comp).start + idx


def _edge_gap(curve: Curve, e, f):
    """Index distance between global edges (inf across components)."""
    e = np.asarray(e)
    f = np.asarray(f)
    ce, cf = curve.edge_comp[e], curve.edge_comp[f]
    gap = np.abs(e - f).astype(float)
    for c in range(curve.n_components):
        if curve.closed[c]:
            n = curve.edge_slice(c).stop - curve.edge_slice(c).start
            m = (ce == c) & (cf == c)
            gap = np.where(m, np.minimum(gap, n - gap), gap)
    return np.where(ce == cf, gap, np.inf)


def _edge_vertices(curve: Curve):
    """Global vertex indices (start, end) of every edge on the vertex grid."""
    starts, ends = [], []
    offset = 0
    for c in range(curve.n_components):
        n_v = len(curve.components[c])
        n_e = curve.edge_slice(c).stop - curve.edge_slice(c).start
        i = np.arange(n_e)
        starts.append(offset + i)
        ends.append(offset + (i + 1) % n_v)
        offset += n_v
    return np.concatenate(starts), np.concatenate(ends)


# -- self-critical pairs ----------------------------------------------------


def _p_samples(curve: Curve, config: ScanConfig):
    comps, s = [], []
    for c in range(curve.n_components):
        count = config.coarse_samples_per_component
        sc = sample_arclengths(curve, c, count, midpoints=True) if count > 0 else sample_arclengths(curve, c, 0)
        comps.append(np.full(len(sc), c))
        s.append(sc)
    return np.concatenate(comps), np.concatenate(s)


def _excluded_edges(curve: Curve, comp: int, s: float):
    """Edges too close to p along the curve to host a nontrivial critical point."""
    e = int(_edge_of(curve, comp, s))
    sl = curve.edge_slice(comp)
    cum = curve.cum_arclength[comp]
    local = e - sl.start
    holders = {e}
    if abs(curve.wrap(comp, s) - cum[local]) <= 1e-12 * max(cum[-1], 1.0):
        if local > 0:
            holders.add(e - 1)
        elif curve.closed[comp]:
            holders.add(sl.stop - 1)
    all_e = np.arange(sl.start, sl.stop)
    gaps = np.min([_edge_gap(curve, all_e, np.full_like(all_e, h)) for h in holders], axis=0)
    return set(all_e[gaps <= 1].tolist())


def _polygon_self_critical(curve: Curve, pc, ps):
    """Exact critical partners of sampled first points on a polygon with edge tangents."""
    ecomp, cum0, clen = curve.edge_comp, curve.edge_s0, curve.edge_len
    tan_e = curve.edge_vec / clen[:, None]
    out_ip, out_c, out_t = [], [], []
    for i in range(len(ps)):
        p = curve.positions(int(pc[i]), float(ps[i]))
        allowed = np.ones(curve.n_edges, dtype=bool)
        allowed[list(_excluded_edges(curve, int(pc[i]), float(ps[i])))] = False
        # interior feet of perpendiculars
        w = curve.edge_start - p
        u = -np.einsum("ij,ij->i", w, curve.edge_vec) / clen**2
        for e in np.nonzero(allowed & (u > 0) & (u < 1))[0]:
            out_ip.append(i)
            out_c.append(ecomp[e])
            out_t.append(cum0[e] + u[e] * clen[e])
        # corners where the one-sided residuals have strictly opposite signs
        for c in range(curve.n_components):
            sl = curve.edge_slice(c)
            idx = np.arange(sl.start, sl.stop)
            prev, _ = curve.edge_neighbors(c)
            pv = np.where(prev >= 0, prev, idx)
            ok = (prev >= 0) & allowed[idx] & allowed[pv]
            dv = curve.edge_start[idx] - p
            hin = np.einsum("ij,ij->i", tan_e[pv], dv)
            hout = np.einsum("ij,ij->i", tan_e[idx], dv)
            for e in idx[ok & (hin * hout < 0)]:
                out_ip.append(i)
                out_c.append(c)
                out_t.append(cum0[e])
    ip = np.array(out_ip, dtype=int)
    return pc[ip], ps[ip], np.array(out_c, dtype=int), np.array(out_t, dtype=float)


def _near_edges(curve: Curve, e_q):
    """Mask (len(e_q), n_edges) of edges too close to q to host a partner."""
    all_e = np.arange(curve.n_edges)
    return _edge_gap(curve, np.asarray(e_q)[:, None], all_e[None, :]) <= 2


def _edge_roots(curve: Curve, Q, T, edges):
    """Zeros of T.(x - Q) along the given edges, where the function is linear.

    Returns (u, valid): the edge parameter of the root and whether one exists.
    """
    g0 = np.einsum("kd,k...d->k...", T, curve.edge_start[edges] - Q[:, None, :])
    g1 = g0 + np.einsum("kd,k...d->k...", T, curve.edge_vec[edges])
    den = g0 - g1
    with np.errstate(divide="ignore", invalid="ignore"):
        u = g0 / den
    valid = (g0 * g1 <= 0) & (den != 0) & (u >= 0) & (u < 1)
    # the closing endpoint of an open component would otherwise be skipped
    last = np.zeros(curve.n_edges, dtype=bool)
    for c in range(curve.n_components):
        if not curve.closed[c]:
            last[curve.edge_slice(c).stop - 1] = True
    valid |= last[edges] & (g1 == 0) & (g0 != 0)
    return np.where(valid, u, np.nan), valid


def _smooth_self_critical(curve: Curve, qc, qs, chunk=256):
    """Partners p with T_q.(p - q) = 0 for sampled critical ends q."""
    out = [[], [], [], []]
    all_e = np.arange(curve.n_edges)
    for i0 in range(0, len(qs), chunk):
        cc, ss = qc[i0 : i0 + chunk], qs[i0 : i0 + chunk]
        Q, T = _pos_tan(curve, cc, ss)
        e_q = np.array([_edge_of(curve, int(c), s) for c, s in zip(cc, ss)])
        edges = np.broadcast_to(all_e, (len(ss), curve.n_edges))
        u, valid = _edge_roots(curve, Q, T, edges)
        valid &= ~_near_edges(curve, e_q)
        k, e = np.nonzero(valid)
        out[0].append(curve.edge_comp[e])
        out[1].append(curve.edge_s0[e] + u[k, e] * curve.edge_len[e])
        out[2].append(cc[k])
        out[3].append(ss[k])
    return tuple(np.concatenate(col) for col in out)


def _critical_candidates(curve: Curve, config: ScanConfig):
    """(comp_p, s_p, comp_q, s_q) with q the critical end."""
    sc, ss = _p_samples(curve, config)
    if curve.smooth_sampling:
        return _smooth_self_critical(curve, sc, ss)
    return _polygon_self_critical(curve, sc, ss)


def find_self_critical(curve: Curve, config: ScanConfig = ScanConfig()) -> list[CriticalPair]:
    """Pairs (p, q) with q a critical point of the distance from p, i.e. T_q.(p - q) = 0."""
    pc, ps, qc, qs = _critical_candidates(curve, config)
    out = []
    for r in zip(pc, ps, qc, qs):
        pair = _critical_pair(curve, *r)
        if pair.chord > 0:
            out.append(pair)
    return out


def c1(curve: Curve, config: ScanConfig = ScanConfig()) -> float:
    """Minimum chord over self-critical pairs (inf if there are none)."""
    pc, ps, qc, qs = _critical_candidates(curve, config)
    if len(ps) == 0:
        return math.inf
    _, _, chord = _residuals(curve, pc, ps, qc, qs)
    good = chord > 0
    if not np.any(good):
        return math.inf
    pc, ps, qc, qs, chord = pc[good], ps[good], qc[good], qs[good], chord[good]
    best = float(chord.min())
    if not curve.smooth_sampling or config.refine_iterations == 0:
        return best
    order = np.argsort(chord, kind="stable")[: config.top_k]
    return min(best, _refine_c1(curve, pc[order], ps[order], qc[order], qs[order], config))


def _refine_c1(curve, pc, ps, qc, qs, config, window=3):
    """Golden search over the critical end q, tracking the partner root near its edge."""
    e_p = np.array([_edge_of(curve, int(c), s) for c, s in zip(pc, ps)])
    e_q = np.array([_edge_of(curve, int(c), s) for c, s in zip(qc, qs)])
    offs = np.arange(-window, window + 1)
    win = np.empty((len(e_p), len(offs)), dtype=int)
    inside = np.ones_like(win, dtype=bool)
    for k, e in enumerate(e_p):
        sl = curve.edge_slice(int(curve.edge_comp[e]))
        n = sl.stop - sl.start
        loc = e - sl.start + offs
        if curve.closed[int(curve.edge_comp[e])]:
            loc = loc % n
        else:
            inside[k] = (loc >= 0) & (loc < n)
            loc = np.clip(loc, 0, n - 1)
        win[k] = sl.start + loc
    h = curve.edge_len[e_q]

    def f(x):
        Q, T = _pos_tan(curve, qc, x)
        u, valid = _edge_roots(curve, Q, T, win)
        valid &= inside & ~_near_edges(curve, e_q)[np.arange(len(e_q))[:, None], win]
        pts = curve.edge_start[win] + u[..., None] * curve.edge_vec[win]
        dist = np.linalg.norm(pts - Q[:, None, :], axis=-1)
        # follow the root closest to the original partner edge
        rank = np.where(valid, np.abs(offs)[None, :], np.inf)
        j = np.argmin(rank, axis=1)
        k = np.arange(len(x))
        return np.where(np.isfinite(rank[k, j]), dist[k, j], np.inf)

    _, val = golden_minimize(f, qs - h, qs + h, config.refine_tolerance, config.refine_iterations)
    val = val[np.isfinite(val) & (val > 0)]
    return float(val.min()) if len(val) else math.inf


# -- doubly self-critical pairs -----------------------------------------------------


def _smooth_double_roots(curve: Curve):
    vc, vs = _vertex_grid(curve)
    P, T = _pos_tan(curve, vc, vs)
    D = P[:, None, :] - P[None, :, :]
    n = np.linalg.norm(D, axis=-1)
    safe = np.where(n > 0, n, 1.0)
    F1 = np.einsum("ik,ijk->ij", T, D) / safe
    F2 = np.einsum("jk,ijk->ij", T, D) / safe
    e0, e1 = _edge_vertices(curve)
    E = len(e0)
    ei, fi = np.triu_indices(E, k=1)
    keep = _edge_gap(curve, ei, fi) > 1
    ei, fi = ei[keep], fi[keep]
    cells = []
    for F in (F1, F2):
        corners = np.stack([F[e0[ei], e0[fi]], F[e0[ei], e1[fi]], F[e1[ei], e0[fi]], F[e1[ei], e1[fi]]])
        cells.append((corners.min(axis=0) <= 0) & (corners.max(axis=0) >= 0))
    hit = cells[0] & cells[1]
    ei, fi = ei[hit], fi[hit]
    if len(ei) == 0:
        return None
    ca = curve.edge_comp[ei]
    cb = curve.edge_comp[fi]
    s_lo, s_hi = curve.edge_s0[ei], curve.edge_s0[ei] + curve.edge_len[ei]
    t_lo, t_hi = curve.edge_s0[fi], curve.edge_s0[fi] + curve.edge_len[fi]
    s, t, ok = _newton(curve, ca, cb, 0.5 * (s_lo + s_hi), 0.5 * (t_lo + t_hi), curve.edge_len[ei], curve.edge_len[fi])
    if not np.all(ok):
        bad = ~ok
        s2, t2, ok2 = _alternating_bisection(curve, ca[bad], cb[bad], s_lo[bad], s_hi[bad], t_lo[bad], t_hi[bad])
        s[bad], t[bad], ok[bad] = s2, t2, ok2
    if not np.any(ok):
        raise NoConvergence(
            "no doubly critical seed converged",
            cell=(int(ei[0]), int(fi[0])),
        )
    if not np.all(ok):
        log.debug("%d of %d doubly critical seeds did not converge", int((~ok).sum()), len(ok))
    s, t, ca, cb = s[ok], t[ok], ca[ok], cb[ok]
    s = np.array([curve.wrap(int(c), x) for c, x in zip(ca, s)])
    t = np.array([curve.wrap(int(c), x) for c, x in zip(cb, t)])
    # drop roots that slid onto the diagonal
    ea = np.array([_edge_of(curve, int(c), x) for c, x in zip(ca, s)])
    eb = np.array([_edge_of(curve, int(c), x) for c, x in zip(cb, t)])
    far = _edge_gap(curve, ea, eb) > 1
    return ca[far], s[far], cb[far], t[far]


def _newton(curve, ca, cb, s, t, hs, ht, iters=40):
    s = s.astype(float).copy()
    t = t.astype(float).copy()
    step_s = 1e-7 * hs
    step_t = 1e-7 * ht

    def F(s_, t_):
        f1, f2, _ = _residuals(curve, ca, s_, cb, t_)
        return np.stack([f1, f2], axis=-1)

    Fv = F(s, t)
    for _ in range(iters):
        norm = np.abs(Fv).max(axis=1)
        if np.all(norm < 0.01 * ROOT_TOL):
            break
        J = np.empty(s.shape + (2, 2))
        J[:, :, 0] = (F(s + step_s, t) - F(s - step_s, t)) / (2 * step_s[:, None])
        J[:, :, 1] = (F(s, t + step_t) - F(s, t - step_t)) / (2 * step_t[:, None])
        delta = -np.einsum("nij,nj->ni", np.linalg.pinv(J, rcond=1e-10), Fv)
        # never jump more than one edge length per iteration
        lim = np.maximum(np.abs(delta[:, 0]) / hs, np.abs(delta[:, 1]) / ht)
        delta = delta / np.maximum(lim, 1.0)[:, None]
        lam = np.ones(len(s))
        for _ in range(12):
            Fn = F(s + lam * delta[:, 0], t + lam * delta[:, 1])
            better = np.abs(Fn).max(axis=1) < norm
            done = better | (lam < 1e-3)
            if np.all(done):
                break
            lam = np.where(done, lam, lam / 2)
        Fn = F(s + lam * delta[:, 0], t + lam * delta[:, 1])
        improve = np.abs(Fn).max(axis=1) < norm
        s = np.where(improve, s + lam * delta[:, 0], s)
        t = np.where(improve, t + lam * delta[:, 1], t)
        Fv = np.where(improve[:, None], Fn, Fv)
    ok = np.abs(Fv).max(axis=1) < ROOT_TOL
    return s, t, ok


def _alternating_bisection(curve, ca, cb, s_lo, s_hi, t_lo, t_hi, rounds=8):
    s = 0.5 * (s_lo + s_hi)
    t = 0.5 * (t_lo + t_hi)
    for _ in range(rounds):
        f_lo = _residuals(curve, ca, s_lo, cb, t)[0]
        f_hi = _residuals(curve, ca, s_hi, cb, t)[0]
        br = f_lo * f_hi <= 0
        tt = t

        def g1(x):
            return _residuals(curve, ca, x, cb, tt)[0]

        s = np.where(br, bisect_roots(g1, s_lo, s_hi, 64), s)
        ss = s
        f_lo = _residuals(curve, ca, ss, cb, t_lo)[1]
        f_hi = _residuals(curve, ca, ss, cb, t_hi)[1]
        br = f_lo * f_hi <= 0

        def g2(x):
            return _residuals(curve, ca, ss, cb, x)[1]

        t = np.where(br, bisect_roots(g2, t_lo, t_hi, 64), t)
    f1, f2, _ = _residuals(curve, ca, s, cb, t)
    return s, t, (np.abs(f1) < ROOT_TOL) & (np.abs(f2) < ROOT_TOL)


def _polygon_double_roots(curve: Curve):
    """Exact doubly critical pairs of a polygon with edge tangents."""
    E = curve.n_edges
    x, v, ln = curve.edge_start, curve.edge_vec, curve.edge_len
    u = v / ln[:, None]
    ei, fi = np.triu_indices(E, k=1)
    keep = _edge_gap(curve, ei, fi) > 1
    ei, fi = ei[keep], fi[keep]
    res_c = [[], [], [], []]

    def add(e, se, f, tf):
        res_c[0].append(curve.edge_comp[e])
        res_c[1].append(curve.edge_s0[e] + se * ln[e])
        res_c[2].append(curve.edge_comp[f])
        res_c[3].append(curve.edge_s0[f] + tf * ln[f])

    # interior-interior: common perpendicular of the two edges
    r = x[ei] - x[fi]
    a = np.einsum("ij,ij->i", v[ei], v[ei])
    e_ = np.einsum("ij,ij->i", v[fi], v[fi])
    b = np.einsum("ij,ij->i", v[ei], v[fi])
    c = np.einsum("ij,ij->i", v[ei], r)
    f = np.einsum("ij,ij->i", v[fi], r)
    den = a * e_ - b * b
    par = den <= 1e-12 * a * e_
    with np.errstate(divide="ignore", invalid="ignore"):
        s = (b * f - c * e_) / den
        t = (a * f - b * c) / den
    inside = ~par & (s > 0) & (s < 1) & (t > 0) & (t < 1)
    for k in np.nonzero(inside)[0]:
        add(ei[k], s[k], fi[k], t[k])
    # parallel edges: take the middle of the overlap of their projections
    for k in np.nonzero(par)[0]:
        # t(s) = (b s + f) / e_, s-range where t in [0, 1]
        s_a, s_b = (-f[k]) / b[k], (e_[k] - f[k]) / b[k]
        lo, hi = max(0.0, min(s_a, s_b)), min(1.0, max(s_a, s_b))
        if hi > lo:
            sm = 0.5 * (lo + hi)
            add(ei[k], sm, fi[k], (b[k] * sm + f[k]) / e_[k])
    # corners
    prev_e = np.concatenate([curve.edge_neighbors(c)[0] for c in range(curve.n_components)])
    verts = np.nonzero(prev_e >= 0)[0]

    def corner_critical(j, q):
        d = x[j] - q
        hin = np.einsum("...i,...i->...", u[prev_e[j]], d)
        hout = np.einsum("...i,...i->...", u[j], d)
        return hin * hout < 0

    for j in verts:
        inc = (prev_e[j], j)
        cand = np.arange(E)
        ok = np.min([_edge_gap(curve, cand, np.full(E, h)) for h in inc], axis=0) > 1
        # vertex to edge interior
        tq = np.einsum("ij,ij->i", x[j] - x, v) / ln**2
        q = x + tq[:, None] * v
        good = ok & (tq > 0) & (tq < 1) & corner_critical(j, q)
        for g in np.nonzero(good)[0]:
            add(j, 0.0, g, tq[g])
        # vertex to vertex, counted once
        vv = ok & (cand > j) & (prev_e >= 0)
        vv &= np.min([_edge_gap(curve, np.full(E, h), prev_e) for h in inc], axis=0) > 1
        for g in np.nonzero(vv)[0]:
            if corner_critical(j, x[g]) and corner_critical(g, x[j]):
                add(j, 0.0, g, 0.0)
    if not res_c[0]:
        return None
    return tuple(np.array(col) for col in res_c)


def doubly_critical_pairs(curve: Curve) -> list[CriticalPair]:
    roots = _smooth_double_roots(curve) if curve.smooth_sampling else _polygon_double_roots(curve)
    if roots is None:
        return []
    ca, s, cb, t = roots
    out = [_critical_pair(curve, *r, kind="doubly_self_critical") for r in zip(ca, s, cb, t)]
    return sorted(out, key=lambda p: (p.chord, p.a.component, p.a.s, p.b.component, p.b.s))


def c2(curve: Curve, config: ScanConfig = ScanConfig()) -> tuple[float, CriticalPair | None]:
    """Minimum chord over doubly self-critical pairs, with witness (inf, None if none)."""
    pairs = doubly_critical_pairs(curve)
    if not pairs:
        return math.inf, None
    return pairs[0].chord, pairs[0]


def sigma_k(curve: Curve, k: float, c2_value: float | None = None, config: ScanConfig = ScanConfig()) -> float:
    """Curvature thickness min(k r, c2); zero for declared polygons with corners."""
    if k <= 0:
        raise ValueError("k must be positive")
    if has_corners(curve):
        return 0.0
    r = min_radius_of_curvature(curve).min_circumradius
    if c2_value is None:
        c2_value = c2(curve, config)[0]
    return min(k * r, c2_value)


def edge_clearance_sigma1(curve: Curve, m: int = 1) -> float:
    """Smallest distance between edges more than m steps apart (or on different components).

    This is the diameter at which equal cylinders around the edges first meet.
    """
    if m < 1:
        raise ValueError("skip m must be at least 1")
    E = curve.n_edges
    ei, fi = np.triu_indices(E, k=1)
    keep = _edge_gap(curve, ei, fi) > m
    if not np.any(keep):
        raise TooFewEdges(f"no pair of edges is more than {m} steps apart")
    ei, fi = ei[keep], fi[keep]
    d, _, _ = segment_distance(curve.edge_start[ei], curve.edge_vec[ei], curve.edge_start[fi], curve.edge_vec[fi])
    return float(d.min())


def schur_check(curve: Curve, config: ScanConfig | None = None) -> float:
    """min over sampled pairs with d <= 2*pi of |p-q| - 2 sin(d/2), after scaling to max curvature 1."""
    r = min_radius_of_curvature(curve).min_circumradius
    if not (0 < r < math.inf):
        raise ValueError("schur_check needs a curve with positive finite curvature radius")
    worst = math.inf
    for c in range(curve.n_components):
        v = curve.components[c] / r
        cum = curve.cum_arclength[c][: len(v)] / r
        L = curve.length(c) / r
        i, j = np.triu_indices(len(v), k=1)
        d = np.abs(cum[j] - cum[i])
        if curve.closed[c]:
            d = np.minimum(d, L - d)
        chord = np.linalg.norm(v[i] - v[j], axis=1)
        m = d <= 2 * math.pi
        if np.any(m):
            worst = min(worst, float(np.min(chord[m] - 2 * np.sin(d[m] / 2))))
    return worst
