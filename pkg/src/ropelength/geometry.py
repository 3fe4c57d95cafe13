"""Small vectorized geometric and 1-D search kernels."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
INV_PHI2 = (3.0 - math.sqrt(5.0)) / 2.0


def _dot(a, b):
    return np.einsum("...i,...i->...", a, b)


def segment_distance(p0, u, q0, v, eps=1e-300):
    """Distance between segments p0 + s*u and q0 + t*v for s, t in [0, 1].

    Broadcasts over leading axes. Returns (distance, s, t).
    """
    p0, u, q0, v = np.broadcast_arrays(*(np.asarray(x, dtype=float) for x in (p0, u, q0, v)))
    r = p0 - q0
    a = _dot(u, u)
    e = _dot(v, v)
    f = _dot(v, r)
    c = _dot(u, r)
    b = _dot(u, v)
    denom = a * e - b * b
    a_ok = a > eps
    e_ok = e > eps
    a_safe = np.where(a_ok, a, 1.0)
    e_safe = np.where(e_ok, e, 1.0)
    # skew case; parallel segments start from s=0 and are fixed up below
    nonpar = denom > 1e-14 * a * e
    s = np.where(nonpar, np.clip((b * f - c * e) / np.where(nonpar, denom, 1.0), 0.0, 1.0), 0.0)
    t = (b * s + f) / e_safe
    low = t < 0.0
    high = t > 1.0
    s = np.where(low, np.clip(-c / a_safe, 0.0, 1.0), s)
    s = np.where(high, np.clip((b - c) / a_safe, 0.0, 1.0), s)
    t = np.clip(t, 0.0, 1.0)
    # degenerate segments
    s = np.where(a_ok, s, 0.0)
    t = np.where(a_ok, t, np.clip(f / e_safe, 0.0, 1.0))
    s = np.where(e_ok | ~a_ok, s, np.clip(-c / a_safe, 0.0, 1.0))
    t = np.where(e_ok, t, 0.0)
    d = (p0 + s[..., None] * u) - (q0 + t[..., None] * v)
    return np.sqrt(_dot(d, d)), s, t


def point_segment_distance(p, q0, v):
    """Distance from points p to segments q0 + t*v. Returns (distance, t)."""
    p, q0, v = np.broadcast_arrays(*(np.asarray(x, dtype=float) for x in (p, q0, v)))
    vv = _dot(v, v)
    t = np.clip(_dot(p - q0, v) / np.where(vv > 0, vv, 1.0), 0.0, 1.0)
    d = q0 + t[..., None] * v - p
    return np.sqrt(_dot(d, d)), t


def golden_minimize(f, lo, hi, tol=1e-10, max_iter=80):
    """Batched golden-section search.

    ``f`` maps an array of abscissae to an array of values; ``lo`` and ``hi``
    are arrays of bracket ends. Returns (argmin, min value) per bracket.
    """
    a = np.array(lo, dtype=float)
    b = np.array(hi, dtype=float)
    h = b - a
    c = a + INV_PHI2 * h
    d = a + INV_PHI * h
    yc = f(c)
    yd = f(d)
    for _ in range(max_iter):
        if np.all(h <= tol):
            break
        left = yc < yd
        # keep [a, d] where f(c) < f(d), else [c, b]
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        h = b - a
        new_c = a + INV_PHI2 * h
        new_d = a + INV_PHI * h
        nd = np.where(left, c, new_d)
        nc = np.where(left, new_c, d)
        ycd = np.where(left, yc, yd)
        probe = np.where(left, nc, nd)
        yp = f(probe)
        yc = np.where(left, yp, ycd)
        yd = np.where(left, ycd, yp)
        c, d = nc, nd
    x = np.where(yc < yd, c, d)
    y = np.minimum(yc, yd)
    return x, y


def bisect_roots(f, lo, hi, iters=64):
    """Batched bisection on brackets with f(lo) * f(hi) <= 0."""
    lo = np.array(lo, dtype=float)
    hi = np.array(hi, dtype=float)
    flo = f(lo)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        same = np.sign(fm) == np.sign(flo)
        lo = np.where(same, mid, lo)
        flo = np.where(same, fm, flo)
        hi = np.where(same, hi, mid)
    return 0.5 * (lo + hi)


def map_chunks(fn, n_items, chunk, threads=1):
    """Apply fn(start, stop) over consecutive chunks; results stay in order."""
    bounds = [(i, min(i + chunk, n_items)) for i in range(0, n_items, chunk)]
    if threads is None or threads <= 1 or len(bounds) <= 1:
        return [fn(a, b) for a, b in bounds]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda ab: fn(*ab), bounds))
