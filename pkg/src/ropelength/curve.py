"""Polyline curves and links parameterized by arclength."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import (
    DegenerateComponent,
    DimensionMismatch,
    NotClosed,
    OutOfRange,
    ParseError,
)

# External angle (radians) above which a vertex counts as a corner.
CORNER_ANGLE = 1e-3

_DUP_TOL = 1e-14


@dataclass(frozen=True)
class CurvePoint:
    component: int
    s: float
    position: np.ndarray
    tangent: np.ndarray
    corner: bool = False


@dataclass(frozen=True)
class CorneredCurvature:
    min_circumradius: float
    sharpest_external_angle: float
    is_c11_proxy: bool


class Curve:
    """One or more polyline components with cumulative arclength tables.

    Instances are treated as immutable; every array attribute is read-only.
    """

    def __init__(self, components, closed, smooth_sampling=False, name=""):
        comps = tuple(_frozen(np.asarray(c, dtype=float)) for c in components)
        self.components = comps
        self.closed = tuple(bool(c) for c in closed)
        self.smooth_sampling = bool(smooth_sampling)
        self.name = name
        self.dimension = comps[0].shape[1]

        cum, lengths, starts, vecs, lens, s0, ecomp = [], [], [], [], [], [], []
        self._edge_offset = []
        offset = 0
        for ci, (v, cl) in enumerate(zip(comps, self.closed)):
            ev = (np.roll(v, -1, axis=0) - v) if cl else np.diff(v, axis=0)
            el = np.linalg.norm(ev, axis=1)
            c = np.concatenate([[0.0], np.cumsum(el)])
            cum.append(_frozen(c))
            lengths.append(c[-1])
            starts.append(v[: len(ev)])
            vecs.append(ev)
            lens.append(el)
            s0.append(c[:-1])
            ecomp.append(np.full(len(ev), ci))
            self._edge_offset.append(offset)
            offset += len(ev)
        self.cum_arclength = tuple(cum)
        self.lengths = _frozen(np.array(lengths))
        self.total_length = float(self.lengths.sum())
        self.edge_start = _frozen(np.concatenate(starts))
        self.edge_vec = _frozen(np.concatenate(vecs))
        self.edge_len = _frozen(np.concatenate(lens))
        self.edge_s0 = _frozen(np.concatenate(s0))
        self.edge_comp = _frozen(np.concatenate(ecomp))
        self._edge_offset = tuple(self._edge_offset)
        self.vertex_tangents = tuple(
            _frozen(_vertex_tangents(v, cl)) for v, cl in zip(comps, self.closed)
        )

    # -- basic facts -----------------------------------------------------

    @property
    def n_components(self) -> int:
        return len(self.components)

    @property
    def n_vertices(self) -> int:
        return sum(len(c) for c in self.components)

    @property
    def n_edges(self) -> int:
        return len(self.edge_len)

    def length(self, component: int) -> float:
        return float(self.lengths[component])

    def edge_slice(self, component: int) -> slice:
        start = self._edge_offset[component]
        n = len(self.cum_arclength[component]) - 1
        return slice(start, start + n)

    def edge_neighbors(self, component: int) -> tuple[np.ndarray, np.ndarray]:
        """Global indices of the previous and next edge of every edge (-1 if none)."""
        sl = self.edge_slice(component)
        idx = np.arange(sl.start, sl.stop)
        if self.closed[component]:
            return np.roll(idx, 1), np.roll(idx, -1)
        prev = np.concatenate([[-1], idx[:-1]])
        nxt = np.concatenate([idx[1:], [-1]])
        return prev, nxt

    def __repr__(self):
        return (
            f"Curve(name={self.name!r}, components={self.n_components}, "
            f"vertices={self.n_vertices}, dim={self.dimension}, L={self.total_length:.6g})"
        )

    # -- arclength evaluation ---------------------------------------------

    def wrap(self, component: int, s):
        """Reduce arclength into the parameter domain of a component."""
        s = np.asarray(s, dtype=float)
        L = self.lengths[component]
        if self.closed[component]:
            return np.mod(s, L)
        return np.clip(s, 0.0, L)

    def locate(self, component: int, s):
        """Return (local edge index, fraction along edge, wrapped s)."""
        s = self.wrap(component, s)
        cum = self.cum_arclength[component]
        n_edges = len(cum) - 1
        idx = np.searchsorted(cum, s, side="right") - 1
        idx = np.clip(idx, 0, n_edges - 1)
        lens = self.edge_len[self.edge_slice(component)]
        lam = (s - cum[idx]) / lens[idx]
        return idx, np.clip(lam, 0.0, 1.0), s

    def positions(self, component: int, s) -> np.ndarray:
        idx, lam, _ = self.locate(component, s)
        sl = self.edge_slice(component)
        start = self.edge_start[sl][idx]
        vec = self.edge_vec[sl][idx]
        return start + lam[..., None] * vec

    def edge_tangents(self, component: int, s) -> np.ndarray:
        idx, _, _ = self.locate(component, s)
        sl = self.edge_slice(component)
        return self.edge_vec[sl][idx] / self.edge_len[sl][idx][..., None]

    def smooth_tangents(self, component: int, s) -> np.ndarray:
        """Unit tangents interpolated linearly between vertex tangents."""
        idx, lam, _ = self.locate(component, s)
        vt = self.vertex_tangents[component]
        nxt = (idx + 1) % len(vt)
        t = (1.0 - lam)[..., None] * vt[idx] + lam[..., None] * vt[nxt]
        return t / np.linalg.norm(t, axis=-1, keepdims=True)

    def tangents(self, component: int, s) -> np.ndarray:
        """Tangents used by criticality tests: smooth for samplings, edgewise for polygons."""
        if self.smooth_sampling:
            return self.smooth_tangents(component, s)
        return self.edge_tangents(component, s)

    # -- derived curves ----------------------------------------------------

    def with_components(self, components) -> "Curve":
        return Curve(components, self.closed, self.smooth_sampling, self.name)

    def scaled(self, factor: float) -> "Curve":
        return self.with_components([c * factor for c in self.components])

    def transformed(self, matrix, shift=None) -> "Curve":
        matrix = np.asarray(matrix, dtype=float)
        shift = np.zeros(self.dimension) if shift is None else np.asarray(shift)
        return self.with_components([c @ matrix.T + shift for c in self.components])

    # -- serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        out = {
            "dimension": int(self.dimension),
            "smooth_sampling": self.smooth_sampling,
            "components": [
                {"closed": cl, "vertices": c.tolist()}
                for c, cl in zip(self.components, self.closed)
            ],
        }
        if self.name:
            out["name"] = self.name
        return out


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


def _vertex_tangents(v: np.ndarray, closed: bool) -> np.ndarray:
    ev = (np.roll(v, -1, axis=0) - v) if closed else np.diff(v, axis=0)
    u = ev / np.linalg.norm(ev, axis=1, keepdims=True)
    if closed:
        t = np.roll(u, 1, axis=0) + u
    else:
        t = np.empty_like(v)
        t[0] = u[0]
        t[-1] = u[-1]
        t[1:-1] = u[:-1] + u[1:]
    norm = np.linalg.norm(t, axis=1, keepdims=True)
    # a vertex where the curve doubles back has no bisector; use the outgoing edge
    outgoing = u if closed else np.vstack([u, u[-1:]])
    return np.where(norm > 1e-12, t / np.where(norm > 0, norm, 1.0), outgoing)


def build_curve(
    vertex_lists: Sequence,
    closed_flags: Sequence[bool],
    smooth_sampling: bool = False,
    name: str = "",
) -> Curve:
    """Validate vertex lists, collapse repeated vertices and build a Curve."""
    if len(vertex_lists) == 0:
        raise DegenerateComponent("curve has no components")
    if len(vertex_lists) != len(closed_flags):
        raise DimensionMismatch("one closed flag is required per component")
    comps = []
    dim = None
    for ci, (verts, closed) in enumerate(zip(vertex_lists, closed_flags)):
        v = np.asarray(verts, dtype=float)
        if v.ndim != 2 or v.shape[0] == 0:
            raise DegenerateComponent(f"component {ci} has no vertices")
        if dim is None:
            dim = v.shape[1]
        if v.shape[1] != dim:
            raise DimensionMismatch(
                f"component {ci} has dimension {v.shape[1]}, expected {dim}"
            )
        if dim < 2:
            raise DimensionMismatch("ambient dimension must be at least 2")
        if not np.all(np.isfinite(v)):
            raise DegenerateComponent(f"component {ci} has non-finite coordinates")
        scale = max(1.0, float(np.abs(v).max()))
        keep = np.ones(len(v), dtype=bool)
        keep[1:] = np.linalg.norm(np.diff(v, axis=0), axis=1) > _DUP_TOL * scale
        v = v[keep]
        if closed and len(v) > 1 and np.linalg.norm(v[-1] - v[0]) <= _DUP_TOL * scale:
            v = v[:-1]
        need = 3 if closed else 2
        if len(v) < need:
            raise DegenerateComponent(
                f"component {ci} has {len(v)} distinct vertices, needs {need}"
            )
        comps.append(v)
    return Curve(comps, closed_flags, smooth_sampling, name)


def point_at(curve: Curve, component: int, s: float) -> CurvePoint:
    L = curve.length(component)
    if not curve.closed[component] and not (0.0 <= s <= L):
        raise OutOfRange(f"s={s} outside [0, {L}] on open component {component}")
    idx, lam, sw = curve.locate(component, float(s))
    idx, lam, sw = int(idx), float(lam), float(sw)
    pos = curve.positions(component, sw)
    tan = curve.edge_tangents(component, sw)
    cum = curve.cum_arclength[component]
    at_vertex = abs(sw - cum[idx]) <= 1e-12 * max(L, 1.0)
    interior = curve.closed[component] or idx > 0
    corner = bool(at_vertex and interior and _external_angle(curve, component, idx) > CORNER_ANGLE)
    return CurvePoint(component, sw, pos, tan, corner)


def _external_angle(curve: Curve, component: int, vertex: int) -> float:
    sl = curve.edge_slice(component)
    ev = curve.edge_vec[sl]
    if curve.closed[component]:
        a, b = ev[vertex - 1], ev[vertex]
    elif 0 < vertex < len(ev):
        a, b = ev[vertex - 1], ev[vertex]
    else:
        return 0.0
    c = np.dot(a, b) / (np.linalg.norm(a) * np.linalg.norm(b))
    return float(np.arccos(np.clip(c, -1.0, 1.0)))


def arc_distance(curve: Curve, a: CurvePoint, b: CurvePoint) -> float:
    if a.component != b.component:
        return math.inf
    diff = abs(a.s - b.s)
    if curve.closed[a.component]:
        return min(diff, curve.length(a.component) - diff)
    return diff


def opposite_point(curve: Curve, p: CurvePoint) -> CurvePoint:
    if not curve.closed[p.component]:
        raise NotClosed(f"component {p.component} is open")
    L = curve.length(p.component)
    return point_at(curve, p.component, (p.s + L / 2) % L)


def external_angles(curve: Curve, component: int) -> np.ndarray:
    """External (turning) angle at each interior vertex of a component."""
    sl = curve.edge_slice(component)
    ev = curve.edge_vec[sl]
    el = curve.edge_len[sl]
    if curve.closed[component]:
        a, b, la, lb = np.roll(ev, 1, axis=0), ev, np.roll(el, 1), el
    else:
        a, b, la, lb = ev[:-1], ev[1:], el[:-1], el[1:]
    c = np.einsum("ij,ij->i", a, b) / (la * lb)
    return np.arccos(np.clip(c, -1.0, 1.0))


def corner_vertices(curve: Curve, threshold: float = CORNER_ANGLE) -> list[tuple[int, int]]:
    """(component, vertex index) of every vertex whose external angle exceeds threshold."""
    out = []
    for ci in range(curve.n_components):
        ang = external_angles(curve, ci)
        offset = 0 if curve.closed[ci] else 1
        out.extend((ci, int(i) + offset) for i in np.nonzero(ang > threshold)[0])
    return out


def circumradii(curve: Curve, component: int) -> np.ndarray:
    """Circumradius of each consecutive vertex triple (inf when collinear)."""
    v = curve.components[component]
    if curve.closed[component]:
        p0, p1, p2 = np.roll(v, 1, axis=0), v, np.roll(v, -1, axis=0)
    else:
        p0, p1, p2 = v[:-2], v[1:-1], v[2:]
    a = p1 - p0
    b = p2 - p1
    c = np.linalg.norm(p2 - p0, axis=1)
    ua = a / np.linalg.norm(a, axis=1, keepdims=True)
    ub = b / np.linalg.norm(b, axis=1, keepdims=True)
    # turning angle by the cancellation-free half-angle formula
    theta = 2.0 * np.arctan2(np.linalg.norm(ua - ub, axis=1), np.linalg.norm(ua + ub, axis=1))
    sin = np.sin(theta)
    flat = sin <= 1e-14
    with np.errstate(divide="ignore", invalid="ignore"):
        r = c / (2.0 * sin)
    # a flat triple that doubles back is an infinitely sharp turn
    return np.where(flat, np.where(theta > np.pi / 2, 0.0, np.inf), r)


def min_radius_of_curvature(curve: Curve) -> CorneredCurvature:
    radii, angles = [np.inf], [0.0]
    for ci in range(curve.n_components):
        if curve.closed[ci] or len(curve.components[ci]) >= 3:
            radii.append(float(np.min(circumradii(curve, ci))))
            angles.append(float(np.max(external_angles(curve, ci))))
    sharpest = max(angles)
    return CorneredCurvature(min(radii), sharpest, sharpest < CORNER_ANGLE)


def has_corners(curve: Curve) -> bool:
    """True when the curve is a declared polygon with a vertex sharper than CORNER_ANGLE."""
    if curve.smooth_sampling:
        return False
    return min_radius_of_curvature(curve).sharpest_external_angle > CORNER_ANGLE


# -- curve files ----------------------------------------------------------


def curve_from_dict(data: dict) -> Curve:
    try:
        comps = data["components"]
        verts = [c["vertices"] for c in comps]
        closed = [bool(c["closed"]) for c in comps]
        smooth = bool(data.get("smooth_sampling", False))
        dim = data.get("dimension")
    except (KeyError, TypeError) as exc:
        raise ParseError(f"curve document is missing field {exc}") from exc
    for ci, v in enumerate(verts):
        try:
            arr = np.asarray(v, dtype=float)
        except (ValueError, TypeError) as exc:
            raise ParseError(f"component {ci}: vertices must be equal-length lists of numbers") from exc
        if arr.ndim != 2:
            raise ParseError(f"component {ci}: vertices must be a list of coordinate lists")
    curve = build_curve(verts, closed, smooth, data.get("name", ""))
    if dim is not None and int(dim) != curve.dimension:
        raise DimensionMismatch(
            f"declared dimension {dim} but vertices have dimension {curve.dimension}"
        )
    return curve


def load_curve(path) -> Curve:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    curve = curve_from_dict(data)
    if not curve.name:
        curve.name = path.stem
    return curve


def save_curve(curve: Curve, path) -> None:
    Path(path).write_text(json.dumps(curve.to_dict()) + "\n", encoding="utf-8")
