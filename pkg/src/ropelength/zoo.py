"""Analytic test curves with known thickness values."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .curve import Curve, build_curve
from .errors import BadParameters, NoKnownValues, UnknownGenerator

HALF_PI = math.pi / 2
THIRD_PI = math.pi / 3


@dataclass(frozen=True)
class ZooSpec:
    name: str
    parameters: dict = field(default_factory=dict)
    n: int = 128

    def param(self, key, default):
        return float(self.parameters.get(key, default))


def circle(radius=1.0, n=512, dim=2):
    t = 2 * np.pi * np.arange(n) / n
    v = np.zeros((n, dim))
    v[:, 0] = radius * np.cos(t)
    v[:, 1] = radius * np.sin(t)
    return build_curve([v], [True], smooth_sampling=True, name="circle")


def ellipse(a=1.0, b=2.0, n=1024):
    t = 2 * np.pi * np.arange(n) / n
    v = np.column_stack([a * np.cos(t), b * np.sin(t)])
    return build_curve([v], [True], smooth_sampling=True, name="ellipse")


def square(side=2.0, n=4):
    """Axis-aligned square with corner at the origin; n >= 4 subdivides the sides evenly."""
    per_side = max(1, n // 4)
    corners = np.array([[0, 0], [side, 0], [side, side], [0, side]], dtype=float)
    pts = []
    for i in range(4):
        a, b = corners[i], corners[(i + 1) % 4]
        for j in range(per_side):
            pts.append(a + (b - a) * j / per_side)
    return build_curve([np.array(pts)], [True], smooth_sampling=False, name="square")


def wedge_hull(theta=THIRD_PI, n=512):
    """Boundary of the convex hull of the unit circle and one exterior point.

    The exterior point sits on the positive x-axis at distance sec(theta/2);
    the tangent lines from it touch the circle at angles +-theta/2, so the
    external angle at the apex is theta.
    """
    if not 0 < theta < math.pi:
        raise BadParameters("wedge_hull needs 0 < theta < pi")
    half = theta / 2
    apex = np.array([1 / math.cos(half), 0.0])
    t = np.linspace(half, 2 * np.pi - half, n - 1)
    arc = np.column_stack([np.cos(t), np.sin(t)])
    v = np.vstack([apex, arc])
    return build_curve([v], [True], smooth_sampling=False, name="wedge_hull")


def helix(rho=1.0, pitch=0.4, turns=6.0, n=384):
    """Open helix (rho cos t, rho sin t, pitch*rho*t)."""
    t = np.linspace(0.0, 2 * np.pi * turns, n)
    v = np.column_stack([rho * np.cos(t), rho * np.sin(t), pitch * rho * t])
    return build_curve([v], [False], smooth_sampling=True, name="helix")


def hopf(n=256):
    """Two unit circles in perpendicular planes through each other's centers."""
    t = 2 * np.pi * np.arange(n) / n
    a = np.column_stack([np.cos(t), np.sin(t), np.zeros(n)])
    # start the second circle at (0,0,0), the centre of the first
    b = np.column_stack([1 - np.cos(t), np.zeros(n), np.sin(t)])
    return build_curve([a, b], [True, True], smooth_sampling=True, name="hopf")


def stadium(radius=1.0, length=2.0, n=512):
    """Two semicircles of the given radius joined by straight segments."""
    L = 2 * np.pi * radius + 2 * length
    h = L / n
    n_arc = max(2, int(round(np.pi * radius / h)))
    n_seg = max(1, int(round(length / h)))
    pts = []
    # bottom straight, left to right, then right semicircle, top straight, left semicircle
    for j in range(n_seg):
        pts.append([-length / 2 + length * j / n_seg, -radius])
    for j in range(n_arc):
        a = -np.pi / 2 + np.pi * j / n_arc
        pts.append([length / 2 + radius * np.cos(a), radius * np.sin(a)])
    for j in range(n_seg):
        pts.append([length / 2 - length * j / n_seg, radius])
    for j in range(n_arc):
        a = np.pi / 2 + np.pi * j / n_arc
        pts.append([-length / 2 + radius * np.cos(a), radius * np.sin(a)])
    return build_curve([np.array(pts)], [True], smooth_sampling=True, name="stadium")


def trefoil(n=128):
    t = 2 * np.pi * np.arange(n) / n
    v = np.column_stack([
        np.sin(t) + 2 * np.sin(2 * t),
        np.cos(t) - 2 * np.cos(2 * t),
        -np.sin(3 * t),
    ])
    return build_curve([v], [True], smooth_sampling=True, name="trefoil")


GENERATORS = {
    "circle": (circle, {"radius": 1.0}),
    "ellipse": (ellipse, {"a": 1.0, "b": 2.0}),
    "square": (square, {"side": 2.0}),
    "wedge_hull": (wedge_hull, {"theta": THIRD_PI}),
    "helix": (helix, {"rho": 1.0, "pitch": 0.4, "turns": 6.0}),
    "hopf": (hopf, {}),
    "stadium": (stadium, {"radius": 1.0, "length": 2.0}),
    "trefoil": (trefoil, {}),
}


def make(spec: ZooSpec) -> Curve:
    if spec.name not in GENERATORS:
        raise UnknownGenerator(spec.name)
    fn, defaults = GENERATORS[spec.name]
    unknown = set(spec.parameters) - set(defaults)
    if unknown:
        raise BadParameters(f"{spec.name} does not take {sorted(unknown)}")
    if spec.n < 12 and spec.name != "square":
        raise BadParameters("zoo curves need n >= 12")
    kw = {k: spec.param(k, v) for k, v in defaults.items()}
    for key in ("radius", "a", "b", "side", "rho", "turns", "length"):
        if key in kw and not kw[key] > 0:
            raise BadParameters(f"{key} must be positive")
    if spec.name == "ellipse" and kw["a"] > kw["b"]:
        raise BadParameters("ellipse expects a <= b")
    curve = fn(n=spec.n, **kw)
    curve.name = spec.name
    return curve


def expected_values(spec: ZooSpec) -> dict:
    """Analytic values for the curves where they are known, keyed by functional."""
    name = spec.name
    if name == "circle":
        R = spec.param("radius", 1.0)
        return {
            "delta_opp": HALF_PI,
            "tau": {THIRD_PI: R},
            "c2": 2 * R,
            "r": R,
        }
    if name == "ellipse":
        a, b = spec.param("a", 1.0), spec.param("b", 2.0)
        if (a, b) != (1.0, 2.0):
            raise NoKnownValues("ellipse values are tabulated for a=1, b=2 only")
        return {"c2": 2 * a, "r": a * a / b, "sigma": {2.0: 2 * a * a / b}}
    if name == "hopf":
        return {
            "c1": 1.0,
            "c2": 1.0,
            "r": 1.0,
            "tau": {THIRD_PI: 1.0, HALF_PI: 1.0},
            "sigma": {1.0: 1.0, 1.5: 1.0, 2.0: 1.0},
        }
    if name == "square":
        side = spec.param("side", 2.0)
        return {"delta": 2.0, "tau": {1.5: side}, "sigma": {1.0: 0.0, 2.0: 0.0}}
    raise NoKnownValues(name)
