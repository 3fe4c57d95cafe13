import math

import numpy as np
import pytest

from oracles import brute_delta, brute_delta_opp, brute_tau, circle_tau, kb_oracle, regular_polygon_delta, resample
from ropelength import zoo
from ropelength.curve import build_curve, point_at
from ropelength.distortion import (
    FAST,
    ScanConfig,
    distortion_thickness,
    max_distortion,
    opposite_distortion,
    pair_distortion,
    ropelength,
    solve_kb,
)
from ropelength.errors import IdenticalPoints, InvalidB, MultiComponent, NotClosed, NotEmbedded, OutOfRange

THIRD_PI, HALF_PI = math.pi / 3, math.pi / 2
COARSE64 = ScanConfig(coarse_samples_per_component=64)


# -- pair distortion ---------------------------------------------------------------


def test_pair_on_straight_edge(unit_square):
    r = pair_distortion(unit_square, point_at(unit_square, 0, 0.5), point_at(unit_square, 0, 0.8))
    assert r.arc == pytest.approx(0.3) and r.distortion == pytest.approx(1.0)


def test_pair_mid_sides(unit_square):
    r = pair_distortion(unit_square, point_at(unit_square, 0, 7.0), point_at(unit_square, 0, 3.0))
    assert (r.arc, r.chord, r.distortion) == pytest.approx((4.0, 2.0, 2.0))
    assert r.crit_residual_a == pytest.approx(0.0) and r.crit_residual_b == pytest.approx(0.0)


def test_pair_cross_component(hopf256):
    r = pair_distortion(hopf256, point_at(hopf256, 0, 0.0), point_at(hopf256, 1, 1.0))
    assert math.isinf(r.distortion) and math.isinf(r.arc)


def test_identical_points(unit_square):
    with pytest.raises(IdenticalPoints):
        pair_distortion(unit_square, point_at(unit_square, 0, 1.0), point_at(unit_square, 0, 9.0))


# -- max and opposite distortion -----------------------------------------------------


def test_circle_max_distortion(circle512):
    val, w = max_distortion(circle512)
    # a regular polygon peaks at opposite edge midpoints, slightly above pi/2
    assert val == pytest.approx(regular_polygon_delta(512), rel=1e-9)
    assert w.chord == pytest.approx(2.0, abs=1e-4)
    assert val >= brute_delta(circle512.components[0]) - 1e-12


def test_square_max_distortion(unit_square):
    val, w = max_distortion(unit_square)
    assert val == pytest.approx(2.0, abs=1e-6)
    assert w.chord == pytest.approx(2.0, abs=1e-6)


def test_wedge_hull_distortion():
    c = zoo.wedge_hull(math.pi / 3, 512)
    assert max_distortion(c)[0] >= 1 / math.cos(math.pi / 6)


def test_wedge_corner_pairs():
    # pairs symmetric about the apex have distortion sec(theta/2)
    theta = math.pi / 3
    c = zoo.wedge_hull(theta, 512)
    L = c.total_length
    r = pair_distortion(c, point_at(c, 0, 0.01), point_at(c, 0, L - 0.01))
    assert r.distortion == pytest.approx(1 / math.cos(theta / 2), rel=1e-9)


def test_link_distortion_infinite(hopf256):
    val, w = max_distortion(hopf256)
    assert math.isinf(val) and w.a.component != w.b.component


def test_not_embedded():
    bowtie = build_curve([[(0, 0), (2, 2), (2, 0), (0, 2)]], [True])
    with pytest.raises(NotEmbedded):
        max_distortion(bowtie)


def test_circle_opposite_distortion(circle512):
    val, _ = opposite_distortion(circle512)
    assert abs(val - HALF_PI) < 2e-3
    assert val == pytest.approx(regular_polygon_delta(512), rel=1e-12)
    assert val == pytest.approx(brute_delta_opp(circle512.components[0]), rel=1e-9)


def test_square_opposite_distortion(unit_square):
    assert opposite_distortion(unit_square)[0] == pytest.approx(2.0)


def test_ellipse_opposite_distortion():
    c = zoo.ellipse(n=512)
    val, _ = opposite_distortion(c)
    assert val > HALF_PI
    assert val == pytest.approx(brute_delta_opp(c.components[0]), rel=1e-4)
    assert max_distortion(c)[0] >= val - 1e-9


def test_opposite_errors(hopf256):
    with pytest.raises(MultiComponent):
        opposite_distortion(hopf256)
    with pytest.raises(NotClosed):
        opposite_distortion(zoo.helix(n=64))


# -- thickness -------------------------------------------------------------------


def test_circle_thickness(circle512):
    assert distortion_thickness(circle512, THIRD_PI).value == pytest.approx(1.0, abs=1e-2)
    for b in (1.1, THIRD_PI, 1.4, 1.5):
        assert distortion_thickness(circle512, b).value == pytest.approx(circle_tau(b), abs=2e-2)


def test_square_thickness(unit_square):
    r = distortion_thickness(unit_square, 1.5)
    assert r.value == pytest.approx(2.0, abs=1e-3)
    assert r.status == "attained"


def test_360gon_half_pi_is_finite():
    # the polygon's distortion exceeds pi/2 near opposite edge midpoints, so pairs qualify
    c = zoo.circle(n=360)
    r = distortion_thickness(c, HALF_PI)
    assert math.isfinite(r.value)
    assert r.value == pytest.approx(2 * math.cos(math.pi / 360), abs=1e-3)
    assert r.value <= brute_tau(c.components[0], HALF_PI, n=2880) + 1e-12


def test_invalid_b(circle512):
    with pytest.raises(InvalidB):
        distortion_thickness(circle512, 0.9)


def test_tau_one_vanishes():
    for c in (zoo.circle(n=128), zoo.ellipse(n=128), zoo.square(n=16), zoo.stadium(n=128)):
        spacing = c.total_length / c.n_vertices
        assert distortion_thickness(c, 1.0).value < 2 * spacing


def test_thickness_monotone_in_b():
    c = zoo.ellipse(n=128)
    vals = [distortion_thickness(c, b).value for b in (1.05, 1.1, 1.2, 1.3, 1.4, 1.5, HALF_PI)]
    assert all(x <= y + 1e-12 for x, y in zip(vals, vals[1:]))


def test_empty_thickness(circle512):
    r = distortion_thickness(circle512, 1.6)
    assert math.isinf(r.value) and r.status == "empty" and r.witness is None


def test_hopf_thickness(hopf256):
    for b in (THIRD_PI, 1.3, HALF_PI):
        assert distortion_thickness(hopf256, b).value == pytest.approx(1.0, abs=2e-2)


def test_thread_count_does_not_change_results(ellipse1024):
    a = distortion_thickness(ellipse1024, 1.3, ScanConfig(threads=1))
    b = distortion_thickness(ellipse1024, 1.3, ScanConfig(threads=4))
    assert (a.value, a.status, a.witness.a.s, a.witness.b.s) == (b.value, b.status, b.witness.a.s, b.witness.b.s)


# -- oracle equivalence ----------------------------------------------------------------


@pytest.mark.parametrize("curve", [zoo.circle(n=64), zoo.square(), zoo.ellipse(n=64)], ids=["circle", "square", "ellipse"])
def test_distortion_matches_brute_force(curve):
    v = curve.components[0]
    d = max_distortion(curve, COARSE64)[0]
    bd = brute_delta(v)
    assert d >= bd - 1e-12
    assert d == pytest.approx(bd, rel=1e-3)


@pytest.mark.parametrize("curve", [zoo.circle(n=64), zoo.square(), zoo.ellipse(n=64)], ids=["circle", "square", "ellipse"])
@pytest.mark.parametrize("b", [1.2, 1.45, 1.5])
def test_thickness_bounded_by_brute_force(curve, b):
    # brute force sees a subset of pairs: its infimum is never smaller, and exceeds ours
    # by at most the arclength quantization of its samples
    v = curve.components[0]
    n = 4096
    t = distortion_thickness(curve, b, COARSE64).value
    bt = brute_tau(v, b, n=n)
    h = curve.total_length / n
    assert t <= bt + 1e-12
    assert bt - t <= 2 * h


# -- k_b and ropelength ------------------------------------------------------------


def test_solve_kb_values():
    assert solve_kb(HALF_PI) == pytest.approx(2.0, abs=1e-10)
    assert solve_kb(THIRD_PI) == pytest.approx(1.0, abs=1e-10)
    k = solve_kb(1.1)
    assert 0 < k < 2
    assert math.asin(k / 2) / (k / 2) == pytest.approx(1.1, abs=1e-10)
    assert k == pytest.approx(kb_oracle(1.1), abs=1e-12)
    assert solve_kb(1.0) == 0.0


def test_solve_kb_range():
    with pytest.raises(OutOfRange):
        solve_kb(0.99)
    with pytest.raises(OutOfRange):
        solve_kb(1.6)


def test_ropelength_values(circle512, unit_square):
    assert ropelength(circle512, THIRD_PI).value == pytest.approx(2 * math.pi, rel=1e-2)
    # regression: the square at b=1.5 has thickness equal to its side
    assert ropelength(unit_square, 1.5).value == pytest.approx(4.0)
    r = ropelength(circle512, 1.6)
    assert r.value == 0.0 and r.infinite_thickness


def test_ropelength_zero_thickness():
    r = ropelength(zoo.square(n=16), 1.2)
    assert math.isinf(r.value) or r.value > 1e6


def test_ropelength_floor_small():
    for c in (zoo.circle(n=128), zoo.ellipse(n=128), zoo.stadium(n=128), zoo.square()):
        delta = max_distortion(c)[0]
        for b in (1.1, 1.3, 1.5):
            if b < delta:
                assert ropelength(c, b).value >= 2 * delta - 1e-2 >= math.pi - 1e-2


def test_fast_config_vertex_only():
    pts, _, _ = resample(zoo.circle(n=32).components[0], True, 32)
    assert np.allclose(pts, zoo.circle(n=32).components[0])
    assert distortion_thickness(zoo.circle(n=32), THIRD_PI, FAST).value >= distortion_thickness(zoo.circle(n=32), THIRD_PI).value - 1e-12


def test_sharp_corner_forces_zero_thickness(unit_square):
    # a right angle carries distortion sqrt(2) at every scale
    r = distortion_thickness(unit_square, math.pi / 3)
    assert r.value == 0.0 and r.status == "boundary"
    assert distortion_thickness(unit_square, 1.5).value == pytest.approx(2.0)


def test_wedge_apex_threshold():
    w = zoo.wedge_hull(math.pi / 3, n=256)
    apex = 1 / math.cos(math.pi / 6)
    assert distortion_thickness(w, apex - 0.01).value == 0.0
    assert distortion_thickness(w, apex + 0.01).value > 0.1
