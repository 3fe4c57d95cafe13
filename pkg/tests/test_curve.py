import json
import math

import numpy as np
import pytest

from ropelength import zoo
from ropelength.curve import (
    arc_distance,
    build_curve,
    circumradii,
    corner_vertices,
    curve_from_dict,
    load_curve,
    min_radius_of_curvature,
    opposite_point,
    point_at,
    save_curve,
)
from ropelength.errors import (
    DegenerateComponent,
    DimensionMismatch,
    NotClosed,
    OutOfRange,
    ParseError,
)

SQUARE = [(0, 0), (2, 0), (2, 2), (0, 2)]


def test_square_length():
    c = build_curve([SQUARE], [True])
    assert c.total_length == pytest.approx(8.0)
    assert list(c.cum_arclength[0]) == [0, 2, 4, 6, 8]


def test_inscribed_square_length():
    v = [(math.cos(a), math.sin(a)) for a in (0, math.pi / 2, math.pi, 3 * math.pi / 2)]
    assert build_curve([v], [True]).total_length == pytest.approx(4 * math.sqrt(2))


def test_duplicate_vertices_collapse():
    c = build_curve([[(0, 0), (2, 0), (2, 0), (2, 2), (0, 2), (0, 0)]], [True])
    assert c.n_vertices == 4
    assert c.total_length == pytest.approx(8.0)


def test_build_errors():
    with pytest.raises(DimensionMismatch):
        build_curve([[(0, 0), (1, 0), (1, 1)], [(0, 0, 0), (1, 0, 0)]], [True, False])
    with pytest.raises(DegenerateComponent):
        build_curve([[(0, 0), (1, 0), (1, 0)]], [True])
    with pytest.raises(DegenerateComponent):
        build_curve([[(0, 0)]], [False])


def test_point_at_examples(unit_square):
    p = point_at(unit_square, 0, 1.0)
    assert np.allclose(p.position, (1, 0)) and np.allclose(p.tangent, (1, 0)) and not p.corner
    assert np.allclose(point_at(unit_square, 0, 8.0).position, (0, 0))
    v = point_at(unit_square, 0, 2.0)
    assert np.allclose(v.position, (2, 0)) and np.allclose(v.tangent, (0, 1)) and v.corner


def test_point_at_open_out_of_range():
    c = build_curve([[(0, 0), (1, 0)]], [False])
    with pytest.raises(OutOfRange):
        point_at(c, 0, 1.5)


def test_arc_distance(unit_square, hopf256):
    a, b = point_at(unit_square, 0, 0.0), point_at(unit_square, 0, 5.0)
    assert arc_distance(unit_square, a, b) == pytest.approx(3.0)
    assert arc_distance(unit_square, a, a) == 0.0
    assert math.isinf(arc_distance(hopf256, point_at(hopf256, 0, 0.0), point_at(hopf256, 1, 0.0)))


def test_opposite_point(unit_square):
    p = point_at(unit_square, 0, 0.0)
    q = opposite_point(unit_square, p)
    assert q.s == pytest.approx(4.0) and np.allclose(q.position, (2, 2))
    assert opposite_point(unit_square, q).s == pytest.approx(0.0)


def test_opposite_point_360gon():
    c = zoo.circle(n=360)
    q = opposite_point(c, point_at(c, 0, 0.0))
    assert np.allclose(q.position, (-1, 0), atol=1e-12)


def test_opposite_point_open():
    c = build_curve([[(0, 0), (1, 0)]], [False])
    with pytest.raises(NotClosed):
        opposite_point(c, point_at(c, 0, 0.5))


def test_circle_circumradius_exact():
    # the turning angle comes from second differences, so roundoff is amplified by about n^2
    for n in (12, 96, 1000):
        r = min_radius_of_curvature(zoo.circle(radius=1.7, n=n)).min_circumradius
        assert r == pytest.approx(1.7, rel=2e-16 * n * n)


def test_square_curvature(unit_square):
    k = min_radius_of_curvature(unit_square)
    assert k.sharpest_external_angle == pytest.approx(math.pi / 2)
    assert k.min_circumradius < 2 and not k.is_c11_proxy


def test_collinear_triples_are_infinite():
    c = build_curve([[(0, 0), (1, 0), (2, 0)]], [False])
    assert math.isinf(circumradii(c, 0)[0])


def test_ellipse_min_radius():
    assert min_radius_of_curvature(zoo.ellipse(n=720)).min_circumradius == pytest.approx(0.5, abs=1e-2)


def test_corner_vertices(unit_square):
    assert corner_vertices(unit_square) == [(0, 0), (0, 1), (0, 2), (0, 3)]


def test_length_refinement_monotone():
    lengths = [zoo.ellipse(n=n).total_length for n in (64, 128, 256, 512)]
    assert all(a < b for a, b in zip(lengths, lengths[1:]))
    gaps = np.diff(lengths)
    # second-order convergence: each gap about a quarter of the previous one
    assert np.all(gaps[1:] / gaps[:-1] < 0.3)


def test_file_roundtrip(tmp_path, hopf256):
    path = tmp_path / "h.json"
    save_curve(hopf256, path)
    back = load_curve(path)
    assert back.n_components == 2 and back.smooth_sampling
    assert np.array_equal(back.components[1], hopf256.components[1])


def test_parse_error_reports_line(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{\n "components": [\n  {"closed": true,, }\n ]\n}\n')
    with pytest.raises(ParseError, match="line 3"):
        load_curve(path)


def test_missing_fields():
    with pytest.raises(ParseError):
        curve_from_dict({"dimension": 2})


def test_declared_dimension_checked():
    doc = {"dimension": 3, "components": [{"closed": True, "vertices": SQUARE}]}
    with pytest.raises(DimensionMismatch):
        curve_from_dict(json.loads(json.dumps(doc)))


def test_immutable(unit_square):
    with pytest.raises(ValueError):
        unit_square.components[0][0, 0] = 5.0
