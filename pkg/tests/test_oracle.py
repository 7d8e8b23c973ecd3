import pytest

from arnoldbif.geom import OnCurve, Point
from arnoldbif.oracle import brute_force_min_connection, index_by_mean, winding_by_angle_sum
from support import arrangement, curve

P = Point.of


def test_angle_sum_basics():
    c = curve("K1")
    assert winding_by_angle_sum(c, P(0, 0)) == 1
    assert winding_by_angle_sum(c, P(4, -2)) == 0
    assert winding_by_angle_sum(c.reversed(), P(0, 0)) == -1
    with pytest.raises(OnCurve):
        winding_by_angle_sum(c, c.vertices[0])


def test_index_by_mean_examples():
    assert index_by_mean(arrangement("K0"), arrangement("K0").double_points[0]) == 0
    assert index_by_mean(arrangement("K2"), arrangement("K2").double_points[0]) == 1
    app = arrangement("appendix")
    assert sorted(index_by_mean(app, d) for d in app.double_points) == [1, 1, 2]


def test_brute_force_examples():
    assert brute_force_min_connection(2) == {"min_value": 1, "count_minimizers": 1}
    assert brute_force_min_connection(5) == {"min_value": 4, "count_minimizers": 8}
    assert brute_force_min_connection(8) == {"min_value": 7, "count_minimizers": 64}
    with pytest.raises(ValueError):
        brute_force_min_connection(9)
