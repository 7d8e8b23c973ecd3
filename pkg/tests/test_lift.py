import pytest

from arnoldbif.bifurcation import BifurcationSpec, build_bifurcation
from arnoldbif.arrangement import build_arrangement
from arnoldbif.geom import OnCurve, Point
from arnoldbif.invariants import viro_jplus
from arnoldbif.lift import EVEN, ODD, OddBaseWinding, classify_double_point, j2, sqrt_lift, squared_winding
from support import curve, origin, origin_cases, report

P = Point.of


def test_circle_about_origin():
    res = sqrt_lift(curve("K1"), P(0, 0))
    assert res.parity_case == ODD and len(res.lifts) == 1
    assert res.lift_crossings == 0
    assert j2(curve("K1"), P(0, 0)) == 0


def test_circle_origin_outside():
    res = sqrt_lift(curve("K1"), P(3, 1))
    assert res.parity_case == EVEN and len(res.lifts) == 2
    assert res.lift_crossings == 0 and res.inter_lift_crossings == 0
    assert j2(curve("K1"), P(3, 1)) == 0


def test_appendix_odd_lift_doubles_crossings():
    res = sqrt_lift(curve("appendix"), origin("appendix", 1))
    assert res.parity_case == ODD
    assert res.lift_crossings == 6


def test_on_curve_origin():
    with pytest.raises(OnCurve):
        sqrt_lift(curve("K1"), curve("K1").vertices[0])


def test_classify_outside_origin_is_even():
    c = curve("K2")
    (d,) = build_arrangement(c).double_points
    assert classify_double_point(c, P(5, 5), d) == "even"
    with pytest.raises(OddBaseWinding):
        classify_double_point(c, P(0, 0), d)


def test_two_bifurcation_of_circle_has_odd_double_point():
    c = build_bifurcation(curve("K1"), BifurcationSpec(2), P(0, 0))
    (d,) = build_arrangement(c).double_points
    assert classify_double_point(c, P(0, 0), d) == "odd"


def test_neat_four_bifurcation_parities():
    c = build_bifurcation(curve("K1"), BifurcationSpec(4), P(0, 0))
    arr = build_arrangement(c)
    parities = [classify_double_point(c, P(0, 0), d) for d in arr.double_points]
    assert len(parities) == 3
    # nu = n k^2/2 + (k/2 - 1) = 1 with n = 0, k = 4
    assert parities.count("even") == 1
    # connector 1->4 crosses the others; strands 2 and 4 are an odd number of turns from 1
    assert parities.count("odd") == 2


@pytest.mark.parametrize("name,w", origin_cases("odd"))
def test_odd_identity(name, w):
    op = report(name, w).origin_part
    assert op.j2 == 2 * op.j1 - 1
    assert op.j2 % 2 == 0


@pytest.mark.parametrize("name,w", origin_cases("even"))
def test_even_lift_counts(name, w):
    c = curve(name)
    res = sqrt_lift(c, origin(name, w))
    n = report(name).n
    assert res.nu == res.lift_crossings
    assert n - res.nu == res.inter_lift_crossings // 2
    assert res.inter_lift_crossings % 2 == 0
    a, b = res.lifts
    # 180 degree rotation maps one lift onto the other
    assert all(p == Point(-q.x, -q.y) for p, q in zip(a.vertices, b.vertices))
    assert viro_jplus(build_arrangement(a)) == viro_jplus(build_arrangement(b))
    assert report(name, w).origin_part.j2 % 2 == 0


@pytest.mark.parametrize("name,w", [("appendix", 3), ("appendix", 2), ("K2", 1), ("rose3", -2)])
def test_roundtrip_winding(name, w):
    res = sqrt_lift(curve(name), origin(name, w))
    assert res.omega0 == w
    assert squared_winding(res.lifts[0]) == (2 * w if w % 2 else w)
