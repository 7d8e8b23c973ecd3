import pytest

from arnoldbif.fixtures import (
    FixtureGuard,
    FixtureId,
    appendix_curve,
    fixture,
    random_generic_curve,
    rose_curve,
    standard_curve,
)
from arnoldbif.geom import validate_generic
from support import ALL_FIXTURES, report


def test_standard_examples():
    r = report("K1")
    assert (r.n, r.jplus) == (0, 0)
    r = report("K0")
    assert (r.n, r.rot, r.jplus, r.jminus) == (1, 0, 0, -1)
    r = report("K-2")
    assert (r.n, r.jplus, r.rot) == (1, -2, -2)


@pytest.mark.parametrize("j", range(-8, 9))
def test_standard_family(j):
    from arnoldbif.invariants import invariant_report

    r = invariant_report(standard_curve(j))
    assert r.rot == j
    if j:
        assert (r.n, r.jplus, r.jminus) == (abs(j) - 1, -2 * (abs(j) - 1), -3 * (abs(j) - 1))


def test_guards():
    with pytest.raises(FixtureGuard):
        standard_curve(9)
    with pytest.raises(FixtureGuard):
        standard_curve(2, resolution=8)
    with pytest.raises(FixtureGuard):
        rose_curve(2)


def test_appendix():
    r = report("appendix")
    assert (r.n, r.jplus, r.gamma_V, r.d_V) == (3, -8, 18, 6)
    assert appendix_curve(20) != appendix_curve(16)


def test_rose():
    r = report("rose3")
    assert r.n == 3 and abs(r.rot) == 2


def test_random_deterministic():
    assert random_generic_curve(1, 4) == random_generic_curve(1, 4)
    assert random_generic_curve(1, 4) != random_generic_curve(2, 4)


@pytest.mark.parametrize("name", ALL_FIXTURES)
def test_every_fixture_is_generic_and_consistent(name):
    assert validate_generic(fixture(name)).is_generic
    r = report(name)
    assert r.jplus - r.jminus == r.n
    assert r.jplus >= -r.n ** 2 - r.n


def test_fixture_ids():
    assert FixtureId("standard_j", {"j": 3}).build() == standard_curve(3)
    assert FixtureId("rose", {"petals": 4}).build() == rose_curve(4)
    assert fixture("random:5:3") == random_generic_curve(5, 3)
    with pytest.raises(KeyError):
        fixture("nope")
