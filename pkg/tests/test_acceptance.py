"""Acceptance suite: one recorded PASS/FAIL line per criterion.

Run directly (``python3 tests/test_acceptance.py``) or through pytest; the
lines are also collected into the pytest terminal summary.
"""
from __future__ import annotations

import time
from fractions import Fraction

import numpy as np

from arnoldbif.arrangement import build_arrangement
from arnoldbif.bifurcation import BifurcationSpec, build_bifurcation, predict_minimal, random_spec, verify_bifurcation
from arnoldbif.cli import _oracle_cell
from arnoldbif.fixtures import appendix_curve, standard_curve
from arnoldbif.geom import PolyCurve
from arnoldbif.invariants import invariant_report
from arnoldbif.lift import sqrt_lift
from arnoldbif.oracle import brute_force_min_connection
from arnoldbif.perms import StrandPermutation, enumerate_one_cycle, min_inversion_stats
from support import ACCEPTANCE_LINES, ALL_FIXTURES, GRID_FIXTURES, curve, origin, origin_cases, report

KS = (2, 3, 4)
PRODUCED: list[PolyCurve] = []
_NEAT: dict = {}
_RANDOM: dict = {}


def record(num: int, ok: bool, desc: str) -> None:
    line = f"AC{num:02d} {'PASS' if ok else 'FAIL'}: {desc}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def keep(out):
    if out.curve is not None:
        PRODUCED.append(out.curve)
    return out


def neat(name, k):
    if (name, k) not in _NEAT:
        _NEAT[name, k] = keep(verify_bifurcation(curve(name), None, BifurcationSpec(k), report(name)))
    return _NEAT[name, k]


def randomized(name, k):
    if (name, k) not in _RANDOM:
        rng = np.random.default_rng(1000 + 10 * GRID_FIXTURES.index(name) + k)
        spec = random_spec(curve(name), k, rng, 1 + (k + GRID_FIXTURES.index(name)) % 3)
        _RANDOM[name, k] = keep(verify_bifurcation(curve(name), None, spec, report(name)))
    return _RANDOM[name, k]


def no_origin_report(name, w):
    return invariant_report(curve(name), origin(name, w), with_j2=False)


def test_ac01_appendix_example():
    t = time.perf_counter()
    r = invariant_report(appendix_curve())
    dt = time.perf_counter() - t
    ok = (r.n, r.gamma_V, r.d_V, r.jplus, r.jminus) == (3, 18, 6, -8, -11) and dt < 1
    record(1, ok, f"appendix curve n=3 gamma=18 D=6 J+=-8 J-=-11 ({dt:.2f}s)")


def test_ac02_standard_curves():
    t = time.perf_counter()
    bad = []
    for j in range(-4, 5):
        r = invariant_report(standard_curve(j))
        want = (0, -1) if j == 0 else (-2 * (abs(j) - 1), -3 * (abs(j) - 1))
        if (r.jplus, r.jminus, r.rot) != (*want, j):
            bad.append(j)
    dt = time.perf_counter() - t
    record(2, not bad and dt < 1, f"standard curves j=-4..4 J+, J-, rot exact ({dt:.2f}s, bad={bad})")


def test_ac04_minimal_equality():
    t = time.perf_counter()
    bad = []
    for name in GRID_FIXTURES:
        r = report(name)
        for k in KS:
            out = neat(name, k)
            kk = k * k
            if not out.passed or out.measured("jplus") != kk * r.jplus - (kk - k) \
                    or out.measured("n") != r.n * kk + (k - 1):
                bad.append((name, k))
    dt = time.perf_counter() - t
    record(4, not bad and dt < 30, f"neat minimal bifurcations, 7 fixtures x k=2,3,4 attain J+ and n ({dt:.1f}s, bad={bad})")


def test_ac05_extra_crossings():
    bad, count = [], 0
    for name in GRID_FIXTURES:
        r = report(name)
        for k in KS:
            out = randomized(name, k)
            count += 1
            kk = k * k
            minimal = kk * r.jplus - (kk - k)
            jp = out.measured("jplus") if out.curve is not None else None
            if not out.passed or jp != minimal + out.spec.extra_double_points or jp < minimal:
                bad.append((name, k, out.error))
    record(5, not bad and count >= 20, f"{count} randomized specs with extra crossings: J+ = minimal + dn >= bound (bad={bad})")


def test_ac06_positive_base_growth():
    base = build_bifurcation(curve("K1"), BifurcationSpec(2, crossings=((1, 2, Fraction(21, 2)), (1, 2, Fraction(41, 2)))))
    rb = invariant_report(base)
    PRODUCED.append(base)
    results = []
    for k in KS:
        out = keep(verify_bifurcation(base, None, BifurcationSpec(k), rb))
        results.append((k, out.passed, out.measured("jplus") if out.curve is not None else None))
    ok = rb.jplus == 2 and all(p and jp >= k * k + k for k, p, jp in results)
    record(6, ok, f"base with J+={rb.jplus}: k-bifurcations J+ = {[jp for _, _, jp in results]} >= k^2+k")


def test_ac07_jminus_constancy():
    bad = []
    for name in ("K0", "K2", "appendix"):
        r = report(name)
        for k in (3, 4):
            specs = [BifurcationSpec(k, connection=c) for c in enumerate_one_cycle(k)[:4]]
            specs.append(random_spec(curve(name), k, np.random.default_rng(k), 2))
            values = {keep(verify_bifurcation(curve(name), None, s, r)).measured("jminus") for s in specs}
            values.add(neat(name, k).measured("jminus"))
            values.add(randomized(name, k).measured("jminus"))
            if values != {k * k * r.jminus - (k * k - 1)}:
                bad.append((name, k, values))
    record(7, not bad, f"J- identical across connections and extras, equal to k^2 J- - (k^2-1) (bad={bad})")


def test_ac08_j1():
    bad = []
    rng = np.random.default_rng(8)
    cases = [("K1", 1), ("K2", 2), ("K2", 1), ("appendix", 3), ("rose3", -2), ("K0", -1)]
    for name, w in cases:
        r = no_origin_report(name, w)
        for k in KS:
            kk = k * k
            want = kk * r.origin_part.j1 - (kk - k)
            out = keep(verify_bifurcation(curve(name), origin(name, w), BifurcationSpec(k), r))
            if not out.passed or out.measured("j1") != want:
                bad.append((name, w, k, "minimal"))
            spec = random_spec(curve(name), k, rng, 2)
            out = keep(verify_bifurcation(curve(name), origin(name, w), spec, r))
            if not out.passed or out.measured("j1") != want + spec.extra_double_points:
                bad.append((name, w, k, "extras"))
    record(8, not bad, f"J1 exact rationals: minimal attains k^2 J1 - (k^2-k), extras add dn (bad={bad})")


def _even_origin(name):
    ws = [w for w in sorted({w for n, w in origin_cases("even") if n == name}, key=abs) if w != 0]
    return ws[0] if ws else 0


def _odd_origin(name):
    return min((w for n, w in origin_cases("odd") if n == name), key=abs)


def test_ac09_j2_cases():
    t = time.perf_counter()
    bad = []
    for name in ("K1", "K2", "appendix"):
        w = _even_origin(name)
        for k in (2, 3):
            out = keep(verify_bifurcation(curve(name), origin(name, w), BifurcationSpec(k), report(name, w)))
            if not out.passed:
                bad.append(("a", name, w, k))
    for name in ("K1", "K2", "appendix"):
        w = _odd_origin(name)
        r = report(name, w)
        out = keep(verify_bifurcation(curve(name), origin(name, w), BifurcationSpec(3), r))
        if not out.passed or out.measured("j2") != 2 * out.measured("j1") - 1:
            bad.append(("b", name, w))
        for k in (2, 4):
            h = k // 2
            out = keep(verify_bifurcation(curve(name), origin(name, w), BifurcationSpec(k), r))
            if not out.passed or out.measured("j2") != h * h * r.origin_part.j2 - (h * h - h):
                bad.append(("c", name, w, k))
        rng = np.random.default_rng(9)
        for extras in (1, 3):
            out = keep(verify_bifurcation(curve(name), origin(name, w), random_spec(curve(name), 2, rng, extras), r))
            if not out.passed or out.measured("j2") != r.origin_part.j2:
                bad.append(("c-invariance", name, w, extras))
    dt = time.perf_counter() - t
    record(9, not bad and dt < 60, f"J2 parity cases (a) even, (b) odd k=3 with 2J1-1, (c) odd k=2,4 and k=2 invariance ({dt:.1f}s, bad={bad})")


def test_ac10_even_count():
    bad = []
    for name in ("K1", "K2", "appendix", "rose3"):
        w = _odd_origin(name)
        r = no_origin_report(name, w)
        for k in (2, 4):
            out = keep(verify_bifurcation(curve(name), origin(name, w), BifurcationSpec(k), r))
            if not out.passed or out.measured("nu") != r.n * k * k // 2 + (k // 2 - 1):
                bad.append((name, w, k))
    for name, w in origin_cases("even"):
        res = sqrt_lift(curve(name), origin(name, w))
        PRODUCED.extend(res.lifts)
        n = report(name).n
        if res.lift_crossings != res.nu or 2 * (n - res.nu) != res.inter_lift_crossings:
            bad.append((name, w, "lift"))
    record(10, not bad, f"nu = n k^2/2 + (k/2-1) for odd winding, even k; lift counts on even windings (bad={bad})")


def test_ac11_viro_partition():
    bad = []
    for name in GRID_FIXTURES:
        for k in KS:
            out = neat(name, k)
            for c in ("viro_partition", "gamma_growth", "dv_growth"):
                if not next(x for x in out.checks if x.name == c).passed:
                    bad.append((name, k, c))
    record(11, not bad, f"-gamma+D scales by k^2 with strict growth of both sums (bad={bad})")


def test_ac12_faces():
    bad = []
    for name in GRID_FIXTURES:
        n = report(name).n
        for k in KS:
            out = neat(name, k)
            faces = len(build_arrangement(out.curve).faces)
            want = (n + 2) + n * (k - 1) ** 2 + (2 * n + 1) * (k - 1)
            if faces != want or faces != out.measured("n") + 2:
                bad.append((name, k, faces, want))
    record(12, not bad, f"face counts (n+2) + n(k-1)^2 + (2n+1)(k-1) = n'+2 (bad={bad})")


def test_ac13_permutations():
    t = time.perf_counter()
    bad = []
    for k in range(2, 11):
        stats = min_inversion_stats(k)
        if stats != {"min_value": k - 1, "count_minimizers": 2 ** (k - 2)}:
            bad.append(k)
        if k <= 8 and brute_force_min_connection(k) != stats:
            bad.append(("oracle", k))
    dt = time.perf_counter() - t
    record(13, not bad and dt < 5, f"one-cycle minimum k-1 with 2^(k-2) minimizers, k=2..10, oracle agrees ({dt:.2f}s, bad={bad})")


def test_ac14_oracle_agreement():
    bad = []
    for name in ALL_FIXTURES:
        cell = _oracle_cell(name)
        if not (cell["points"] >= 200 and cell["winding_agree"] == cell["points"]
                and cell["index_agree"] == cell["double_points"]):
            bad.append(cell)
    record(14, not bad, f"winding and index oracles agree on {len(ALL_FIXTURES)} fixtures, 200 points each (bad={bad})")


def test_ac03_jplus_minus_jminus():
    bad = []
    for name in ALL_FIXTURES:
        r = report(name)
        if r.jplus - r.jminus != r.n:
            bad.append(name)
    for name in GRID_FIXTURES:
        for k in KS:
            for out in (neat(name, k), randomized(name, k)):
                if not next(c for c in out.checks if c.name == "jplus_minus_jminus").passed:
                    bad.append((name, k))
    record(3, not bad, f"J+ - J- = n on {len(ALL_FIXTURES)} fixtures and {2 * len(GRID_FIXTURES) * len(KS)} bifurcations (bad={bad})")


def test_ac15_arnold_bound_everywhere():
    curves = [curve(n) for n in ALL_FIXTURES] + list(PRODUCED)
    for name, w in origin_cases("odd"):
        curves.extend(sqrt_lift(curve(name), origin(name, w)).lifts)
    bad = 0
    for c in curves:
        r = invariant_report(c)
        bad += r.jplus < -r.n * r.n - r.n
    record(15, bad == 0 and len(curves) > 100, f"Arnold bound J+ >= -n^2-n on {len(curves)} produced curves incl. lifts (violations={bad})")


if __name__ == "__main__":
    import sys

    import pytest

    sys.exit(pytest.main([__file__, "-q", "-s"]))
