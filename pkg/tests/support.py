"""Shared cached builders for the test suite."""
from __future__ import annotations

from functools import lru_cache

from arnoldbif.arrangement import build_arrangement
from arnoldbif.fixtures import fixture, origin_in_face_with_winding
from arnoldbif.geom import Point, PolyCurve
from arnoldbif.invariants import invariant_report

ACCEPTANCE_LINES: list[str] = []

GRID_FIXTURES = ["K0", "K1", "K2", "K3", "K4", "appendix", "rose3"]
ALL_FIXTURES = GRID_FIXTURES + [f"K{j}" for j in range(-4, 0)] + ["random1", "random2", "random3"]


@lru_cache(maxsize=None)
def curve(name: str) -> PolyCurve:
    return fixture(name)


@lru_cache(maxsize=None)
def arrangement(name: str):
    return build_arrangement(curve(name))


@lru_cache(maxsize=None)
def origin(name: str, winding: int) -> Point:
    return origin_in_face_with_winding(curve(name), winding)


@lru_cache(maxsize=None)
def report(name: str, winding: int | None = None):
    o = None if winding is None else origin(name, winding)
    return invariant_report(curve(name), o)


def windings(name: str) -> list[int]:
    return sorted({f.winding for f in arrangement(name).faces})


def origin_cases(parity: str) -> list[tuple[str, int]]:
    """(fixture, face winding) pairs whose winding has the requested parity."""
    want = 0 if parity == "even" else 1
    return [(n, w) for n in GRID_FIXTURES for w in windings(n) if w % 2 == want]
