"""Deterministic generators for named test curves.

Curves are built in floating point and snapped to a dyadic grid, so every
fixture is an exact rational polyline.  Each generator validates its output.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geom import Point, PolyCurve, jitter, validate_generic

GRID_BITS = 20
MAX_STANDARD_J = 8


class GenerationFailed(RuntimeError):
    pass


class FixtureGuard(ValueError):
    pass


@dataclass(frozen=True)
class FixtureId:
    kind: str  # standard_j | figure_eight | circle | appendix | rose | random
    params: dict = field(default_factory=dict)
    resolution: int = 16

    def build(self) -> PolyCurve:
        p = self.params
        if self.kind == "standard_j":
            return standard_curve(p["j"], self.resolution)
        if self.kind == "figure_eight":
            return standard_curve(0, self.resolution)
        if self.kind == "circle":
            return standard_curve(1, self.resolution)
        if self.kind == "appendix":
            return appendix_curve(self.resolution)
        if self.kind == "rose":
            return rose_curve(p.get("petals", 3), self.resolution)
        if self.kind == "random":
            return random_generic_curve(p.get("seed", 0), p.get("complexity", 4), self.resolution)
        raise KeyError(self.kind)


def _check_resolution(resolution: int) -> None:
    if resolution < 16:
        raise FixtureGuard("resolution must be at least 16")


def _ring(count: int) -> np.ndarray:
    s = (np.arange(count) + 0.5) * 2 * np.pi / count
    return np.exp(1j * s)


def _curl(p0: complex, p1: complex, radius: float, samples: int) -> np.ndarray:
    """Points strictly between p0 and p1 of a one-turn loop to the left of p0->p1."""
    chord = p1 - p0
    length = abs(chord)
    t = chord / length
    n = 1j * t
    u = np.arange(1, samples) / samples
    return p0 + t * (length * u + radius * np.sin(2 * np.pi * u)) + n * radius * (1 - np.cos(2 * np.pi * u))


def _insert_curls(points: np.ndarray, sites: list[tuple[int, float, int]]) -> np.ndarray:
    """Replace the chord from vertex ``i`` to ``i + 2`` by a loop, for each site."""
    out = []
    skip = set()
    by_start = {i: (r, m) for i, r, m in sites}
    for i in range(len(points)):
        if i in skip:
            continue
        out.append(points[i])
        if i in by_start:
            r, m = by_start[i]
            j = (i + 2) % len(points)
            out.extend(_curl(points[i], points[j], r, m))
            skip.add((i + 1) % len(points))
    return np.array(out)


def _to_curve(z: np.ndarray, name: str) -> PolyCurve:
    curve = PolyCurve.from_floats(np.c_[z.real, z.imag], name=name, grid_bits=GRID_BITS)
    report = validate_generic(curve)
    if not report.is_generic:
        raise GenerationFailed(f"{name}: {report.violations[:3]}")
    return curve


def standard_curve(j: int, resolution: int = 16) -> PolyCurve:
    """K_0 is the figure eight; K_j a circle with |j| - 1 interior loops, rot = j."""
    _check_resolution(resolution)
    if abs(j) > MAX_STANDARD_J:
        raise FixtureGuard(f"|j| must be at most {MAX_STANDARD_J}")
    count = 4 * resolution
    if j == 0:
        s = (np.arange(count) + 0.5) * 2 * np.pi / count
        z = np.sin(s) + 0.5j * np.sin(2 * s)
        return _to_curve(z, "K0")
    loops = abs(j) - 1
    z = _ring(count)
    if loops:
        radius = min(0.22, 0.9 / loops)
        step = count // loops
        z = _insert_curls(z, [(i * step, radius, 2 * resolution) for i in range(loops)])
    if j < 0:
        z = z[::-1]
    return _to_curve(z, f"K{j}")


def appendix_curve(resolution: int = 16) -> PolyCurve:
    """Circle with one single interior loop and one doubly nested interior loop."""
    _check_resolution(resolution)
    count = 4 * resolution
    ring = _ring(count)
    big = _curl(ring[count // 2], ring[count // 2 + 2], 0.3, 3 * resolution)
    # nest a small loop on the far side of the big loop
    top = len(big) // 2 - 1
    small = _curl(big[top - 1], big[top + 1], 0.07, 2 * resolution)
    big = np.concatenate([big[:top], small, big[top + 1:]])
    single = _curl(ring[0], ring[2], 0.2, 2 * resolution)
    z = np.concatenate([ring[:1], single, ring[2:count // 2 + 1], big, ring[count // 2 + 2:]])
    return _to_curve(z, "appendix")


def rose_curve(petals: int = 3, resolution: int = 16) -> PolyCurve:
    """Hypotrochoid rose with ``petals`` outer lobes (trefoil shadow for 3)."""
    _check_resolution(resolution)
    if petals < 3:
        raise FixtureGuard("petals must be at least 3")
    count = 2 * petals * resolution
    s = (np.arange(count) + 0.5) * 2 * np.pi / count
    z = (np.exp(1j * s) + 2 * np.exp(-1j * (petals - 1) * s)) / 3
    return _to_curve(z, f"rose{petals}")


def random_generic_curve(seed: int, complexity: int = 4, resolution: int = 16) -> PolyCurve:
    """Random trigonometric closed curve; retried with jitter until generic."""
    _check_resolution(resolution)
    rng = np.random.default_rng(seed)
    modes = np.arange(-complexity, complexity + 1)
    coeff = (rng.normal(size=modes.size) + 1j * rng.normal(size=modes.size)) / (1 + np.abs(modes))
    coeff[modes == 1] += 0.6
    count = 4 * resolution * max(complexity, 1)
    s = (np.arange(count) + 0.5) * 2 * np.pi / count
    z = np.exp(1j * np.outer(s, modes)) @ coeff
    base = PolyCurve.from_floats(np.c_[z.real, z.imag], name=f"random{seed}", grid_bits=GRID_BITS)
    curve = base
    for attempt in range(6):
        if validate_generic(curve).is_generic:
            return curve
        curve = jitter(base, seed * 7919 + attempt, 2.0 ** -(GRID_BITS - 4))
    raise GenerationFailed(f"random curve seed={seed} stayed non-generic")


def _named() -> dict[str, FixtureId]:
    out = {"circle": FixtureId("circle"), "figure_eight": FixtureId("figure_eight"),
           "appendix": FixtureId("appendix"), "rose3": FixtureId("rose", {"petals": 3})}
    for j in range(-4, 5):
        out[f"K{j}"] = FixtureId("standard_j", {"j": j})
    for seed in range(1, 4):
        out[f"random{seed}"] = FixtureId("random", {"seed": seed, "complexity": 4})
    return out


NAMED = _named()


def fixture(name: str) -> PolyCurve:
    if name in NAMED:
        return NAMED[name].build()
    if name.startswith("random:"):
        _, seed, *rest = name.split(":")
        return random_generic_curve(int(seed), int(rest[0]) if rest else 4)
    if name.startswith("K") and name[1:].lstrip("-").isdigit():
        return standard_curve(int(name[1:]))
    raise KeyError(f"unknown fixture {name!r}")


def origin_in_face_with_winding(curve: PolyCurve, winding: int) -> Point:
    """Sample point of some face carrying the given winding number."""
    from .arrangement import build_arrangement

    arr = build_arrangement(curve)
    for f in arr.faces:
        if f.winding == winding:
            return f.sample_point
    raise ValueError(f"no face with winding {winding}")
