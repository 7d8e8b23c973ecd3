"""Square-root preimages of a curve under v -> v^2 and the J2 invariant.

The lift is numerical: the (origin-centred) curve is resampled, the argument
is tracked continuously and every sample z goes to sqrt|z| * exp(i*arg/2).
Lifted vertices are snapped to a dyadic grid and re-validated.  The even/odd
classification of double points is computed exactly on the base curve and
the lift's crossing counts are checked against it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arrangement import DoublePoint, build_arrangement
from .geom import (
    OnCurve,
    Point,
    PolyCurve,
    count_crossings_between,
    jitter,
    self_intersections,
    validate_generic,
    winding_number,
)
from .invariants import viro_jplus

ODD = "odd-winding"
EVEN = "even-winding"
JITTER_SEED = 20_240_601
JITTER_ATTEMPTS = 3
MAX_REFINE = 64
REFINE_RETRIES = 2


class LiftNotGeneric(RuntimeError):
    pass


class LiftInconsistent(RuntimeError):
    pass


class OddBaseWinding(ValueError):
    pass


@dataclass(frozen=True)
class LiftResult:
    parity_case: str
    lifts: tuple[PolyCurve, ...]
    omega0: int
    dp_parity: dict[int, str] | None
    nu: int | None
    lift_crossings: int  # double points of lifts[0]
    inter_lift_crossings: int | None


def _grid_bits(z: np.ndarray) -> int:
    steps = np.abs(np.diff(np.append(z, z[:1])))
    scale = max(float(steps.min()), 1e-300)
    return max(24, 30 - math.floor(math.log2(scale)))


def _snap(z: np.ndarray, name: str) -> PolyCurve:
    return PolyCurve.from_floats(np.c_[z.real, z.imag], name=name, grid_bits=_grid_bits(z))


def _make_generic(curve: PolyCurve) -> PolyCurve:
    if validate_generic(curve).is_generic:
        return curve
    z = np.array([complex(float(p.x), float(p.y)) for p in curve.vertices])
    feature = float(np.abs(np.diff(np.append(z, z[:1]))).min())
    for attempt in range(JITTER_ATTEMPTS):
        moved = jitter(curve, JITTER_SEED + attempt, feature * 2.0 ** -20)
        if validate_generic(moved).is_generic:
            return moved
    raise LiftNotGeneric(f"{curve.name}: lift stayed non-generic after {JITTER_ATTEMPTS} jitters")


def _resample(curve: PolyCurve, origin: Point, samples: int) -> np.ndarray:
    """At least ``samples`` points per segment, more where a segment is long
    compared with its distance to the origin (the square root bends it most there)."""
    z = np.array([complex(float(p.x - origin.x), float(p.y - origin.y)) for p in curve.vertices])
    e = np.roll(z, -1) - z
    u0 = np.clip(-(z * np.conj(e)).real / (np.abs(e) ** 2), 0.0, 1.0)
    dist = np.abs(z + u0 * e)
    counts = np.clip(np.ceil(samples * np.abs(e) / dist), samples, MAX_REFINE * samples).astype(int)
    out = []
    phase = 0
    for zi, ei, m in zip(z, e, counts):
        # staggered interior positions keep symmetric constructions (crossing
        # connectors, say) from putting two samples on the same point
        wobble = (((phase + np.arange(m)) * 0.6180339887498949) % 1.0 - 0.5) * 0.4
        wobble[0] = 0.0
        out.append(zi + ei * (np.arange(m) + wobble) / m)
        phase += m
    return np.concatenate(out)


def _lift_points(z: np.ndarray) -> tuple[np.ndarray, int]:
    turn = np.angle(np.roll(z, -1) / z)
    theta = np.angle(z[0]) % (2 * np.pi) + np.concatenate([[0.0], np.cumsum(turn[:-1])])
    total = float(turn.sum()) / (2 * np.pi)
    return np.sqrt(np.abs(z)) * np.exp(0.5j * theta), round(total)


def squared_winding(lift: PolyCurve) -> int:
    """Winding about 0 of the exactly squared lift vertices."""
    sq = [Point(p.x * p.x - p.y * p.y, 2 * p.x * p.y) for p in lift.vertices]
    return winding_number(sq, Point(0, 0))


def base_winding(curve: PolyCurve, origin: Point) -> int:
    return winding_number(curve.vertices, origin)


def classify_double_point(curve: PolyCurve, origin: Point, dp: DoublePoint, *, omega0: int | None = None) -> str:
    """Parity of the winding about ``origin`` of the loop pinched off at ``dp``."""
    w0 = base_winding(curve, origin) if omega0 is None else omega0
    if w0 % 2:
        raise OddBaseWinding("double points are only classified when the winding about the origin is even")
    c = dp.crossing
    loop = [c.point] + [curve.vertices[v] for v in range(c.seg_a + 1, c.seg_b + 1)]
    return "even" if winding_number(loop, origin) % 2 == 0 else "odd"


def sqrt_lift(curve: PolyCurve, origin: Point, samples_per_segment: int = 16) -> LiftResult:
    """Lift with ``samples_per_segment``; on a failed count check the sampling is
    refined 4x (at most ``REFINE_RETRIES`` times) before giving up."""
    if samples_per_segment < 1:
        raise ValueError("samples_per_segment must be positive")
    w0 = base_winding(curve, origin)  # raises OnCurve
    n = len(self_intersections(curve))
    nu = None
    parity = None
    if w0 % 2 == 0:
        arr = build_arrangement(curve)
        parity = {d.id: classify_double_point(curve, origin, d, omega0=w0) for d in arr.double_points}
        nu = sum(1 for v in parity.values() if v == "even")
    samples = samples_per_segment
    for attempt in range(REFINE_RETRIES + 1):
        try:
            return _lift_once(curve, origin, samples, w0, n, parity, nu)
        except LiftInconsistent:
            if attempt == REFINE_RETRIES:
                raise
            samples *= 4
    raise AssertionError("unreachable")


def _lift_once(curve, origin, samples, w0, n, parity, nu) -> LiftResult:
    z = _resample(curve, origin, samples)
    w, measured = _lift_points(z)
    if measured != w0:
        raise LiftInconsistent(f"tracked argument gives winding {measured}, exact winding is {w0}")
    name = curve.name or "curve"
    if w0 % 2:
        full = _make_generic(_snap(np.concatenate([w, -w]), f"{name}^(1/2)"))
        count = len(self_intersections(full))
        if count != 2 * n:
            raise LiftInconsistent(f"preimage has {count} double points, expected {2 * n}")
        if squared_winding(full) != 2 * w0:
            raise LiftInconsistent("squared preimage does not wind twice around the origin")
        return LiftResult(ODD, (full,), w0, None, None, count, None)

    first = _make_generic(_snap(w, f"{name}^(1/2)#1"))
    second = _make_generic(_snap(-w, f"{name}^(1/2)#2"))
    count = len(self_intersections(first))
    other = len(self_intersections(second))
    between = count_crossings_between(first, second)
    if squared_winding(first) != w0:
        raise LiftInconsistent("squared lift does not reproduce the base winding")
    if count != nu or other != nu:
        raise LiftInconsistent(f"lifts have {count}/{other} double points, expected nu={nu}")
    if between != 2 * (n - nu):
        raise LiftInconsistent(f"lifts cross {between} times, expected {2 * (n - nu)}")
    return LiftResult(EVEN, (first, second), w0, parity, nu, count, between)


def j2(curve: PolyCurve, origin: Point, samples_per_segment: int = 16) -> int:
    res = sqrt_lift(curve, origin, samples_per_segment)
    return viro_jplus(build_arrangement(res.lifts[0]))


def even_count(curve: PolyCurve, origin: Point) -> int:
    """Number of even double points (exact, base curve only)."""
    w0 = base_winding(curve, origin)
    arr = build_arrangement(curve)
    return sum(1 for d in arr.double_points if classify_double_point(curve, origin, d, omega0=w0) == "even")


__all__ = [
    "EVEN", "ODD", "LiftInconsistent", "LiftNotGeneric", "LiftResult", "OddBaseWinding", "OnCurve",
    "classify_double_point", "even_count", "j2", "sqrt_lift",
]
