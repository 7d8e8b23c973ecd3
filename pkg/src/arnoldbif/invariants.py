"""Rotation number, J+, J-, the origin-dependent invariants and Arnold's bound."""
from __future__ import annotations

from dataclasses import asdict, dataclass
from fractions import Fraction

from .arrangement import Arrangement, build_arrangement, d_V, gamma_V
from .geom import Point, PolyCurve


def _half(x, y) -> int:
    # 0 for directions with angle in [0, pi), 1 for [pi, 2pi)
    return 0 if (y > 0 or (y == 0 and x > 0)) else 1


def _angle_less(u, v) -> bool:
    hu, hv = _half(*u), _half(*v)
    if hu != hv:
        return hu < hv
    return u[0] * v[1] - u[1] * v[0] > 0


def rotation_number(curve: PolyCurve) -> int:
    """Whitney index, counted exactly as signed passes of the tangent past angle 0.

    Every turn between consecutive edge directions is taken in (-pi, pi); a
    counter-clockwise turn whose end angle is below its start angle wrapped
    through 0, and symmetrically for clockwise turns.
    """
    verts = curve.vertices
    n = len(verts)
    dirs = [(verts[(i + 1) % n].x - verts[i].x, verts[(i + 1) % n].y - verts[i].y) for i in range(n)]
    total = 0
    for i in range(n):
        u, v = dirs[i], dirs[(i + 1) % n]
        c = u[0] * v[1] - u[1] * v[0]
        if c > 0 and _angle_less(v, u):
            total += 1
        elif c < 0 and _angle_less(u, v):
            total -= 1
        elif c == 0 and u[0] * v[0] + u[1] * v[1] < 0:
            raise ValueError(f"curve reverses direction at vertex {(i + 1) % n}")
    return total


def viro_jplus(arr: Arrangement) -> int:
    return 1 + arr.n - gamma_V(arr) + d_V(arr)


def jminus(arr: Arrangement) -> int:
    return 1 - gamma_V(arr) + d_V(arr)


def omega0(arr: Arrangement, origin: Point) -> int:
    return arr.winding_at_point(origin)


def j1(arr: Arrangement, origin: Point) -> Fraction:
    w = omega0(arr, origin)
    return viro_jplus(arr) + Fraction(w * w, 2)


@dataclass(frozen=True)
class OriginPart:
    omega0: int
    j1: Fraction
    j2: int | None


@dataclass(frozen=True)
class InvariantReport:
    n: int
    rot: int
    jplus: int
    jminus: int
    gamma_V: int
    d_V: int
    origin_part: OriginPart | None = None

    def to_json(self) -> dict:
        out = asdict(self)
        if self.origin_part is not None:
            op = out["origin_part"]
            op["j1"] = {"num": self.origin_part.j1.numerator, "den": self.origin_part.j1.denominator}
        return out


def arnold_bound_check(report: InvariantReport) -> bool:
    return report.jplus >= -report.n ** 2 - report.n


def invariant_report(curve: PolyCurve, origin: Point | None = None, *,
                     with_j2: bool = True, arrangement: Arrangement | None = None) -> InvariantReport:
    arr = arrangement or build_arrangement(curve)
    jp = viro_jplus(arr)
    part = None
    if origin is not None:
        w = omega0(arr, origin)
        j2_val = None
        if with_j2:
            from .lift import j2 as lift_j2

            j2_val = lift_j2(curve, origin)
        part = OriginPart(w, jp + Fraction(w * w, 2), j2_val)
    return InvariantReport(arr.n, rotation_number(curve), jp, jminus(arr), gamma_V(arr), d_V(arr), part)
