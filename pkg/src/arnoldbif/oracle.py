"""Slow, independent cross-checks for the combinatorial code paths."""
from __future__ import annotations

import math
from fractions import Fraction
from itertools import permutations

import mpmath

from .arrangement import Arrangement, DoublePoint
from .geom import OnCurve, Point, PolyCurve


def _edge_terms(curve: PolyCurve, p: Point):
    verts = curve.vertices
    n = len(verts)
    for i in range(n):
        a, b = verts[i], verts[(i + 1) % n]
        ax, ay = a.x - p.x, a.y - p.y
        bx, by = b.x - p.x, b.y - p.y
        c = ax * by - ay * bx
        d = ax * bx + ay * by
        if c == 0 and d <= 0:
            raise OnCurve(f"{p} lies on segment {i}")
        yield c, d


def winding_by_angle_sum(curve: PolyCurve, p: Point) -> int:
    """Sum of the signed angles each edge subtends at ``p``, in full turns.

    A double-precision sum is accepted only when it sits within 1/4 of an
    integer; otherwise the sum is redone at 60 digits.
    """
    terms = list(_edge_terms(curve, p))
    turns = math.fsum(math.atan2(float(c), float(d)) for c, d in terms) / (2 * math.pi)
    w = round(turns)
    if abs(turns - w) < 0.25:
        return w
    with mpmath.workdps(60):
        total = mpmath.fsum(mpmath.atan2(mpmath.mpf(c.numerator) / c.denominator,
                                         mpmath.mpf(d.numerator) / d.denominator) for c, d in terms)
        return int(mpmath.nint(total / (2 * mpmath.pi)))


def index_by_mean(arr: Arrangement, dp: DoublePoint) -> Fraction:
    ws = [arr.faces[f].winding for f in dp.adjacent_faces]
    return Fraction(sum(ws), 4)


def brute_force_min_connection(k: int) -> dict:
    if not 2 <= k <= 8:
        raise ValueError("brute force oracle supports 2 <= k <= 8")
    best, count = None, 0
    for img in permutations(range(1, k + 1)):
        x, length = img[0], 1
        while x != 1:
            x = img[x - 1]
            length += 1
        if length != k:
            continue
        inv = sum(1 for i in range(k) for j in range(i + 1, k) if img[i] > img[j])
        if best is None or inv < best:
            best, count = inv, 1
        elif inv == best:
            count += 1
    return {"min_value": best, "count_minimizers": count}
