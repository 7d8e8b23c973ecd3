"""Exact planar primitives and the closed polyline curve type.

All coordinates are :class:`fractions.Fraction`.  Heavy loops run on an
integer lattice (coordinates scaled by the common denominator), so every
predicate below is decided exactly.
"""
from __future__ import annotations

import json
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

import numpy as np

Scalar = Fraction

OVERLAP = "overlapping-segments"
VERTEX_HIT = "vertex-hit"
TRIPLE = "triple-point"
TANGENT = "tangential-contact"
DUPLICATE = "duplicate-crossing-location"


def to_scalar(value) -> Fraction:
    """Convert ints, floats (exactly), decimal strings or ``[num, den]`` pairs."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not coordinates")
    if isinstance(value, (int, float, str)):
        return Fraction(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        num, den = value
        if not isinstance(num, int) or not isinstance(den, int):
            raise TypeError(f"rational pair must hold integers, got {value!r}")
        return Fraction(num, den)
    raise TypeError(f"cannot interpret {value!r} as a scalar")


class Point(NamedTuple):
    x: Fraction
    y: Fraction

    @classmethod
    def of(cls, x, y) -> "Point":
        return cls(to_scalar(x), to_scalar(y))

    def __sub__(self, other):  # type: ignore[override]
        return Point(self.x - other.x, self.y - other.y)

    def __add__(self, other):  # type: ignore[override]
        return Point(self.x + other.x, self.y + other.y)

    def scale(self, s) -> "Point":
        return Point(self.x * s, self.y * s)


def cross(ax, ay, bx, by):
    return ax * by - ay * bx


def orient(a, b, c):
    """Twice the signed area of triangle ``abc`` (works on any number type)."""
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


class DegenerateIntersection(ValueError):
    """Two segments overlap along a positive-length piece."""


class GenericityViolation(ValueError):
    def __init__(self, report: "GenericityReport"):
        self.report = report
        kinds = sorted({v.kind for v in report.violations})
        super().__init__(f"curve is not generic: {', '.join(kinds)}")


NotGeneric = GenericityViolation


class OnCurve(ValueError):
    """A query point lies on the curve."""


@dataclass(frozen=True)
class PolyCurve:
    vertices: tuple
    name: str | None = None

    def __post_init__(self):
        verts = tuple(Point(to_scalar(p[0]), to_scalar(p[1])) for p in self.vertices)
        object.__setattr__(self, "vertices", verts)
        if len(verts) < 3:
            raise ValueError("a closed polyline needs at least 3 vertices")
        for i, p in enumerate(verts):
            if p == verts[(i + 1) % len(verts)]:
                raise ValueError(f"zero-length segment at vertex {i}")

    def __len__(self) -> int:
        return len(self.vertices)

    @classmethod
    def from_floats(cls, xy, name=None, grid_bits: int | None = None) -> "PolyCurve":
        """Build from float coordinates; optionally snap to a dyadic grid."""
        pts = []
        for x, y in np.asarray(xy, dtype=float):
            if grid_bits is None:
                pts.append(Point(Fraction(float(x)), Fraction(float(y))))
            else:
                scale = 1 << grid_bits
                pts.append(Point(Fraction(round(x * scale), scale),
                                 Fraction(round(y * scale), scale)))
        # snapping may merge neighbours
        dedup = [p for i, p in enumerate(pts) if p != pts[i - 1]] if len(pts) > 1 else pts
        return cls(tuple(dedup), name)

    def segment(self, i: int) -> tuple[Point, Point]:
        n = len(self.vertices)
        return self.vertices[i % n], self.vertices[(i + 1) % n]

    def point_at(self, t) -> Point:
        """Point at global parameter ``t`` = segment index + local fraction."""
        n = len(self.vertices)
        t = Fraction(t) % n
        i = int(math.floor(t))
        u = t - i
        a, b = self.segment(i)
        return Point(a.x + u * (b.x - a.x), a.y + u * (b.y - a.y))

    def reversed(self) -> "PolyCurve":
        return PolyCurve(tuple(reversed(self.vertices)), self.name)

    def rotated(self, shift: int) -> "PolyCurve":
        v = self.vertices
        shift %= len(v)
        return PolyCurve(v[shift:] + v[:shift], self.name)

    def translated(self, dx, dy) -> "PolyCurve":
        dx, dy = to_scalar(dx), to_scalar(dy)
        return PolyCurve(tuple(Point(p.x + dx, p.y + dy) for p in self.vertices), self.name)

    def as_floats(self) -> np.ndarray:
        return np.array([[float(p.x), float(p.y)] for p in self.vertices])

    def bbox(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        xs = [p.x for p in self.vertices]
        ys = [p.y for p in self.vertices]
        return min(xs), min(ys), max(xs), max(ys)

    @cached_property
    def lattice(self) -> "Lattice":
        return Lattice.of(self.vertices)


@dataclass(frozen=True)
class Lattice:
    """Integer image of a vertex list: ``coords[i] == vertices[i] * denom``."""

    denom: int
    xs: tuple
    ys: tuple

    @classmethod
    def of(cls, points: Sequence[Point]) -> "Lattice":
        d = 1
        for p in points:
            d = math.lcm(d, p.x.denominator, p.y.denominator)
        xs = tuple(p.x.numerator * (d // p.x.denominator) for p in points)
        ys = tuple(p.y.numerator * (d // p.y.denominator) for p in points)
        return cls(d, xs, ys)

    def scale_point(self, p: Point) -> tuple[Fraction, Fraction]:
        return p.x * self.denom, p.y * self.denom


class SegmentHit(NamedTuple):
    point: Point
    param_a: Fraction
    param_b: Fraction


def _classify(ax, ay, bx, by, cx, cy, dx, dy):
    """Exact relation of segments ab and cd.

    Returns ``None``, ``("cross", t, u)``, ``("touch", which)`` where
    ``which`` lists endpoints lying on the other segment, or ``("overlap",)``.
    """
    d1 = (dx - cx) * (ay - cy) - (dy - cy) * (ax - cx)
    d2 = (dx - cx) * (by - cy) - (dy - cy) * (bx - cx)
    d3 = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    d4 = (bx - ax) * (dy - ay) - (by - ay) * (dx - ax)
    if d1 and d2 and d3 and d4:
        if (d1 > 0) != (d2 > 0) and (d3 > 0) != (d4 > 0):
            rx, ry, sx, sy = bx - ax, by - ay, dx - cx, dy - cy
            den = rx * sy - ry * sx
            t = Fraction((cx - ax) * sy - (cy - ay) * sx, den)
            u = Fraction((cx - ax) * ry - (cy - ay) * rx, den)
            return ("cross", t, u)
        return None
    if d1 == 0 and d2 == 0:
        # collinear: compare projections on the dominant axis
        if abs(bx - ax) >= abs(by - ay):
            p0, p1, q0, q1 = sorted((ax, bx)) + sorted((cx, dx))
        else:
            p0, p1, q0, q1 = sorted((ay, by)) + sorted((cy, dy))
        lo, hi = max(p0, q0), min(p1, q1)
        if lo < hi:
            return ("overlap",)
        if lo == hi:
            return ("touch", "collinear")
        return None

    def within(px, py, qx, qy, rx, ry):
        return min(qx, rx) <= px <= max(qx, rx) and min(qy, ry) <= py <= max(qy, ry)

    which = []
    if d1 == 0 and within(ax, ay, cx, cy, dx, dy):
        which.append("a")
    if d2 == 0 and within(bx, by, cx, cy, dx, dy):
        which.append("b")
    if d3 == 0 and within(cx, cy, ax, ay, bx, by):
        which.append("c")
    if d4 == 0 and within(dx, dy, ax, ay, bx, by):
        which.append("d")
    return ("touch", tuple(which)) if which else None


def segment_intersection(a: tuple[Point, Point], b: tuple[Point, Point]) -> SegmentHit | None:
    """Transverse interior crossing of two segments, exactly.

    Raises :class:`DegenerateIntersection` when the segments overlap along a
    piece of positive length.  Touching at endpoints is not a crossing.
    """
    (p, q), (r, s) = a, b
    if p == q or r == s:
        raise ValueError("segment endpoints must be distinct")
    res = _classify(p.x, p.y, q.x, q.y, r.x, r.y, s.x, s.y)
    if res is None or res[0] == "touch":
        return None
    if res[0] == "overlap":
        raise DegenerateIntersection("collinear overlapping segments")
    _, t, u = res
    pt = Point(p.x + t * (q.x - p.x), p.y + t * (q.y - p.y))
    return SegmentHit(pt, t, u)


@dataclass(frozen=True)
class RawCrossing:
    point: Point
    seg_a: int
    seg_b: int
    u_a: Fraction
    u_b: Fraction

    @property
    def t1(self) -> Fraction:
        return self.seg_a + self.u_a

    @property
    def t2(self) -> Fraction:
        return self.seg_b + self.u_b

    @property
    def params(self) -> tuple[Fraction, Fraction]:
        return self.t1, self.t2


class Violation(NamedTuple):
    kind: str
    locations: tuple


@dataclass(frozen=True)
class GenericityReport:
    is_generic: bool
    violations: tuple = field(default_factory=tuple)

    def to_json(self) -> dict:
        return {
            "is_generic": self.is_generic,
            "violations": [
                {"kind": v.kind, "locations": [[_frac_json(c) for c in loc] for loc in v.locations]}
                for v in self.violations
            ],
        }


def _frac_json(x):
    x = Fraction(x)
    return [x.numerator, x.denominator]


def candidate_pairs(boxes: Sequence[tuple[int, int, int, int]]) -> set[tuple[int, int]]:
    """Index pairs whose integer bounding boxes share a uniform-grid cell."""
    if not boxes:
        return set()
    extents = sorted(max(b[2] - b[0], b[3] - b[1]) for b in boxes)
    cell = max(extents[len(extents) // 2], 1)
    grid: dict[tuple[int, int], list[int]] = defaultdict(list)
    for idx, (x0, y0, x1, y1) in enumerate(boxes):
        for gx in range(x0 // cell, x1 // cell + 1):
            for gy in range(y0 // cell, y1 // cell + 1):
                grid[gx, gy].append(idx)
    pairs: set[tuple[int, int]] = set()
    for members in grid.values():
        m = len(members)
        if m < 2:
            continue
        for i in range(m):
            a = members[i]
            ba = boxes[a]
            for j in range(i + 1, m):
                b = members[j]
                bb = boxes[b]
                if ba[0] > bb[2] or bb[0] > ba[2] or ba[1] > bb[3] or bb[1] > ba[3]:
                    continue
                pairs.add((a, b) if a < b else (b, a))
    return pairs


def _segment_boxes(xs, ys):
    n = len(xs)
    boxes = []
    for i in range(n):
        j = (i + 1) % n
        boxes.append((min(xs[i], xs[j]), min(ys[i], ys[j]), max(xs[i], xs[j]), max(ys[i], ys[j])))
    return boxes


def _scan(curve: PolyCurve):
    lat = curve.lattice
    xs, ys, den = lat.xs, lat.ys, lat.denom
    n = len(xs)
    crossings: list[RawCrossing] = []
    violations: list[Violation] = []
    verts = curve.vertices

    # backtracking at a vertex is a cusp, not an immersion
    for i in range(n):
        h, j = (i - 1) % n, (i + 1) % n
        ux, uy = xs[i] - xs[h], ys[i] - ys[h]
        vx, vy = xs[j] - xs[i], ys[j] - ys[i]
        if ux * vy - uy * vx == 0 and ux * vx + uy * vy < 0:
            violations.append(Violation(OVERLAP, (verts[i],)))

    for i, j in sorted(candidate_pairs(_segment_boxes(xs, ys))):
        if j == i + 1 or (i == 0 and j == n - 1):
            continue
        i2, j2 = (i + 1) % n, (j + 1) % n
        res = _classify(xs[i], ys[i], xs[i2], ys[i2], xs[j], ys[j], xs[j2], ys[j2])
        if res is None:
            continue
        if res[0] == "cross":
            _, t, u = res
            px = Fraction(xs[i] * t.denominator + t.numerator * (xs[i2] - xs[i]), t.denominator * den)
            py = Fraction(ys[i] * t.denominator + t.numerator * (ys[i2] - ys[i]), t.denominator * den)
            crossings.append(RawCrossing(Point(px, py), i, j, t, u))
        elif res[0] == "overlap":
            violations.append(Violation(OVERLAP, (verts[i], verts[i2], verts[j], verts[j2])))
        else:
            violations.append(_touch_violation(curve, i, j, res[1]))

    by_point: dict[Point, list[RawCrossing]] = defaultdict(list)
    for c in crossings:
        by_point[c.point].append(c)
    for p, group in by_point.items():
        if len(group) > 1:
            branches = {c.seg_a for c in group} | {c.seg_b for c in group}
            kind = TRIPLE if len(branches) == 3 else DUPLICATE
            violations.append(Violation(kind, (p,)))
    crossings.sort(key=lambda c: (c.t1, c.t2))
    return crossings, violations


def _touch_violation(curve: PolyCurve, i: int, j: int, which) -> Violation:
    n = len(curve)
    verts = curve.vertices
    if which == "collinear":
        return Violation(VERTEX_HIT, (verts[i], verts[(i + 1) % n]))
    # a vertex resting on the interior of the other segment: crossing or tangency?
    endpoint = {"a": i, "b": (i + 1) % n, "c": j, "d": (j + 1) % n}
    for w in which:
        v = endpoint[w]
        other = j if w in "ab" else i
        p, q = curve.segment(other)
        vert = verts[v]
        if vert in (p, q):
            continue
        before, after = verts[v - 1], verts[(v + 1) % n]
        s1, s2 = orient(p, q, before), orient(p, q, after)
        if s1 * s2 > 0:
            return Violation(TANGENT, (vert,))
        return Violation(VERTEX_HIT, (vert,))
    return Violation(VERTEX_HIT, tuple(verts[endpoint[w]] for w in which))


def validate_generic(curve: PolyCurve) -> GenericityReport:
    _, violations = _scan(curve)
    # identical violations can be found from several segment pairs
    unique = tuple(dict.fromkeys(violations))
    return GenericityReport(not unique, unique)


def self_intersections(curve: PolyCurve) -> list[RawCrossing]:
    """All transverse self-crossings sorted by ``(t1, t2)``.

    Raises :class:`GenericityViolation` for vertex hits, multiple points or
    overlapping pieces.
    """
    crossings, violations = _scan(curve)
    if violations:
        raise GenericityViolation(GenericityReport(False, tuple(dict.fromkeys(violations))))
    return crossings


def count_crossings_between(a: PolyCurve, b: PolyCurve) -> int:
    """Transverse crossings between two distinct closed polylines."""
    la = Lattice.of(a.vertices + b.vertices)
    na = len(a)
    xs, ys = la.xs, la.ys
    boxes_a = _segment_boxes(xs[:na], ys[:na])
    boxes_b = _segment_boxes(xs[na:], ys[na:])
    nb = len(b)
    count = 0
    for i, j in candidate_pairs(boxes_a + boxes_b):
        if (i < na) == (j < na):
            continue
        i, j = (i, j - na) if i < na else (j, i - na)
        i2, j2 = (i + 1) % na, (j + 1) % nb
        res = _classify(xs[i], ys[i], xs[i2], ys[i2],
                        xs[na + j], ys[na + j], xs[na + j2], ys[na + j2])
        if res is None:
            continue
        if res[0] != "cross":
            raise GenericityViolation(GenericityReport(False, (Violation(VERTEX_HIT, ()),)))
        count += 1
    return count


def jitter(curve: PolyCurve, seed: int, magnitude) -> PolyCurve:
    """Deterministic vertex displacement of Euclidean size below ``magnitude``."""
    magnitude = to_scalar(magnitude)
    if magnitude < 0:
        raise ValueError("magnitude must be non-negative")
    if magnitude == 0:
        return curve
    rng = np.random.default_rng(seed)
    steps = rng.integers(-(1 << 20), (1 << 20) + 1, size=(len(curve), 2))
    # each coordinate moves at most magnitude/2, so the displacement is < magnitude
    unit = magnitude / (1 << 21)
    pts = [Point(p.x + int(dx) * unit, p.y + int(dy) * unit)
           for p, (dx, dy) in zip(curve.vertices, steps)]
    return PolyCurve(tuple(pts), curve.name)


def curve_to_json(curve: PolyCurve, origin: Point | None = None) -> dict:
    out: dict = {}
    if curve.name:
        out["name"] = curve.name
    out["vertices"] = [[_frac_json(p.x), _frac_json(p.y)] for p in curve.vertices]
    if origin is not None:
        out["origin"] = [_frac_json(origin.x), _frac_json(origin.y)]
    return out


def curve_from_json(obj: dict) -> tuple[PolyCurve, Point | None]:
    if not isinstance(obj, dict) or "vertices" not in obj:
        raise ValueError("curve JSON needs a 'vertices' list")
    verts = [Point.of(*v) for v in obj["vertices"]]
    origin = Point.of(*obj["origin"]) if obj.get("origin") is not None else None
    return PolyCurve(tuple(verts), obj.get("name")), origin


def load_curve(path) -> tuple[PolyCurve, Point | None]:
    with open(path) as fh:
        return curve_from_json(json.load(fh))


def dump_curve(curve: PolyCurve, path, origin: Point | None = None) -> None:
    with open(path, "w") as fh:
        json.dump(curve_to_json(curve, origin), fh)
        fh.write("\n")


def winding_number(points: Sequence[Point], p: Point) -> int:
    """Signed crossing count of a closed vertex loop around ``p`` (exact).

    Raises :class:`OnCurve` if ``p`` lies on the loop.
    """
    w = 0
    n = len(points)
    px, py = p
    for i in range(n):
        a, b = points[i], points[(i + 1) % n]
        o = (b.x - a.x) * (py - a.y) - (px - a.x) * (b.y - a.y)
        if o == 0 and min(a.x, b.x) <= px <= max(a.x, b.x) and min(a.y, b.y) <= py <= max(a.y, b.y):
            raise OnCurve(f"point {p} lies on the curve")
        if a.y <= py:
            if b.y > py and o > 0:
                w += 1
        elif b.y <= py and o < 0:
            w -= 1
    return w


def iter_segments(curve: PolyCurve) -> Iterable[tuple[Point, Point]]:
    n = len(curve)
    for i in range(n):
        yield curve.segment(i)
