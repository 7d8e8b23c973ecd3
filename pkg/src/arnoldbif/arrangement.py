"""Planar subdivision induced by a generic closed polyline.

Double points are the graph vertices, arcs of the curve between consecutive
double-point visits are the edges.  Faces are traced as left-hand cycles of
half-edges; half-edge ``2*e`` runs along arc ``e`` in curve direction and
``2*e + 1`` runs against it.
"""
from __future__ import annotations

from bisect import bisect_right
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import count

from .geom import (
    GenericityViolation,
    OnCurve,
    Point,
    PolyCurve,
    RawCrossing,
    self_intersections,
)


@dataclass(frozen=True)
class DoublePoint:
    id: int
    location: Point
    params: tuple[Fraction, Fraction]
    index: int
    adjacent_faces: tuple[int, int, int, int]
    crossing: RawCrossing


@dataclass(frozen=True)
class Arc:
    id: int
    start_dp: int | None
    end_dp: int | None
    t_start: Fraction | None
    t_end: Fraction | None
    points: tuple


@dataclass
class Face:
    id: int
    winding: int
    is_unbounded: bool
    boundary: tuple  # (arc id, runs along the curve) pairs in cyclic order
    _arrangement: "Arrangement"

    @cached_property
    def sample_point(self) -> Point:
        return self._arrangement._sample_point(self)

    def __repr__(self):
        return f"Face(id={self.id}, winding={self.winding}, unbounded={self.is_unbounded})"


class Arrangement:
    def __init__(self, curve: PolyCurve, crossings: list[RawCrossing]):
        self.curve = curve
        self.crossings = crossings
        n = len(crossings)
        nv = len(curve)

        events = []  # (param, crossing id)
        for cid, c in enumerate(crossings):
            events.append((c.t1, cid))
            events.append((c.t2, cid))
        events.sort()
        self._event_params = [t for t, _ in events]
        event_of = {}
        for e, (t, cid) in enumerate(events):
            event_of[t] = e
        m = len(events)

        arcs = []
        if n == 0:
            arcs.append(Arc(0, None, None, None, None, curve.vertices))
        else:
            for e in range(m):
                t0, c0 = events[e]
                t1, c1 = events[(e + 1) % m]
                v_first = int(t0) + 1
                v_last = int(t1) if e + 1 < m else int(t1) + nv
                pts = [crossings[c0].point]
                pts.extend(curve.vertices[v % nv] for v in range(v_first, v_last + 1))
                pts.append(crossings[c1].point)
                arcs.append(Arc(e, c0, c1, t0, t1, tuple(pts)))
        self.arcs = arcs

        # half-edge successor: next = outgoing ray just clockwise of the twin
        if n == 0:
            face_of_he = [0, 1]
            cycles = [[0], [1]]
        else:
            nxt = [0] * (2 * m)
            rays_at = []
            for cid, c in enumerate(crossings):
                e1, e2 = event_of[c.t1], event_of[c.t2]
                pa, qa = curve.segment(c.seg_a)
                pb, qb = curve.segment(c.seg_b)
                dax, day = qa.x - pa.x, qa.y - pa.y
                dbx, dby = qb.x - pb.x, qb.y - pb.y
                plus_a, minus_a = 2 * e1, 2 * ((e1 - 1) % m) + 1
                plus_b, minus_b = 2 * e2, 2 * ((e2 - 1) % m) + 1
                if dax * dby - day * dbx > 0:
                    ccw = [plus_a, plus_b, minus_a, minus_b]
                else:
                    ccw = [plus_a, minus_b, minus_a, plus_b]
                rays_at.append(ccw)
                for r in range(4):
                    incoming = ccw[r] ^ 1
                    nxt[incoming] = ccw[(r - 1) % 4]
            self._rays_at = rays_at
            face_of_he = [-1] * (2 * m)
            cycles = []
            for h in range(2 * m):
                if face_of_he[h] >= 0:
                    continue
                cyc = []
                g = h
                while face_of_he[g] < 0:
                    face_of_he[g] = len(cycles)
                    cyc.append(g)
                    g = nxt[g]
                cycles.append(cyc)
        self._face_of_he = face_of_he

        nf = len(cycles)
        left = [face_of_he[2 * e] for e in range(len(arcs))]
        right = [face_of_he[2 * e + 1] for e in range(len(arcs))]
        self.left_face, self.right_face = left, right

        unbounded = self._find_unbounded()
        winding = [None] * nf
        winding[unbounded] = 0
        adj: list[list[tuple[int, int]]] = [[] for _ in range(nf)]
        for e in range(len(arcs)):
            adj[right[e]].append((left[e], 1))
            adj[left[e]].append((right[e], -1))
        queue = deque([unbounded])
        while queue:
            f = queue.popleft()
            for g, step in adj[f]:
                if winding[g] is None:
                    winding[g] = winding[f] + step
                    queue.append(g)
                elif winding[g] != winding[f] + step:
                    raise AssertionError("inconsistent winding labels")

        self.faces = [
            Face(i, winding[i], i == unbounded,
                 tuple((h // 2, h % 2 == 0) for h in cycles[i]), self)
            for i in range(nf)
        ]

        dps = []
        for cid, c in enumerate(crossings):
            corner = tuple(face_of_he[h] for h in self._rays_at[cid])
            ws = sorted(winding[f] for f in corner)
            a = ws[0]
            if ws != [a, a + 1, a + 1, a + 2]:
                raise AssertionError(f"double point {cid} has windings {ws}")
            dps.append(DoublePoint(cid, c.point, (c.t1, c.t2), a + 1, corner, c))
        self.double_points = dps

    @property
    def n(self) -> int:
        return len(self.double_points)

    def _arc_at(self, t: Fraction) -> int:
        if not self._event_params:
            return 0
        return (bisect_right(self._event_params, t) - 1) % len(self._event_params)

    def _find_unbounded(self) -> int:
        verts = self.curve.vertices
        nv = len(verts)
        i = min(range(nv), key=lambda j: (verts[j].x, verts[j].y))
        prev, cur, nxt = verts[i - 1], verts[i], verts[(i + 1) % nv]
        turn = (cur.x - prev.x) * (nxt.y - cur.y) - (cur.y - prev.y) * (nxt.x - cur.x)
        e = self._arc_at(Fraction(i))
        # at an extreme vertex the outside is on the right of a left turn
        return self.right_face[e] if turn > 0 else self.left_face[e]

    def face_windings(self) -> list[int]:
        return [f.winding for f in self.faces]

    def indices(self) -> list[int]:
        return [d.index for d in self.double_points]

    def face_of_point(self, p: Point) -> Face:
        """Locate ``p`` by shooting an exact ray to the nearest curve segment."""
        curve = self.curve
        verts = curve.vertices
        nv = len(verts)
        for i in range(nv):
            a, b = verts[i], verts[(i + 1) % nv]
            o = (b.x - a.x) * (p.y - a.y) - (p.x - a.x) * (b.y - a.y)
            if o == 0 and min(a.x, b.x) <= p.x <= max(a.x, b.x) and min(a.y, b.y) <= p.y <= max(a.y, b.y):
                raise OnCurve(f"{p} lies on the curve")
        blockers = list(verts) + [d.location for d in self.double_points]
        for k in count():
            d = _ray_direction(k)
            if not any(_on_ray(p, d, q) for q in blockers):
                break
        best = None
        for i in range(nv):
            a, b = verts[i], verts[(i + 1) % nv]
            ex, ey = b.x - a.x, b.y - a.y
            den = d[0] * ey - d[1] * ex
            if den == 0:
                continue
            wx, wy = a.x - p.x, a.y - p.y
            s = (wx * ey - wy * ex) / den
            u = (wx * d[1] - wy * d[0]) / den
            if s > 0 and 0 < u < 1 and (best is None or s < best[0]):
                best = (s, i, u, d[0] * ey - d[1] * ex)
        if best is None:
            return self.faces[self._unbounded_id]
        _, i, u, turn = best
        e = self._arc_at(i + u)
        return self.faces[self.left_face[e] if turn > 0 else self.right_face[e]]

    @cached_property
    def _unbounded_id(self) -> int:
        return next(f.id for f in self.faces if f.is_unbounded)

    def winding_at_point(self, p: Point) -> int:
        return self.face_of_point(p).winding

    def _sample_point(self, face: Face) -> Point:
        best = None
        for arc_id, forward in face.boundary:
            pts = self.arcs[arc_id].points
            closed = self.arcs[arc_id].start_dp is None
            segs = list(zip(pts, pts[1:] + (pts[:1] if closed else ())))
            for a, b in segs:
                if not forward:
                    a, b = b, a
                length = float((b.x - a.x) ** 2 + (b.y - a.y) ** 2)
                if best is None or length > best[0]:
                    best = (length, a, b)
        _, a, b = best
        mid = Point((a.x + b.x) / 2, (a.y + b.y) / 2)
        nrm = (a.y - b.y, b.x - a.x)  # left normal
        verts = self.curve.vertices
        nv = len(verts)
        s_min = None
        for i in range(nv):
            p, q = verts[i], verts[(i + 1) % nv]
            ex, ey = q.x - p.x, q.y - p.y
            den = nrm[0] * ey - nrm[1] * ex
            if den == 0:
                continue
            wx, wy = p.x - mid.x, p.y - mid.y
            s = (wx * ey - wy * ex) / den
            u = (wx * nrm[1] - wy * nrm[0]) / den
            if s > 0 and 0 <= u <= 1 and (s_min is None or s < s_min):
                s_min = s
        s = s_min / 2 if s_min is not None else Fraction(1)
        pt = Point(mid.x + s * nrm[0], mid.y + s * nrm[1])
        if self.face_of_point(pt).id != face.id:
            raise AssertionError(f"sample point for face {face.id} landed elsewhere")
        return pt


def _ray_direction(k: int) -> tuple[Fraction, Fraction]:
    base = [(1, 0), (0, 1), (-1, 0), (0, -1)]
    if k < 4:
        return Fraction(base[k][0]), Fraction(base[k][1])
    return Fraction(1), Fraction(k * 7 + 1, 1009)


def _on_ray(p: Point, d, q: Point) -> bool:
    wx, wy = q.x - p.x, q.y - p.y
    return d[0] * wy - d[1] * wx == 0 and d[0] * wx + d[1] * wy > 0


def build_arrangement(curve: PolyCurve) -> Arrangement:
    """Raises :class:`GenericityViolation` (alias ``NotGeneric``) on bad input."""
    return Arrangement(curve, self_intersections(curve))


def gamma_V(arr: Arrangement) -> int:
    return sum(f.winding ** 2 for f in arr.faces)


def d_V(arr: Arrangement) -> int:
    return sum(d.index ** 2 for d in arr.double_points)


def winding_at_point(arr: Arrangement, p: Point) -> int:
    return arr.winding_at_point(p)


__all__ = [
    "Arc", "Arrangement", "DoublePoint", "Face", "GenericityViolation",
    "build_arrangement", "d_V", "gamma_V", "winding_at_point",
]
