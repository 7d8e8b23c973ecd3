"""k-bifurcations: construction, closed-form predictions and verification.

A k-bifurcation runs k parallel offset copies (strands) of the curve.  Near
every double point the strands form a k x k grid of crossings.  Inside a
splice window on one segment, straight connectors join the end of strand i
to the start of strand pi(i), so a one-cycle pi gives a single closed curve
and the connectors cross inversion_number(pi) times.  An extra crossing
(i, j, t) is a trapezoidal bump of strand i over strands i+1..j and back,
adding 2(j - i) double points.

Strand 1 is the outermost copy on the left of the curve, strand k the
outermost on the right.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .arrangement import Arrangement, build_arrangement, d_V, gamma_V
from .geom import Point, PolyCurve, self_intersections, to_scalar, winding_number
from .invariants import InvariantReport, invariant_report, jminus, rotation_number, viro_jplus
from .lift import classify_double_point, j2 as lift_j2
from .perms import StrandPermutation, inversion_number, is_one_cycle

MAX_HALVINGS = 8
BUMP_HALF_WIDTH = Fraction(3, 20)
WINDOW_HALF_WIDTH = Fraction(1, 5)


class EpsilonTooLarge(RuntimeError):
    pass


class SpliceCollision(ValueError):
    pass


@dataclass(frozen=True)
class ExtraCrossing:
    i: int
    j: int
    t: Fraction

    def __post_init__(self):
        object.__setattr__(self, "t", to_scalar(self.t))
        if not 1 <= self.i < self.j:
            raise ValueError(f"extra crossing needs 1 <= i < j, got ({self.i}, {self.j})")


@dataclass(frozen=True)
class BifurcationSpec:
    k: int
    epsilon: Fraction | None = None
    connection: StrandPermutation | None = None
    splice_t: Fraction | None = None
    crossings: tuple[ExtraCrossing, ...] = ()

    def __post_init__(self):
        if self.k < 2:
            raise ValueError("k must be at least 2")
        conn = self.connection or StrandPermutation.neat(self.k)
        if not isinstance(conn, StrandPermutation):
            conn = StrandPermutation(tuple(conn))
        if conn.k != self.k or not is_one_cycle(conn):
            raise ValueError(f"connection {conn.image} is not a one-cycle permutation of 1..{self.k}")
        object.__setattr__(self, "connection", conn)
        object.__setattr__(self, "crossings", tuple(
            c if isinstance(c, ExtraCrossing) else ExtraCrossing(*c) for c in self.crossings))
        for c in self.crossings:
            if c.j > self.k:
                raise ValueError(f"extra crossing {c} refers to a strand above k={self.k}")
        if self.epsilon is not None:
            object.__setattr__(self, "epsilon", to_scalar(self.epsilon))
            if self.epsilon <= 0:
                raise ValueError("epsilon must be positive")
        if self.splice_t is not None:
            object.__setattr__(self, "splice_t", to_scalar(self.splice_t))

    @property
    def extra_double_points(self) -> int:
        """Double points above the minimal count n k^2 + (k - 1)."""
        return 2 * sum(c.j - c.i for c in self.crossings) + inversion_number(self.connection) - (self.k - 1)

    @classmethod
    def from_json(cls, obj: dict) -> "BifurcationSpec":
        return cls(
            k=int(obj["k"]),
            epsilon=to_scalar(obj["epsilon"]) if obj.get("epsilon") is not None else None,
            connection=StrandPermutation(tuple(obj["connection"])) if obj.get("connection") else None,
            splice_t=to_scalar(obj["splice_t"]) if obj.get("splice_t") is not None else None,
            crossings=tuple(ExtraCrossing(int(i), int(j), to_scalar(t)) for i, j, t in obj.get("crossings", [])),
        )

    def to_json(self) -> dict:
        frac = lambda x: None if x is None else [x.numerator, x.denominator]  # noqa: E731
        return {"k": self.k, "epsilon": frac(self.epsilon), "connection": list(self.connection.image),
                "splice_t": frac(self.splice_t),
                "crossings": [[c.i, c.j, frac(c.t)] for c in self.crossings]}


# ---------------------------------------------------------------- geometry


@dataclass
class _Base:
    curve: PolyCurve
    z: np.ndarray  # vertices as complex
    d: np.ndarray  # unit direction of segment i
    nrm: np.ndarray  # unit left normal of segment i
    crossings: list
    busy: np.ndarray  # segment carries a crossing

    @classmethod
    def of(cls, curve: PolyCurve) -> "_Base":
        z = np.array([complex(float(p.x), float(p.y)) for p in curve.vertices])
        e = np.roll(z, -1) - z
        d = e / np.abs(e)
        crossings = self_intersections(curve)
        busy = np.zeros(len(z), dtype=bool)
        for c in crossings:
            busy[c.seg_a] = busy[c.seg_b] = True
        return cls(curve, z, d, 1j * d, crossings, busy)

    def at(self, t: float) -> tuple[complex, int]:
        s = int(math.floor(t)) % len(self.z)
        return self.z[s] + (self.z[(s + 1) % len(self.z)] - self.z[s]) * (t - math.floor(t)), s

    def free(self, s: int) -> bool:
        m = len(self.z)
        return not (self.busy[(s - 1) % m] or self.busy[s] or self.busy[(s + 1) % m])


def _point_segment_dist(p: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    ab = b - a
    u = np.clip(((p - a) * np.conj(ab)).real / np.maximum(np.abs(ab) ** 2, 1e-300), 0.0, 1.0)
    return np.abs(p - (a + u * ab))


def guard_distance(base: _Base, origin: Point | None = None) -> float:
    """Smallest clearance the strand tube must respect (see bifurcate docs)."""
    z = base.z
    m = len(z)
    a, b = z, np.roll(z, -1)
    terms = []
    dps = np.array([complex(float(c.point.x), float(c.point.y)) for c in base.crossings])
    if len(dps) > 1:
        diff = np.abs(dps[:, None] - dps[None, :])
        terms.append(diff[np.triu_indices(len(dps), 1)].min())
    for c, p in zip(base.crossings, dps):
        mask = np.ones(m, dtype=bool)
        mask[[c.seg_a, c.seg_b]] = False
        terms.append(_point_segment_dist(np.full(mask.sum(), p), a[mask], b[mask]).min())
        # the strand grid must stay inside the two crossing segments
        sin = abs((np.conj(base.d[c.seg_a]) * base.d[c.seg_b]).imag)
        ends = np.abs(np.array([a[c.seg_a], b[c.seg_a], a[c.seg_b], b[c.seg_b]]) - p).min()
        terms.append(sin * ends)
    i, j = np.triu_indices(m, 2)
    keep = (j - i) % m != m - 1
    if base.crossings:
        crossing_keys = [c.seg_a * m + c.seg_b for c in base.crossings]
        keep &= ~np.isin(i * m + j, crossing_keys)
    i, j = i[keep], j[keep]
    if len(i):
        dist = np.minimum.reduce([
            _point_segment_dist(a[i], a[j], b[j]), _point_segment_dist(b[i], a[j], b[j]),
            _point_segment_dist(a[j], a[i], b[i]), _point_segment_dist(b[j], a[i], b[i]),
        ])
        terms.append(dist.min())
    if origin is not None:
        o = complex(float(origin.x), float(origin.y))
        terms.append(_point_segment_dist(np.full(m, o), a, b).min())
    return float(min(terms))


def _offsets(k: int, eps: float) -> np.ndarray:
    # slightly irregular spacing keeps straight connectors from being concurrent
    i = np.arange(1, k + 1)
    wobble = ((i * 0.6180339887498949) % 1.0 - 0.5) * 0.1
    return eps * ((k + 1) / 2 - i + wobble)


def _splice_segment(base: _Base, spec: BifurcationSpec) -> tuple[int, float, float]:
    m = len(base.z)
    if spec.splice_t is not None:
        t = spec.splice_t % m
        s = int(math.floor(t))
        u = t - s
        lo, hi = u - WINDOW_HALF_WIDTH, u + WINDOW_HALF_WIDTH
        if lo <= Fraction(1, 20) or hi >= Fraction(19, 20) or not base.free(s):
            raise SpliceCollision(f"splice window at t={spec.splice_t} is too close to a vertex or double point")
        return s, float(lo), float(hi)
    cands = [s for s in range(m) if base.free(s)]
    if not cands:
        raise SpliceCollision("no segment is far enough from the double points to hold the splice")
    mids = base.z[cands] + 0.5 * (np.roll(base.z, -1)[cands] - base.z[cands])
    if base.crossings:
        dps = np.array([complex(float(c.point.x), float(c.point.y)) for c in base.crossings])
        score = np.abs(mids[:, None] - dps[None, :]).min(axis=1)
    else:
        score = np.abs(np.roll(base.z, -1)[cands] - base.z[cands])
    s = cands[int(np.argmax(score))]
    return s, 0.5 - float(WINDOW_HALF_WIDTH), 0.5 + float(WINDOW_HALF_WIDTH)


def _bump_intervals(base: _Base, spec: BifurcationSpec, splice_seg: int):
    m = len(base.z)
    out = []
    for c in spec.crossings:
        t = c.t % m
        s = int(math.floor(t))
        lo, hi = t - BUMP_HALF_WIDTH, t + BUMP_HALF_WIDTH
        if lo <= s + Fraction(1, 20) or hi >= s + Fraction(19, 20):
            raise SpliceCollision(f"extra crossing at t={c.t} is too close to a vertex")
        if not base.free(s) or min((s - splice_seg) % m, (splice_seg - s) % m) <= 1:
            raise SpliceCollision(f"extra crossing at t={c.t} is too close to a double point or the splice")
        for other in out:
            if lo < other[1] and other[0] < hi:
                raise SpliceCollision(f"extra crossings at t={c.t} and t={other[2].t} overlap")
        out.append((lo, hi, c))
    return out


def _strand_points(base: _Base, k: int, offs: np.ndarray, strand: int, window, bumps) -> list[complex]:
    z, nrm = base.z, base.nrm
    m = len(z)
    s_w, lo, hi = window
    o = offs[strand - 1]
    items: list[tuple[float, complex]] = []
    start = s_w + hi
    items.append((start, base.at(start)[0] + o * nrm[s_w]))
    for v in range(s_w + 1, s_w + m + 1):
        n1, n2 = nrm[(v - 1) % m], nrm[v % m]
        items.append((float(v), z[v % m] + o * (n1 + n2) / (1 + (n1 * np.conj(n2)).real)))
    items.append((s_w + m + lo, base.at(s_w + lo)[0] + o * nrm[s_w]))
    for b_lo, b_hi, c in bumps:
        if c.i != strand:
            continue
        gap = offs[c.j - 1] - offs[c.j] if c.j < k else offs[c.j - 2] - offs[c.j - 1]
        low = offs[c.j - 1] - 0.5 * gap
        b_lo, b_hi = float(b_lo), float(b_hi)
        shift = 0.0 if b_lo > start else float(m)
        seg_n = nrm[int(math.floor(b_lo)) % m]
        third = (b_hi - b_lo) / 3
        for t, off in ((b_lo, o), (b_lo + third, low), (b_hi - third, low), (b_hi, o)):
            items.append((t + shift, base.at(t)[0] + off * seg_n))
    items.sort(key=lambda it: it[0])
    return [p for _, p in items]


def _assemble(base: _Base, spec: BifurcationSpec, eps: float) -> PolyCurve:
    k, pi = spec.k, spec.connection
    offs = _offsets(k, eps)
    window = _splice_segment(base, spec)
    bumps = _bump_intervals(base, spec, window[0])
    pts: list[complex] = []
    strand = 1
    for _ in range(k):
        pts.extend(_strand_points(base, k, offs, strand, window, bumps))
        strand = pi(strand)
    z = np.array(pts)
    bits = 24 + max(0, math.ceil(-math.log2(eps)))
    name = f"{base.curve.name or 'curve'}~{k}"
    return PolyCurve.from_floats(np.c_[z.real, z.imag], name=name, grid_bits=bits)


@dataclass(frozen=True)
class BuiltBifurcation:
    curve: PolyCurve
    spec: BifurcationSpec
    epsilon: Fraction
    splice_segment: int
    window: tuple[float, float]


def construct(curve: PolyCurve, spec: BifurcationSpec, origin: Point | None = None) -> BuiltBifurcation:
    base = _Base.of(curve)
    n = len(base.crossings)
    expected = n * spec.k ** 2 + (spec.k - 1) + spec.extra_double_points
    if spec.epsilon is not None:
        tries = [float(spec.epsilon)]
    else:
        f = guard_distance(base, origin)
        tries = [f / (4 * spec.k) / 2 ** h for h in range(MAX_HALVINGS + 1)]
    last = None
    for eps in tries:
        built = _assemble(base, spec, eps)
        try:
            got = len(self_intersections(built))
        except ValueError as exc:  # genericity violation
            last = str(exc)
            continue
        if got == expected:
            window = _splice_segment(base, spec)
            return BuiltBifurcation(built, spec, Fraction(eps), window[0], window[1:])
        last = f"{got} double points instead of {expected}"
    raise EpsilonTooLarge(f"strand spacing produced unintended crossings ({last})")


def build_bifurcation(curve: PolyCurve, spec: BifurcationSpec, origin: Point | None = None) -> PolyCurve:
    return construct(curve, spec, origin).curve


# ------------------------------------------------------------- predictions


@dataclass(frozen=True)
class BifurcationPrediction:
    n_pred: int
    jplus_pred: int
    jminus_pred: int
    face_count_pred: int
    rot_pred: int
    omega0_pred: int | None = None
    j1_pred: Fraction | None = None
    j2_pred: int | None = None
    nu_pred: int | None = None


def minimal_nu(n: int, k: int) -> int:
    """Even double points of a minimal bifurcation (odd base winding, even k)."""
    return n * k * k // 2 + (k // 2 - 1)


def predict_minimal(curve: PolyCurve, origin: Point | None, k: int,
                    base: InvariantReport | None = None) -> BifurcationPrediction:
    r = base or invariant_report(curve, origin)
    n = r.n
    kk = k * k
    fields = dict(
        n_pred=n * kk + (k - 1),
        jplus_pred=kk * r.jplus - (kk - k),
        jminus_pred=kk * r.jminus - (kk - 1),
        face_count_pred=(n + 2) + n * (k - 1) ** 2 + (2 * n + 1) * (k - 1),
        rot_pred=k * r.rot,
    )
    op = r.origin_part
    if op is not None:
        fields["omega0_pred"] = k * op.omega0
        fields["j1_pred"] = kk * op.j1 - (kk - k)
        if op.j2 is not None:
            if op.omega0 % 2 == 0:
                fields["j2_pred"] = kk * op.j2 - (kk - k)
            elif k % 2:
                fields["j2_pred"] = kk * op.j2 - (kk - k) + (k - 1)
            else:
                h = k // 2
                fields["j2_pred"] = h * h * op.j2 - (h * h - h)
                fields["nu_pred"] = minimal_nu(n, k)
    return BifurcationPrediction(**fields)


def predict_even_count(curve: PolyCurve, origin: Point, spec: BifurcationSpec, splice_t: float) -> int:
    """Number of even double points of the built curve, from the strand combinatorics.

    A double point of the bifurcation pinches off a loop that runs q full
    turns along the base curve, plus (for grid points) the base loop at the
    original double point.  Its winding about the origin is
    w_A + q * omega0, with q read off the connection permutation.
    """
    k, pi = spec.k, spec.connection
    w0 = winding_number(curve.vertices, origin)
    arr = build_arrangement(curve)
    even = 0
    for d in arr.double_points:
        c = d.crossing
        loop = [c.point] + [curve.vertices[v] for v in range(c.seg_a + 1, c.seg_b + 1)]
        w_a = winding_number(loop, origin)
        passes = c.t1 < splice_t < c.t2
        for a in range(1, k + 1):
            a2 = pi(a) if passes else a
            for b in range(1, k + 1):
                even += (w_a + pi.steps(a2, b) * w0) % 2 == 0
    for a in range(1, k + 1):
        for b in range(a + 1, k + 1):
            if (a - b) * (pi(a) - pi(b)) < 0:
                even += (pi.steps(a, b) * w0) % 2 == 0
    for x in spec.crossings:
        for l in range(x.i + 1, x.j + 1):
            even += 2 * ((pi.steps(x.i, l) * w0) % 2 == 0)
    return even


def predict_general(curve: PolyCurve, origin: Point | None, spec: BifurcationSpec,
                    base: InvariantReport | None = None, splice_t: float | None = None) -> BifurcationPrediction:
    r = base or invariant_report(curve, origin)
    k = spec.k
    mini = predict_minimal(curve, origin, k, r)
    dn = spec.extra_double_points
    out = dict(
        n_pred=mini.n_pred + dn,
        jplus_pred=mini.jplus_pred + dn,
        jminus_pred=mini.jminus_pred,
        face_count_pred=mini.face_count_pred + dn,
        rot_pred=mini.rot_pred,
        omega0_pred=mini.omega0_pred,
    )
    op = r.origin_part
    if op is not None:
        out["j1_pred"] = mini.j1_pred + dn
        if splice_t is None:
            splice_t = construct(curve, spec, origin).splice_segment + 0.5
        nu = predict_even_count(curve, origin, spec, splice_t) if (k * op.omega0) % 2 == 0 else None
        out["nu_pred"] = nu
        if op.j2 is not None:
            if op.omega0 % 2 == 0:
                out["j2_pred"] = mini.j2_pred + dn
            elif k % 2:
                out["j2_pred"] = mini.j2_pred + 2 * dn
            else:
                out["j2_pred"] = mini.j2_pred + (nu - minimal_nu(r.n, k))
    return BifurcationPrediction(**out)


# ------------------------------------------------------------ verification


@dataclass(frozen=True)
class Check:
    name: str
    predicted: object
    measured: object
    passed: bool


@dataclass
class VerificationOutcome:
    spec: BifurcationSpec
    curve: PolyCurve | None
    checks: list[Check] = field(default_factory=list)
    error: str | None = None

    @property
    def passed(self) -> bool:
        return self.error is None and all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def measured(self, name: str):
        return next(c.measured for c in self.checks if c.name == name)

    def to_json(self) -> dict:
        def enc(v):
            if isinstance(v, Fraction):
                return {"num": v.numerator, "den": v.denominator}
            return v

        return {"spec": self.spec.to_json(), "passed": self.passed, "error": self.error,
                "checks": [{"name": c.name, "predicted": enc(c.predicted), "measured": enc(c.measured),
                            "passed": c.passed} for c in self.checks]}


def verify_bifurcation(curve: PolyCurve, origin: Point | None, spec: BifurcationSpec,
                       base: InvariantReport | None = None) -> VerificationOutcome:
    try:
        r = base or invariant_report(curve, origin)
        built = construct(curve, spec, origin)
    except (EpsilonTooLarge, SpliceCollision, ValueError, RuntimeError) as exc:
        return VerificationOutcome(spec, None, error=f"{type(exc).__name__}: {exc}")
    splice_t = built.splice_segment + 0.5
    pred = predict_general(curve, origin, spec, r, splice_t)
    new = built.curve
    arr = build_arrangement(new)
    out = VerificationOutcome(spec, new)
    add = lambda name, p, m, ok=None: out.checks.append(Check(name, p, m, (p == m) if ok is None else ok))  # noqa: E731

    k, kk = spec.k, spec.k ** 2
    n, jp, jm = arr.n, viro_jplus(arr), jminus(arr)
    gv, dv = gamma_V(arr), d_V(arr)
    add("n", pred.n_pred, n)
    add("jplus", pred.jplus_pred, jp)
    add("jminus", pred.jminus_pred, jm)
    add("faces", pred.face_count_pred, len(arr.faces))
    add("rot", pred.rot_pred, rotation_number(new))
    add("jplus_minus_jminus", n, jp - jm)
    bound = kk * r.jplus - (kk - k)
    add("minimal_jplus_bound", bound, jp, jp >= bound)
    add("arnold_bound", -n * n - n, jp, jp >= -n * n - n)
    if r.jplus > 0:
        add("jplus_positive_growth", kk + k, jp, jp >= kk + k)
    if r.jminus >= 1:
        add("jminus_positive", 1, jm, jm >= 1)
    if spec.extra_double_points == 0:
        add("viro_partition", kk * (-r.gamma_V + r.d_V), -gv + dv)
        add("gamma_growth", kk * r.gamma_V, gv, gv > kk * r.gamma_V)
        add("dv_growth", kk * r.d_V, dv, dv > kk * r.d_V)
    op = r.origin_part
    if op is not None:
        w = arr.winding_at_point(origin)
        add("omega0", pred.omega0_pred, w)
        j1 = jp + Fraction(w * w, 2)
        add("j1", pred.j1_pred, j1)
        if op.j1 > Fraction(1, 2):
            add("j1_positive_growth", kk + k, j1, j1 >= kk + k)
        if pred.nu_pred is not None:
            nu = sum(1 for d in arr.double_points
                     if classify_double_point(new, origin, d, omega0=w) == "even")
            add("nu", pred.nu_pred, nu)
            if op.omega0 % 2 and k % 2 == 0 and spec.extra_double_points == 0 and spec.connection == StrandPermutation.neat(k):
                add("nu_minimal_formula", minimal_nu(r.n, k), nu)
        if pred.j2_pred is not None:
            try:
                j2 = lift_j2(new, origin)
            except RuntimeError as exc:
                out.error = f"{type(exc).__name__}: {exc}"
                return out
            add("j2", pred.j2_pred, j2)
            if op.j2 > 0:
                floor = (k // 2) ** 2 + k // 2 if (op.omega0 % 2 and k % 2 == 0) else kk + k
                add("j2_positive_growth", floor, j2, j2 >= floor)
            if op.omega0 % 2 and k == 2:
                add("j2_invariant_k2", op.j2, j2)
    return out


def free_segments(curve: PolyCurve) -> list[int]:
    base = _Base.of(curve)
    return [s for s in range(len(base.z)) if base.free(s)]


def random_spec(curve: PolyCurve, k: int, rng: np.random.Generator, extras: int,
                connection: StrandPermutation | None = None, max_gap: int | None = None) -> BifurcationSpec:
    """Spec with ``extras`` bumps on distinct free segments away from the splice."""
    base = _Base.of(curve)
    m = len(base.z)
    splice, _, _ = _splice_segment(base, BifurcationSpec(k))
    slots = [s for s in range(m) if base.free(s) and min((s - splice) % m, (splice - s) % m) > 1]
    picks = rng.choice(len(slots), size=extras, replace=False)
    crossings = []
    for p in sorted(picks.tolist()):
        i = int(rng.integers(1, k))
        top = k if max_gap is None else min(k, i + max_gap)
        j = int(rng.integers(i + 1, top + 1))
        crossings.append(ExtraCrossing(i, j, Fraction(2 * slots[p] + 1, 2)))
    return BifurcationSpec(k, connection=connection, crossings=tuple(crossings))
