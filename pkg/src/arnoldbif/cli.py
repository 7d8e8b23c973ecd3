"""Command line entry point: ``arnoldbif <command> ...``.

Exit codes: 0 success, 1 I/O or parse error, 2 non-generic input,
3 verification failure.  Machine output is JSON on stdout; human notes go
to stderr.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .arrangement import build_arrangement
from .bifurcation import BifurcationSpec, random_spec, verify_bifurcation
from .fixtures import NAMED, fixture, origin_in_face_with_winding
from .geom import GenericityViolation, OnCurve, Point, PolyCurve, curve_to_json, load_curve, to_scalar
from .invariants import invariant_report
from .lift import sqrt_lift
from .oracle import brute_force_min_connection, index_by_mean, winding_by_angle_sum
from .perms import min_inversion_stats

EXIT_OK, EXIT_IO, EXIT_NOT_GENERIC, EXIT_VERIFY = 0, 1, 2, 3
DEFAULT_FIXTURES = ["K0", "K1", "K2", "K3", "K4", "appendix", "rose3"]


class UsageError(Exception):
    pass


def _emit(obj) -> None:
    json.dump(obj, sys.stdout, indent=2, sort_keys=False)
    sys.stdout.write("\n")


def _read_json(path: str):
    with open(path) as fh:
        return json.load(fh)


def _load(path: str, origin_arg) -> tuple[PolyCurve, Point | None]:
    curve, origin = load_curve(path)
    if origin_arg is not None:
        origin = Point(to_scalar(origin_arg[0]), to_scalar(origin_arg[1]))
    return curve, origin


# ------------------------------------------------------------------ render


@dataclass(frozen=True)
class RenderOptions:
    show_windings: bool = True
    show_indices: bool = True
    show_orientation: bool = True
    stroke_width: float = 2.0
    canvas_size: int = 600
    font_size: int = 14


def _fmt(x: float) -> str:
    s = f"{x:.9g}"
    return "0" if s == "-0" else s


def render_svg(curve: PolyCurve, opts: RenderOptions = RenderOptions()) -> str:
    arr = build_arrangement(curve)
    pts = [(float(p.x), float(p.y)) for p in curve.vertices]
    labels = []
    if opts.show_windings:
        labels += [((float(f.sample_point.x), float(f.sample_point.y)), str(f.winding), "winding")
                   for f in sorted(arr.faces, key=lambda f: f.id)]
    if opts.show_indices:
        labels += [((float(d.location.x), float(d.location.y)), str(d.index), "dp-index")
                   for d in arr.double_points]
    xs = [p[0] for p in pts] + [lab[0][0] for lab in labels]
    ys = [p[1] for p in pts] + [lab[0][1] for lab in labels]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    span = max(x1 - x0, y1 - y0) or 1.0
    margin = 0.08 * span
    size = opts.canvas_size
    scale = size / (span + 2 * margin)

    def tr(p):
        return _fmt((p[0] - x0 + margin) * scale), _fmt((y1 - p[1] + margin) * scale)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
           f'viewBox="0 0 {size} {size}">']
    path = " ".join(("M" if i == 0 else "L") + " {} {}".format(*tr(p)) for i, p in enumerate(pts)) + " Z"
    out.append(f'<path d="{path}" fill="none" stroke="black" stroke-width="{_fmt(opts.stroke_width)}"/>')
    if opts.show_orientation:
        step = max(1, len(pts) // 8)
        for i in range(0, len(pts), step):
            a, b = np.array(pts[i]), np.array(pts[(i + 1) % len(pts)])
            mid, d = (a + b) / 2, (b - a) / np.linalg.norm(b - a)
            head = 0.025 * span
            left = mid - head * d + 0.5 * head * np.array([-d[1], d[0]])
            right = mid - head * d - 0.5 * head * np.array([-d[1], d[0]])
            poly = " ".join("{},{}".format(*tr(q)) for q in (mid, left, right))
            out.append(f'<polygon class="arrow" points="{poly}" fill="black"/>')
    for pos, text, cls in labels:
        x, y = tr(pos)
        color = "#1f4e9e" if cls == "winding" else "#b3261e"
        out.append(f'<text class="{cls}" x="{x}" y="{y}" font-size="{opts.font_size}" '
                   f'text-anchor="middle" fill="{color}">{text}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------- commands


def cmd_invariants(args) -> int:
    curve, origin = _load(args.file, args.origin)
    report = invariant_report(curve, origin)
    _emit(report.to_json())
    return EXIT_OK


def cmd_bifurcate(args) -> int:
    curve, origin = _load(args.file, args.origin)
    spec_obj = _read_json(args.spec) if args.spec else {}
    if args.k is not None:
        spec_obj["k"] = args.k
    if "k" not in spec_obj:
        raise UsageError("--k or a spec file with 'k' is required")
    spec = BifurcationSpec.from_json(spec_obj)
    outcome = verify_bifurcation(curve, origin, spec)
    result = outcome.to_json()
    if outcome.curve is not None:
        if args.output:
            with open(args.output, "w") as fh:
                json.dump(curve_to_json(outcome.curve, origin), fh)
        else:
            result["curve"] = curve_to_json(outcome.curve, origin)
    _emit(result)
    return EXIT_OK if outcome.passed else EXIT_VERIFY


def cmd_lift(args) -> int:
    curve, origin = _load(args.file, args.origin)
    if origin is None:
        raise UsageError("lift needs an origin (--origin or an 'origin' entry in the file)")
    res = sqrt_lift(curve, origin, args.samples)
    summary = {"parity_case": res.parity_case, "omega0": res.omega0, "nu": res.nu,
               "lift_double_points": res.lift_crossings, "inter_lift_crossings": res.inter_lift_crossings,
               "jplus_of_lift": invariant_report(res.lifts[0]).jplus}
    if res.dp_parity is not None:
        summary["dp_parity"] = {str(k): v for k, v in sorted(res.dp_parity.items())}
    if args.output:
        with open(args.output, "w") as fh:
            json.dump({"lifts": [curve_to_json(c) for c in res.lifts]}, fh)
    _emit(summary)
    return EXIT_OK


def cmd_render(args) -> int:
    curve, _ = _load(args.file, None)
    opts = RenderOptions(not args.no_windings, not args.no_indices, not args.no_orientation,
                         args.stroke_width, args.size, args.font_size)
    svg = render_svg(curve, opts)
    with open(args.output, "w", newline="\n") as fh:
        fh.write(svg)
    return EXIT_OK


def cmd_perms(args) -> int:
    stats = min_inversion_stats(args.k)
    stats["k"] = args.k
    _emit(stats)
    return EXIT_OK


def cmd_fixtures(args) -> int:
    if args.list:
        _emit(sorted(NAMED))
        return EXIT_OK
    if not args.emit:
        raise UsageError("fixtures needs --list or --emit ID")
    curve = fixture(args.emit)
    origin = origin_in_face_with_winding(curve, args.origin_winding) if args.origin_winding is not None else None
    obj = curve_to_json(curve, origin)
    if args.output:
        with open(args.output, "w") as fh:
            json.dump(obj, fh)
    else:
        _emit(obj)
    return EXIT_OK


def _origins_for(curve: PolyCurve) -> list[int | None]:
    windings = sorted({f.winding for f in build_arrangement(curve).faces}, key=lambda w: (abs(w), w))
    odd = [w for w in windings if w % 2]
    even = [w for w in windings if w % 2 == 0 and w != 0]
    return [None] + odd[:1] + (even[:1] or [0])


def _campaign_cell(task) -> dict:
    name, winding, k, spec_json = task
    curve = fixture(name)
    origin = origin_in_face_with_winding(curve, winding) if winding is not None else None
    out = verify_bifurcation(curve, origin, BifurcationSpec.from_json(spec_json))
    return {"fixture": name, "origin_winding": winding, "k": k, "passed": out.passed, "error": out.error,
            "failures": [c.name for c in out.failures()], "checks": len(out.checks)}


def _oracle_cell(name: str) -> dict:
    curve = fixture(name)
    arr = build_arrangement(curve)
    rng = np.random.default_rng(sum(map(ord, name)))
    xs = [float(p.x) for p in curve.vertices]
    ys = [float(p.y) for p in curve.vertices]
    agree = tested = 0
    while tested < 200:
        p = Point(Fraction(rng.uniform(min(xs) - 0.2, max(xs) + 0.2)), Fraction(rng.uniform(min(ys) - 0.2, max(ys) + 0.2)))
        try:
            a = arr.winding_at_point(p)
        except OnCurve:
            continue
        tested += 1
        agree += a == winding_by_angle_sum(curve, p)
    idx_ok = sum(index_by_mean(arr, d) == d.index for d in arr.double_points)
    return {"fixture": name, "points": tested, "winding_agree": agree,
            "double_points": arr.n, "index_agree": idx_ok}


def _parse_range(text: str) -> range:
    lo, _, hi = text.partition("..")
    return range(int(lo), int(hi or lo) + 1)


def _workers() -> int:
    cap = os.environ.get("ARNOLDBIF_THREADS")
    return max(1, int(cap)) if cap else (os.cpu_count() or 1)


def _run(fn, tasks, workers):
    if workers <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=min(workers, len(tasks))) as pool:
        return list(pool.map(fn, tasks))


def cmd_verify(args) -> int:
    ks = _parse_range(args.k_range)
    names = args.fixtures.split(",") if args.fixtures else DEFAULT_FIXTURES
    rng = np.random.default_rng(args.seed)
    tasks = []
    for name in names:
        curve = fixture(name)
        for w in _origins_for(curve):
            for k in ks:
                specs = [BifurcationSpec(k)] + [random_spec(curve, k, rng, int(rng.integers(1, 3)))
                                               for _ in range(args.extras)]
                tasks += [(name, w, k, s.to_json()) for s in specs]
    workers = _workers()
    cells = _run(_campaign_cell, tasks, workers)
    perms = []
    for k in range(2, max(max(ks), 2) + 1):
        stats = min_inversion_stats(k)
        ok = stats == {"min_value": k - 1, "count_minimizers": 2 ** (k - 2)}
        if k <= 8:
            ok = ok and stats == brute_force_min_connection(k)
        perms.append({"k": k, **stats, "passed": ok})
    summary = {"cells": len(cells), "cells_passed": sum(c["passed"] for c in cells),
               "failures": [c for c in cells if not c["passed"]], "perms": perms}
    passed = summary["cells"] == summary["cells_passed"] and all(p["passed"] for p in perms)
    if args.deep:
        oracle = _run(_oracle_cell, names, workers)
        summary["oracle"] = oracle
        passed = passed and all(o["winding_agree"] == o["points"] and o["index_agree"] == o["double_points"]
                                for o in oracle)
    summary["passed"] = passed
    _emit(summary)
    print(f"verify: {summary['cells_passed']}/{summary['cells']} cells passed", file=sys.stderr)
    return EXIT_OK if passed else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="arnoldbif", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def with_origin(p):
        p.add_argument("--origin", nargs=2, metavar=("X", "Y"), help="marked origin (decimal strings)")

    p = sub.add_parser("invariants", help="invariant report of a curve file")
    p.add_argument("file")
    with_origin(p)
    p.set_defaults(fn=cmd_invariants)

    p = sub.add_parser("bifurcate", help="build and verify a k-bifurcation")
    p.add_argument("file")
    p.add_argument("--k", type=int)
    p.add_argument("--spec")
    p.add_argument("-o", "--output")
    with_origin(p)
    p.set_defaults(fn=cmd_bifurcate)

    p = sub.add_parser("lift", help="square-root preimage of a curve")
    p.add_argument("file")
    p.add_argument("--samples", type=int, default=16)
    p.add_argument("-o", "--output")
    with_origin(p)
    p.set_defaults(fn=cmd_lift)

    p = sub.add_parser("render", help="annotated SVG of a curve")
    p.add_argument("file")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--no-windings", action="store_true")
    p.add_argument("--no-indices", action="store_true")
    p.add_argument("--no-orientation", action="store_true")
    p.add_argument("--stroke-width", type=float, default=2.0)
    p.add_argument("--size", type=int, default=600)
    p.add_argument("--font-size", type=int, default=14)
    p.set_defaults(fn=cmd_render)

    p = sub.add_parser("verify", help="run the bifurcation verification campaign")
    p.add_argument("--k-range", default="2..4")
    p.add_argument("--fixtures")
    p.add_argument("--deep", action="store_true")
    p.add_argument("--extras", type=int, default=2, help="random extra-crossing specs per cell")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("perms", help="minimal one-cycle connection statistics")
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(fn=cmd_perms)

    p = sub.add_parser("fixtures", help="list or emit named fixture curves")
    p.add_argument("--list", action="store_true")
    p.add_argument("--emit")
    p.add_argument("--origin-winding", type=int)
    p.add_argument("-o", "--output")
    p.set_defaults(fn=cmd_fixtures)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except GenericityViolation as exc:
        _emit(exc.report.to_json())
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_GENERIC
    except (OSError, ValueError, KeyError, UsageError, OnCurve) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
