"""Command-line entry point ``turnover-cusps``.

Exit codes: 0 when every check passes, 1 when a mathematical check fails,
2 on usage or I/O errors. ``TURNOVER_OUT_DIR`` sets the default directory
for files when ``--out`` is omitted; without it output goes to stdout.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .character import (
    DEFAULT_MAGNITUDES,
    SIGN_PATTERNS,
    sample_surface,
    trace_vector,
    write_csv,
)
from .cohomology import ADJOINT, EXTERIOR_SQUARE, STANDARD, cohomology_report
from .cusps import classify_end, faithfulness_obstruction
from .errors import DomainError, InvalidInputError, TurnoverError
from .field import format_scalar, parse_scalar
from .holonomy import (
    Representation,
    diagonal_representation,
    hyperbolic_cusp_holonomy,
    polar_to_slice,
    reducible_representation,
    slice_representation,
    verify_relations,
)
from .isolated import EXPECTED_ISOLATED_COUNT, case_tallies, isolated_point_classes
from .verify import run_verification
from .words import word_ball

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
OUT_DIR_ENV = "TURNOVER_OUT_DIR"

_MODULE_ALIASES = {"adjoint": ADJOINT, "standard": STANDARD, "wedge2": EXTERIOR_SQUARE, EXTERIOR_SQUARE: EXTERIOR_SQUARE}


class UsageError(Exception):
    pass


def _emit(text: str, out: str | None, default_name: str) -> None:
    """Write to ``out``, else to the default directory, else to stdout."""
    if out is None and os.environ.get(OUT_DIR_ENV):
        out = str(Path(os.environ[OUT_DIR_ENV]) / default_name)
    if out is None or out == "-":
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
        return
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _parse_orders(text: str) -> tuple[int, int, int]:
    try:
        orders = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"orders must look like 3,3,3 (got {text!r})") from None
    if len(orders) != 3:
        raise UsageError("exactly three orders are required")
    return orders


def _parse_pair(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError(f"expected two comma-separated numbers, got {text!r}")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError:
        raise UsageError(f"not numbers: {text!r}") from None


# ---------------------------------------------------------------------------
# subcommands


def cmd_verify_paper(args) -> int:
    report = run_verification(tol=args.tol, expected_isolated=args.expected_isolated)
    if args.format == "json":
        text = _dump(report.as_dict())
    else:
        lines = []
        for c in report.checks:
            status = "PASS" if c.passed else "FAIL"
            lines.append(f"{status} {c.name}: computed {c.as_dict()['computed']!r}, expected {c.as_dict()['expected']!r}")
        s = report.as_dict()["summary"]
        lines.append(f"{s['passed']}/{s['total']} checks passed")
        text = "\n".join(lines) + "\n"
    _emit(text, args.out, "verification_report." + ("json" if args.format == "json" else "txt"))
    return EXIT_OK if report.all_passed else EXIT_FAIL


def cmd_cohomology(args) -> int:
    orders = _parse_orders(args.orders)
    try:
        rho = hyperbolic_cusp_holonomy(*orders)
    except (DomainError, InvalidInputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    report = cohomology_report(rho, _MODULE_ALIASES[args.module])
    _emit(_dump(report.as_dict()), args.out, "cohomology.json")
    return EXIT_OK if report.duality_consistent else EXIT_FAIL


def _matrix_json(m):
    return [[float(x) for x in row] for row in m]


def cmd_slice(args) -> int:
    if args.polar is not None:
        if args.u is not None or args.v is not None:
            raise UsageError("--polar cannot be combined with --u/--v")
        t, theta = _parse_pair(args.polar)
        u, v = polar_to_slice(t, theta)
    else:
        u = 0.0 if args.u is None else args.u
        v = 0.0 if args.v is None else args.v
    if not (math.isfinite(u) and math.isfinite(v)):
        raise UsageError("slice parameters must be finite")
    rep = slice_representation(u, v)
    rel = verify_relations(rep, args.tol)
    verdict = classify_end(rep)
    doc = {
        "u": u,
        "v": v,
        "image_a": _matrix_json(rep.image_a),
        "image_b": _matrix_json(rep.image_b),
        "image_a2b": _matrix_json(rep.image("aab")),
        "relations": rel.as_dict(),
        "verdict": verdict.as_dict(),
    }
    _emit(_dump(doc), args.out, "slice.json")
    return EXIT_OK if rel.passed else EXIT_FAIL


def _parse_grid(text: str):
    if text == "default":
        return DEFAULT_MAGNITUDES
    try:
        vals = tuple(Fraction(x) for x in text.split(","))
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"grid must be 'default' or comma-separated rationals, got {text!r}") from None
    if any(v <= 0 for v in vals):
        raise UsageError("grid magnitudes must be positive")
    return vals


def cmd_surface(args) -> int:
    grid = _parse_grid(args.grid)
    signs = args.signs.split(",")
    for s in signs:
        if s not in SIGN_PATTERNS:
            raise UsageError(f"unknown sign pattern {s!r}; choose from {sorted(SIGN_PATTERNS)}")
    points = sample_surface(grid, signs, exact=not args.float)
    _emit(write_csv(points), args.out, "surface.csv")
    return EXIT_OK


def cmd_isolated(args) -> int:
    classes = isolated_point_classes()
    words = word_ball(4)
    entries = []
    vectors = {}
    for c in classes:
        rep = c.representation()
        tv = tuple(format_scalar(t) for t in trace_vector(rep, words))
        vectors.setdefault(tv, []).append(c.index)
        entries.append({
            "index": c.index,
            "case": c.case,
            "description": c.describe(),
            "conjugacy_class_size": len(c.members),
            "relations_hold": verify_relations(rep).passed,
            "faithfulness": faithfulness_obstruction(rep).as_dict(),
            "end_type": classify_end(rep).kind,
            "traces": list(tv),
            "representation": rep.to_json_dict(),
        })
    collisions = [idx for idx in vectors.values() if len(idx) > 1]
    doc = {
        "expected_count": args.expected,
        "count": len(classes),
        "case_tallies": case_tallies(classes),
        "trace_words": [str(w) for w in words],
        "trace_vector_collisions": collisions,
        "entries": entries,
    }
    _emit(_dump(doc), args.out, "isolated.json")
    if len(classes) != args.expected:
        print(
            f"isolated-point count {len(classes)} differs from expected {args.expected}; "
            f"per-case tallies {case_tallies(classes)}",
            file=sys.stderr,
        )
        return EXIT_FAIL
    return EXIT_OK


def _build_representation(args) -> Representation:
    fam = args.family
    if fam == "hyperbolic":
        return hyperbolic_cusp_holonomy(*_parse_orders(args.orders))
    if fam == "slice":
        if args.polar:
            return slice_representation(*polar_to_slice(*_parse_pair(args.polar)))
        return slice_representation(args.u or 0.0, args.v or 0.0)
    if fam == "diagonal":
        if not args.x:
            raise UsageError("--x x1,x2,x3 is required for the diagonal family")
        try:
            xs = [parse_scalar(x) for x in args.x.split(",")]
        except (InvalidInputError, ValueError):
            raise UsageError(f"could not parse {args.x!r}") from None
        if len(xs) != 3:
            raise UsageError("--x needs three values")
        return diagonal_representation(*xs)
    if fam == "reducible":
        return reducible_representation()
    if fam == "isolated":
        classes = isolated_point_classes()
        if args.index is None or not 0 <= args.index < len(classes):
            raise UsageError(f"--index must lie in 0..{len(classes) - 1}")
        return classes[args.index].representation()
    raise UsageError(f"unknown family {fam!r}")


def cmd_representation(args) -> int:
    if args.input:
        try:
            text = Path(args.input).read_text(encoding="utf-8")
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        try:
            rep = Representation.from_json(text)
        except TurnoverError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        rel = verify_relations(rep, args.tol)
        doc = {
            "representation": rep.to_json_dict(),
            "relations": rel.as_dict(),
            "end_type": classify_end(rep).as_dict(),
            "faithfulness": faithfulness_obstruction(rep).as_dict(),
        }
        _emit(_dump(doc), args.out, "representation_check.json")
        return EXIT_OK if rel.passed else EXIT_FAIL
    if not args.family:
        raise UsageError("either --family or --input is required")
    try:
        rep = _build_representation(args)
    except (DomainError, InvalidInputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    _emit(rep.to_json(indent=2) + "\n", args.out, "representation.json")
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="turnover-cusps", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify-paper", help="run the full verification battery")
    v.add_argument("--tol", type=float, default=None, help="override every float-backend tolerance")
    v.add_argument("--out", default=None)
    v.add_argument("--format", choices=("json", "text"), default="json")
    v.add_argument("--expected-isolated", type=int, default=EXPECTED_ISOLATED_COUNT)
    v.set_defaults(func=cmd_verify_paper)

    c = sub.add_parser("cohomology", help="cohomology of a Euclidean turnover cusp holonomy")
    c.add_argument("--orders", default="3,3,3")
    c.add_argument("--module", choices=sorted(_MODULE_ALIASES), default="adjoint")
    c.add_argument("--out", default=None)
    c.set_defaults(func=cmd_cohomology)

    s = sub.add_parser("slice", help="evaluate the deformation slice")
    s.add_argument("--u", type=float, default=None)
    s.add_argument("--v", type=float, default=None)
    s.add_argument("--polar", default=None, metavar="T,THETA")
    s.add_argument("--tol", type=float, default=1e-9)
    s.add_argument("--out", default=None)
    s.set_defaults(func=cmd_slice)

    f = sub.add_parser("surface", help="sample the surface component as CSV")
    f.add_argument("--grid", default="default", help="'default' or comma-separated positive rationals")
    f.add_argument("--signs", default="++,--", help="comma-separated sign patterns for (x1, x2)")
    f.add_argument("--float", action="store_true", help="use floating point instead of exact rationals")
    f.add_argument("--out", default=None)
    f.set_defaults(func=cmd_surface)

    i = sub.add_parser("isolated", help="enumerate isolated points")
    i.add_argument("--expected", type=int, default=EXPECTED_ISOLATED_COUNT)
    i.add_argument("--out", default=None)
    i.set_defaults(func=cmd_isolated)

    r = sub.add_parser("representation", help="build or check a representation (JSON)")
    r.add_argument("--family", choices=("hyperbolic", "slice", "diagonal", "reducible", "isolated"))
    r.add_argument("--orders", default="3,3,3")
    r.add_argument("--u", type=float, default=None)
    r.add_argument("--v", type=float, default=None)
    r.add_argument("--polar", default=None)
    r.add_argument("--x", default=None, help="x1,x2,x3 as exact strings, e.g. 2,1,1/2")
    r.add_argument("--index", type=int, default=None)
    r.add_argument("--input", default=None, help="JSON file to check instead of building")
    r.add_argument("--tol", type=float, default=1e-9)
    r.add_argument("--out", default=None)
    r.set_defaults(func=cmd_representation)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
