"""Command-line front end.

Subcommands expose the enumeration, pair-classification, cone, and
double-cover layers, plus named verification suites that re-run the
package's frozen cross-checks and report case-by-case comparisons.

Output is text by default; --format json emits a deterministic document
{"command", "params", "result"} with sorted keys, so identical invocations
produce byte-identical bytes.  Divisor classes appear as integer coordinate
arrays together with a "basis" legend naming the coordinates.

Exit codes: 0 on success (and for a verification that passed), 1 for a
verification suite that failed, 2 for usage errors (bad flags, out-of-range
ranks, malformed input files).

The environment variable PICARDKIT_THREADS caps the parallelism of the
pair scans (0 or unset picks a size automatically).
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Callable, Sequence

from .cones import lattice_form, surface_cone_report
from .curves import (
    enumerate_conic,
    enumerate_exceptional,
    orbit_signature,
    reducible_fibers,
)
from .doublecover import (
    COEFF_PATTERN,
    DoubleCoverSpec,
    MultiHomogPoly,
    ProductPoint,
    anticanonical_power,
    cover_singular_at,
    expected_picard_number,
    is_fano,
    poly_from_json_dict,
)
from .fibration import (
    FibrationPair,
    analyze_pair,
    classify_finite_pairs,
    max_degree_bound,
    scan_conic_pairs,
)
from .lattice import DivisorClass, SurfaceModel, canonical_class, pairing


def _jsonify(value):
    if isinstance(value, (bool, int, str)) or value is None:
        return value
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (list, tuple)):
        return [_jsonify(v) for v in value]
    if isinstance(value, dict):
        return {k: _jsonify(v) for k, v in value.items()}
    raise TypeError(f"cannot render {value!r}")


def _emit(args, payload: dict, text_lines: list[str]) -> None:
    if args.format == "json":
        rendered = json.dumps(_jsonify(payload), indent=2, sort_keys=True) + "\n"
    else:
        rendered = "\n".join(text_lines) + "\n"
    if args.out:
        with open(args.out, "w") as f:
            f.write(rendered)
    else:
        sys.stdout.write(rendered)


def _class_entry(c: DivisorClass) -> dict:
    return {
        "coords": list(c.coords),
        "degree": c.degree,
        "multiplicities": list(c.multiplicities()),
    }


def _signature_entry(sig) -> dict:
    return {"degree": sig.degree, "multiplicities": list(sig.multiplicities)}


# --- enumerate ---------------------------------------------------------------

def _cmd_enumerate(args) -> int:
    model = SurfaceModel.blowup_p2(args.rank)
    family = (enumerate_exceptional if args.kind == "exceptional"
              else enumerate_conic)(args.rank)
    members = list(family)
    payload = {
        "command": "enumerate",
        "params": {"kind": args.kind, "rank": args.rank},
        "result": {
            "basis": list(model.basis_labels),
            "count": len(members),
            "classes": [_class_entry(c) for c in members],
        },
    }
    lines = [f"{args.kind} classes on BlowupP2({args.rank}): {len(members)}"]
    lines += [str(c) for c in members]
    _emit(args, payload, lines)
    return 0


# --- pairs -------------------------------------------------------------------

def _cmd_pairs(args) -> int:
    summary = scan_conic_pairs(args.rank)
    rows = classify_finite_pairs(args.rank)
    payload = {
        "command": "pairs",
        "params": {"rank": args.rank},
        "result": {
            "rank": summary.rank,
            "class_count": summary.class_count,
            "pair_count": summary.pair_count,
            "max_degree": summary.max_degree,
            "degree_bound": max_degree_bound(args.rank),
            "hodge_holds": summary.hodge_holds,
            "finite_pair_count": summary.finite_pair_count,
            "finite_degrees": list(summary.finite_degrees),
            "classification": [
                {
                    "first": _signature_entry(row.signature_pair[0]),
                    "second": _signature_entry(row.signature_pair[1]),
                    "degree": row.degree,
                    "count": row.count,
                }
                for row in rows
            ],
        },
    }
    lines = [
        f"conic pair scan on BlowupP2({args.rank})",
        f"classes: {summary.class_count}",
        f"pairs: {summary.pair_count}",
        f"max degree: {summary.max_degree}",
        f"degree bound: {max_degree_bound(args.rank)}",
        f"hodge bound holds: {'yes' if summary.hodge_holds else 'no'}",
        f"finite pairs: {summary.finite_pair_count}",
        "finite degrees: " + (",".join(map(str, summary.finite_degrees)) or "none"),
    ]
    if rows:
        lines.append("finite pair classes (first x second, degree, count):")
        lines += [
            f"{row.signature_pair[0]} x {row.signature_pair[1]}"
            f"  degree {row.degree}  count {row.count}"
            for row in rows
        ]
    else:
        lines.append("no finite pairs")
    _emit(args, payload, lines)
    return 0


# --- cones -------------------------------------------------------------------

def _cmd_cones(args) -> int:
    if args.kind == "blowup":
        model = SurfaceModel.blowup_p2(args.rank)
    else:
        model = SurfaceModel.product_p1(args.rank)
    report = surface_cone_report(model)
    nef_gens = report.nef._generators  # None when kept lazy on purpose
    result = {
        "model": {"kind": model.kind, "size": model.size},
        "basis": list(model.basis_labels),
        "picard_number": report.picard_number,
        "equal": report.equal,
        "mori_simplicial": report.mori_simplicial,
        "psef_generators": sorted(list(g) for g in report.psef.rays()),
        "nef_facet_normals": sorted(list(n) for n in report.nef.facet_normals()),
        "nef_generators": (sorted(list(g) for g in nef_gens)
                           if nef_gens is not None else None),
    }
    payload = {
        "command": "cones",
        "params": {"kind": args.kind, "rank": args.rank},
        "result": result,
    }
    lines = [
        f"cone report for {model.kind}({model.size})",
        f"picard number: {report.picard_number}",
        f"nef equals psef: {'yes' if report.equal else 'no'}",
        f"mori cone simplicial: {'yes' if report.mori_simplicial else 'no'}",
        "psef generators: "
        + ", ".join(str(DivisorClass(model, g)) for g in report.psef.rays()),
        "nef facet normals: "
        + ", ".join(str(tuple(n)) for n in sorted(report.nef.facet_normals())),
    ]
    if nef_gens is not None:
        lines.append("nef generators: "
                     + ", ".join(str(DivisorClass(model, g))
                                 for g in sorted(nef_gens)))
    else:
        lines.append("nef generators: not materialized at this rank")
    _emit(args, payload, lines)
    return 0


# --- cover -------------------------------------------------------------------

def _parse_branch(text: str) -> list[int]:
    try:
        return [int(tok.strip()) for tok in text.split(",") if tok.strip() != ""]
    except ValueError:
        raise ValueError(f"branch type {text!r} is not a comma-separated "
                         f"list of integers") from None


def _cmd_cover(args) -> int:
    spec = DoubleCoverSpec.of(_parse_branch(args.branch))
    rho = expected_picard_number(spec)
    payload = {
        "command": "cover",
        "params": {"branch_type": list(spec.branch_type)},
        "result": {
            "n": spec.n,
            "branch_type": list(spec.branch_type),
            "branch_divisor_type": [2 * d for d in spec.branch_type],
            "is_fano": is_fano(spec),
            "anticanonical_power": anticanonical_power(spec),
            "expected_picard_number": rho,
        },
    }
    lines = [
        f"double cover of the product of {spec.n} lines, "
        f"branch type {tuple(spec.branch_type)}",
        f"branch divisor class: {tuple(2 * d for d in spec.branch_type)}",
        f"fano: {'yes' if is_fano(spec) else 'no'}",
        f"anticanonical power: {anticanonical_power(spec)}",
        f"expected picard number: {rho if rho is not None else 'not determined'}",
    ]
    _emit(args, payload, lines)
    return 0


# --- singular ----------------------------------------------------------------

def _parse_point(text: str) -> ProductPoint:
    pairs = []
    for tok in text.split(","):
        parts = tok.strip().split(":")
        if len(parts) != 2:
            raise ValueError(f"coordinate pair {tok!r} must look like a:b")
        entries = []
        for part in parts:
            part = part.strip()
            if not COEFF_PATTERN.match(part):
                raise ValueError(f"coordinate {part!r} is not an exact "
                                 f"integer or fraction")
            entries.append(Fraction(part))
        pairs.append(tuple(entries))
    return ProductPoint.of(pairs)


def _load_poly(path: str) -> MultiHomogPoly:
    try:
        with open(path) as f:
            obj = json.load(f)
    except OSError as exc:
        raise ValueError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path} is not valid JSON: {exc}") from None
    return poly_from_json_dict(obj)


def _cmd_singular(args) -> int:
    poly = _load_poly(args.input)
    point = _parse_point(args.at)
    singular = cover_singular_at(poly, point)  # ValueError off the branch
    payload = {
        "command": "singular",
        "params": {"input": args.input, "at": args.at},
        "result": {
            "point": [[str(a), str(b)] for a, b in point.pairs],
            "multidegree": list(poly.multidegree),
            "singular": singular,
        },
    }
    rendered_pt = " x ".join(f"({a}:{b})" for a, b in point.pairs)
    lines = [
        f"point {rendered_pt} lies on the branch divisor",
        f"cover singular above the point: {'yes' if singular else 'no'}",
    ]
    _emit(args, payload, lines)
    return 0


# --- verify ------------------------------------------------------------------

@dataclass(frozen=True)
class VerificationReport:
    lemma_id: str
    passed: bool
    details: tuple[dict, ...]


def _report(lemma_id: str, details: list[dict]) -> VerificationReport:
    details = sorted(details, key=lambda d: d["case"])
    passed = all(d["expected"] == d["got"] for d in details)
    return VerificationReport(lemma_id, passed, tuple(details))


def _detail(case: str, expected, got) -> dict:
    return {"case": case, "expected": expected, "got": got}


def _suite_deg2_pairs() -> VerificationReport:
    # ruling analysis on the blow-up at 7 points: partners of c1 = H - E1
    model = SurfaceModel.blowup_p2(7)
    c1 = DivisorClass.from_curve(model, 1, [1])
    finite = []
    for c2 in enumerate_conic(7):
        if c2 == c1:
            continue
        rep = analyze_pair(FibrationPair(model, c1, c2))
        if rep.is_finite:
            finite.append((c2, rep.degree))
    by_sig: dict = {}
    for c2, degree in finite:
        sig = orbit_signature(c2)
        by_sig.setdefault((sig.degree, sig.multiplicities), []).append((c2, degree))
    details = [
        _detail("finite partner signatures",
                [[3, [2, 1, 1, 1, 1, 1, 0]], [4, [2, 2, 2, 1, 1, 1, 1]],
                 [5, [2, 2, 2, 2, 2, 2, 1]]],
                sorted([d, list(m)] for d, m in by_sig)),
        _detail("finite partner count by degree: cubics", 6,
                len(by_sig.get((3, (2, 1, 1, 1, 1, 1, 0)), []))),
        _detail("finite partner count by degree: quartics", 20,
                len(by_sig.get((4, (2, 2, 2, 1, 1, 1, 1)), []))),
        _detail("finite partner count by degree: quintics", 7,
                len(by_sig.get((5, (2, 2, 2, 2, 2, 2, 1)), []))),
        _detail("cubic partner degrees", [3],
                sorted({d for _, d in by_sig.get((3, (2, 1, 1, 1, 1, 1, 0)), [])})),
        _detail("quartic partner degrees", [3],
                sorted({d for _, d in by_sig.get((4, (2, 2, 2, 1, 1, 1, 1)), [])})),
        _detail("quintic partner degrees", [3, 4],
                sorted({d for _, d in by_sig.get((5, (2, 2, 2, 2, 2, 2, 1)), [])})),
        _detail("quintic degree 4 exactly when E1-coefficient is 1", True,
                all((d == 4) == (c2.multiplicities()[0] == 1)
                    for c2, d in by_sig.get((5, (2, 2, 2, 2, 2, 2, 1)), []))),
    ]
    # excluded families: each member shares a contracted curve with the ruling
    line_p1p2 = DivisorClass.from_curve(model, 1, [1, 1])
    e6 = DivisorClass.from_curve(model, 0, [0, 0, 0, 0, 0, -1])
    excluded = [
        ("excluded: lines through p2 contract the line through p1 p2",
         DivisorClass.from_curve(model, 1, [0, 1]), line_p1p2),
        ("excluded: conics through p1..p4 contract E6",
         DivisorClass.from_curve(model, 2, [1, 1, 1, 1]), e6),
        ("excluded: cubics double at p1 contract the line through p1 p2",
         DivisorClass.from_curve(model, 3, [2, 1, 1, 1, 1, 1]), line_p1p2),
        ("excluded: quartics double at p1 p2 p3 contract the line through p1 p2",
         DivisorClass.from_curve(model, 4, [2, 2, 2, 1, 1, 1, 1]), line_p1p2),
    ]
    for case, c2, named in excluded:
        rep = analyze_pair(FibrationPair(model, c1, c2))
        details.append(_detail(case, True,
                               (not rep.is_finite)
                               and named in rep.common_contracted))
    return _report("deg2-pairs", details)


def _suite_quadric_target() -> VerificationReport:
    details = []
    for r in range(1, 9):
        summary = scan_conic_pairs(r)
        details.append(_detail(f"rank {r} finite pairs exist", r in (5, 7, 8),
                               summary.finite_pair_count > 0))
    five = scan_conic_pairs(5)
    details.append(_detail("rank 5 finite degrees", [2],
                           list(five.finite_degrees)))
    details.append(_detail("rank 5 degree bound", 2, max_degree_bound(5)))
    return _report("quadric-target", details)


def _suite_hodge_bound() -> VerificationReport:
    details = []
    for r in range(1, 9):
        summary = scan_conic_pairs(r)
        details.append(_detail(f"rank {r} hodge bound holds", True,
                               summary.hodge_holds))
        finite_max = max(summary.finite_degrees, default=0)
        details.append(_detail(f"rank {r} finite degrees within bound", True,
                               finite_max <= max_degree_bound(r)))
    return _report("hodge-bound", details)


def _suite_cone_dp() -> VerificationReport:
    details = []
    models = [(f"BlowupP2({r})", SurfaceModel.blowup_p2(r), r == 0)
              for r in range(9)]
    models.append(("ProductP1(2)", SurfaceModel.product_p1(2), True))
    for name, model, want_equal in models:
        report = surface_cone_report(model)
        details.append(_detail(f"nef equals psef on {name}", want_equal,
                               report.equal))
    for r in range(1, 9):
        model = SurfaceModel.blowup_p2(r)
        report = surface_cone_report(model)
        mk = -canonical_class(model)
        details.append(_detail(
            f"BlowupP2({r}) -K pairs positively with every psef generator",
            True,
            all(pairing(mk, DivisorClass(model, g)) > 0
                for g in report.psef.rays())))
        e1 = tuple(1 if i == 1 else 0 for i in range(model.rank))
        details.append(_detail(
            f"BlowupP2({r}) E1 lies in psef but not in nef", True,
            report.psef.contains(e1, via="lp")
            and not report.nef.contains(e1)))
    return _report("cone-dp", details)


def _suite_double_cover_k() -> VerificationReport:
    details = [
        _detail("surface cover of type (2,2)", 4,
                anticanonical_power(DoubleCoverSpec.of([1, 1]))),
        _detail("threefold cover of type (2,2,2)", 12,
                anticanonical_power(DoubleCoverSpec.of([1, 1, 1]))),
        _detail("unbranched-type surface cover (0,0)", 16,
                anticanonical_power(DoubleCoverSpec.of([0, 0]))),
    ]
    for n in range(1, 7):
        details.append(_detail(f"all-ones type, n={n}", 2 * factorial(n),
                               anticanonical_power(DoubleCoverSpec.of([1] * n))))
    from itertools import product as iproduct
    agree = all(
        is_fano(DoubleCoverSpec.of(list(ds)))
        == (anticanonical_power(DoubleCoverSpec.of(list(ds))) > 0)
        for n in range(1, 6) for ds in iproduct((0, 1, 2), repeat=n))
    details.append(_detail(
        "fano iff positive anticanonical power on {0,1,2}^n, n <= 5", True,
        agree))
    return _report("double-cover-k", details)


_BRANCH_FIXTURE = {
    (2, 0, 2, 0, 0, 2): 1,
    (0, 2, 0, 2, 2, 0): 1,
    (1, 1, 0, 2, 1, 1): 1,
    (0, 2, 1, 1, 1, 1): 1,
}


def _suite_branch_singular() -> VerificationReport:
    poly = MultiHomogPoly(3, _BRANCH_FIXTURE)
    marked = ProductPoint.of([(0, 1), (0, 1), (0, 1)])
    details = [
        _detail("fixture vanishes at the marked point", "0",
                str(poly.evaluate(marked))),
        _detail("fixture singular at the marked point", True,
                cover_singular_at(poly, marked)),
        _detail("every partial vanishes at the marked point", True,
                all(poly.partial_derivative(v).evaluate(marked) == 0
                    for v in range(6))),
        _detail("smooth control point on a (2,2) branch", False,
                cover_singular_at(MultiHomogPoly(2, {(1, 1, 1, 1): 1}),
                                  ProductPoint.of([(0, 1), (1, 1)]))),
        _detail("non-reduced square branch is singular on its support", True,
                cover_singular_at(MultiHomogPoly(2, {(2, 0, 2, 0): 1}),
                                  ProductPoint.of([(0, 1), (1, 0)]))),
    ]
    rng = random.Random(1729)
    lams = [Fraction(2), Fraction(3), Fraction(1, 2), Fraction(-1),
            Fraction(5, 3), Fraction(-2, 7)]
    ok = True
    for _ in range(50):
        pairs = []
        for _ in range(3):
            a, b = rng.randint(-4, 4), rng.randint(-4, 4)
            if a == 0 and b == 0:
                b = 1
            pairs.append((a, b))
        pt = ProductPoint.of(pairs)
        scaled = pt
        chosen = [rng.choice(lams) for _ in range(3)]
        for k, lam in enumerate(chosen):
            scaled = scaled.scaled(k, lam)
        for v in range(6):
            d = poly.partial_derivative(v)
            factor = Fraction(1)
            for lam, m in zip(chosen, d.multidegree):
                factor *= lam ** m
            if d.evaluate(scaled) != factor * d.evaluate(pt):
                ok = False
    details.append(_detail(
        "gradient rescaling law on 50 random points", True, ok))
    return _report("branch-singular", details)


def _suite_fiber_counts() -> VerificationReport:
    details = []
    for r in range(1, 9):
        family = enumerate_exceptional(r)
        counts = {len(reducible_fibers(c, family)) for c in enumerate_conic(r)}
        details.append(_detail(f"rank {r} reducible fiber count", [r - 1],
                               sorted(counts)))
    # quartic pencil on the blow-up at 8 points: its 7 decompositions
    model = SurfaceModel.blowup_p2(8)
    pencil = DivisorClass.from_curve(model, 4, [0, 1, 1, 1, 1, 2, 2, 2])
    fibers = reducible_fibers(pencil, enumerate_exceptional(8))
    got = sorted(sorted([list(f.components[0].coords),
                         list(f.components[1].coords)]) for f in fibers)
    expected_pairs = [
        # E1 with the residual quartic
        [[0, 1, 0, 0, 0, 0, 0, 0, 0], [4, -1, -1, -1, -1, -1, -2, -2, -2]],
        # line through two of p6 p7 p8 with a cubic double at the third
        [[1, 0, 0, 0, 0, 0, 0, -1, -1], [3, 0, -1, -1, -1, -1, -2, -1, -1]],
        [[1, 0, 0, 0, 0, 0, -1, 0, -1], [3, 0, -1, -1, -1, -1, -1, -2, -1]],
        [[1, 0, 0, 0, 0, 0, -1, -1, 0], [3, 0, -1, -1, -1, -1, -1, -1, -2]],
        # two conics splitting p2..p5 between them, both through p6 p7 p8
        [[2, 0, -1, -1, 0, 0, -1, -1, -1], [2, 0, 0, 0, -1, -1, -1, -1, -1]],
        [[2, 0, -1, 0, -1, 0, -1, -1, -1], [2, 0, 0, -1, 0, -1, -1, -1, -1]],
        [[2, 0, -1, 0, 0, -1, -1, -1, -1], [2, 0, 0, -1, -1, 0, -1, -1, -1]],
    ]
    details.append(_detail("quartic pencil fiber decompositions",
                           sorted(expected_pairs), got))
    return _report("fiber-counts", details)


_SUITES: dict[str, Callable[[], VerificationReport]] = {
    "deg2-pairs": _suite_deg2_pairs,
    "quadric-target": _suite_quadric_target,
    "hodge-bound": _suite_hodge_bound,
    "cone-dp": _suite_cone_dp,
    "double-cover-k": _suite_double_cover_k,
    "branch-singular": _suite_branch_singular,
    "fiber-counts": _suite_fiber_counts,
}


def _cmd_verify(args) -> int:
    report = _SUITES[args.lemma_id]()
    payload = {
        "command": "verify",
        "params": {"lemma_id": report.lemma_id},
        "result": {
            "lemma_id": report.lemma_id,
            "passed": report.passed,
            "details": list(report.details),
        },
    }
    lines = [f"{report.lemma_id}: {'PASS' if report.passed else 'FAIL'}"]
    for d in report.details:
        mark = "ok" if d["expected"] == d["got"] else "MISMATCH"
        lines.append(f"  [{mark}] {d['case']}: expected {d['expected']}, "
                     f"got {d['got']}")
    _emit(args, payload, lines)
    return 0 if report.passed else 1


# --- parser ------------------------------------------------------------------

def _add_io_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=["json", "text"], default="text",
                   help="output format (default text)")
    p.add_argument("--out", metavar="PATH",
                   help="write output to a file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="picardkit",
        description="Exact lattice, cone, and double-cover computations "
                    "for blow-ups of the plane and products of lines.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate",
                       help="list exceptional or conic classes on a blow-up")
    p.add_argument("kind", choices=["exceptional", "conic"])
    p.add_argument("--rank", "-r", type=int, required=True,
                   help="number of blown-up points")
    _add_io_flags(p)
    p.set_defaults(func=_cmd_enumerate)

    p = sub.add_parser("pairs",
                       help="scan and classify finite conic-class pairs")
    p.add_argument("--rank", "-r", type=int, required=True)
    _add_io_flags(p)
    p.set_defaults(func=_cmd_pairs)

    p = sub.add_parser("cones", help="nef/psef/mori cone report for a model")
    p.add_argument("kind", choices=["blowup", "product"])
    p.add_argument("--rank", "-r", type=int, required=True,
                   help="blown-up points, or number of line factors")
    _add_io_flags(p)
    p.set_defaults(func=_cmd_cones)

    p = sub.add_parser("cover",
                       help="invariants of a double cover of a product of lines")
    p.add_argument("branch", metavar="D1,D2,...",
                   help="comma-separated branch type, e.g. 1,1,1")
    _add_io_flags(p)
    p.set_defaults(func=_cmd_cover)

    p = sub.add_parser("singular",
                       help="singularity of a double cover above a point")
    p.add_argument("--input", required=True, metavar="POLY_JSON",
                   help="branch polynomial as a JSON document")
    p.add_argument("--at", required=True, metavar="A0:B0,A1:B1,...",
                   help="coordinate pairs of the point, exact rationals")
    _add_io_flags(p)
    p.set_defaults(func=_cmd_singular)

    p = sub.add_parser("verify", help="run a named verification suite")
    p.add_argument("lemma_id", choices=sorted(_SUITES))
    _add_io_flags(p)
    p.set_defaults(func=_cmd_verify)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        parser.error(str(exc))  # prints usage to stderr and exits 2
