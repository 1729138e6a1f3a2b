"""Command-line interface.

Subcommands cover the whole engine: q-binomials, normalization and
differentiation of expressions, the property suites, the tensor-product
exponent sweep, the flip isomorphism checks, the plane constraint story,
the mechanical rederivation of the line rules, and calculus export.

Exit codes: 0 success / all checked properties hold; 1 a checked property
failed (the report names a witness); 2 usage, parse or file errors.
Reports are deterministic: identical argv and seed give identical bytes.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from fractions import Fraction

from .algebra import (
    AlgebraError,
    Element,
    NonTerminatingError,
    check_order_independence,
)
from .calculi import (
    Calculus,
    CalculusError,
    DerivationError,
    builtin_calculus,
    builtin_names,
    check_not_anyonic,
    derive_line_relations,
    plane_constraints,
    plane_fragment,
)
from .cyclotomic import (
    CyclotomicError,
    RootExponent,
    gaussian_binomial_poly,
    poly_at_root,
)
from .differential import (
    verify_leibniz,
    verify_nilpotency,
    verify_star_differential,
    verify_star_involution,
)
from .expressions import (
    DocumentError,
    ParseError,
    cyc_to_json,
    dump_calculus,
    element_to_json,
    load_calculus_file,
    parse_element,
    poly_to_json,
    render_cyc,
    render_element,
    render_rule,
)
from .nogo import solve_nogo
from .sampling import (
    free_graded_context,
    random_element,
    random_homogeneous_element,
    random_tensor_element,
)
from .tensor import verify_flip_homomorphism, verify_flip_roundtrip

SCHEMA_VERSION = 1

ROOT_CHOICES = {"j": RootExponent(3, 1), "jbar": RootExponent(3, 2)}


class CLIError(Exception):
    pass


def _resolve_calculus(spec: str) -> Calculus:
    if spec in builtin_names():
        return builtin_calculus(spec)
    if os.path.exists(spec):
        return load_calculus_file(spec)
    raise CLIError(
        f"unknown calculus {spec!r}: not a built-in "
        f"({', '.join(builtin_names())}) and not a file"
    )


def _emit(args, lines, payload) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        for line in lines:
            print(line)


def _payload(command: str, **fields) -> dict:
    out = {"schema_version": SCHEMA_VERSION, "command": command}
    out.update(fields)
    return out


def _report_json(report) -> dict:
    return {
        "name": report.name,
        "checked": report.checked,
        "ok": report.ok,
        "failures": [
            {"label": f.label, "detail": f.detail} for f in report.failures
        ],
    }


def _order_report_json(report) -> dict:
    return {
        "name": "order-independence",
        "checked": report.checked,
        "trials": report.trials,
        "ok": report.ok,
        "discrepancies": len(report.discrepancies),
    }


def _poly_text(poly) -> str:
    pairs = [
        (Fraction(c), i) for i, c in reversed(list(enumerate(poly.coeffs))) if c != 0
    ]
    if not pairs:
        return "0"
    chunks = []
    for i, (c, p) in enumerate(pairs):
        neg = c < 0
        mag = -c if neg else c
        if p == 0:
            body = str(mag)
        else:
            qp = "q" if p == 1 else f"q^{p}"
            body = qp if mag == 1 else f"{mag} {qp}"
        if i == 0:
            chunks.append("-" + body if neg else body)
        else:
            chunks.append(("- " if neg else "+ ") + body)
    return " ".join(chunks)


# -- handlers -------------------------------------------------------------------


def cmd_qbinom(args) -> int:
    root = RootExponent(args.N, args.root)
    poly = gaussian_binomial_poly(args.top, args.bot)
    value = poly_at_root(poly, root)
    lines = [
        f"[{args.top} choose {args.bot}]_q = {_poly_text(poly)}",
        f"value at zeta_{args.N}^{root.k}: {render_cyc(value)}",
    ]
    payload = _payload(
        "qbinom",
        N=args.N,
        top=args.top,
        bot=args.bot,
        root=root.k,
        polynomial=poly_to_json(poly),
        value=cyc_to_json(value),
    )
    _emit(args, lines, payload)
    return 0


def cmd_reduce(args) -> int:
    calc = _resolve_calculus(args.calc)
    element = parse_element(args.expr, calc)
    normal = calc.normalize(element)
    text = render_element(normal, calc.root)
    payload = _payload(
        "reduce",
        calculus=calc.label,
        input=args.expr,
        element=element_to_json(normal, calc.root),
        rendered=text,
    )
    _emit(args, [text], payload)
    return 0


def cmd_d(args) -> int:
    calc = _resolve_calculus(args.calc)
    if args.times < 0:
        raise CLIError("--times must be >= 0")
    element = parse_element(args.expr, calc)
    result = calc.d(element, args.times)
    text = render_element(result, calc.root)
    payload = _payload(
        "d",
        calculus=calc.label,
        input=args.expr,
        times=args.times,
        element=element_to_json(result, calc.root),
        rendered=text,
    )
    _emit(args, [text], payload)
    return 0


def cmd_check(args) -> int:
    calc = _resolve_calculus(args.calc)
    if args.samples < 1:
        raise CLIError("--samples must be >= 1")
    rng = random.Random(args.seed)
    u = calc.universe
    ds = calc.differential
    n = args.samples

    elements = [random_element(u, rng, terms=3, max_len=5) for _ in range(n)]
    pairs = []
    guard = 0
    while len(pairs) < n and guard < 40 * n:
        guard += 1
        a = random_homogeneous_element(u, rng, terms=2, max_len=4)
        if a.is_zero():
            continue
        pairs.append((a, random_element(u, rng, terms=2, max_len=4)))
    star_samples = []
    guard = 0
    while len(star_samples) < n and guard < 40 * n:
        guard += 1
        e = random_homogeneous_element(u, rng, terms=2, max_len=4)
        if not e.is_zero():
            star_samples.append(e)

    reports = [
        verify_nilpotency(ds, calc.modulus, elements),
        verify_leibniz(ds, pairs),
    ]
    skipped = []
    if calc.star_table is not None:
        reports.append(verify_star_involution(ds, calc.star_table, elements))
        reports.append(verify_star_differential(ds, calc.star_table, star_samples))
    else:
        skipped.append("star suites: skipped (no star table)")
    order = check_order_independence(
        calc.rules, elements[: min(n, 20)], trials=3, seed=args.seed
    )

    ok = all(r.ok for r in reports) and order.ok
    lines = [r.summary() for r in reports] + skipped + [order.summary()]
    lines.append("all suites passed" if ok else "FAILED")
    payload = _payload(
        "check",
        calculus=calc.label,
        samples=n,
        seed=args.seed,
        suites=[_report_json(r) for r in reports] + [_order_report_json(order)],
        ok=ok,
    )
    _emit(args, lines, payload)
    return 0 if ok else 1


def _nogo_result_json(result) -> dict:
    return {
        "N": result.modulus,
        "extended_sweep": result.extended,
        "solutions": [list(t) for t in result.solutions],
        "admissible": result.admissible,
        "certificates": [
            {
                "q": c.q,
                "p": c.p,
                "s": c.s,
                "accepted": c.accepted,
                "violating_profile": list(c.violating_profile)
                if c.violating_profile is not None
                else None,
                "violating_column": c.violating_column,
            }
            for c in result.certificates
        ],
        "notes": list(result.notes),
    }


def cmd_nogo(args) -> int:
    if args.max_N is not None and args.max_N < args.N:
        raise CLIError("--max-N must be >= --N")
    moduli = [args.N] if args.max_N is None else list(range(args.N, args.max_N + 1))
    results = [solve_nogo(m, extended_sweep=args.extended_sweep) for m in moduli]

    lines = []
    for r in results:
        if r.solutions:
            sols = ", ".join(str(t) for t in r.solutions)
            lines.append(f"N={r.modulus}: admissible (q, p, s) triples: {sols}")
        else:
            lines.append(f"N={r.modulus}: no admissible (q, p, s) triples")
        rejected = [c for c in r.certificates if not c.accepted]
        lines.append(
            f"  checked {len(r.certificates)} triples, rejected {len(rejected)}"
        )
        if rejected:
            c = rejected[0]
            lines.append(
                f"  first rejection: (q, p, s) = ({c.q}, {c.p}, {c.s}) violates "
                f"column {c.violating_column} at grade profile {c.violating_profile}"
            )
    lines.append("notes:")
    for note in results[0].notes:
        lines.append(f"  - {note}")

    if len(results) == 1:
        payload = _payload("nogo", **_nogo_result_json(results[0]))
    else:
        payload = _payload("nogo", results=[_nogo_result_json(r) for r in results])
    _emit(args, lines, payload)
    return 0


def cmd_flip_check(args) -> int:
    if args.samples < 1:
        raise CLIError("--samples must be >= 1")
    ctx = free_graded_context(args.N, args.braiding)
    rng = random.Random(args.seed)
    us = [random_tensor_element(ctx, rng, terms=2, max_len=3) for _ in range(args.samples)]
    vs = [random_tensor_element(ctx, rng, terms=2, max_len=3) for _ in range(args.samples)]
    hom = verify_flip_homomorphism(ctx, list(zip(us, vs)))
    rt = verify_flip_roundtrip(ctx, us)
    ok = hom.ok and rt.ok
    lines = [hom.summary(), rt.summary(), "all suites passed" if ok else "FAILED"]
    payload = _payload(
        "flip-check",
        N=args.N,
        braiding=args.braiding % args.N,
        samples=args.samples,
        seed=args.seed,
        suites=[_report_json(hom), _report_json(rt)],
        ok=ok,
    )
    _emit(args, lines, payload)
    return 0 if ok else 1


def cmd_plane_check(args) -> int:
    root = ROOT_CHOICES[args.root]
    constraints = plane_constraints(root)
    verdict = check_not_anyonic(root)
    frag = plane_fragment(root)
    d2xy = frag.d(Element.word(frag.universe, ("x", "y")), 2)

    lines = ["constraints from differentiating the degree-0 relations:"]
    for c in constraints:
        lines.append(
            f"  [{c.source}]  {render_element(c.lhs, root)} = {render_element(c.rhs, root)}"
        )
    lines.append(f"d^2 applied to x y: {render_element(d2xy, root)}")
    lines.append(verdict.summary())
    payload = _payload(
        "plane-check",
        root=args.root,
        constraints=[
            {
                "source": c.source,
                "lhs": element_to_json(c.lhs, root),
                "rhs": element_to_json(c.rhs, root),
            }
            for c in constraints
        ],
        d2_xy=element_to_json(d2xy, root),
        per_constraint=[list(s) for s in verdict.per_constraint],
        solutions=list(verdict.solutions),
        realizable=verdict.realizable,
    )
    _emit(args, lines, payload)
    return 0


def cmd_derive_line(args) -> int:
    root = ROOT_CHOICES[args.root]
    try:
        derivation = derive_line_relations(root)
    except DerivationError as exc:
        print(f"derivation failed: {exc}", file=sys.stderr)
        return 1
    lines = []
    for i, step in enumerate(derivation.steps, 1):
        lines.append(f"step {i}: {step.description}")
        if step.extracted is not None:
            lines.append(f"  rule {step.extracted.name}: {render_rule(step.extracted, root)}")
    lines.append(f"coefficient forcing the cube relation: {render_cyc(derivation.cube_coefficient)}")
    lines.append(
        f"exchange coefficient: {render_cyc(derivation.exchange_coefficient, root)}"
    )
    match = "yes" if derivation.matches_shipped else "NO"
    lines.append(f"derived rules match the shipped calculus: {match}")
    payload = _payload(
        "derive-line",
        root=args.root,
        steps=[
            {
                "description": s.description,
                "rule": render_rule(s.extracted, root) if s.extracted else None,
                "rule_name": s.extracted.name if s.extracted else None,
            }
            for s in derivation.steps
        ],
        cube_coefficient=cyc_to_json(derivation.cube_coefficient),
        exchange_coefficient=cyc_to_json(derivation.exchange_coefficient, root),
        matches_shipped=derivation.matches_shipped,
    )
    _emit(args, lines, payload)
    return 0 if derivation.matches_shipped else 1


def cmd_export_calc(args) -> int:
    calc = _resolve_calculus(args.calc)
    document = dump_calculus(calc)
    payload = _payload("export-calc", calculus=calc.label, document=document)
    _emit(args, document.splitlines(), payload)
    return 0


# -- parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format", choices=("text", "json"), default="text", help="report format"
    )
    common.add_argument("--seed", type=int, default=0, help="sampling seed")

    parser = argparse.ArgumentParser(
        prog="qdga",
        description="Exact symbolic engine for graded differential calculi "
        "with N-nilpotent differentials and braided tensor products.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "qbinom", parents=[common], help="Gaussian binomial, polynomial and at a root"
    )
    p.add_argument("--N", type=int, required=True, help="root-of-unity order")
    p.add_argument("--top", type=int, required=True)
    p.add_argument("--bot", type=int, required=True)
    p.add_argument("--root", type=int, default=1, help="root exponent k (default 1)")

    p = sub.add_parser("reduce", parents=[common], help="normalize an expression")
    p.add_argument("--calc", required=True, help="built-in name or calculus file")
    p.add_argument("expr")

    p = sub.add_parser("d", parents=[common], help="apply the differential")
    p.add_argument("--calc", required=True)
    p.add_argument("--times", type=int, default=1)
    p.add_argument("expr")

    p = sub.add_parser("check", parents=[common], help="run the property suites")
    p.add_argument("--calc", required=True)
    p.add_argument("--samples", type=int, default=25)

    p = sub.add_parser("nogo", parents=[common], help="tensor-product exponent sweep")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--max-N", dest="max_N", type=int, default=None)
    p.add_argument("--extended-sweep", dest="extended_sweep", action="store_true")

    p = sub.add_parser("flip-check", parents=[common], help="flip isomorphism suites")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--braiding", type=int, required=True)
    p.add_argument("--samples", type=int, default=25)

    p = sub.add_parser("plane-check", parents=[common], help="plane constraints and the anyonic verdict")
    p.add_argument("--root", choices=("j", "jbar"), required=True)

    p = sub.add_parser("derive-line", parents=[common], help="rederive the line rules mechanically")
    p.add_argument("--root", choices=("j", "jbar"), required=True)

    p = sub.add_parser("export-calc", parents=[common], help="emit a calculus document")
    p.add_argument("--calc", required=True)
    return parser


_HANDLERS = {
    "qbinom": cmd_qbinom,
    "reduce": cmd_reduce,
    "d": cmd_d,
    "check": cmd_check,
    "nogo": cmd_nogo,
    "flip-check": cmd_flip_check,
    "plane-check": cmd_plane_check,
    "derive-line": cmd_derive_line,
    "export-calc": cmd_export_calc,
}


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except NonTerminatingError as exc:
        print(f"property failed: {exc}", file=sys.stderr)
        return 1
    except (ParseError, DocumentError, CLIError, CyclotomicError, CalculusError, AlgebraError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main(argv=None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
