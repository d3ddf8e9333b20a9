"""Command line entry point: ``tautring <subcommand> ...``.

Exit status: 0 on success, 1 if a verification check fails, 2 on usage errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Sequence

from .errors import UsageError
from .exact import Poly, render_rational
from .family import FamilyPresentation, associativity_obstructions, presentation
from .kappa import kappa
from .phi import phi
from .relations import l_polynomial, labels, phi_relation_kernel, signature_relation
from .verify import CHECKS, report_json, run_check, verify_all

FORMATS = ("text", "json", "csv")


def _csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerows(rows)
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def poly_rows(p: Poly) -> list[list[str]]:
    rows = [["coeff", *p.space.names]]
    rows += [[render_rational(c), *map(str, e)] for e, c in p.items()]
    return rows


def emit_poly(p: Poly, fmt: str, wrapper=None) -> str:
    if fmt == "json":
        return _json(wrapper if wrapper is not None else p.to_json())
    if fmt == "csv":
        return _csv(poly_rows(p))
    return p.render() + "\n"


# -- subcommands ------------------------------------------------------------


def cmd_phi(args) -> tuple[str, int]:
    if args.a < 0 or args.b < 0:
        raise UsageError("phi indices must be nonnegative")
    return emit_poly(phi(args.a, args.b), args.format), 0


def cmd_kappa(args) -> tuple[str, int]:
    if args.choice_i is not None and args.b % 2 == 0:
        raise UsageError("--choice-i only applies to odd powers of e")
    expr = kappa(args.n, args.a, args.b, args.choice_i)
    return emit_poly(expr.value, args.format, expr.to_json()), 0


def _ring_rows(pres: FamilyPresentation, pairs) -> list[list[str]]:
    head = ["product", "c0", *(f"x{i}" for i in range(1, pres.n + 1)), "nu"]
    return [head] + [[name, *(c.render() for c in u.components())] for name, u in pairs]


def cmd_ring(args) -> tuple[str, int]:
    if args.n < 1:
        raise UsageError("n must be at least 1")
    pres = FamilyPresentation.free(args.n) if args.mode == "free" else presentation(args.n)
    if args.obstructions:
        pairs = associativity_obstructions(pres)
        key = "obstructions"
    else:
        gens = pres.generators()
        pairs = [
            (f"{na}*{nb}", u * v)
            for k, (na, u) in enumerate(gens)
            for nb, v in gens[k:]
        ]
        key = "table"
    if args.format == "json":
        body = {
            "n": pres.n,
            "mode": pres.mode,
            "vars": pres.space.to_json(),
            key: [{"product": name, "value": u.to_json()} for name, u in pairs],
        }
        return _json(body), 0
    if args.format == "csv":
        return _csv(_ring_rows(pres, pairs)), 0
    lines = [f"{name} = {u.render()}" for name, u in pairs]
    return "\n".join(lines) + "\n", 0


def cmd_relations(args) -> tuple[str, int]:
    d = args.degree
    if args.source == "phi":
        rels = phi_relation_kernel(d)
    else:
        rels = [signature_relation(d)]
    if args.format == "json":
        return _json({"d": d, "source": args.source, "relations": [r.to_json() for r in rels]}), 0
    if args.format == "csv":
        return _csv([labels(d)] + [list(r.coeffs) for r in rels]), 0
    if not rels:
        return f"no relations in degree {d}\n", 0
    return "".join(r.render() + "\n" for r in rels), 0


def cmd_lgenus(args) -> tuple[str, int]:
    p = l_polynomial(args.k)
    return emit_poly(p, args.format, {"k": args.k, "poly": p.to_json()}), 0


def cmd_verify(args) -> tuple[str, int]:
    if args.check and args.all:
        raise UsageError("give either --all or --check, not both")
    if args.max_degree < 2:
        raise UsageError("--max-degree must be at least 2")
    if args.check:
        checks = [run_check(cid, args.max_degree) for cid in sorted(set(args.check))]
    else:
        checks = verify_all(args.max_degree)
    failed = sum(not c.passed for c in checks)
    if args.format == "json":
        out = _json(report_json(checks))
    elif args.format == "csv":
        rows = [["id", "criterion", "passed", "detail", "residual"]]
        rows += [[c.id, c.criterion or "", c.passed, c.detail, c.residual or ""] for c in checks]
        out = _csv(rows)
    else:
        lines = [f"{'PASS' if c.passed else 'FAIL'}  {c.id}: {c.detail}" for c in checks]
        for c in checks:
            if c.residual:
                lines.append(f"  {c.id} residual: {c.residual}")
        lines.append(f"{len(checks) - failed}/{len(checks)} checks passed")
        out = "\n".join(lines) + "\n"
    return out, 1 if failed else 0


# -- parser ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default=argparse.SUPPRESS)
    common.add_argument("--output", metavar="PATH", default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(
        prog="tautring",
        description="Exact tautological classes of families of definite 4-manifolds.",
    )
    parser.add_argument("--format", choices=FORMATS, default="text")
    parser.add_argument("--output", metavar="PATH", default=None, help="write here instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("phi", parents=[common], help="the polynomial phi_{a,b}(x, y)")
    p.add_argument("-a", type=int, required=True)
    p.add_argument("-b", type=int, required=True)
    p.set_defaults(func=cmd_phi)

    p = sub.add_parser("kappa", parents=[common], help="kappa_{p1^a e^b} in the D_ij")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-a", type=int, required=True)
    p.add_argument("-b", type=int, required=True)
    p.add_argument("--choice-i", type=int, default=None, help="choice index for odd b (default 1)")
    p.set_defaults(func=cmd_kappa)

    p = sub.add_parser("ring", parents=[common], help="product table or associativity residuals")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--mode", choices=("free", "constrained"), default="constrained")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--table", action="store_true", help="products of generators (default)")
    g.add_argument("--obstructions", action="store_true", help="(uv)w - u(vw) for generator triples")
    p.set_defaults(func=cmd_ring)

    p = sub.add_parser("relations", parents=[common], help="linear relations among kappa classes")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--source", choices=("phi", "signature"), default="phi")
    p.set_defaults(func=cmd_relations)

    p = sub.add_parser("lgenus", parents=[common], help="L-polynomial in p1, p2")
    p.add_argument("-k", type=int, required=True)
    p.set_defaults(func=cmd_lgenus)

    p = sub.add_parser("verify", parents=[common], help="run the verification suite")
    p.add_argument("--all", action="store_true", help="run every check (default)")
    p.add_argument("--check", action="append", metavar="ID", choices=sorted(CHECKS))
    p.add_argument("--max-degree", type=int, default=12)
    p.set_defaults(func=cmd_verify)
    return parser


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        text, code = args.func(args)
    except UsageError as exc:
        print(f"tautring: error: {exc}", file=stderr)
        return 2
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
