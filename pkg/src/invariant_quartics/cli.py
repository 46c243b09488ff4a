"""Command-line front end.

Subcommands:
  groups list                 bundled groups with orders and classes
  invariants                  invariant subspaces of degree-d forms
  smooth                      smoothness verdict for one form
  pencil                      discriminant roots of a two-dimensional family
  verify-equivalence          check a projective change of coordinates
  reproduce-paper             recompute and diff the golden catalog

Exit codes: 0 success or match, 1 mismatch, 2 usage error, 3 bad input.
Set the environment variable INVARIANT_QUARTICS_DATA to load group files
(and optionally a catalog.json) from another directory.
"""

from __future__ import annotations

import argparse
import json
import sys
from math import lcm
from pathlib import Path

from . import gfp
from .cyclotomic import cyclotomic_field, embed_complex, prime_embeddings, scalar_to_expr
from .errors import ParseError, ToolkitError
from .expressions import parse_form, parse_scalar
from .forms import form_to_expr
from .linalg import ExactMatrix
from .registry import (
    DATA_DIR_ENV,
    GroupSpec,
    builtin_groups,
    group_order_closure,
    load_group_file,
    lookup,
)
from .reproduce import load_catalog, reproduce_paper
from .smoothness import (
    PencilQuery,
    VerdictPolicy,
    pencil_disc_poly_mod_p,
    smoothness_verdict,
    verdict_to_json,
    verify_equivalence_witness,
)
from .solver import invariant_subspaces, subspaces_to_json

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_BAD_INPUT = 3


def _dump(obj) -> str:
    # stable settings so parse-then-reserialize is byte-identical
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False)


def _sig6(s) -> str:
    z = embed_complex(s).mid
    if abs(z.imag) < 1e-12:
        return f"{z.real:.6g}"
    return f"{z.real:.6g}{z.imag:+.6g}i"


def _resolve_group(args) -> GroupSpec:
    if getattr(args, "file", None):
        return load_group_file(args.file)
    return lookup(args.group)


def cmd_groups_list(args) -> int:
    rows = []
    for spec in builtin_groups():
        order = group_order_closure(spec, cap=args.cap)
        rows.append(
            {
                "name": spec.name,
                "conductor": spec.conductor,
                "generators": len(spec.generators),
                "order": order,
                "class": spec.isomorphism_class or "?",
                "primitive": spec.primitive,
            }
        )
    if args.json:
        print(_dump({"groups": rows}))
        return EXIT_OK
    head = f"{'name':8} {'N':>4} {'gens':>4} {'order':>6}  {'class':20} primitive"
    print(head)
    print("-" * len(head))
    for r in rows:
        prim = "yes" if r["primitive"] else "no"
        print(
            f"{r['name']:8} {r['conductor']:>4} {r['generators']:>4} "
            f"{r['order']:>6}  {r['class']:20} {prim}"
        )
    return EXIT_OK


def cmd_invariants(args) -> int:
    spec = _resolve_group(args)
    subs = invariant_subspaces(spec, args.degree)
    payload = subspaces_to_json(spec, args.degree, subs)
    if args.classify:
        policy = VerdictPolicy(group=spec)
        for sub, rec in zip(subs, payload["subspaces"]):
            rec["verdicts"] = [
                verdict_to_json(smoothness_verdict(f, policy)) for f in sub.basis
            ]
    if args.json:
        print(_dump(payload))
        return EXIT_OK
    print(f"group {spec.name}: {len(subs)} invariant subspace(s) of degree {args.degree}")
    for i, sub in enumerate(subs):
        chars = ", ".join(
            f"{scalar_to_expr(k)} ({_sig6(k)})" for k in sub.character
        )
        print(f"  [{i}] dimension {sub.dimension}  character: {chars}")
        for f in sub.basis:
            print(f"      {form_to_expr(f)}")
        if args.classify:
            for rec in payload["subspaces"][i]["verdicts"]:
                print(f"      verdict: {rec['verdict']}")
    return EXIT_OK


def cmd_smooth(args) -> int:
    f = parse_form(args.form, args.conductor, degree=None)
    policy = VerdictPolicy(primes_to_try=args.primes)
    v = smoothness_verdict(f, policy)
    payload = verdict_to_json(v)
    if args.json:
        print(_dump(payload))
    else:
        print(f"verdict: {payload['verdict']}")
        cert = payload["certificate"]
        if cert:
            print(f"certificate: {_dump(cert)}")
        if payload["primes"]:
            print(f"primes: {payload['primes']}")
    return EXIT_OK


def _pencil_members(args):
    if args.group:
        catalog = load_catalog()
        for entry in catalog.get("pencils", []):
            if entry["group"] == args.group:
                n = lcm(
                    entry["point_conductor"],
                    entry["f0"]["conductor"],
                    entry["f1"]["conductor"],
                )
                fld = cyclotomic_field(n)
                f0 = parse_form(
                    entry["f0"]["expr"], entry["f0"]["conductor"], degree=catalog["degree"]
                ).lift_to(fld)
                f1 = parse_form(
                    entry["f1"]["expr"], entry["f1"]["conductor"], degree=catalog["degree"]
                ).lift_to(fld)
                return f0, f1, entry
        spec = lookup(args.group)
        subs = [s for s in invariant_subspaces(spec, args.degree) if s.dimension == 2]
        if not subs:
            raise ParseError(
                f"group {args.group} has no two-dimensional invariant subspace", 0, 0
            )
        return subs[0].basis[0], subs[0].basis[1], None
    f0 = parse_form(args.f0, args.conductor, degree=None)
    f1 = parse_form(args.f1, args.conductor, degree=None)
    return f0, f1, None


def cmd_pencil(args) -> int:
    f0, f1, entry = _pencil_members(args)
    query = PencilQuery(f0, f1)
    n = query.f0.field.N
    records = []
    ok = True
    embeddings = prime_embeddings(n)
    for _ in range(args.primes):
        e = next(embeddings)
        poly = pencil_disc_poly_mod_p(query, e)
        roots = [int(r) for r in gfp.poly_roots(poly, e.p)]
        rec = {
            "prime": e.p,
            "roots": roots,
            "top_coefficient": int(poly[-1]),
        }
        if entry:
            fibers = []
            for fiber in entry["fibers"]:
                l0 = parse_scalar(fiber["l0"], n)
                l1 = parse_scalar(fiber["l1"], n)
                if not l0:
                    hit = rec["top_coefficient"] == 0
                else:
                    hit = int(e.reduce_scalar(l1 / l0)) in roots
                good = hit == (fiber["status"] == "singular")
                ok = ok and good
                fibers.append(
                    {
                        "fiber": f"[{fiber['l0']}:{fiber['l1']}]",
                        "status": fiber["status"],
                        "confirmed": good,
                    }
                )
            rec["fibers"] = fibers
        records.append(rec)
    payload = {"conductor": n, "primes": records, "match": ok if entry else None}
    if args.json:
        print(_dump(payload))
    else:
        for rec in records:
            print(f"p = {rec['prime']}: roots {rec['roots']}, top coefficient {rec['top_coefficient']}")
            for fib in rec.get("fibers", []):
                mark = "ok" if fib["confirmed"] else "MISMATCH"
                print(f"    {fib['fiber']:32} {fib['status']:9} {mark}")
        if entry:
            print(f"fiber table {'matches' if ok else 'DOES NOT match'}")
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_verify_equivalence(args) -> int:
    data = json.loads(Path(args.witness).read_text(encoding="utf-8"))
    n = data["conductor"]
    fld = cyclotomic_field(n)
    rows = [[parse_scalar(c, n) for c in row] for row in data["rows"]]
    t = ExactMatrix(fld, rows)
    f = parse_form(getattr(args, "from"), args.conductor, degree=None)
    g = parse_form(args.to, args.conductor, degree=None)
    good = verify_equivalence_witness(t, f, g)
    if args.json:
        print(_dump({"equivalent": good}))
    else:
        print("witness verified" if good else "witness FAILED")
    return EXIT_OK if good else EXIT_MISMATCH


def cmd_reproduce(args) -> int:
    progress = None if args.json else (lambda msg: print(f"... {msg}", file=sys.stderr))
    report = reproduce_paper(only=args.only, progress=progress)
    if args.json:
        print(_dump(report.to_json()))
    else:
        for g in report.groups:
            mark = "ok" if g.match else "MISMATCH"
            dims = g.computed["dimensions"]
            print(f"group {g.group:6} subspaces {dims!s:18} {mark}")
            for d in g.details:
                print(f"    {d}")
            for note in g.notes:
                print(f"    note: {note}")
        for p in report.pencils:
            mark = "ok" if p.match else "MISMATCH"
            print(f"pencil {p.name:6} primes {p.primes!s:18} {mark}")
            for d in p.details:
                print(f"    {d}")
            for note in p.notes:
                print(f"    note: {note}")
        for x in report.extras:
            mark = "ok" if x["match"] else "MISMATCH"
            print(f"{x['kind']} {x['label']}: {mark}")
    if report.match:
        if not args.json:
            print("all checks match")
        return EXIT_OK
    if not args.json:
        print(f"first mismatch: {report.first_mismatch()}")
    return EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="invariant-quartics",
        description="Invariant quartic surfaces of finite projective groups: "
        "exact invariant subspaces and smoothness certificates.",
        epilog=f"Group files are read from the bundled data directory unless "
        f"{DATA_DIR_ENV} points elsewhere.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_groups = sub.add_parser("groups", help="registry inspection")
    groups_sub = p_groups.add_subparsers(dest="groups_command", required=True)
    p_list = groups_sub.add_parser("list", help="list bundled groups")
    p_list.add_argument("--json", action="store_true")
    p_list.add_argument("--cap", type=int, default=4096, help="closure size cap")
    p_list.set_defaults(func=cmd_groups_list)

    p_inv = sub.add_parser("invariants", help="invariant subspaces of forms")
    p_inv.add_argument("--group", help="bundled group name")
    p_inv.add_argument("--file", help="load the group from a file instead")
    p_inv.add_argument("--degree", type=int, required=True)
    p_inv.add_argument("--classify", action="store_true", help="attach verdicts")
    p_inv.add_argument("--json", action="store_true")
    p_inv.set_defaults(func=cmd_invariants)

    p_smooth = sub.add_parser("smooth", help="smoothness verdict for one form")
    p_smooth.add_argument("--form", required=True, help="form expression")
    p_smooth.add_argument("--conductor", type=int, default=1)
    p_smooth.add_argument("--primes", type=int, default=5)
    p_smooth.add_argument("--json", action="store_true")
    p_smooth.set_defaults(func=cmd_smooth)

    p_pencil = sub.add_parser("pencil", help="discriminant of a 2-parameter family")
    p_pencil.add_argument("--group", help="use a curated pencil, or the group's 2-dim subspace")
    p_pencil.add_argument("--f0", help="first member expression")
    p_pencil.add_argument("--f1", help="second member expression")
    p_pencil.add_argument("--conductor", type=int, default=1)
    p_pencil.add_argument("--degree", type=int, default=4)
    p_pencil.add_argument("--primes", type=int, default=1)
    p_pencil.add_argument("--json", action="store_true")
    p_pencil.set_defaults(func=cmd_pencil)

    p_eq = sub.add_parser("verify-equivalence", help="check a coordinate change")
    p_eq.add_argument("--witness", required=True, help="JSON file: conductor, rows")
    p_eq.add_argument("--from", dest="from", required=True, help="source form")
    p_eq.add_argument("--to", required=True, help="target form")
    p_eq.add_argument("--conductor", type=int, default=1)
    p_eq.add_argument("--json", action="store_true")
    p_eq.set_defaults(func=cmd_verify_equivalence)

    p_rep = sub.add_parser("reproduce-paper", help="recompute the golden catalog")
    p_rep.add_argument("--only", help="restrict to one group")
    p_rep.add_argument("--json", action="store_true")
    p_rep.set_defaults(func=cmd_reproduce)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "invariants" and not (args.group or args.file):
        parser.error("invariants needs --group or --file")
    if args.command == "pencil" and not (args.group or (args.f0 and args.f1)):
        parser.error("pencil needs --group or both --f0 and --f1")
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except (ToolkitError, KeyError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
