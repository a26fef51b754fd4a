"""``altmon`` command line.

Exit codes: 0 all asserted properties hold, 1 a mathematical check failed,
2 usage error, 3 resource cap hit.
"""
from __future__ import annotations

import argparse
import json
import sys

from .classify import MonoidKind, member_fast, member_oracle
from .engine import ResourceCapError, cardinality_formula, enumerate_kind, write_jsonl, ENUM_CAP
from .pperm import LiteralParseError, check_n, format_literal, gaps, parse_literal

OK, MATH_FAIL, USAGE, CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _kind(text):
    try:
        return MonoidKind.parse(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"unknown kind {text!r}")


def _write(path, text):
    with open(path, "w") as fp:
        fp.write(text)


def _aop_or_aor(args):
    if args.kind not in (MonoidKind.AOPN, MonoidKind.AORN):
        raise UsageError(f"{args.cmd} needs --kind aop or aor")


# -- verbs ---------------------------------------------------------------------------

def cmd_card(args, out):
    formula = cardinality_formula(args.kind, args.n)
    if args.n > ENUM_CAP and not args.unsafe_cap:
        print(f"formula={formula} enumerated=skipped (n > {ENUM_CAP})", file=out)
        return OK
    got = len(enumerate_kind(args.kind, args.n, unsafe_cap=args.unsafe_cap))
    verdict = "MATCH" if got == formula else "MISMATCH"
    if args.json:
        print(json.dumps({"kind": args.kind.value, "n": args.n, "formula": formula,
                          "enumerated": got, "match": got == formula}), file=out)
    else:
        print(f"formula={formula} enumerated={got} {verdict}", file=out)
    return OK if got == formula else MATH_FAIL


def cmd_enum(args, out):
    M = enumerate_kind(args.kind, args.n, unsafe_cap=args.unsafe_cap)
    if args.out:
        with open(args.out, "w") as fp:
            write_jsonl(M, fp, args.kind.value)
    else:
        write_jsonl(M, out, args.kind.value)
    return OK


def cmd_member(args, out):
    if not args.elt:
        raise UsageError("member needs --elt")
    a = parse_literal(args.elt, args.n)
    oracle = member_oracle(a, args.kind)
    if args.kind in (MonoidKind.AOPN, MonoidKind.AORN):
        fast = member_fast(a, args.kind)
    else:
        fast = oracle
    agree = fast == oracle
    if args.json:
        print(json.dumps({"element": format_literal(a), "fast": fast, "oracle": oracle,
                          "agree": agree}), file=out)
    else:
        extra = ""
        if a.rank == args.n - 1:
            d, i = gaps(a)
            extra = f" d={d} i={i}"
        print(f"{format_literal(a)}{extra} fast={str(fast).lower()} oracle={str(oracle).lower()} "
              f"{'AGREEMENT' if agree else 'DISAGREEMENT'}", file=out)
    return OK if agree else MATH_FAIL


def cmd_green(args, out):
    from .green import green_classes, j_poset_dot, summary

    M = enumerate_kind(args.kind, args.n, unsafe_cap=args.unsafe_cap)
    G = green_classes(M)
    info = summary(M, G)
    if args.json:
        print(json.dumps(info, sort_keys=True), file=out)
    else:
        print(f"{'class':<8}{'size':>8}{'L':>6}{'R':>6}{'|H|':>6}  group", file=out)
        for c, row in enumerate(info["j_classes"]):
            print(f"{G.j_name(c):<8}{row['size']:>8}{row['n_L']:>6}{row['n_R']:>6}"
                  f"{str(row['h_size']):>6}  {row['group_type']}", file=out)
        print("hasse: " + " ".join(f"{lo}<{hi}" for lo, hi in info["hasse_edges"]), file=out)
    if args.dot:
        dot = j_poset_dot(G, M.label)
        _write(args.dot, dot)
        print(f"dot: {len(G.j_classes)} nodes, {len(G.hasse)} edges -> {args.dot}", file=out)
    return OK


def cmd_congruences(args, out):
    from .congruence import (
        congruence_lattice_oracle,
        enumerate_congruences_constructive,
        lattice_dot,
        ORACLE_CAP,
    )

    _aop_or_aor(args)
    M = enumerate_kind(args.kind, args.n, unsafe_cap=args.unsafe_cap)
    cons = enumerate_congruences_constructive(M)
    cap = len(M) if args.unsafe_cap else ORACLE_CAP
    oracle = congruence_lattice_oracle(M, cap=cap)
    agree = set(cons) == {c.key for c in oracle}
    names = {k: spec.label() for k, (_, spec) in cons.items()}
    if args.list:
        for c in oracle:
            print(f"{names.get(c.key, 'anon'):<28} blocks={c.block_count}", file=out)
    if args.json:
        print(json.dumps({"kind": args.kind.value, "n": args.n, "constructive": len(cons),
                          "oracle": len(oracle), "agree": agree}), file=out)
    elif args.count or not args.list:
        print(f"constructive={len(cons)} oracle={len(oracle)} "
              f"{'MATCH' if agree else 'MISMATCH'}", file=out)
    if args.lattice_dot:
        _write(args.lattice_dot, lattice_dot(oracle, names, f"Con({M.label})"))
    return OK if agree else MATH_FAIL


def cmd_rank(args, out):
    from . import gens

    if args.kind not in (MonoidKind.AOPN, MonoidKind.AORN, MonoidKind.AON):
        raise UsageError("rank needs --kind aop, aor or ao")
    M = enumerate_kind(args.kind, args.n, unsafe_cap=args.unsafe_cap)
    ok = True
    report = {"kind": args.kind.value, "n": args.n, "known_rank": gens.known_rank(args.kind, args.n)}
    if args.kind is not MonoidKind.AON:
        details = gens.rank_bound_details(args.kind, args.n, M)
        report["lower_bound"] = details
        ok &= details["bound"] == report["known_rank"]
    if args.verify_paper_set:
        specs = gens.known_generating_set(args.kind, args.n)
        res = gens.verify_generating(args.kind, args.n, specs, M)
        report["known_set"] = {"gens": [str(s) for s in specs], **res}
        ok &= res["generates"]
    if args.exhaustive is not None:
        res = gens.exhaustive_rank_check(args.kind, args.n, args.exhaustive, M)
        report["exhaustive"] = {"r": args.exhaustive, "no_subset_generates": res}
        ok &= res
    if args.json:
        print(json.dumps(report, sort_keys=True), file=out)
    else:
        for key, val in report.items():
            print(f"{key}: {val}", file=out)
        print("OK" if ok else "FAIL", file=out)
    return OK if ok else MATH_FAIL


def cmd_selftest(args, out):
    from .acceptance import run_all

    only = set(args.only) if args.only else None
    results = run_all(out, only, args.seed)
    return OK if all(ok for _, ok, _ in results) else MATH_FAIL


# -- parser --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="altmon", description="Alternating oriented partial permutation monoids")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--kind", type=_kind, default=MonoidKind.AOPN,
                        help="in | ai | poi | ao | popi | pori | aop | aor")
    common.add_argument("--n", type=int, default=4)
    common.add_argument("--json", action="store_true")
    common.add_argument("--out")
    common.add_argument("--dot")
    common.add_argument("--elt")
    common.add_argument("--seed", type=int, default=2024, help="seed for sampled checks")
    common.add_argument("--unsafe-cap", action="store_true", help="lift the size caps")
    sub = p.add_subparsers(dest="cmd", required=True)
    sub.add_parser("card", parents=[common], help="formula vs enumeration")
    sub.add_parser("enum", parents=[common], help="JSON-lines elements")
    sub.add_parser("member", parents=[common], help="membership verdicts")
    sub.add_parser("green", parents=[common], help="Green's structure")
    c = sub.add_parser("congruences", parents=[common], help="congruence lattice")
    c.add_argument("--count", action="store_true")
    c.add_argument("--list", action="store_true")
    c.add_argument("--lattice-dot", metavar="FILE")
    r = sub.add_parser("rank", parents=[common], help="generating sets and rank")
    r.add_argument("--verify-paper-set", action="store_true")
    r.add_argument("--exhaustive", type=int, metavar="R")
    s = sub.add_parser("selftest", parents=[common], help="acceptance suite")
    s.add_argument("--only", type=int, nargs="*", metavar="K")
    return p


VERBS = {
    "card": cmd_card,
    "enum": cmd_enum,
    "member": cmd_member,
    "green": cmd_green,
    "congruences": cmd_congruences,
    "rank": cmd_rank,
    "selftest": cmd_selftest,
}


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return OK if exc.code == 0 else USAGE
    try:
        if args.cmd != "selftest":
            check_n(args.n)
        return VERBS[args.cmd](args, out)
    except ResourceCapError as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return CAP
    except (UsageError, LiteralParseError, ValueError) as exc:
        print(f"usage: {exc}", file=sys.stderr)
        return USAGE
    except AssertionError as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return MATH_FAIL


def main(argv=None) -> None:
    sys.exit(run(argv))
