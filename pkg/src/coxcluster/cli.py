"""Command-line front end.

    coxcluster verify B3 [--json] [--out report.json]
    coxcluster tables A2 rho|ncp|hvector|phi|shelling [--force]
    coxcluster batch [TYPES ...] [--threads 4]

Exit codes: 0 when every check passes, 1 when a check fails, 2 for usage
errors and unsupported types.
"""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from .absolute_order import build_context
from .cluster_complex import face_roots, shelling_order
from .ncp_lattice import (
    count_nonperipheral_by_rank,
    count_peripheral_by_rank,
    enumerate_ncp,
)
from .root_system import UnsupportedType, build_root_system, parse_cartan_type
from .verify import VerificationReport, verify_type

DEFAULT_SUITE = ("A1", "A2", "A3", "A4", "A5", "B2", "B3", "B4", "C3", "D4", "G2", "F4", "E6")
FACET_GUARD = 10_000

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class GuardExceeded(RuntimeError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def to_jsonable(x):
    """Exact JSON encoding: rationals become "p/q" strings, tuples become lists."""
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    return x


def _emit(payload, args) -> None:
    text = json.dumps(to_jsonable(payload), indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    if args.json:
        print(text)


def _fmt(v) -> str:
    return "(" + ", ".join(str(x) for x in v) + ")"


def _root_label(root) -> str:
    """Root as a combination of simple roots, e.g. a1+2a2 or -a3."""
    parts = []
    for i, c in enumerate(root, start=1):
        if not c:
            continue
        sign = "-" if c < 0 else "+"
        mag = "" if abs(c) == 1 else str(abs(c))
        parts.append(f"{sign}{mag}a{i}")
    s = "".join(parts)
    return s[1:] if s.startswith("+") else s


# ---------------------------------------------------------------- verify

def format_report(r: VerificationReport) -> str:
    lines = [
        f"type                  {r.cartan_type}",
        f"Catalan number        {r.catalan}",
        f"rank counts           {_fmt(r.rank_counts)}",
        f"h(Delta)              {_fmt(r.h_delta)}",
        f"h(X(gamma))           {_fmt(r.h_positive)}",
        f"non-peripheral/rank   {_fmt(r.nonperipheral_by_rank)}",
        f"facets of Delta       {r.facet_count_delta}",
        f"facets of X(gamma)    {r.facet_count_positive}",
        "",
        "checks:",
    ]
    width = max((len(c.name) for c in r.checks), default=0)
    for c in r.checks:
        tag = "PASS" if c.passed else "FAIL"
        crit = f"[{c.criterion}]" if c.criterion else "[-]"
        lines.append(f"  {tag} {crit:>4} {c.name:<{width}}  {c.detail}")
    lines.append("")
    lines.append("timing (ms): " + ", ".join(f"{k} {v:.1f}" for k, v in r.timing.items()))
    lines.append("result: " + ("PASS" if r.passed else "FAIL"))
    return "\n".join(lines)


def cmd_verify(args) -> int:
    report = verify_type(args.type, allow_large=args.allow_large)
    if not args.json:
        print(format_report(report))
    _emit(report.to_dict(), args)
    return EXIT_OK if report.passed else EXIT_FAIL


# ---------------------------------------------------------------- tables

def _context(args):
    t = parse_cartan_type(args.type, allow_large=args.allow_large)
    return t, build_context(build_root_system(t))


def table_rho(ctx) -> dict:
    rows = [{"index": i, "root": list(ctx.root(i)), "omega": ctx.is_omega(ctx.root(i))}
            for i in ctx.indices()]
    return {"rho": rows}


def table_ncp(ctx) -> dict:
    lat = enumerate_ncp(ctx)
    return {
        "rank_counts": lat.rank_counts,
        "peripheral_by_rank": count_peripheral_by_rank(lat),
        "nonperipheral_by_rank": count_nonperipheral_by_rank(lat),
    }


def table_hvector(ctx) -> dict:
    delta = shelling_order(ctx)
    pos = shelling_order(ctx, ctx.gamma)
    return {
        "f_delta": delta.f_vector,
        "h_delta": delta.h_from_f,
        "f_positive": pos.f_vector,
        "h_positive": pos.h_from_f,
    }


def _guarded_shelling(ctx, force: bool):
    rec = shelling_order(ctx)
    if len(rec.ordered_facets) > FACET_GUARD and not force:
        raise GuardExceeded(
            f"{len(rec.ordered_facets)} facets exceed the dump limit of {FACET_GUARD}; pass --force"
        )
    return rec


def table_phi(ctx, force=False) -> dict:
    rec = _guarded_shelling(ctx, force)
    rows = []
    for r in sorted(rec.records, key=lambda r: r.face):
        rows.append({
            "facet": list(r.face),
            "roots": [list(x) for x in face_roots(ctx, r.face)],
            "types": list(r.vertex_types),
            "phi_rank": r.phi_image.length,
            "phi": [list(r.phi_image.mat[i * ctx.n:(i + 1) * ctx.n]) for i in range(ctx.n)],
        })
    return {"phi": rows}


def table_shelling(ctx, force=False) -> dict:
    rec = _guarded_shelling(ctx, force)
    rows = [{"facet": list(f), "restriction": list(r)}
            for f, r in zip(rec.ordered_facets, rec.restriction_sets)]
    return {"shelling": rows, "h_from_shelling": rec.h_from_shelling}


def format_table(what: str, data: dict) -> str:
    lines = []
    if what == "rho":
        for row in data["rho"]:
            mark = "  Omega" if row["omega"] else ""
            lines.append(f"rho_{row['index']:<4} {_root_label(row['root']):<16} {_fmt(row['root'])}{mark}")
    elif what == "ncp":
        lines.append(f"rank counts            {_fmt(data['rank_counts'])}")
        lines.append(f"peripheral by rank     {_fmt(data['peripheral_by_rank'])}")
        lines.append(f"non-peripheral by rank {_fmt(data['nonperipheral_by_rank'])}")
    elif what == "hvector":
        lines.append(f"f(Delta)      {_fmt(data['f_delta'])}")
        lines.append(f"h(Delta)      {_fmt(data['h_delta'])}")
        lines.append(f"f(X(gamma))   {_fmt(data['f_positive'])}")
        lines.append(f"h(X(gamma))   {_fmt(data['h_positive'])}")
    elif what == "phi":
        # right vertices are marked with *
        for row in data["phi"]:
            verts = " ".join(
                f"rho_{i}{'*' if t == 'Right' else ''}" for i, t in zip(row["facet"], row["types"])
            )
            lines.append(f"{{{verts}}}  ->  rank {row['phi_rank']}")
    elif what == "shelling":
        for k, row in enumerate(data["shelling"], start=1):
            verts = " ".join(f"rho_{i}" for i in row["facet"])
            rest = " ".join(f"rho_{i}" for i in row["restriction"])
            lines.append(f"{k:>5}  {{{verts}}}  R = {{{rest}}}")
        lines.append(f"h from shelling {_fmt(data['h_from_shelling'])}")
    return "\n".join(lines)


TABLES = {
    "rho": lambda ctx, force: table_rho(ctx),
    "ncp": lambda ctx, force: table_ncp(ctx),
    "hvector": lambda ctx, force: table_hvector(ctx),
    "phi": table_phi,
    "shelling": table_shelling,
}


def cmd_tables(args) -> int:
    t, ctx = _context(args)
    data = TABLES[args.what](ctx, args.force)
    if not args.json:
        print(format_table(args.what, data))
    payload = {"schema": 1, "cartan_type": t.name, "table": args.what}
    payload.update(data)
    _emit(payload, args)
    return EXIT_OK


# ---------------------------------------------------------------- batch

def _verify_one(name: str, allow_large: bool):
    try:
        return name, verify_type(name, allow_large=allow_large).to_dict(), None
    except UnsupportedType as exc:
        return name, None, str(exc)


def cmd_batch(args) -> int:
    types = args.types or list(DEFAULT_SUITE)
    if args.threads > 1:
        with ProcessPoolExecutor(max_workers=args.threads) as pool:
            results = list(pool.map(_verify_one, types, [args.allow_large] * len(types)))
    else:
        results = [_verify_one(t, args.allow_large) for t in types]

    rows, reports = [], []
    any_fail = any_unsupported = False
    for name, rep, err in results:
        if rep is None:
            any_unsupported = True
            rows.append((name, "UNSUPPORTED", err, None))
            continue
        r = VerificationReport.from_dict(rep)
        reports.append(rep)
        status = "PASS" if r.passed else "FAIL"
        any_fail |= not r.passed
        failed = ", ".join(c.name for c in r.failed_checks())
        rows.append((r.cartan_type, status, failed, sum(r.timing.values())))
    if not args.json:
        for name, status, note, ms in rows:
            tail = f"{ms:10.1f} ms" if ms is not None else " " * 13
            print(f"{name:<6} {status:<11} {tail}  {note or ''}".rstrip())
    payload = {
        "schema": 1,
        "reports": reports,
        "unsupported": [{"type": n, "error": note} for n, s, note, _ in rows if s == "UNSUPPORTED"],
    }
    _emit(payload, args)
    if any_fail:
        return EXIT_FAIL
    if any_unsupported:
        return EXIT_USAGE
    return EXIT_OK


# ---------------------------------------------------------------- entry point

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print JSON instead of tables")
    common.add_argument("--out", metavar="PATH", help="also write the JSON to PATH")
    common.add_argument("--allow-large", action="store_true",
                        help="accept E7, E8 and ranks beyond the default range")

    p = _Parser(prog="coxcluster",
                description="Noncrossing partitions and cluster complexes of finite root systems.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", parents=[common], help="run every check for one type")
    v.add_argument("type")
    v.set_defaults(func=cmd_verify)

    t = sub.add_parser("tables", parents=[common], help="print one table for a type")
    t.add_argument("type")
    t.add_argument("what", choices=sorted(TABLES))
    t.add_argument("--force", action="store_true",
                   help=f"dump more than {FACET_GUARD} facets")
    t.set_defaults(func=cmd_tables)

    b = sub.add_parser("batch", parents=[common], help="verify several types")
    b.add_argument("types", nargs="*", help=f"default: {' '.join(DEFAULT_SUITE)}")
    b.add_argument("--threads", type=int, default=1, metavar="K",
                   help="verify up to K types concurrently (separate processes)")
    b.set_defaults(func=cmd_batch)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UnsupportedType as exc:
        print(f"coxcluster: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GuardExceeded as exc:
        print(f"coxcluster: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
