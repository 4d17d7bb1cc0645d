"""Command-line front end: ``algchains`` (or ``python3 -m algchains``).

Exit codes: 0 success, 1 a sweep found a violation, 2 bad input,
3 internal invariant breach, 4 unsupported input, 5 verification found
uncertifiable steps, 6 verification refuted a step.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import chaincert, depth as depth_mod, invariants as inv
from .descriptor import DescriptorSyntaxError, GroupDescriptor, check_characteristic, parse
from .length import length, max_length_chain
from .maxsubdb import IncompleteDatabaseError, depth_bruteforce
from .rootdata import SimpleType, UnknownTypeError, simple_types_up_to

SCHEMA_VERSION = 1

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT, EXIT_BREACH, EXIT_UNSUPPORTED = 0, 1, 2, 3, 4
EXIT_VERDICT = {chaincert.CERTIFIED: 0, chaincert.UNCERTIFIABLE: 5, chaincert.REFUTED: 6}


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _char(text: str) -> int:
    try:
        return check_characteristic(int(text))
    except ValueError:
        raise argparse.ArgumentTypeError(f"characteristic must be 0 or a prime, got {text!r}") from None


def _parse_expr(text: str) -> GroupDescriptor:
    try:
        return parse(text)
    except (DescriptorSyntaxError, UnknownTypeError) as exc:
        raise CliError(str(exc), EXIT_INPUT) from exc


def _emit(args, payload: dict, lines: list[str]) -> None:
    if getattr(args, "json", False):
        print(json.dumps({"schema": f"algchains.{args.command}/{SCHEMA_VERSION}", **payload}, indent=2, sort_keys=True))
    else:
        print("\n".join(lines))


def _frac(x) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------


def cmd_invariants(args) -> int:
    g = _parse_expr(args.expr)
    try:
        d = depth_mod.depth(g, args.char)
    except AssertionError as exc:
        raise CliError(f"invariant breach: {exc}", EXIT_BREACH) from exc
    l = length(g)
    if d.lower > l:
        raise CliError(f"invariant breach: depth lower bound {d.lower} exceeds length {l}", EXIT_BREACH)
    cd = (l - d.upper, l - d.lower)
    payload = {
        "expr": str(g),
        "char": args.char,
        "dim": g.dim,
        "length": l,
        "depth": {"lower": d.lower, "upper": d.upper, "exact": d.exact, "provenance": list(d.provenance)},
        "cd": {"lower": cd[0], "upper": cd[1]},
    }
    lines = [f"group   {g}", f"char    {args.char}", f"dim     {g.dim}", f"length  {l}", f"depth   {d}"]
    lines += [f"        ({p})" for p in d.provenance]
    lines.append(f"cd      {cd[1]}" if d.exact else f"cd      [{cd[0]}, {cd[1]}]")
    if not g.is_trivial:
        lo, hi = inv.chain_ratio(g, args.char)
        payload["cr"] = {"lower": _frac(lo), "upper": _frac(hi)}
        lines.append(f"cr      {_frac(lo)}" if d.exact else f"cr      [{_frac(lo)}, {_frac(hi)}]")
    _emit(args, payload, lines)
    return EXIT_OK


# ---------------------------------------------------------------------------


def _row_label(p: int, rows: tuple[int, ...]) -> str:
    return f">{rows[-2]}" if p == rows[-1] else str(p)


def _table_payload(table: dict, rows: tuple[int, ...]):
    cells = {(name, p): v for name, p, v in depth_mod.table_cells(table, rows)}
    columns = list(table)
    out_rows, oracle, mismatches = [], {}, []
    for p in rows:
        row = {}
        for name in columns:
            if (name, p) not in cells:
                continue
            t = parse(name).simple_type
            engine = depth_mod.depth(t, p)
            if not engine.exact or engine.lower != cells[(name, p)]:
                mismatches.append(f"{name} at p={p}: engine {engine}, table {cells[(name, p)]}")
            row[name] = engine.lower
            try:
                bf = depth_bruteforce(t, p)
            except IncompleteDatabaseError:
                oracle[f"{name}@{_row_label(p, rows)}"] = "not-closable"
            else:
                oracle[f"{name}@{_row_label(p, rows)}"] = "confirmed" if bf == engine.lower else f"mismatch:{bf}"
                if bf != engine.lower:
                    mismatches.append(f"{name} at p={p}: oracle {bf}, engine {engine.lower}")
        out_rows.append({"p": _row_label(p, rows), "cells": row})
    return columns, out_rows, oracle, mismatches


def cmd_table(args) -> int:
    if args.name == "depth-char0":
        return _table_char0(args)
    if args.name == "depth-lowrank":
        table, rows = depth_mod.LOW_RANK_TABLE, depth_mod.LOW_RANK_ROWS
    else:
        table, rows = depth_mod.EXCEPTIONAL_TABLE, depth_mod.EXCEPTIONAL_ROWS
    columns, out_rows, oracle, mismatches = _table_payload(table, rows)
    if mismatches:
        raise CliError("invariant breach: " + "; ".join(mismatches), EXIT_BREACH)
    width = 4
    lines = ["p".ljust(width) + "".join(c.rjust(width) for c in columns)]
    for row in out_rows:
        lines.append(
            row["p"].ljust(width)
            + "".join((str(row["cells"][c]) if c in row["cells"] else "").rjust(width) for c in columns)
        )
    confirmed = sum(1 for v in oracle.values() if v == "confirmed")
    lines.append(f"cells: {len(oracle)}; confirmed by the shortest-chain oracle: {confirmed}")
    payload = {"table": args.name, "columns": columns, "rows": out_rows, "oracle": oracle}
    _emit(args, payload, lines)
    return EXIT_OK


_CHAR0_CASES = [
    ("A1", lambda t: t == SimpleType("A", 1)),
    ("A6", lambda t: t == SimpleType("A", 6)),
    ("A_r (r >= 3, r != 6)", lambda t: t.family == "A" and t.rank >= 3 and t.rank != 6),
    ("B3", lambda t: t == SimpleType("B", 3)),
    ("D_r", lambda t: t.family == "D"),
    ("E6", lambda t: t == SimpleType("E", 6)),
    ("all other types", lambda t: True),
]


def _table_char0(args) -> int:
    values: dict[str, set[int]] = {name: set() for name, _ in _CHAR0_CASES}
    for t in simple_types_up_to(args.max_rank):
        for name, pred in _CHAR0_CASES:
            if pred(t):
                values[name].add(depth_mod.depth(t, 0).lower)
                break
    bad = [n for n, v in values.items() if len(v) != 1]
    if bad:
        raise CliError(f"invariant breach: char 0 depth not constant on {bad}", EXIT_BREACH)
    oracle = {}
    for t in simple_types_up_to(4) + [SimpleType("A", 6)]:
        try:
            bf = depth_bruteforce(t, 0)
        except IncompleteDatabaseError:
            continue
        oracle[str(t)] = bf
        if bf != depth_mod.depth(t, 0).lower:
            raise CliError(f"invariant breach: oracle gives {bf} for {t}", EXIT_BREACH)
    cases = [{"case": n, "depth": next(iter(v))} for n, v in values.items()]
    lines = [f"{c['case']:<24}{c['depth']}" for c in cases]
    lines.append(f"checked all simple types of rank <= {args.max_rank}; oracle agrees on {len(oracle)} types")
    _emit(args, {"table": args.name, "cases": cases, "max_rank": args.max_rank, "oracle": oracle}, lines)
    return EXIT_OK


# ---------------------------------------------------------------------------


def cmd_chain(args) -> int:
    g = _parse_expr(args.expr)
    t = g.simple_type
    if t is None:
        raise CliError(f"chain needs a single simple type, got {g}", EXIT_UNSUPPORTED)
    if args.longest:
        cert = max_length_chain(t, args.char)
        status, method = "maximum length", "maximal parabolics, then soluble descent"
    else:
        try:
            nodes, method = depth_mod.shortest_chain(t, args.char)
        except depth_mod.DomainError as exc:
            raise CliError(str(exc), EXIT_UNSUPPORTED) from exc
        cert = chaincert.ChainCertificate.build(nodes, args.char)
        d = depth_mod.depth(t, args.char)
        status = "known-optimal" if d.exact and d.lower == cert.length else "upper bound"
    report = chaincert.verify(cert)
    if report.verdict != chaincert.CERTIFIED:
        raise CliError(f"invariant breach: emitted chain is {report.verdict}", EXIT_BREACH)
    if args.output:
        cert.write(args.output)
    payload = {
        "expr": str(t),
        "char": args.char,
        "mode": "longest" if args.longest else "shortest",
        "length": cert.length,
        "status": status,
        "method": method,
        "nodes": [str(n) for n in cert.nodes],
        "output": args.output,
    }
    lines = [f"length {cert.length} ({status}; {method})", " > ".join(map(str, cert.nodes))]
    if args.output:
        lines.append(f"certificate written to {args.output}")
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        cert = chaincert.load_certificate(args.path)
        report = chaincert.verify(cert)
    except OSError as exc:
        raise CliError(f"cannot read {args.path}: {exc}", EXIT_INPUT) from exc
    except (chaincert.CertificateFormatError, chaincert.MalformedCertificateError, DescriptorSyntaxError, UnknownTypeError) as exc:
        raise CliError(f"malformed certificate: {exc}", EXIT_INPUT) from exc
    steps = [
        {"index": s.index, "parent": str(s.parent), "child": str(s.child), "status": s.status, "reason": s.reason}
        for s in report.steps
    ]
    lines = [f"{s['index']:>3}  {s['parent']} > {s['child']}: {s['status']} ({s['reason']})" for s in steps]
    lines.append(f"verdict: {report.verdict}; length {cert.length}")
    _emit(args, {"path": str(args.path), "char": cert.char, "verdict": report.verdict, "length": cert.length, "steps": steps}, lines)
    return EXIT_VERDICT[report.verdict]


# ---------------------------------------------------------------------------

BOUNDS = ("cd-bound", "simple-cd", "power-cd", "cr-simple", "sum-dims", "all")


def _primes_up_to(n: int) -> list[int]:
    from .descriptor import is_prime

    return [p for p in range(2, n + 1) if is_prime(p)]


def _sweep_reports(name: str, max_rank: int, chars: list[int], max_power: int):
    types = simple_types_up_to(max_rank)
    if name == "sum-dims":
        for n in range(1, 49):
            yield f"n={n}", inv.sum_dims_floor(inv.smallest_distinct_types(n))
        return
    for c in chars:
        for t in types:
            if name == "cd-bound":
                yield f"{t}@{c}", inv.check_cd_bound(t, c)
            elif name == "simple-cd":
                yield f"{t}@{c}", inv.check_simple_cd_bound(t, c)
            elif name == "cr-simple":
                yield f"{t}@{c}", inv.check_cr_bound(t, c)
            elif name == "power-cd" and t.rank <= 2:
                for k in range(2, max_power + 1):
                    yield f"{t}^{k}@{c}", inv.check_ss_cd_bound(t, k, c)


def cmd_sweep(args) -> int:
    chars = [0] + _primes_up_to(args.max_p)
    names = BOUNDS[:-1] if args.bound == "all" else (args.bound,)
    counts: dict[str, dict[str, int]] = {}
    violations = []
    for name in names:
        tally = {inv.HOLDS: 0, inv.INCONCLUSIVE: 0, inv.VIOLATED: 0}
        for label, rep in _sweep_reports(name, args.max_rank, chars, args.max_power):
            tally[rep.status] += 1
            if rep.status == inv.VIOLATED:
                violations.append(f"{name} {label}: {rep.detail}")
        counts[name] = tally
    lines = [
        f"{n}: {c[inv.HOLDS]} hold, {c[inv.INCONCLUSIVE]} inconclusive, {c[inv.VIOLATED]} violated"
        for n, c in counts.items()
    ]
    lines += violations
    payload = {"bound": args.bound, "max_rank": args.max_rank, "chars": chars, "counts": counts, "violations": violations}
    _emit(args, payload, lines)
    return EXIT_VIOLATION if violations else EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="algchains", description="Length and depth of connected algebraic groups.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("invariants", help="dim, length, depth, cd and cr of a group")
    p.add_argument("expr", help='descriptor, e.g. "U6 A2 A1 T1"')
    p.add_argument("--char", type=_char, required=True, help="0 or a prime")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("table", help="regenerate a depth table")
    p.add_argument("name", choices=("depth-lowrank", "depth-exceptional", "depth-char0"))
    p.add_argument("--max-rank", type=int, default=100, help="rank range checked by depth-char0")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("chain", help="emit a chain certificate")
    p.add_argument("expr")
    p.add_argument("--char", type=_char, required=True)
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--longest", action="store_true")
    mode.add_argument("--shortest", action="store_true")
    p.add_argument("-o", "--output", help="certificate file to write")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_chain)

    p = sub.add_parser("verify", help="verify a chain certificate")
    p.add_argument("path", type=Path)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="check a global bound over many groups")
    p.add_argument("bound", choices=BOUNDS)
    p.add_argument("--max-rank", type=int, default=8)
    p.add_argument("--max-p", type=int, default=23)
    p.add_argument("--max-power", type=int, default=6)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_sweep)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"algchains: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
