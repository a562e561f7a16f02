"""Command line: compute, verify, bench and export.

Exit codes: 0 success, 1 generic failure (including usage errors and failed
checks), 2 precision failure, 3 unknown identity name.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time

from .identities import IDENTITIES, Context, UnknownIdentityError, run_suite
from .partitions import triples_count
from .qseries import PrecisionError
from .vertex import IntegrityError, Pipeline, default_threads

EXIT_OK, EXIT_FAIL, EXIT_PRECISION, EXIT_IDENTITY = 0, 1, 2, 3

CSV_COLUMNS = ("d", "g", "delta", "n", "N", "E", "M")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def _nonneg(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gvp2", description="Gopakumar-Vafa invariants of local P^2 via the topological vertex.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, dmax_default):
        p.add_argument("--dmax", type=_positive, default=dmax_default, help="largest degree")
        p.add_argument("--threads", type=_nonneg, default=None, help="worker processes (0 = all CPUs; default GV_THREADS or 1)")
        p.add_argument("--floor-margin", type=_nonneg, default=2, help="extra precision below q^-(d+2)")
        p.add_argument("--out", default=None, help="write output to FILE instead of stdout")

    p = sub.add_parser("compute", help="GV tables for d = 1..dmax")
    common(p, None)
    p.add_argument("--format", choices=("json", "csv", "table"), default="table")

    p = sub.add_parser("export", help="write GV tables as JSON or CSV")
    common(p, None)
    p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("verify", help="run the identity registry")
    common(p, 8)
    p.add_argument("--identity", action="append", default=None, help="identity name (repeatable)")
    p.add_argument("--floor", type=_positive, default=20, help="depth q^-FLOOR for the pure q-series identities")
    p.add_argument("--list", action="store_true", help="list identity names and exit")

    p = sub.add_parser("bench", help="timings, triple counts and cache statistics")
    common(p, 8)
    return parser


# ------------------------------------------------------------ formatting
def tables_json(tables) -> str:
    return json.dumps([t.to_dict() for t in tables], indent=2) + "\n"


def tables_csv(tables) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for t in tables:
        writer.writerows(t.csv_rows())
    return buf.getvalue()


def tables_text(tables) -> str:
    lines = []
    for t in tables:
        lines.append(f"d = {t.d}  (g(d) = {t.gd})")
        lines.append(f"{'g':>4} {'delta':>5} {'n':>22} {'N':>22} {'E':>22} {'M':>22}")
        for d, g, delta, n, N, E, M in t.csv_rows():
            lines.append(f"{g:>4} {delta:>5} {n:>22} {N:>22} {E:>22} {M:>22}")
        lines.append("")
    return "\n".join(lines)


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _threads(args) -> int:
    if args.threads is None:
        return default_threads()
    return args.threads if args.threads > 0 else (os.cpu_count() or 1)


def _compute_tables(args):
    pipe = Pipeline(args.dmax, args.floor_margin, _threads(args))
    tables = []
    for d in range(1, args.dmax + 1):
        try:
            tables.append(pipe.table(d))
        except PrecisionError as exc:
            raise PrecisionError(f"degree {d}: {exc}") from exc
    return pipe, tables


# ------------------------------------------------------------ commands
def cmd_compute(args) -> int:
    if args.dmax is None:
        raise UsageError("--dmax is required")
    _, tables = _compute_tables(args)
    fmt = {"json": tables_json, "csv": tables_csv, "table": tables_text}[args.format]
    _emit(fmt(tables), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.list:
        _emit("".join(f"{name}\t{entry.description}\n" for name, entry in IDENTITIES.items()), args.out)
        return EXIT_OK
    ctx = Context(floor=-args.floor, dmax=args.dmax, margin=args.floor_margin, threads=_threads(args))
    results = run_suite(args.identity, ctx=ctx)
    ok = all(r.status != "fail" for r in results)
    report = {
        "dmax": args.dmax,
        "floor": -args.floor,
        "status": "pass" if ok else "fail",
        "results": [r.to_dict() for r in results],
    }
    _emit(json.dumps(report, indent=2) + "\n", args.out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_bench(args) -> int:
    pipe = Pipeline(args.dmax, args.floor_margin, _threads(args))
    rows = []
    for d in range(1, args.dmax + 1):
        t0 = time.perf_counter()
        pipe.table(d)
        rows.append({
            "d": d,
            "triples": triples_count(d),
            "surviving_triples": pipe.stats["surviving"][d],
            "hopf_pairs": pipe.stats["hopf"][d],
            "instanton_seconds": round(pipe.stats["seconds"][d], 4),
            "total_seconds": round(time.perf_counter() - t0, 4),
        })
    report = {"dmax": args.dmax, "threads": pipe.threads, "degrees": rows, "cache": pipe.cache.stats()}
    _emit(json.dumps(report, indent=2) + "\n", args.out)
    return EXIT_OK


COMMANDS = {"compute": cmd_compute, "export": cmd_compute, "verify": cmd_verify, "bench": cmd_bench}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except UnknownIdentityError as exc:
        print(f"unknown identity: {exc.args[0]} (see `verify --list`)", file=sys.stderr)
        return EXIT_IDENTITY
    except PrecisionError as exc:
        print(f"precision failure: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except IntegrityError as exc:
        print(f"integrity failure: {exc}", file=sys.stderr)
        return EXIT_FAIL
