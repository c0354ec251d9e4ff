"""Command-line driver: ``huipminer {mine,convert,verify,stats}``.

Machine-readable results go to stdout (or ``--output``); progress and
statistics go to stderr.
"""
from __future__ import annotations

import argparse
import logging
import statistics
import sys
import time

from . import oracle
from .cer import to_c_database
from .ingest import (
    ParseError,
    format_number,
    parse_esequence_db,
    parse_utility_table,
    write_c_database,
    write_esequence_db,
    write_patterns,
)
from .miner import ConfigError, MinerConfig, PRUNING_MODES, mine_c_database
from .model import ModelError, UnmappedLabelError, UtilityTable, to_decimal

log = logging.getLogger("huipminer")


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _emit(text: str, path):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _load_db(args):
    db, report = parse_esequence_db(_read(args.input))
    for line, reason in report.rejected:
        print(f"warning: line {line} rejected: {reason}", file=sys.stderr)
    return db


def cmd_mine(args) -> int:
    cfg = MinerConfig(args.threshold, args.max_length, args.max_size, args.mode, args.pruning, args.threads)
    db = _load_db(args)
    if args.utilities:
        p = parse_utility_table(_read(args.utilities), args.default_policy)
    else:
        p = UtilityTable({}, args.default_policy)
    cdb = to_c_database(db)
    started = time.perf_counter()
    result = mine_c_database(cdb, p, cfg)
    elapsed = time.perf_counter() - started
    if p.defaulted:
        print(f"warning: {len(p.defaulted)} label(s) without utility priced at 1: "
              f"{', '.join(sorted(p.defaulted))}", file=sys.stderr)
    for rs in result.stats.rounds:
        print(rs.summary(), file=sys.stderr)
    print(f"threshold={format_number(result.threshold)} patterns={len(result.patterns)} "
          f"time={elapsed:.4f}s", file=sys.stderr)
    _emit(write_patterns(result.patterns, args.format), args.output)
    return 0


def cmd_convert(args) -> int:
    db = _load_db(args)
    _emit(write_c_database(to_c_database(db)), args.output)
    return 0


def cmd_verify(args) -> int:
    report = oracle.verify(args.seed, args.runs, pruning=args.pruning)
    print(report.summary())
    for inst in report.failures[:1]:
        print("minimal failing database:", file=sys.stderr)
        print(write_esequence_db(inst.db), end="", file=sys.stderr)
        print(f"utilities: {dict(inst.utilities.values)}", file=sys.stderr)
        print(f"config: {inst.config}", file=sys.stderr)
    return 0 if report.ok else 1


def dataset_stats(db) -> dict:
    sizes = [len(s) for s in db]
    durations = [e.duration for s in db for e in s.intervals]
    return {
        "event_intervals": len(durations),
        "e_sequences": len(sizes),
        "size_min": min(sizes),
        "size_max": max(sizes),
        "size_avg": round(statistics.fmean(sizes), 2),
        "labels": len({e.label for s in db for e in s.intervals}),
        "duration_min": min(durations),
        "duration_max": max(durations),
        "duration_avg": round(statistics.fmean(durations), 2),
        "duration_stdv": round(statistics.pstdev(durations)),
    }


def cmd_stats(args) -> int:
    stats = dataset_stats(_load_db(args))
    _emit("".join(f"{k}\t{format_number(v)}\n" for k, v in stats.items()), args.output)
    return 0


def _decimal(text: str):
    try:
        return to_decimal(text)
    except ModelError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    verbosity = argparse.ArgumentParser(add_help=False)
    verbosity.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    parser = argparse.ArgumentParser(prog="huipminer", description="High utility interval-based pattern mining")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--input", required=True, help="E-sequence file (sid, label, begin, finish); '-' for stdin")
        p.add_argument("--output", help="output path (default stdout)")

    m = sub.add_parser("mine", parents=[verbosity], help="mine high utility patterns")
    common(m)
    m.add_argument("--utilities", help="external utility table (label, utility)")
    m.add_argument("--default-policy", choices=("default-one", "reject"), default="default-one")
    m.add_argument("--threshold", type=_decimal, required=True)
    mode = m.add_mutually_exclusive_group()
    mode.add_argument("--relative", dest="mode", action="store_const", const="relative")
    mode.add_argument("--absolute", dest="mode", action="store_const", const="absolute")
    m.set_defaults(mode="absolute")
    m.add_argument("--max-length", type=int, default=1)
    m.add_argument("--max-size", type=int, default=1)
    m.add_argument("--pruning", choices=PRUNING_MODES, default="ldcp")
    m.add_argument("--format", choices=("tsv", "jsonl"), default="tsv")
    m.add_argument("--threads", type=int, default=1)
    m.set_defaults(func=cmd_mine)

    c = sub.add_parser("convert", parents=[verbosity], help="dump the C-sequence database")
    common(c)
    c.set_defaults(func=cmd_convert)

    v = sub.add_parser("verify", parents=[verbosity], help="differential test of the miner against the brute-force oracle")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--runs", type=int, default=200)
    v.add_argument("--pruning", choices=PRUNING_MODES, default="ldcp")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("stats", parents=[verbosity], help="dataset summary")
    common(s)
    s.set_defaults(func=cmd_stats)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(message)s")
    if args.command == "mine":
        if args.mode == "relative" and args.threshold > 1:
            parser.error("--relative threshold must lie in [0, 1]")
        if args.threshold < 0:
            parser.error("--threshold must be ≥ 0")
        if args.max_length < 1 or args.max_size < 1:
            parser.error("--max-length and --max-size must be ≥ 1")
    try:
        return args.func(args)
    except (ParseError, ConfigError, ModelError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except UnmappedLabelError as exc:
        print(f"error: label {exc.args[0]!r} has no external utility", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
