"""Command line interface.

Exit codes: 0 success, 1 a verified law has violations, 2 bad arguments or
seed syntax, 3 a rule cannot be applied (run longer than 9 under ls/lsa),
4 step budget exceeded, 5 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .census import find_sigma, probe_conjecture, run_census
from .dynamics import detect_orbit
from .errors import RunCountOverflowError, SeedParseError, StepBudgetExceeded
from .laws import SUITES, run_suite
from .maxmap import ls_step, lsa_step, lsb_step
from .runword import parse_compressed, render_compressed, render_digits, total_length
from .seeds import SeedSpace

EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_USAGE = 2
EXIT_RULE = 3
EXIT_BUDGET = 4
EXIT_IO = 5

RULES = {"lsb": lsb_step, "ls": ls_step, "lsa": lsa_step}


def _show(w, max_render: int) -> str:
    length = total_length(w)
    if length <= max_render:
        return render_digits(w, max_render)
    return f"{render_compressed(w)}  # {length} digits, shown compressed"


def _dump(record) -> None:
    print(json.dumps(record, sort_keys=True))


def cmd_iterate(args) -> int:
    w = parse_compressed(args.seed)
    step = RULES[args.rule]
    terms = [w]
    try:
        for _ in range(args.n):
            w = step(w)
            terms.append(w)
    finally:
        if args.format == "json":
            _dump({"rule": args.rule, "terms": [render_compressed(t) for t in terms]})
        else:
            for t in terms:
                print(_show(t, args.max_render))
    return EXIT_OK


def cmd_orbit(args) -> int:
    orbit = detect_orbit(parse_compressed(args.seed), args.max_steps)
    if args.format == "json":
        prefix = orbit.first_repeat if args.trajectory else None
        _dump(orbit.to_record(trajectory_prefix=prefix))
        return EXIT_OK
    print(f"seed          {render_compressed(orbit.seed)}")
    print(f"mu            {orbit.transient}")
    print(f"period        {orbit.period}")
    print(f"first_repeat  {orbit.first_repeat}")
    print("cycle         " + ", ".join(_show(c, args.max_render) for c in orbit.cycle))
    return EXIT_OK


def cmd_verify(args) -> int:
    reports = run_suite(args.suite, args.max_len, args.jobs, args.random, args.bound)
    for rep in reports:
        if args.format == "json":
            _dump(rep.to_record())
            continue
        status = "PASS" if rep.passed else "FAIL"
        print(f"{status} {rep.law_id:<14} seeds={rep.seeds_checked:<9} "
              f"violations={rep.total_violations:<6} {rep.domain}")
        for name, value in rep.to_record()["stats"].items():
            print(f"     {name}: {value}")
        for v in rep.violations[:10]:
            print(f"     seed {v.seed}: expected {v.expected}, got {v.actual}")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_VIOLATIONS


def _print_census_summary(report) -> None:
    summary = report.summary_record()
    print(f"space            {summary['seed_space']}")
    print(f"seeds            {summary['total_seeds']}")
    print(f"cycle classes    {summary['class_count']}")
    mt, mf = summary["global_max_transient"], summary["global_max_first_repeat"]
    print(f"max mu           {mt['value']} (seed {mt['witness']})")
    print(f"max first_repeat {mf['value']} (seed {mf['witness']})")
    print("period histogram (seeds / classes)")
    classes = report.class_period_histogram
    for period, seeds in report.period_histogram.items():
        print(f"  {period:>3}  {seeds:>10}  {classes[period]:>10}")


def cmd_census(args) -> int:
    try:
        alphabet = tuple(sorted({int(ch) for ch in args.alphabet}))
        space = SeedSpace(args.min_len, args.max_len, alphabet, not args.no_leading_zeros)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        report = run_census(space, args.max_steps, args.jobs, args.shard_size, args.checkpoint_dir)
        if args.out is not None:
            out = Path(args.out)
            out.mkdir(parents=True, exist_ok=True)
            (out / "census.jsonl").write_text(report.to_jsonl())
            (out / "classes.csv").write_text(report.to_csv())
            (out / "summary.json").write_text(json.dumps(report.summary_record(), sort_keys=True) + "\n")
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    if args.format == "json":
        _dump(report.summary_record())
    elif args.format == "jsonl":
        sys.stdout.write(report.to_jsonl())
    elif args.format == "csv":
        sys.stdout.write(report.to_csv())
    else:
        _print_census_summary(report)
    return EXIT_OK


def cmd_sigma(args) -> int:
    result = find_sigma(args.n, args.bound, args.max_steps)

    def word(w):
        return None if w is None else render_compressed(w)

    if args.format == "json":
        _dump({
            "n": result.n,
            "bound": result.bound,
            "sigma": word(result.by_transient),
            "sigma_first_repeat": word(result.by_first_repeat),
            "exhausted": result.exhausted,
        })
        return EXIT_OK
    print(word(result.by_transient) or f"exhausted (no seed of length <= {args.bound})")
    fr = word(result.by_first_repeat) or "exhausted"
    print(f"# first_repeat = {args.n}: {fr}")
    return EXIT_OK


def cmd_conjecture(args) -> int:
    report = probe_conjecture()
    if args.format == "json":
        _dump(report.to_record())
        return EXIT_OK
    o = report.orbit
    print(f"seed          {render_compressed(report.seed)} ({total_length(report.seed)} digits)")
    print(f"mu            {o.transient}")
    print(f"period        {o.period}")
    print(f"first_repeat  {o.first_repeat}")
    print(f"elapsed       {report.elapsed_seconds * 1e3:.3f} ms")
    print()
    print(f"{'step':>4}  {'computed':<24}{'printed':<24}")
    for c in report.comparisons:
        mark = "" if c.match else "  <-- differs"
        print(f"{c.index:>4}  {c.engine:<24}{c.printed:<24}{mark}")
    for i, w in enumerate(report.chain[len(report.comparisons):], start=len(report.comparisons)):
        print(f"{i:>4}  {_show(w, 64):<24}")
    bad = [i for i, ok in enumerate(report.printed_steps_consistent) if not ok]
    print()
    if bad:
        print("printed chain steps not produced by the map: "
              + ", ".join(f"{i}->{i + 1}" for i in bad))
    po = report.printed_orbit
    print(f"printed chain from step {report.first_mismatch}: mu {po.transient}, period {po.period}, "
          f"cycle {', '.join(render_compressed(c) for c in po.cycle)}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lsb",
        description="Look-and-say-the-biggest dynamics on run-length compressed digit words.",
        epilog="Seeds use compressed notation: digits, with d^n for a run of n copies of d "
        "(e.g. 2^22, '1^3 9 3 2^3').",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def common(p, formats=("plain", "json")):
        p.add_argument("--format", choices=formats, default="plain")
        p.add_argument("--max-steps", type=_positive, default=10_000)
        p.add_argument("--max-render", type=_positive, default=100_000,
                       help="longest word printed as digits")

    p = sub.add_parser("iterate", help="print a trajectory")
    p.add_argument("seed")
    p.add_argument("-n", type=_non_negative, default=10, help="number of steps")
    p.add_argument("--rule", choices=sorted(RULES), default="lsb")
    common(p)
    p.set_defaults(func=cmd_iterate)

    p = sub.add_parser("orbit", help="transient, period and cycle of a seed")
    p.add_argument("seed")
    p.add_argument("--json", dest="format", action="store_const", const="json")
    p.add_argument("--trajectory", action="store_true", help="include the path in json output")
    common(p)
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("verify", help="check the structural laws exhaustively")
    p.add_argument("--suite", choices=SUITES + ("all",), default="all")
    p.add_argument("--max-len", type=_positive, default=6)
    p.add_argument("--random", type=_non_negative, default=0,
                   help="extra random words for the lastdigit suite")
    p.add_argument("--bound", type=_positive, default=9,
                   help="first_repeat bound for the smallkid suite")
    p.add_argument("--jobs", type=_positive, default=os.cpu_count() or 1)
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("census", help="classify limit cycles over a seed space")
    p.add_argument("--min-len", type=_positive, default=1)
    p.add_argument("--max-len", type=_positive, default=6)
    p.add_argument("--alphabet", default="0123456789")
    p.add_argument("--no-leading-zeros", action="store_true")
    p.add_argument("--jobs", type=_positive, default=os.cpu_count() or 1)
    p.add_argument("--shard-size", type=_positive, default=1 << 17)
    p.add_argument("--checkpoint-dir", help="write/reuse per-shard reports here")
    p.add_argument("--out", help="directory for census.jsonl, classes.csv and summary.json")
    common(p, ("plain", "json", "jsonl", "csv"))
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("sigma", help="smallest seed reaching its cycle after exactly n steps")
    p.add_argument("--n", type=_non_negative, required=True)
    p.add_argument("--bound", type=_positive, default=6, help="longest seed searched")
    common(p)
    p.set_defaults(func=cmd_sigma)

    p = sub.add_parser("conjecture", help="orbit of 2^33333333333 against the printed chain")
    common(p)
    p.set_defaults(func=cmd_conjecture)
    return parser


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _non_negative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return value


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SeedParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RunCountOverflowError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RULE
    except StepBudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
