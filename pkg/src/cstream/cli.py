"""Command-line front end: ``cstream {run,check,bench,fuzz}``.

Exit codes:

    0  success
    1  parse error, unreadable input or bad usage
    2  runtime error (ill-formed stream, open index access, division by
       zero, divergent access, type or arity errors)
    3  step budget exhausted
    4  the two checkers disagree (``check --both``) or fuzzing found a failure
"""

from __future__ import annotations

import argparse
import json
import sys
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import bench, indexer, oracle
from .errors import BudgetExceeded, CStreamError, EvalError, ParseError
from .evaluator import CHECKERS, EvalConfig, run_program
from .runtime import Capsule, parse_env
from .syntax import parse_program
from .values import Stream, format_num
from .wd_naive import wd_judge
from .wd_optimized import owd_judge

EXIT_OK, EXIT_PARSE, EXIT_RUNTIME, EXIT_BUDGET, EXIT_MISMATCH = range(5)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


def _natural(text):
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be a natural number")
    return value


def _positive(text):
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _sizes(text):
    try:
        sizes = [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError("sizes are comma-separated integers") from None
    if not sizes or min(sizes) <= 0:
        raise argparse.ArgumentTypeError("sizes must be positive")
    return sizes


def build_parser(default_budget: int) -> argparse.ArgumentParser:
    p = _Parser(prog="cstream", description="Checked corecursive stream interpreter.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="evaluate an expression against a program")
    run.add_argument("program", help="program file")
    run.add_argument("expr", help="expression to evaluate")
    run.add_argument("--checker", choices=CHECKERS, default="optimized")
    run.add_argument("--budget", type=_positive, default=default_budget)
    run.add_argument("--at", type=_natural, action="append", default=[], metavar="I",
                     help="print element I of the resulting stream (repeatable)")
    run.add_argument("--take", type=_natural, metavar="K", help="print the first K elements")
    run.add_argument("--json", action="store_true", help="machine-readable output")
    run.add_argument("--trace", action="store_true", help="log the derivation to stderr")

    check = sub.add_parser("check", help="judge an environment well-defined or not")
    check.add_argument("env", help="capsule JSON or 'x = value' lines")
    check.add_argument("--checker", choices=("naive", "optimized"), default="optimized")
    check.add_argument("--both", action="store_true", help="run both checkers and compare")
    check.add_argument("--json", action="store_true")

    b = sub.add_parser("bench", help="time both checkers on worst-case environments")
    b.add_argument("--family", choices=bench.FAMILIES, action="append",
                   help="family to run (repeatable; default all)")
    b.add_argument("--sizes", type=_sizes, default=[500, 1000, 2000])
    b.add_argument("--backend", choices=("compiled", "python"), default=None)
    b.add_argument("--repeats", type=_positive, default=5)

    f = sub.add_parser("fuzz", help="cross-validate checkers, indexer and oracle")
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--count", type=_natural, default=1000)
    f.add_argument("--exhaustive", metavar="VARS,NODES", type=_sizes,
                   help="also run every environment up to this size")
    f.add_argument("--prefix", type=_positive, default=50, help="elements compared per case")
    f.add_argument("--jobs", type=_positive, default=1, help="worker threads")
    f.add_argument("--all", action="store_true", help="emit every report, not just failures")
    return p


# ---------------------------------------------------------------- subcommands


def cmd_run(args, out) -> int:
    program = parse_program(_read(args.program))
    config = EvalConfig(budget=args.budget, checker=args.checker, trace_derivation=args.trace)
    capsule = run_program(program, args.expr, config)
    result = {"capsule": capsule.to_json()}
    lines = [] if (args.at or args.take is not None) else [str(capsule)]
    if args.at or args.take is not None:
        if not isinstance(capsule.root, Stream):
            raise EvalError(f"--at/--take need a stream, got {capsule.root}")
        sv = capsule.root.value
        requested = list(args.at) + list(range(args.take or 0))
        values, _ = indexer.index_many(capsule.env, sv, requested, args.budget)
        at_values = values[:len(args.at)]
        take_values = values[len(args.at):]
        if args.at:
            result["at"] = {str(i): format_num(v) for i, v in zip(args.at, at_values)}
            lines += [f"{i}: {format_num(v)}" for i, v in zip(args.at, at_values)]
        if args.take is not None:
            result["take"] = [format_num(v) for v in take_values]
            lines.append(" ".join(result["take"]))
    if args.json:
        print(json.dumps(result), file=out)
    else:
        print("\n".join(lines), file=out)
    return EXIT_OK


def load_env(path: str) -> Capsule:
    """Capsule JSON, or the text form accepted by :func:`parse_env`."""
    text = _read(path)
    if text.lstrip().startswith("{"):
        try:
            return Capsule.loads(text)
        except (ValueError, KeyError, TypeError) as err:
            raise ParseError(f"bad capsule JSON: {err}") from None
    return parse_env(text)


def cmd_check(args, out) -> int:
    capsule = load_env(args.env)
    if not isinstance(capsule.root, Stream):
        raise ParseError("the capsule root must be a stream value")
    sv = capsule.root.value
    judges = {"naive": wd_judge, "optimized": owd_judge}
    names = ("naive", "optimized") if args.both else (args.checker,)
    verdicts = {n: "well-defined" if judges[n](capsule.env, sv) else "rejected" for n in names}
    if args.json:
        print(json.dumps(verdicts), file=out)
    elif args.both:
        for n in names:
            print(f"{n}: {verdicts[n]}", file=out)
    else:
        print(verdicts[args.checker], file=out)
    if len(set(verdicts.values())) > 1:
        print("error: the checkers disagree", file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_bench(args, out) -> int:
    rows = []
    for family in args.family or bench.FAMILIES:
        rows += bench.run(family, args.sizes, backend=args.backend, repeats=args.repeats)
    bench.write_csv(rows, out)
    return EXIT_OK


def fuzz_cases(seed: int, count: int, exhaustive=None):
    if exhaustive:
        if len(exhaustive) != 2:
            raise ValueError("--exhaustive takes VARS,NODES")
        yield from oracle.enumerate_envs(*exhaustive)
    yield from oracle.random_envs(seed, count)


def _shard(cases, k):
    return [oracle.cross_validate(env, root, k) for env, root in cases]


def cmd_fuzz(args, out) -> int:
    cases = list(fuzz_cases(args.seed, args.count, args.exhaustive))
    size = max(1, -(-len(cases) // (args.jobs * 4)))
    chunks = [cases[i:i + size] for i in range(0, len(cases), size)]
    tally = Counter()
    with ThreadPoolExecutor(max_workers=args.jobs) as pool:
        for reports in pool.map(lambda c: _shard(c, args.prefix), chunks):
            for r in reports:
                tally[r["outcome"]] += 1
                if args.all or r["outcome"] in oracle.FAILURES:
                    print(oracle.report_line(r), file=out)
    print(json.dumps({"summary": dict(sorted(tally.items())), "cases": len(cases)}), file=out)
    return EXIT_MISMATCH if any(tally[o] for o in oracle.FAILURES) else EXIT_OK


COMMANDS = {"run": cmd_run, "check": cmd_check, "bench": cmd_bench, "fuzz": cmd_fuzz}


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as err:
        raise ParseError(f"cannot read {path}: {err.strerror}") from None


def exit_code(err: BaseException) -> int:
    if isinstance(err, BudgetExceeded):
        return EXIT_BUDGET
    if isinstance(err, EvalError):
        return EXIT_RUNTIME
    return EXIT_PARSE


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        budget = indexer.default_budget()
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_PARSE
    args = build_parser(budget).parse_args(argv)
    try:
        return COMMANDS[args.command](args, out)
    except EvalError as err:
        print(f"error: {err.diagnostic()}", file=sys.stderr)
        return exit_code(err)
    except (CStreamError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
