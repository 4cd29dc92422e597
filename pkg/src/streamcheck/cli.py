"""Command-line runner for the bundled example properties and scenario files.

Exit codes: 0 when every executed example's outcome matches its expected
outcome, 1 on a mismatch, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import harness, runtime, sexpr, symbolic
from .examples import EXAMPLES, observed_outcome, run_example
from .harness import HarnessConfig

DEFAULT_SEED = 42


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="streamcheck",
        description="Temporal property testing of micro-batch stream transformations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("list", help="enumerate the bundled examples")

    run = sub.add_parser("run", help="run one bundled example, or all of them")
    run.add_argument("name", help="example name, or 'all'")
    run.add_argument("--seed", type=int, default=DEFAULT_SEED)
    run.add_argument("--min-tests", type=int, default=None, help="override min passing cases")
    run.add_argument("--batch-interval-ms", type=int, default=100)
    run.add_argument("--parallelism", type=int, default=1)
    run.add_argument("--oracle", action="store_true", help="cross-check against the reference judge")
    run.add_argument("--verbose", action="store_true", help="print per-step traces")
    run.add_argument("--json", dest="json_path", default=None, help="write reports as JSON")
    run.add_argument(
        "--inconclusive-warn",
        type=float,
        default=None,
        metavar="R",
        help="warn when the inconclusive ratio exceeds R",
    )

    evaluate = sub.add_parser("eval", help="judge a scenario file (formula, word, expected verdict)")
    evaluate.add_argument("path", help="path to a .sexpr scenario file")
    evaluate.add_argument("--oracle", action="store_true", help="also judge by direct recursion")
    return parser


def _cmd_list() -> int:
    for spec in EXAMPLES.values():
        print(f"{spec.name:24} [{spec.expected:4}] {spec.description}")
    return 0


def _cmd_run(args: argparse.Namespace) -> int:
    if args.name == "all":
        selected = list(EXAMPLES.values())
    elif args.name in EXAMPLES:
        selected = [EXAMPLES[args.name]]
    else:
        print(f"unknown example {args.name!r}; try 'streamcheck list'", file=sys.stderr)
        return 2

    documents = []
    all_match = True
    for spec in selected:
        cfg = HarnessConfig(
            batch_interval_ms=args.batch_interval_ms,
            min_tests_ok=args.min_tests or spec.min_tests_ok,
            seed=args.seed,
            parallelism=args.parallelism,
            oracle_crosscheck=args.oracle,
        )
        report = run_example(spec, cfg)
        outcome = observed_outcome(report)
        matched = outcome == spec.expected
        all_match = all_match and matched
        status = "ok" if matched else "MISMATCH"
        print(
            f"{spec.name:24} expected={spec.expected:4} observed={outcome:5} [{status}] "
            f"cases={report.cases} passed={report.passed} inconclusive={report.inconclusive} "
            f"failed={report.failed} errors={report.errors}"
        )
        if args.inconclusive_warn is not None and report.inconclusive_ratio > args.inconclusive_warn:
            print(
                f"  warning: inconclusive ratio {report.inconclusive_ratio:.2f} "
                f"exceeds {args.inconclusive_warn:.2f}"
            )
        if report.error_message:
            print(f"  error: {report.error_message}")
        if args.verbose and report.counterexample is not None:
            cex = report.counterexample
            print(f"  counterexample in case {cex.case_index}, failing step {cex.failing_step}:")
            for instant, batch in enumerate(cex.prefix, 1):
                print(f"    instant {instant}: {list(batch)!r}")
            for entry in cex.trace:
                print(f"    {entry.line()}")
        documents.append(
            {"example": spec.name, "expected": spec.expected, "observed": outcome}
            | harness.report_to_dict(report)
        )

    if args.json_path:
        with open(args.json_path, "w", encoding="utf-8") as handle:
            json.dump(documents, handle, sort_keys=True, separators=(",", ":"))
            handle.write("\n")
    return 0 if all_match else 1


_ARITHMETIC = {
    "plus": lambda a, b: a + b,
}
_PRED_BUILTINS = {
    "leq": lambda a, b: a <= b,
}


def default_interpretation(phi: symbolic.SymFormula, word) -> symbolic.Interpretation:
    """Initial-model interpretation: nullary symbols denote themselves,
    with built-in arithmetic (`plus`) and ordering (`leq`)."""
    symbols: set = set()

    def collect_term(term: symbolic.Term) -> None:
        if isinstance(term, symbolic.App):
            if not term.args and term.symbol not in _ARITHMETIC:
                symbols.add(term.symbol)
            for arg in term.args:
                collect_term(arg)

    def collect(formula: symbolic.SymFormula) -> None:
        if isinstance(formula, (symbolic.Pred,)):
            for arg in formula.args:
                collect_term(arg)
        elif isinstance(formula, symbolic.Eq):
            collect_term(formula.left)
            collect_term(formula.right)
        elif isinstance(formula, (symbolic.Not, symbolic.Next, symbolic.Consume)):
            collect(formula.body)
        elif isinstance(formula, (symbolic.And, symbolic.Or, symbolic.Implies)):
            collect(formula.left)
            collect(formula.right)
        elif isinstance(formula, (symbolic.Eventually, symbolic.Always)):
            collect_term(formula.timeout)
            collect(formula.body)
        elif isinstance(formula, (symbolic.Until, symbolic.Release)):
            collect_term(formula.timeout)
            collect(formula.left)
            collect(formula.right)

    collect(phi)
    for term, _time in word:
        collect_term(term)
    functions = {name: (lambda name=name: name) for name in sorted(symbols)}
    functions.update(_ARITHMETIC)
    return symbolic.Interpretation(
        functions=functions, predicates=dict(_PRED_BUILTINS), constants=tuple(sorted(symbols))
    )


def _cmd_eval(args: argparse.Namespace) -> int:
    try:
        with open(args.path, encoding="utf-8") as handle:
            formula, word, expected = sexpr.parse_scenario(handle.read())
    except OSError as exc:
        print(f"cannot read {args.path}: {exc}", file=sys.stderr)
        return 2
    except sexpr.SexprError as exc:
        print(f"cannot parse {args.path}: {exc}", file=sys.stderr)
        return 2

    interp = default_interpretation(formula, word)
    monitor = runtime.Monitor(symbolic.compile_formula(formula, interp))
    for term, time in word:
        if monitor.verdict is not None:
            break
        monitor.step(term, time)
    verdict = monitor.finish()
    print(f"{args.path}: verdict={verdict.symbol} expected={expected.symbol}")
    if args.oracle:
        reference = symbolic.judge(word, 1, formula, interp)
        print(f"{args.path}: reference={reference.symbol}")
        if reference is not verdict:
            print("reference judgment disagrees with the stepwise monitor", file=sys.stderr)
            return 1
    return 0 if verdict is expected else 1


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    if args.command == "list":
        return _cmd_list()
    if args.command == "run":
        return _cmd_run(args)
    if args.command == "eval":
        return _cmd_eval(args)
    return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
