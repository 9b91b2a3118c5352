"""
Command-line entry point: ostrowski <subcommand> [flags].

Reports go to standard output; logs go to standard error.
Exit codes: 0 success (all cases pass), 1 verification failure or case
error, 2 usage or domain error.
"""
import argparse
import json
import logging
import sys

import pandas as pd

import database
import harness
import report_generator
from catalog import BOUND_CATALOG
from errors import ExprSyntaxError, OstrowskiError, PreconditionError
from expr import as_function
from history import display_history
from interval import Interval
from means import MeanKind, MeanTag, evaluate_mean
from settings import OUTPUT_FORMATS, RunConfig
from supnorm import seminorm_Kp, seminorm_Mp_split, seminorm_P, sup_ratio
from weighted import WeightSpec, find_weight_median

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

GRAMMAR = """\
expression grammar (variable t):
  expr    := expr ('+' | '-') expr | expr ('*' | '/') expr | expr '^' expr
           | '-' expr | '(' expr ')' | number | 't' | 'pi' | 'e' | func '(' expr ')'
  func    := sin | cos | exp | ln | abs | sqrt
  '^' is right-associative and binds tighter than unary minus: -t^2 = -(t^2)

case flags:
  --f, --g, --weight   expressions for f, the comparison function and the weight
  --a, --b             interval
  --x                  number | midpoint | median | sweep:n
  --p                  exponent of the power and local-power bounds
  --norm (--M, --gamma, --K, --P, --N)           analytic constant
  --norm-left (--M1, --N1), --norm-right (--M2, --N2)   split constants
"""


class UsageParser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors also print the grammar and flag table."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n\n{GRAMMAR}")


def _point(text):
    try:
        return float(text)
    except ValueError:
        return text


def _common(parser):
    parser.add_argument("--seed", type=lambda s: int(s, 0), help="corpus seed (default: OSTROWSKI_SEED or 42)")
    parser.add_argument("--format", choices=OUTPUT_FORMATS, dest="output_format")
    parser.add_argument("--rel-tol", type=float, help="quadrature relative tolerance")
    parser.add_argument("--grid", type=int, help="sup-sampling grid cells")
    parser.add_argument("--workers", type=int, help="threads for suite evaluation")
    parser.add_argument("--verbose", "-v", action="store_true", help="debug logging on stderr")


def _case_flags(parser):
    parser.add_argument("--id", dest="bound_id", required=True, choices=list(BOUND_CATALOG))
    parser.add_argument("--f", required=True, help="f(t)")
    parser.add_argument("--g", help="comparison function g(t)")
    parser.add_argument("--weight", dest="w", help="weight w(t)")
    parser.add_argument("--a", type=float, required=True)
    parser.add_argument("--b", type=float, required=True)
    parser.add_argument("--x", type=_point, default="midpoint")
    parser.add_argument("--p", type=float)
    parser.add_argument("--norm", "--M", "--gamma", "--K", "--P", "--N", dest="norm", type=float)
    parser.add_argument("--norm-left", "--M1", "--N1", dest="norm_left", type=float)
    parser.add_argument("--norm-right", "--M2", "--N2", dest="norm_right", type=float)


def build_parser():
    parser = UsageParser(
        prog="ostrowski",
        description="Compute, verify and sharpness-test Ostrowski-type error bounds.",
        epilog=GRAMMAR,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    commands = parser.add_subparsers(dest="command", required=True)

    mean = commands.add_parser("mean", help="evaluate a special mean")
    _common(mean)
    mean.add_argument("--kind", required=True, choices=[tag.value for tag in MeanTag])
    mean.add_argument("--x", type=float, required=True)
    mean.add_argument("--y", type=float, required=True)
    mean.add_argument("--p", type=float, help="order of Lp")

    sup = commands.add_parser("sup", help="sampled seminorm of f")
    _common(sup)
    sup.add_argument("--kind", choices=["ratio", "Kp", "P", "Mp"], default="ratio")
    sup.add_argument("--f", required=True)
    sup.add_argument("--g", default="t")
    sup.add_argument("--a", type=float, required=True)
    sup.add_argument("--b", type=float, required=True)
    sup.add_argument("--p", type=float)
    sup.add_argument("--x", type=float, help="split point for Mp")

    bound = commands.add_parser("bound", help="evaluate one bound", epilog=GRAMMAR,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    _common(bound)
    _case_flags(bound)
    bound.add_argument("--report", help="also write the report to .json, .csv or .xlsx")

    median = commands.add_parser("median", help="weight median")
    _common(median)
    median.add_argument("--weight", required=True)
    median.add_argument("--a", type=float, required=True)
    median.add_argument("--b", type=float, required=True)

    verify = commands.add_parser("verify", help="run a JSONL suite")
    _common(verify)
    verify.add_argument("--suite", required=True)
    verify.add_argument("--report", help="write all reports to .json, .csv or .xlsx")
    verify.add_argument("--store", action="store_true", help="save the run in the history database")

    sharpness = commands.add_parser("sharpness", help="largest lhs/rhs over a built-in family")
    _common(sharpness)
    sharpness.add_argument("--id", dest="bound_id", required=True, choices=list(harness.SHARPNESS_FAMILIES))
    sharpness.add_argument("--n", type=int, default=100)
    sharpness.add_argument("--store", action="store_true")

    node = commands.add_parser("optimal-node", help="x minimizing an x-dependent bound", epilog=GRAMMAR,
                               formatter_class=argparse.RawDescriptionHelpFormatter)
    _common(node)
    _case_flags(node)
    node.add_argument("--node-grid", type=int, help="scan cells before refinement")

    consistency = commands.add_parser("consistency", help="closed forms against the quadrature oracle")
    _common(consistency)
    consistency.add_argument("--id", dest="bound_ids", action="append", choices=list(BOUND_CATALOG))

    history = commands.add_parser("history", help="stored verify runs")
    _common(history)
    history.add_argument("--id", dest="run_id", type=int)
    return parser


def _config(args, **extra):
    return RunConfig.from_env(
        seed=args.seed,
        output_format=args.output_format,
        rel_tol=args.rel_tol,
        sup_grid=args.grid,
        workers=args.workers,
        **extra,
    )


def _emit_record(record, config):
    """Print a flat result dict in the configured format."""
    if config.output_format == "json":
        print(json.dumps({**record, "config": config.as_header()}, indent=2))
    elif config.output_format == "csv":
        print(pd.DataFrame([record]).to_csv(index=False, float_format=report_generator.FLOAT_FORMAT), end="")
    else:
        for key, value in record.items():
            print(f"{key}: {value:.17g}" if isinstance(value, float) else f"{key}: {value}")


def _case(args):
    return harness.CaseSpec(
        bound_id=args.bound_id, f=args.f, a=args.a, b=args.b, x=args.x, g=args.g, w=args.w, p=args.p,
        norm=args.norm, norm_left=args.norm_left, norm_right=args.norm_right,
    )


def run_mean(args):
    config = _config(args)
    kind = MeanKind.parse(args.kind, args.p)
    value = evaluate_mean(kind, args.x, args.y)
    _emit_record({"kind": kind.label, "x": args.x, "y": args.y, "value": value}, config)
    return EXIT_OK


def run_sup(args):
    config = _config(args)
    f = as_function(args.f)
    interval = Interval(args.a, args.b)
    if args.kind == "Mp":
        if args.p is None or args.x is None:
            raise PreconditionError("--kind Mp needs --p and --x")
        left, right = seminorm_Mp_split(f, interval, args.x, args.p, config.sup_grid)
        record = {f"left_{key}": value for key, value in left.as_dict().items()}
        record.update({f"right_{key}": value for key, value in right.as_dict().items()})
    else:
        if args.kind == "Kp":
            if args.p is None:
                raise PreconditionError("--kind Kp needs --p")
            estimate = seminorm_Kp(f, interval, args.p, config.sup_grid)
        elif args.kind == "P":
            estimate = seminorm_P(f, interval, config.sup_grid)
        else:
            estimate = sup_ratio(f, as_function(args.g), interval, config.sup_grid)
        record = estimate.as_dict()
    _emit_record({"kind": args.kind, **record}, config)
    return EXIT_OK


def run_bound(args):
    config = _config(args)
    # malformed expressions surface here with the grammar, not as a case error
    for text in (args.f, args.g, args.w):
        if text:
            as_function(text)
    case = _case(args)
    expanded = harness.expand_case(case)
    if len(expanded) == 1:
        result = harness.check_case(expanded[0], config)
        if result.status == harness.ERROR:
            raise PreconditionError(result.error)
        results, summary = [result], None
    else:
        results, summary = harness.run_suite(expanded, config)
    records = [result.as_dict() for result in results]
    summary_dict = summary.as_dict() if summary is not None else None
    print(report_generator.render(records, config.as_header(), config.output_format, summary_dict))
    if args.report:
        report_generator.write_report(records, config.as_header(), args.report, summary_dict)
    return EXIT_OK if all(result.passed for result in results) else EXIT_FAILED


def run_median(args):
    config = _config(args)
    weight = WeightSpec.build(args.weight, Interval(args.a, args.b), config.rel_tol)
    x0 = find_weight_median(weight)
    _emit_record({"weight": args.weight, "a": args.a, "b": args.b, "x0": x0, "mass": weight.total_mass}, config)
    return EXIT_OK


def _store(command, summary, config, records, suite_path=None):
    run_id = database.save_run(command, summary.as_dict(), config.as_header(), records, suite_path)
    print(f"stored run {run_id}", file=sys.stderr)


def run_verify(args):
    config = _config(args)
    cases = harness.load_suite(args.suite)
    results, summary = harness.run_suite(cases, config)
    records = [result.as_dict() for result in results]
    print(report_generator.render(records, config.as_header(), config.output_format, summary.as_dict()))
    if args.report:
        report_generator.write_report(records, config.as_header(), args.report, summary.as_dict())
    if args.store:
        _store("verify", summary, config, records, args.suite)
    return EXIT_OK if summary.all_passed else EXIT_FAILED


def run_sharpness(args):
    config = _config(args)
    summary, max_ratio = harness.sharpness_scan(args.bound_id, n=args.n, config=config)
    if args.store:
        _store("sharpness", summary, config, [])
    _emit_record({"bound_id": args.bound_id, "n": args.n, "max_ratio": max_ratio,
                  "passed": summary.passed, "failed": summary.failed, "errored": summary.errored}, config)
    return EXIT_OK if summary.all_passed else EXIT_FAILED


def run_optimal_node(args):
    config = _config(args, node_grid=args.node_grid)
    case = _case(args)
    x, rhs = harness.best_node(harness.node_evaluator(case, config), case.interval, config.node_grid)
    _emit_record({"bound_id": case.bound_id, "x": x, "rhs": rhs}, config)
    return EXIT_OK


def run_consistency(args):
    config = _config(args)
    checks, summary = harness.consistency_suite(config, args.bound_ids)
    if config.output_format == "json":
        print(json.dumps({"config": config.as_header(), "summary": summary.as_dict(),
                          "checks": [check.as_dict() for check in checks]}, indent=2))
    else:
        frame = pd.DataFrame([check.as_dict() for check in checks])
        if config.output_format == "csv":
            print(frame.to_csv(index=False, float_format=report_generator.FLOAT_FORMAT), end="")
        else:
            print(frame.to_string(index=False))
            print(f"\n{summary.passed}/{summary.total} within tolerance, worst deviation {summary.max_violation:.3g}")
    return EXIT_OK if summary.all_passed else EXIT_FAILED


def run_history(args):
    text = display_history(args.run_id)
    if text is None:
        raise PreconditionError(f"no stored run with id {args.run_id}")
    print(text)
    return EXIT_OK


COMMANDS = {
    "mean": run_mean,
    "sup": run_sup,
    "bound": run_bound,
    "median": run_median,
    "verify": run_verify,
    "sharpness": run_sharpness,
    "optimal-node": run_optimal_node,
    "consistency": run_consistency,
    "history": run_history,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return COMMANDS[args.command](args)
    except ExprSyntaxError as exc:
        print(f"error: {exc}\n\n{GRAMMAR}", file=sys.stderr)
        return EXIT_USAGE
    except (OstrowskiError, ValueError, ArithmeticError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
