"""Command-line front end.

Every subcommand produces a RunReport that serializes to a JSON
document or a flat CSV (one result record per row).  Floats are
rounded to a configurable number of significant digits (default 6) so
output is stable enough for golden-file comparison.  Exit codes:
0 success, 2 usage or precondition error, 3 numeric non-convergence.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import __version__
from .asymptotic import SECRETARY_LIMIT, ConvergenceError, optimize_beta, q_value
from .core import ProblemConfig, as_beta
from .exact import exact_r, optimal_cutoff
from .montecarlo import default_workers, simulate_r

CSV_COLUMNS = {
    "exact": ["n", "k", "beta", "value", "numerator", "denominator"],
    "asymptotic": ["k", "beta", "q", "terms", "residual"],
    "table": ["k", "beta", "q", "terms", "residual"],
    "simulate": ["n", "k", "beta", "trials", "seed", "mean", "std_error", "successes"],
    "optimize": ["k", "beta_star", "q_star", "note"],
}


@dataclass
class RunReport:
    command: str
    parameters: dict
    results: list[dict]
    text: str
    seed: int | None = None
    timing_ms: float = 0.0
    warnings: list[str] = field(default_factory=list)

    def to_document(self) -> dict:
        return {
            "command": self.command,
            "parameters": self.parameters,
            "results": self.results,
            "metadata": {
                "version": __version__,
                "seed": self.seed,
                "timing_ms": round(self.timing_ms, 3),
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_document(), indent=2) + "\n"

    def to_csv(self) -> str:
        columns = CSV_COLUMNS[self.command]
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(columns)
        for record in self.results:
            writer.writerow([record.get(column, "") for column in columns])
        return buffer.getvalue()


def _round_sig(value: float, precision: int) -> float:
    return float(f"{value:.{precision}g}")


def _fmt(value: float, precision: int) -> str:
    return f"{value:.{precision}g}"


def _parse_int_list(raw: str) -> list[int]:
    """Comma list ('2,3,10') or inclusive range ('2:10:2')."""
    raw = raw.strip()
    if not raw:
        raise ValueError("empty list")
    if ":" in raw:
        parts = raw.split(":")
        if len(parts) != 3:
            raise ValueError(f"range syntax is start:stop:step, got {raw!r}")
        start, stop, step = (int(p) for p in parts)
        if step <= 0 or stop < start:
            raise ValueError(f"bad range {raw!r}")
        return list(range(start, stop + 1, step))
    return [int(p) for p in raw.split(",")]


def _parse_beta_list(raw: str) -> list[Fraction]:
    """Comma list ('0.5,0.63') or inclusive range ('0.1:0.9:0.1').

    Values are exact decimal fractions, so a 0.1-step sweep lands on
    0.1, 0.2, ... with no float drift.
    """
    raw = raw.strip()
    if not raw:
        raise ValueError("empty list")
    if ":" in raw:
        parts = raw.split(":")
        if len(parts) != 3:
            raise ValueError(f"range syntax is start:stop:step, got {raw!r}")
        start, stop, step = (Fraction(p) for p in parts)
        if step <= 0 or stop < start:
            raise ValueError(f"bad range {raw!r}")
        values = []
        current = start
        while current <= stop:
            values.append(as_beta(current))
            current += step
        return values
    return [as_beta(p) for p in raw.split(",")]


def _cmd_exact(args) -> RunReport:
    beta = as_beta(args.beta)
    warnings = []
    if args.k == 1:
        warnings.append("k=1 is the classical secretary problem; beta is ignored")
    value = exact_r(args.n, args.k, beta)
    approx = _round_sig(float(value), args.precision)
    record = {
        "n": args.n,
        "k": args.k,
        "beta": _round_sig(float(beta), args.precision),
        "value": approx,
        "numerator": value.numerator,
        "denominator": value.denominator,
    }
    if args.rational:
        text = f"R({args.n}, {args.k}) = {value.numerator}/{value.denominator} ({_fmt(float(value), args.precision)})"
    else:
        text = f"R({args.n}, {args.k}) = {_fmt(float(value), args.precision)}"
    return RunReport(
        command="exact",
        parameters={"n": args.n, "k": args.k, "beta": str(args.beta), "rational": args.rational},
        results=[record],
        text=text,
        warnings=warnings,
    )


def _asymptotic_record(k: int, beta: Fraction, tol: float, precision: int) -> dict:
    if k == 1:
        return {
            "k": 1,
            "beta": _round_sig(float(beta), precision),
            "q": _round_sig(SECRETARY_LIMIT, precision),
            "terms": 0,
            "residual": 0.0,
        }
    series = q_value(k, float(beta), tol)
    return {
        "k": k,
        "beta": _round_sig(float(beta), precision),
        "q": _round_sig(series.value, precision),
        "terms": series.terms_used,
        "residual": _round_sig(series.residual_bound, precision),
    }


def _cmd_asymptotic(args) -> RunReport:
    beta = as_beta(args.beta)
    warnings = []
    if args.k == 1:
        warnings.append("k=1 has the constant limit 1/e; no series was evaluated")
    record = _asymptotic_record(args.k, beta, args.tol, args.precision)
    if args.k == 1:
        text = f"Q(1) = {_fmt(SECRETARY_LIMIT, args.precision)} (constant 1/e)"
    else:
        text = (
            f"Q({args.k}, beta={_fmt(float(beta), args.precision)}) = {_fmt(record['q'], args.precision)}"
            f"  [terms={record['terms']}, residual<={_fmt(record['residual'], args.precision)}]"
        )
    return RunReport(
        command="asymptotic",
        parameters={"k": args.k, "beta": str(args.beta), "tol": args.tol},
        results=[record],
        text=text,
        warnings=warnings,
    )


def _cmd_simulate(args) -> RunReport:
    beta = as_beta(args.beta)
    config = ProblemConfig(n_total=args.n, k=args.k, beta=beta)
    workers = args.workers if args.workers is not None else default_workers()
    warnings = []
    if args.k == 1:
        warnings.append("k=1 simulates the optimal secretary cutoff rule; beta is ignored")
    estimate = simulate_r(config, args.trials, args.seed, workers)
    record = {
        "n": args.n,
        "k": args.k,
        "beta": _round_sig(float(beta), args.precision),
        "trials": args.trials,
        "seed": args.seed,
        "mean": _round_sig(estimate.mean, args.precision),
        "std_error": _round_sig(estimate.std_error, args.precision),
        "successes": estimate.successes,
    }
    text = (
        f"simulated R({args.n}, {args.k}) = {_fmt(estimate.mean, args.precision)}"
        f" +- {_fmt(estimate.std_error, args.precision)}"
        f"  [{estimate.successes}/{args.trials} successes, seed={args.seed}]"
    )
    return RunReport(
        command="simulate",
        parameters={
            "n": args.n,
            "k": args.k,
            "beta": str(args.beta),
            "trials": args.trials,
            "seed": args.seed,
            "workers": workers,
        },
        results=[record],
        text=text,
        seed=args.seed,
        warnings=warnings,
    )


def _cmd_table(args) -> RunReport:
    ks = _parse_int_list(args.k)
    betas = _parse_beta_list(args.beta)
    if not ks or not betas:
        raise ValueError("k and beta lists must be nonempty")
    records = [
        _asymptotic_record(k, beta, args.tol, args.precision) for k in ks for beta in betas
    ]
    lines = [f"{'k':>4}  {'beta':>8}  {'q':>10}  {'terms':>6}  {'residual':>10}"]
    for record in records:
        lines.append(
            f"{record['k']:>4}  {record['beta']:>8g}  {record['q']:>10g}"
            f"  {record['terms']:>6}  {record['residual']:>10g}"
        )
    return RunReport(
        command="table",
        parameters={"k": args.k, "beta": args.beta, "tol": args.tol},
        results=records,
        text="\n".join(lines),
    )


def _cmd_optimize(args) -> RunReport:
    if args.k < 2:
        raise ValueError("K must be >= 2 (K=1 has no beta to optimize)")
    optimum = optimize_beta(args.k, args.tol)
    record = {
        "k": optimum.k,
        "beta_star": _round_sig(optimum.beta_star, args.precision),
        "q_star": _round_sig(optimum.q_star, args.precision),
        "note": optimum.method_note,
    }
    text = (
        f"beta*({args.k}) = {_fmt(optimum.beta_star, args.precision)}"
        f"  with Q = {_fmt(optimum.q_star, args.precision)}"
    )
    return RunReport(
        command="optimize",
        parameters={"k": args.k, "tol": args.tol},
        results=[record],
        text=text,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="swh",
        description="Selecting-with-history stopping strategy: exact, asymptotic "
        "and simulated success probabilities.",
    )
    parser.add_argument("--version", action="version", version=f"swh {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--output", metavar="PATH", help="write to a file instead of stdout")
    common.add_argument(
        "--precision", type=int, default=6, metavar="DIGITS",
        help="significant digits for floating output (default 6)",
    )

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("exact", parents=[common], help="exact success probability R(N, K)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--beta", default="0.63")
    p.add_argument("--rational", action="store_true", help="also print the reduced fraction")
    p.set_defaults(handler=_cmd_exact)

    p = sub.add_parser("asymptotic", parents=[common], help="limiting success probability Q(K)")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--beta", default="0.63")
    p.add_argument("--tol", type=float, default=1e-6)
    p.set_defaults(handler=_cmd_asymptotic)

    p = sub.add_parser("simulate", parents=[common], help="Monte Carlo estimate of R(N, K)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--beta", default="0.63")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument(
        "--workers", type=int, default=None,
        help="parallel workers (default 1, or env SWH_WORKERS)",
    )
    p.set_defaults(handler=_cmd_simulate)

    p = sub.add_parser("table", parents=[common], help="Q(K, beta) over sweeps of K and beta")
    p.add_argument("--k", required=True, help="comma list or start:stop:step")
    p.add_argument("--beta", default="0.63", help="comma list or start:stop:step")
    p.add_argument("--tol", type=float, default=1e-6)
    p.set_defaults(handler=_cmd_table)

    p = sub.add_parser("optimize", parents=[common], help="best beta for a given K")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--tol", type=float, default=1e-6)
    p.set_defaults(handler=_cmd_optimize)

    return parser


def render(report: RunReport, output_format: str) -> str:
    if output_format == "json":
        return report.to_json()
    if output_format == "csv":
        return report.to_csv()
    return report.text + "\n"


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.perf_counter()
    try:
        report = args.handler(args)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    report.timing_ms = (time.perf_counter() - started) * 1000.0

    for warning in report.warnings:
        print(f"warning: {warning}", file=sys.stderr)

    rendered = render(report, args.format)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as handle:
            handle.write(rendered)
    else:
        sys.stdout.write(rendered)
    return 0


if __name__ == "__main__":
    sys.exit(main())
