"""Command-line interface.

Subcommands: ``fit`` (coefficient tables), ``effects`` (counterfactual gap
tables plus plot-ready series), ``diagnose`` (residual diagnostics) and
``simulate`` (synthetic dataset generation). Exit codes: 0 success,
1 internal/numerical, 2 config/validation, 3 data. Errors print one
machine-parsable line ``error: <CODE>: <message>`` to stderr.
"""

from __future__ import annotations

import argparse
import sys

from .arma import ErrorModel, ErrorParams
from .exceptions import ConfigError, ItsaError
from .ingest import write_dataset_csv
from .periods import Period
from .report import (
    AnalysisConfig,
    render_text,
    run_analysis,
    write_machine_report,
)
from .simulate import SimulationSpec, gen_its_dataset

SECTIONS_BY_COMMAND = {
    "fit": ("coefficients", "fit_info"),
    "effects": ("effects", "plot"),
    "diagnose": ("diagnostics", "acf"),
}


def _parse_period(text: str) -> Period:
    try:
        return Period.parse(text)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _parse_units(text: str | None) -> dict[str, str]:
    if not text:
        return {}
    units = {}
    for item in text.split(","):
        if "=" not in item:
            raise ConfigError(f"units must be name=label pairs, got {item!r}")
        name, label = item.split("=", 1)
        units[name.strip()] = label.strip()
    return units


def _add_analysis_args(parser: argparse.ArgumentParser, with_horizons: bool) -> None:
    parser.add_argument("--input", required=True, help="input CSV path")
    parser.add_argument("--date-col", default="date", help="date column name")
    parser.add_argument(
        "--date-format", default="YYYY-MM", help="date format (YYYY-MM or strptime)"
    )
    parser.add_argument(
        "--outcomes", default=None,
        help="comma-separated outcome columns (default: all non-date columns)",
    )
    parser.add_argument(
        "--intervention", required=True, help="intervention month, YYYY-MM"
    )
    parser.add_argument(
        "--error", default="iid", choices=["iid", "ar1", "arma11"],
        help="residual process (iid fits OLS, otherwise ML GLS)",
    )
    parser.add_argument(
        "--hac", nargs="?", const="auto", default=None, metavar="BANDWIDTH",
        help="report Newey-West standard errors (iid only); optional bandwidth",
    )
    if with_horizons:
        parser.add_argument(
            "--horizons", default="all",
            help='"all" or comma-separated post-intervention months',
        )
    parser.add_argument(
        "--format", default="text", choices=["text", "csv", "jsonl"],
        help="output format (csv/jsonl write one file per section)",
    )
    parser.add_argument(
        "--out", default=None,
        help="output path: file for text, directory for csv/jsonl",
    )
    parser.add_argument(
        "--units", default=None,
        help='per-series unit labels, e.g. "BT=Billion IDR,TWP90=Point"',
    )


def _build_config(args, command: str) -> AnalysisConfig:
    horizons = None
    if command == "effects" and args.horizons != "all":
        horizons = tuple(_parse_period(h) for h in args.horizons.split(","))
    hac = args.hac is not None
    hac_bandwidth = None
    if hac and args.hac != "auto":
        try:
            hac_bandwidth = int(args.hac)
        except ValueError:
            raise ConfigError(f"--hac bandwidth must be an integer, got {args.hac!r}")
    return AnalysisConfig(
        input_path=args.input,
        intervention=_parse_period(args.intervention),
        outcomes=tuple(args.outcomes.split(",")) if args.outcomes else None,
        date_column=args.date_col,
        date_format=args.date_format,
        error=args.error,
        hac=hac,
        hac_bandwidth=hac_bandwidth,
        horizons=horizons,
        output_format=args.format,
        output_path=args.out,
        units=_parse_units(args.units),
    )


def _run_command(args, command: str) -> int:
    config = _build_config(args, command)
    report = run_analysis(config)
    sections = SECTIONS_BY_COMMAND[command]
    if config.output_format == "text":
        text = render_text(report, sections)
        if config.output_path:
            with open(config.output_path, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    else:
        if not config.output_path:
            raise ConfigError("--out directory is required for csv/jsonl output")
        write_machine_report(report, config.output_path, sections)
    return 0


def _run_simulate(args) -> int:
    beta = tuple(float(b) for b in args.beta.split(","))
    if len(beta) != 4:
        raise ConfigError("--beta needs 4 comma-separated values b0,b1,b2,b3")
    model = ErrorModel(
        args.error, ErrorParams(phi=args.phi, theta=args.theta, sigma2=args.sigma2)
    )
    spec = SimulationSpec(
        n=args.n,
        intervention_index=args.intervention_index,
        beta=beta,
        error=model,
        seed=args.seed,
        start_period=_parse_period(args.start_period),
        label=args.label,
    )
    dataset = gen_its_dataset(spec)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            write_dataset_csv(dataset, fh, date_column=args.date_col)
    else:
        write_dataset_csv(dataset, sys.stdout, date_column=args.date_col)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="itsa",
        description="Interrupted time series analysis via segmented regression",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for command, desc in [
        ("fit", "fit the segmented regression and print coefficient tables"),
        ("effects", "project the counterfactual and print impact tables"),
        ("diagnose", "residual autocorrelation diagnostics"),
    ]:
        p = sub.add_parser(command, help=desc)
        _add_analysis_args(p, with_horizons=(command == "effects"))

    p = sub.add_parser("simulate", help="generate a synthetic dataset as CSV")
    p.add_argument("--n", type=int, required=True, help="number of months")
    p.add_argument(
        "--intervention-index", type=int, required=True,
        help="1-based index of the first post-intervention month",
    )
    p.add_argument("--beta", required=True, help="true coefficients b0,b1,b2,b3")
    p.add_argument("--error", default="iid", choices=["iid", "ar1", "arma11"])
    p.add_argument("--phi", type=float, default=0.0)
    p.add_argument("--theta", type=float, default=0.0)
    p.add_argument("--sigma2", type=float, default=1.0)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--start-period", default="2000-01", help="first month, YYYY-MM")
    p.add_argument("--label", default="y", help="series name in the output")
    p.add_argument("--date-col", default="date")
    p.add_argument("--out", default=None, help="output CSV path (default stdout)")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "simulate":
            return _run_simulate(args)
        return _run_command(args, args.command)
    except ItsaError as exc:
        print(f"error: {exc.code}: {exc}", file=sys.stderr)
        return exc.exit_code
    except Exception as exc:  # pragma: no cover - unexpected internal failure
        print(f"error: E_INTERNAL: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
