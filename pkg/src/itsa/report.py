"""End-to-end analysis runs and report rendering.

``run_analysis`` ingests a CSV, fits every configured outcome, and collects
coefficients, effect tables, diagnostics and plot-ready series. Renderers
share one row-building core so the text, csv and json-lines outputs carry
identical numbers; the machine formats store full-precision ``repr`` floats
while the text format rounds for display (3 decimals for coefficients and
t-statistics, 2 for effect tables).
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .arma import IID, KINDS
from .design import InterventionSpec, TimeSeriesDataset, build_design
from .diagnostics import DiagnosticsReport, diagnose
from .effects import REL_LABEL, EffectTable, effect_table, format_significance
from .estimation import FitResult, fit_gls_ml, fit_ols, hac_se
from .exceptions import ConfigError
from .ingest import ingest_csv, rows_to_csv_text
from .periods import Period

SECTIONS = ("coefficients", "fit_info", "effects", "diagnostics", "acf", "plot")

FORMATS = ("text", "csv", "jsonl")


@dataclass(frozen=True)
class AnalysisConfig:
    """Everything one analysis run needs.

    ``outcomes=None`` selects every non-date column; ``horizons=None``
    selects every post-intervention month.
    """

    input_path: str
    intervention: Period
    outcomes: tuple[str, ...] | None = None
    date_column: str = "date"
    date_format: str = "YYYY-MM"
    error: str = IID
    hac: bool = False
    hac_bandwidth: int | None = None
    horizons: tuple[Period, ...] | None = None
    output_format: str = "text"
    output_path: str | None = None
    units: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if self.error not in KINDS:
            raise ConfigError(f"error kind must be one of {KINDS}, got {self.error!r}")
        if self.outcomes is not None and len(self.outcomes) == 0:
            raise ConfigError("at least one outcome column is required")
        if self.hac and self.error != IID:
            raise ConfigError("HAC standard errors apply to iid/OLS fits only")
        if self.output_format not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}")


@dataclass(frozen=True)
class PlotSeries:
    """Per-period actual/fitted/counterfactual rows for external plotting."""

    periods: tuple[Period, ...]
    actual: np.ndarray
    fitted: np.ndarray
    counterfactual: np.ndarray  # NaN before the intervention


@dataclass(frozen=True)
class OutcomeReport:
    series: str
    unit: str
    fit: FitResult
    effects: EffectTable
    diagnostics: tuple[DiagnosticsReport, ...]
    plot: PlotSeries
    hac_se: np.ndarray | None = None
    hac_bandwidth: int | None = None


@dataclass(frozen=True)
class AnalysisReport:
    config: AnalysisConfig
    dataset: TimeSeriesDataset
    outcomes: tuple[OutcomeReport, ...]


def emit_plot_series(fit: FitResult) -> PlotSeries:
    """Actual, fitted and post-intervention counterfactual per period.

    The counterfactual column is populated only from the intervention month
    onward (the dashed extrapolation of the pre-trend); earlier rows are NaN.
    """
    design = fit.design
    if design is None:
        raise ConfigError("fit has no attached design")
    fitted = design.matrix @ fit.beta
    cf = fit.beta[0] + fit.beta[1] * design.time_index.astype(np.float64)
    cf = np.where(design.dummy == 1, cf, np.nan)
    return PlotSeries(
        periods=design.periods,
        actual=design.response.copy(),
        fitted=fitted,
        counterfactual=cf,
    )


def run_analysis(config: AnalysisConfig) -> AnalysisReport:
    """Ingest, fit, and assemble the full report for every outcome."""
    dataset = ingest_csv(
        config.input_path,
        date_column=config.date_column,
        outcome_columns=list(config.outcomes) if config.outcomes else None,
        date_format=config.date_format,
        units=config.units,
    )
    spec = InterventionSpec(intervention=config.intervention)
    if config.horizons is None:
        horizons = tuple(p for p in dataset.periods if p >= config.intervention)
    else:
        horizons = config.horizons
    outcome_reports = []
    for name in dataset.labels:
        design = build_design(dataset, name, spec)
        if config.error == IID:
            fit = fit_ols(design)
        else:
            fit = fit_gls_ml(design, kind=config.error)
        hac = hac_se(fit, config.hac_bandwidth) if config.hac else None
        unit = dataset.unit(name)
        effects = effect_table(
            fit, design.intervention, horizons, series=name, unit=unit
        )
        outcome_reports.append(
            OutcomeReport(
                series=name,
                unit=unit,
                fit=fit,
                effects=effects,
                diagnostics=diagnose(fit),
                plot=emit_plot_series(fit),
                hac_se=hac,
                hac_bandwidth=config.hac_bandwidth,
            )
        )
    return AnalysisReport(config=config, dataset=dataset, outcomes=tuple(outcome_reports))


def _num(x) -> float | None:
    """Full-precision cell value; non-finite becomes None (empty/null)."""
    x = float(x)
    return x if math.isfinite(x) else None


def section_rows(report: AnalysisReport) -> dict[str, list[dict]]:
    """One list of plain-dict rows per section; shared by all renderers."""
    coeff, fitinfo, eff, diag, acf_rows, plot = [], [], [], [], [], []
    for oc in report.outcomes:
        rows = format_significance(oc.fit)
        for i, row in enumerate(rows):
            rec = {
                "series": oc.series,
                "coefficient": row.name,
                "estimate": _num(row.estimate),
                "se": _num(row.se),
                "t_stat": _num(row.t_stat),
                "p_value": _num(row.p_value),
                "stars": row.stars,
            }
            if oc.hac_se is not None:
                rec["hac_se"] = _num(oc.hac_se[i])
            coeff.append(rec)
        p = oc.fit.error_params
        fitinfo.append(
            {
                "series": oc.series,
                "method": oc.fit.method,
                "error_kind": oc.fit.error_kind,
                "n": oc.fit.df + 4,
                "df": oc.fit.df,
                "sigma2": _num(oc.fit.sigma2),
                "log_lik": _num(oc.fit.log_lik),
                "phi": _num(p.phi) if p else None,
                "theta": _num(p.theta) if p else None,
                "boundary": oc.fit.boundary,
            }
        )
        t = oc.effects
        for i, period in enumerate(t.periods):
            eff.append(
                {
                    "series": oc.series,
                    "period": str(period),
                    "time_index": int(t.time_index[i]),
                    "since_intervention": int(t.since_intervention[i]),
                    "unit": t.unit,
                    "counterfactual": _num(t.counterfactual[i]),
                    "actual_fitted": _num(t.actual_fitted[i]),
                    "delta_abs": _num(t.delta_abs[i]),
                    "delta_rel": None if t.rel_undefined[i] else _num(t.delta_rel[i]),
                }
            )
        for d in oc.diagnostics:
            diag.append(
                {
                    "series": oc.series,
                    "residual_kind": d.residual_kind,
                    "durbin_watson": _num(d.durbin_watson),
                    "ljung_box_q": _num(d.ljung_box.q),
                    "ljung_box_df": d.ljung_box.df,
                    "ljung_box_p": _num(d.ljung_box.p_value),
                }
            )
            for lag, rho in d.acf:
                acf_rows.append(
                    {
                        "series": oc.series,
                        "residual_kind": d.residual_kind,
                        "lag": lag,
                        "acf": _num(rho),
                    }
                )
        ps = oc.plot
        for i, period in enumerate(ps.periods):
            plot.append(
                {
                    "series": oc.series,
                    "period": str(period),
                    "actual": _num(ps.actual[i]),
                    "fitted": _num(ps.fitted[i]),
                    "counterfactual": _num(ps.counterfactual[i]),
                }
            )
    return {
        "coefficients": coeff,
        "fit_info": fitinfo,
        "effects": eff,
        "diagnostics": diag,
        "acf": acf_rows,
        "plot": plot,
    }


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render_section_csv(rows: list[dict]) -> str:
    header = list(rows[0].keys()) if rows else []
    return rows_to_csv_text(header, [[_csv_cell(r[k]) for k in header] for r in rows])


def render_section_jsonl(rows: list[dict]) -> str:
    return "".join(json.dumps(r, allow_nan=False) + "\n" for r in rows)


def write_machine_report(
    report: AnalysisReport, out_dir: str, sections: Sequence[str] | None = None
) -> dict[str, str]:
    """Write one csv/jsonl file per section into ``out_dir``; returns paths."""
    fmt = report.config.output_format
    if fmt not in ("csv", "jsonl"):
        raise ConfigError(f"machine formats are csv and jsonl, got {fmt!r}")
    os.makedirs(out_dir, exist_ok=True)
    all_rows = section_rows(report)
    paths = {}
    for name in sections or SECTIONS:
        rows = all_rows[name]
        if name == "plot":
            # fixed per-series files with the documented 4-column header
            for oc in report.outcomes:
                series_rows = [
                    {k: r[k] for k in ("period", "actual", "fitted", "counterfactual")}
                    for r in rows
                    if r["series"] == oc.series
                ]
                path = os.path.join(out_dir, f"plot_{oc.series}.{fmt}")
                text = (
                    render_section_csv(series_rows)
                    if fmt == "csv"
                    else render_section_jsonl(series_rows)
                )
                with open(path, "w", encoding="utf-8") as fh:
                    fh.write(text)
                paths[f"plot_{oc.series}"] = path
            continue
        path = os.path.join(out_dir, f"{name}.{fmt}")
        text = render_section_csv(rows) if fmt == "csv" else render_section_jsonl(rows)
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
        paths[name] = path
    return paths


def _fmt(x, nd) -> str:
    if x is None or (isinstance(x, float) and not math.isfinite(x)):
        return "" if x is None else str(x)
    return f"{x:.{nd}f}"


def render_text(report: AnalysisReport, sections: Sequence[str] | None = None) -> str:
    """Human-readable tables (coefficients at 3 decimals, effects at 2)."""
    wanted = set(sections or SECTIONS)
    rows = section_rows(report)
    lines: list[str] = []
    for oc in report.outcomes:
        lines.append(f"== Series {oc.series} ({oc.unit}) ==")
        info = next(r for r in rows["fit_info"] if r["series"] == oc.series)
        if "fit_info" in wanted or "coefficients" in wanted:
            head = (
                f"method={info['method']} error={info['error_kind']} "
                f"n={info['n']} df={info['df']}"
            )
            if info["phi"] is not None:
                head += f" phi={_fmt(info['phi'], 3)}"
                if info["error_kind"] == "arma11":
                    head += f" theta={_fmt(info['theta'], 3)}"
                head += f" boundary={'yes' if info['boundary'] else 'no'}"
            lines.append(head)
            lines.append(
                f"sigma2={_fmt(info['sigma2'], 3)} log_lik={_fmt(info['log_lik'], 3)}"
            )
        if "coefficients" in wanted:
            lines.append(f"{'Coefficient':<22} {'Estimate':>14} {'t-stat':>12}")
            for r in rows["coefficients"]:
                if r["series"] != oc.series:
                    continue
                est = _fmt(r["estimate"], 3) + r["stars"]
                t = f"({_fmt(r['t_stat'], 3)})"
                line = f"{r['coefficient']:<22} {est:>14} {t:>12}"
                if "hac_se" in r:
                    line += f"  hac_se={_fmt(r['hac_se'], 3)}"
                lines.append(line)
        if "effects" in wanted:
            lines.append(
                f"{'Period':<9} {'T':>4} {'S':>4} {'Counterfactual':>15} "
                f"{'Fitted':>12} {'Delta (' + oc.unit + ')':>18} {'Delta (' + REL_LABEL + ')':>16}"
            )
            for r in rows["effects"]:
                if r["series"] != oc.series:
                    continue
                lines.append(
                    f"{r['period']:<9} {r['time_index']:>4} {r['since_intervention']:>4} "
                    f"{_fmt(r['counterfactual'], 2):>15} {_fmt(r['actual_fitted'], 2):>12} "
                    f"{_fmt(r['delta_abs'], 2):>18} {_fmt(r['delta_rel'], 2):>16}"
                )
        if "diagnostics" in wanted:
            for r in rows["diagnostics"]:
                if r["series"] != oc.series:
                    continue
                lines.append(
                    f"diagnostics[{r['residual_kind']}]: DW={_fmt(r['durbin_watson'], 3)} "
                    f"LB Q={_fmt(r['ljung_box_q'], 3)} df={r['ljung_box_df']} "
                    f"p={_fmt(r['ljung_box_p'], 4)}"
                )
                acf_vals = [
                    f"{a['lag']}:{_fmt(a['acf'], 3)}"
                    for a in rows["acf"]
                    if a["series"] == oc.series and a["residual_kind"] == r["residual_kind"]
                ]
                lines.append("acf " + " ".join(acf_vals))
        if "plot" in wanted:
            lines.append("period,actual,fitted,counterfactual")
            for r in rows["plot"]:
                if r["series"] != oc.series:
                    continue
                lines.append(
                    f"{r['period']},{_fmt(r['actual'], 3)},{_fmt(r['fitted'], 3)},"
                    f"{_fmt(r['counterfactual'], 3)}"
                )
        lines.append("")
    return "\n".join(lines)
