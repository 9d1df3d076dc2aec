"""Interrupted time series analysis via segmented regression.

Fits y_t = b0 + b1*T + b2*X + b3*X*S + e_t around a known intervention month
by OLS or maximum-likelihood GLS with AR(1)/ARMA(1,1) errors, projects the
no-intervention counterfactual, and reports absolute and relative impact
tables with residual diagnostics.
"""

from ._kernels import BACKEND as KERNEL_BACKEND
from .arma import ErrorModel, ErrorParams, ar1, arma11, autocovariance, correlation_matrix, iid
from .design import (
    InterventionSpec,
    SegmentedDesign,
    TimeSeriesDataset,
    build_design,
    encode_time_index,
)
from .diagnostics import DiagnosticsReport, acf, diagnose, durbin_watson, ljung_box
from .effects import EffectTable, counterfactual, effect_table, format_significance
from .estimation import FitResult, fit_gls, fit_gls_ml, fit_ols, hac_se, p_value
from .ingest import ingest_csv, write_dataset_csv
from .periods import Period, month_range
from .report import AnalysisConfig, AnalysisReport, emit_plot_series, run_analysis
from .simulate import SimulationSpec, gen_arma_noise, gen_its_dataset, monte_carlo_coverage

__version__ = "0.1.0"

__all__ = [
    "KERNEL_BACKEND",
    "ErrorModel",
    "ErrorParams",
    "ar1",
    "arma11",
    "autocovariance",
    "correlation_matrix",
    "iid",
    "InterventionSpec",
    "SegmentedDesign",
    "TimeSeriesDataset",
    "build_design",
    "encode_time_index",
    "DiagnosticsReport",
    "acf",
    "diagnose",
    "durbin_watson",
    "ljung_box",
    "EffectTable",
    "counterfactual",
    "effect_table",
    "format_significance",
    "FitResult",
    "fit_gls",
    "fit_gls_ml",
    "fit_ols",
    "hac_se",
    "p_value",
    "ingest_csv",
    "write_dataset_csv",
    "Period",
    "month_range",
    "AnalysisConfig",
    "AnalysisReport",
    "emit_plot_series",
    "run_analysis",
    "SimulationSpec",
    "gen_arma_noise",
    "gen_its_dataset",
    "monte_carlo_coverage",
    "__version__",
]
