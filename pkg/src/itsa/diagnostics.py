"""Residual autocorrelation diagnostics: Durbin-Watson, ACF, Ljung-Box.

These justify (or reject) the autocorrelated-error structure: run them on
raw residuals to motivate a GLS fit and on whitened residuals to check that
the fitted correlation structure is adequate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import gammaincc

from .estimation import FitResult
from .exceptions import ConfigError, DegenerateInputError

DEFAULT_MAX_LAG = 10


@dataclass(frozen=True)
class LjungBoxResult:
    q: float
    df: int
    p_value: float


@dataclass(frozen=True)
class DiagnosticsReport:
    """Autocorrelation diagnostics for one residual vector."""

    residual_kind: str  # "raw" or "whitened"
    durbin_watson: float
    acf: tuple[tuple[int, float], ...]
    ljung_box: LjungBoxResult


def _check_residuals(residuals, min_n=2) -> np.ndarray:
    e = np.asarray(residuals, dtype=np.float64)
    if e.ndim != 1 or e.shape[0] < min_n:
        raise DegenerateInputError(f"need a 1-d residual vector of length >= {min_n}")
    if not np.any(e != 0.0):
        raise DegenerateInputError("residual vector is identically zero")
    return e


def durbin_watson(residuals) -> float:
    """Sum of squared first differences over the sum of squares."""
    e = _check_residuals(residuals)
    return float(np.sum(np.diff(e) ** 2) / np.sum(e * e))


def acf(residuals, max_lag: int) -> np.ndarray:
    """Sample autocorrelations rho_1 .. rho_max_lag (mean-corrected)."""
    e = _check_residuals(residuals)
    n = e.shape[0]
    if not 1 <= max_lag < n:
        raise ConfigError(f"max_lag must be in [1, n), got {max_lag} with n={n}")
    d = e - e.mean()
    denom = float(d @ d)
    if denom == 0.0:
        raise DegenerateInputError("residuals are constant; ACF undefined")
    return np.array([float(d[k:] @ d[:-k]) / denom for k in range(1, max_lag + 1)])


def ljung_box_from_acf(rho, n: int, fitted_params: int = 0) -> LjungBoxResult:
    """Ljung-Box statistic from precomputed autocorrelations rho_1..rho_h."""
    rho = np.asarray(rho, dtype=np.float64)
    h = rho.shape[0]
    if h <= fitted_params:
        raise ConfigError(
            f"lags ({h}) must exceed the fitted parameter count ({fitted_params})"
        )
    k = np.arange(1, h + 1)
    q = float(n * (n + 2.0) * np.sum(rho * rho / (n - k)))
    df = h - fitted_params
    # chi-square upper tail
    p = float(gammaincc(df / 2.0, q / 2.0))
    return LjungBoxResult(q=q, df=df, p_value=p)


def ljung_box(residuals, lags: int, fitted_params: int = 0) -> LjungBoxResult:
    """Portmanteau test of no autocorrelation up to ``lags``.

    ``fitted_params`` is the number of correlation parameters estimated from
    the same residuals (reduces the chi-square degrees of freedom).
    """
    e = _check_residuals(residuals)
    if lags >= e.shape[0]:
        raise ConfigError(f"lags must be < n, got {lags} with n={e.shape[0]}")
    return ljung_box_from_acf(acf(e, lags), e.shape[0], fitted_params)


def default_max_lag(n: int) -> int:
    """min(10, n - 5): small-sample-stable lag depth."""
    return max(1, min(DEFAULT_MAX_LAG, n - 5))


def report(
    residuals, residual_kind: str = "raw", max_lag: int | None = None,
    fitted_params: int = 0,
) -> DiagnosticsReport:
    """Full diagnostics for one residual vector."""
    e = _check_residuals(residuals)
    lags = default_max_lag(e.shape[0]) if max_lag is None else max_lag
    rho = acf(e, lags)
    return DiagnosticsReport(
        residual_kind=residual_kind,
        durbin_watson=durbin_watson(e),
        acf=tuple((k + 1, float(r)) for k, r in enumerate(rho)),
        ljung_box=ljung_box_from_acf(rho, e.shape[0], fitted_params),
    )


def diagnose(fit: FitResult) -> tuple[DiagnosticsReport, ...]:
    """Diagnostics for a fit: raw residuals, plus whitened ones under GLS.

    The whitened report uses degrees-of-freedom reduced by the number of
    fitted correlation parameters (1 for AR(1), 2 for ARMA(1,1)) when the
    parameters were estimated by ML.
    """
    from .arma import N_CORR_PARAMS

    reports = [report(fit.residuals_raw, "raw")]
    if fit.error_kind != "iid":
        m = N_CORR_PARAMS[fit.error_kind] if fit.method == "gls-ml" else 0
        reports.append(report(fit.residuals_whitened, "whitened", fitted_params=m))
    return tuple(reports)
