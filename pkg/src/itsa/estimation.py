"""Segmented-regression estimators: OLS, GLS and maximum-likelihood GLS.

All solves are factorization based (QR for least squares, Cholesky for
whitening); no matrix is ever inverted explicitly. The ML fit maximizes the
profile Gaussian log-likelihood

    l(phi, theta) = -(n/2) * ln(2*pi*s2(phi, theta)) - ln|R(phi, theta)|/2 - n/2

where s2 = whitened RSS / n, over unconstrained correlation parameters via
Nelder-Mead with three fixed restarts.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy.linalg import cho_factor, cho_solve, qr, solve_triangular, toeplitz
from scipy.optimize import minimize
from scipy.special import betainc

from .arma import (
    AR1,
    ARMA11,
    IID,
    ErrorModel,
    ErrorParams,
    autocovariance,
    constrain,
    unconstrain,
    variance_ratio,
)
from .design import SegmentedDesign
from .exceptions import (
    ConfigError,
    ConvergenceError,
    DegenerateCovarianceError,
    SingularDesignError,
)

N_PARAMS = 4

# |phi| or |theta| beyond this is reported as a boundary solution.
BOUNDARY_TOL = 1.0 - 1e-5

# Nelder-Mead settings: fixed restarts on the constrained scale, tolerance
# 1e-8 on the log-likelihood.
ML_STARTS = (-0.3, 0.0, 0.5)
ML_MAX_ITER = 500
ML_FATOL = 1e-8
ML_XATOL = 1e-9


@dataclass(frozen=True)
class FitResult:
    """Coefficient estimates with inference for one segmented regression.

    ``beta`` is (level, pre-trend, level change, trend change); trends are
    per month. ``sigma2`` is the innovation-variance estimate: RSS/(n-4)
    under OLS, the ML estimate scaled to innovation units under GLS.
    """

    method: str
    beta: np.ndarray
    se: np.ndarray
    t_stats: np.ndarray
    p_values: np.ndarray
    df: int
    sigma2: float
    log_lik: float
    residuals_raw: np.ndarray
    residuals_whitened: np.ndarray
    error_kind: str = IID
    error_params: ErrorParams | None = None
    boundary: bool = False
    design: SegmentedDesign | None = None

    @property
    def fitted(self) -> np.ndarray:
        if self.design is None:
            raise ConfigError("fit has no attached design")
        return self.design.response - self.residuals_raw

    @classmethod
    def from_coefficients(cls, beta) -> FitResult:
        """A bare result holding only coefficients (no inference).

        Lets externally published coefficient tables drive the effect
        computations without refitting.
        """
        beta = np.asarray(beta, dtype=np.float64)
        if beta.shape != (N_PARAMS,):
            raise ConfigError(f"beta must have {N_PARAMS} entries")
        nan4 = np.full(N_PARAMS, np.nan)
        return cls(
            method="external",
            beta=beta,
            se=nan4,
            t_stats=nan4,
            p_values=nan4,
            df=0,
            sigma2=np.nan,
            log_lik=np.nan,
            residuals_raw=np.empty(0),
            residuals_whitened=np.empty(0),
        )


def p_value(t, df: int):
    """Two-sided Student-t tail probability P(|T_df| >= |t|).

    Computed through the regularized incomplete beta function
    I_{df/(df+t^2)}(df/2, 1/2); monotone decreasing in |t|.
    """
    if df < 1:
        raise ConfigError(f"df must be >= 1, got {df}")
    t = np.asarray(t, dtype=np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        x = df / (df + t * t)
        x = np.where(np.isinf(t), 0.0, x)
    out = np.where(np.isnan(t), np.nan, betainc(df / 2.0, 0.5, x))
    return float(out) if out.ndim == 0 else out


def least_squares(X: np.ndarray, y: np.ndarray):
    """QR-based least squares with unscaled covariance diagonal.

    Returns ``(beta, rss, cov_unscaled_diag)`` where ``cov_unscaled_diag``
    is diag((X'X)^-1). Raises :class:`SingularDesignError` when X is
    rank deficient.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    q, r = qr(X, mode="economic")
    diag = np.abs(np.diag(r))
    if diag.min() <= X.shape[0] * np.finfo(np.float64).eps * diag.max():
        raise SingularDesignError(
            f"design matrix is rank deficient (column count {X.shape[1]})"
        )
    beta = solve_triangular(r, q.T @ y)
    resid = y - X @ beta
    rss = float(resid @ resid)
    # diag((X'X)^-1) = row norms of R^-1; triangular solve, no inversion of X'X
    r_inv = solve_triangular(r, np.eye(X.shape[1]))
    cov_unscaled = np.sum(r_inv * r_inv, axis=1)
    return beta, rss, cov_unscaled


def _corr_cholesky(kind: str, phi: float, theta: float, n: int) -> np.ndarray:
    """Lower Cholesky factor of the n-by-n ARMA correlation matrix."""
    model = ErrorModel(kind, ErrorParams(phi, theta, 1.0))
    gamma = autocovariance(model, n - 1)
    corr = toeplitz(gamma / gamma[0])
    try:
        return np.linalg.cholesky(corr)
    except np.linalg.LinAlgError:
        raise DegenerateCovarianceError(
            f"correlation matrix not positive definite (phi={phi}, theta={theta})"
        ) from None


def _whiten(kind, phi, theta, X, y):
    """Whiten (X, y) by the inverse Cholesky factor of the correlation matrix.

    Returns ``(Xw, yw, log_det_half)`` with log_det_half = ln|R|/2, so that
    Var of the whitened errors is g0 * I. AR(1) uses the exact O(n)
    quasi-differencing transform (|R| = (1-phi^2)^(n-1)); ARMA(1,1) factors
    the Toeplitz correlation matrix.
    """
    n = X.shape[0]
    if kind == IID:
        return X, y, 0.0
    if kind == AR1:
        if not abs(phi) < 1.0:
            raise DegenerateCovarianceError(f"|phi| must be < 1, got {phi}")
        c = np.sqrt(1.0 - phi * phi)
        Xw = np.empty_like(X)
        yw = np.empty_like(y)
        Xw[0] = c * X[0]
        yw[0] = c * y[0]
        Xw[1:] = X[1:] - phi * X[:-1]
        yw[1:] = y[1:] - phi * y[:-1]
        # rescale so the whitened variance is g0, matching the generic path
        Xw /= c
        yw /= c
        return Xw, yw, 0.5 * (n - 1) * np.log(1.0 - phi * phi)
    chol = _corr_cholesky(kind, phi, theta, n)
    Xw = solve_triangular(chol, X, lower=True)
    yw = solve_triangular(chol, y, lower=True)
    return Xw, yw, float(np.sum(np.log(np.diag(chol))))


def _inference(beta, se_var, df):
    se = np.sqrt(se_var)
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(se > 0, beta / se, np.sign(beta) * np.inf)
    return se, t, p_value(t, df)


def fit_ols(design: SegmentedDesign) -> FitResult:
    """Ordinary least squares on the segmented design.

    sigma2 is the unbiased RSS/(n-4); the log-likelihood is evaluated at the
    ML variance RSS/n for comparability with the GLS fits.
    """
    X, y = design.matrix, design.response
    n = design.n
    beta, rss, cov_unscaled = least_squares(X, y)
    df = n - N_PARAMS
    sigma2 = rss / df
    se, t, p = _inference(beta, sigma2 * cov_unscaled, df)
    resid = y - X @ beta
    with np.errstate(divide="ignore"):
        log_lik = -0.5 * n * (np.log(2.0 * np.pi * rss / n) + 1.0)
    return FitResult(
        method="ols",
        beta=beta,
        se=se,
        t_stats=t,
        p_values=p,
        df=df,
        sigma2=sigma2,
        log_lik=float(log_lik),
        residuals_raw=resid,
        residuals_whitened=resid.copy(),
        design=design,
    )


def _fit_gls_at(design, kind, phi, theta, method):
    """GLS fit at fixed correlation parameters via Cholesky whitening."""
    X, y = design.matrix, design.response
    n = design.n
    Xw, yw, log_det_half = _whiten(kind, phi, theta, X, y)
    beta, rss_w, cov_unscaled = least_squares(Xw, yw)
    df = n - N_PARAMS
    process_var = rss_w / n  # ML estimate of the marginal error variance g0
    se, t, p = _inference(beta, process_var * cov_unscaled, df)
    resid_raw = y - X @ beta
    resid_w = yw - Xw @ beta
    with np.errstate(divide="ignore"):
        log_lik = -0.5 * n * (np.log(2.0 * np.pi * process_var) + 1.0) - log_det_half
    model = ErrorModel(kind, ErrorParams(phi, theta, 1.0))
    sigma2 = process_var / variance_ratio(model)
    return FitResult(
        method=method,
        beta=beta,
        se=se,
        t_stats=t,
        p_values=p,
        df=df,
        sigma2=sigma2,
        log_lik=float(log_lik),
        residuals_raw=resid_raw,
        residuals_whitened=resid_w,
        error_kind=kind,
        error_params=None if kind == IID else ErrorParams(phi, theta, sigma2),
        design=design,
    )


def fit_gls(design: SegmentedDesign, model: ErrorModel) -> FitResult:
    """GLS at the fixed correlation parameters of ``model``.

    Whitens through the Cholesky factor of the correlation matrix and runs
    OLS on the whitened system; sigma2 uses the ML convention (whitened
    RSS / n) so an iid model reproduces fit_ols coefficients exactly while
    standard errors differ by the documented sqrt((n-4)/n) factor.
    """
    p = model.params
    return _fit_gls_at(design, model.kind, p.phi, p.theta, method="gls")


def profile_log_likelihood(design: SegmentedDesign, kind: str, u) -> float:
    """Profile log-likelihood at unconstrained correlation parameters ``u``."""
    u = np.atleast_1d(np.asarray(u, dtype=np.float64))
    phi = constrain(u[0])
    theta = constrain(u[1]) if kind == ARMA11 else 0.0
    X, y = design.matrix, design.response
    n = design.n
    try:
        Xw, yw, log_det_half = _whiten(kind, phi, theta, X, y)
        _, rss_w, _ = least_squares(Xw, yw)
    except (DegenerateCovarianceError, SingularDesignError):
        return -np.inf
    if rss_w <= 0.0:
        return -np.inf
    return float(-0.5 * n * (np.log(2.0 * np.pi * rss_w / n) + 1.0) - log_det_half)


def fit_gls_ml(design: SegmentedDesign, kind: str = AR1) -> FitResult:
    """Maximum-likelihood GLS: profile likelihood over the ARMA parameters.

    Runs Nelder-Mead from three fixed starts (phi in -0.3, 0, 0.5 on the
    constrained scale, theta starting at 0); the best log-likelihood wins,
    ties broken by smaller |phi|. Solutions with |phi| or |theta| near the
    stationarity clamp carry ``boundary=True``.

    Raises
    ------
    ConvergenceError
        If no restart converges; the error carries the best iterate's fit.
    """
    if kind not in (AR1, ARMA11):
        raise ConfigError(f"ML estimation supports kinds {AR1!r} and {ARMA11!r}")
    n_u = 2 if kind == ARMA11 else 1

    def objective(u):
        return -profile_log_likelihood(design, kind, u)

    candidates = []
    for phi0 in ML_STARTS:
        u0 = np.full(n_u, 0.0)
        u0[0] = unconstrain(phi0)
        res = minimize(
            objective,
            u0,
            method="Nelder-Mead",
            options={
                "maxiter": ML_MAX_ITER,
                "maxfev": 10 * ML_MAX_ITER,
                "fatol": ML_FATOL,
                "xatol": ML_XATOL,
            },
        )
        candidates.append((float(-res.fun), res.x, bool(res.success)))

    best_ll = max(c[0] for c in candidates)
    viable = [c for c in candidates if c[0] >= best_ll - 1e-9]
    ll, u_hat, _ = min(viable, key=lambda c: abs(constrain(c[1][0])))
    phi = constrain(u_hat[0])
    theta = constrain(u_hat[1]) if kind == ARMA11 else 0.0
    boundary = abs(phi) > BOUNDARY_TOL or abs(theta) > BOUNDARY_TOL
    fit = _fit_gls_at(design, kind, phi, theta, method="gls-ml")
    fit = replace(fit, log_lik=ll, boundary=boundary)
    if not any(c[2] for c in candidates):
        raise ConvergenceError(
            f"Nelder-Mead did not converge within {ML_MAX_ITER} iterations",
            best_result=fit,
        )
    return fit


def hac_se(fit: FitResult, bandwidth: int | None = None) -> np.ndarray:
    """Newey-West standard errors for an OLS fit.

    Sandwich (X'X)^-1 S (X'X)^-1 with Bartlett weights 1 - l/(L+1); the
    automatic bandwidth is floor(4 * (n/100)^(2/9)). Bandwidth 0 collapses
    to the White heteroskedasticity-only estimator.
    """
    if fit.method != "ols":
        raise ConfigError("HAC standard errors apply to OLS fits only")
    if fit.design is None:
        raise ConfigError("fit has no attached design")
    X = fit.design.matrix
    e = fit.residuals_raw
    n = X.shape[0]
    if bandwidth is None:
        bandwidth = int(np.floor(4.0 * (n / 100.0) ** (2.0 / 9.0)))
    if bandwidth < 0 or bandwidth >= n:
        raise ConfigError(f"bandwidth must be in [0, n), got {bandwidth} with n={n}")
    scores = X * e[:, None]
    S = scores.T @ scores
    for lag in range(1, bandwidth + 1):
        w = 1.0 - lag / (bandwidth + 1.0)
        G = scores[lag:].T @ scores[:-lag]
        S += w * (G + G.T)
    gram = cho_factor(X.T @ X)
    V = cho_solve(gram, cho_solve(gram, S).T).T
    return np.sqrt(np.diag(V))
