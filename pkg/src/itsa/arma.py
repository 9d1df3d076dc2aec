"""Residual error processes: iid, AR(1) and ARMA(1,1).

The process is e_t = phi*e_{t-1} + a_t + theta*a_{t-1} with iid Gaussian
innovations a_t of variance sigma2. Closed-form autocovariances:

    AR(1):     g0 = sigma2 / (1 - phi^2),                    g_k = phi * g_{k-1}
    ARMA(1,1): g0 = sigma2 * (1 + theta^2 + 2*phi*theta) / (1 - phi^2)
               g1 = sigma2 * (1 + phi*theta) * (phi + theta) / (1 - phi^2)
               g_k = phi * g_{k-1}  for k >= 2

The correlation matrix R[i, j] = g_|i-j| / g0 is Toeplitz with unit diagonal
and is what the GLS routines whiten against.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import toeplitz

from .exceptions import DegenerateCovarianceError, ParameterError

IID = "iid"
AR1 = "ar1"
ARMA11 = "arma11"
KINDS = (IID, AR1, ARMA11)

# Constraint map clamps |phi|, |theta| into (-CLAMP, CLAMP) so the
# correlation matrix stays Cholesky-factorizable at any optimizer iterate.
CLAMP = 1.0 - 1e-6

# Number of correlation parameters the ML search fits, per kind.
N_CORR_PARAMS = {IID: 0, AR1: 1, ARMA11: 2}


@dataclass(frozen=True)
class ErrorParams:
    """Parameters of the residual process.

    ``sigma2`` is the innovation variance (variance of a_t, not of e_t).
    A zero ``sigma2`` is allowed so noiseless processes can be simulated;
    likelihood and correlation construction require it positive.
    """

    phi: float = 0.0
    theta: float = 0.0
    sigma2: float = 1.0


@dataclass(frozen=True)
class ErrorModel:
    """A residual-process kind with its parameters."""

    kind: str
    params: ErrorParams = ErrorParams()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ParameterError(f"unknown error kind {self.kind!r}; use one of {KINDS}")
        p = self.params
        if not np.isfinite([p.phi, p.theta, p.sigma2]).all():
            raise ParameterError("error parameters must be finite")
        if p.sigma2 < 0:
            raise ParameterError(f"sigma2 must be >= 0, got {p.sigma2}")
        if self.kind == IID and (p.phi != 0.0 or p.theta != 0.0):
            raise ParameterError("iid errors require phi = theta = 0")
        if self.kind in (AR1, ARMA11) and abs(p.phi) >= 1.0:
            raise ParameterError(f"stationarity requires |phi| < 1, got {p.phi}")
        if self.kind == AR1 and p.theta != 0.0:
            raise ParameterError("AR(1) errors require theta = 0")
        if self.kind == ARMA11 and abs(p.theta) >= 1.0:
            raise ParameterError(f"invertibility requires |theta| < 1, got {p.theta}")


def iid(sigma2: float = 1.0) -> ErrorModel:
    return ErrorModel(IID, ErrorParams(sigma2=sigma2))


def ar1(phi: float, sigma2: float = 1.0) -> ErrorModel:
    return ErrorModel(AR1, ErrorParams(phi=phi, sigma2=sigma2))


def arma11(phi: float, theta: float, sigma2: float = 1.0) -> ErrorModel:
    return ErrorModel(ARMA11, ErrorParams(phi=phi, theta=theta, sigma2=sigma2))


def autocovariance(model: ErrorModel, max_lag: int) -> np.ndarray:
    """Exact process autocovariances g_0 .. g_max_lag."""
    if max_lag < 0:
        raise ParameterError(f"max_lag must be >= 0, got {max_lag}")
    p = model.params
    gamma = np.zeros(max_lag + 1)
    if model.kind == IID:
        gamma[0] = p.sigma2
        return gamma
    phi, theta = p.phi, (p.theta if model.kind == ARMA11 else 0.0)
    denom = 1.0 - phi * phi
    gamma[0] = p.sigma2 * (1.0 + theta * theta + 2.0 * phi * theta) / denom
    if max_lag >= 1:
        gamma[1] = p.sigma2 * (1.0 + phi * theta) * (phi + theta) / denom
        for k in range(2, max_lag + 1):
            gamma[k] = phi * gamma[k - 1]
    return gamma


def variance_ratio(model: ErrorModel) -> float:
    """g0 / sigma2: process variance per unit innovation variance."""
    unit = ErrorModel(model.kind, ErrorParams(model.params.phi, model.params.theta, 1.0))
    return float(autocovariance(unit, 0)[0])


def correlation_matrix(model: ErrorModel, n: int) -> np.ndarray:
    """The n-by-n Toeplitz correlation matrix R[i, j] = g_|i-j| / g0.

    Raises
    ------
    DegenerateCovarianceError
        If g0 is not positive or the matrix fails a Cholesky factorization
        (near-unit-root parameters).
    """
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    gamma = autocovariance(model, n - 1)
    if not gamma[0] > 0:
        raise DegenerateCovarianceError(
            f"process variance must be positive, got g0 = {gamma[0]}"
        )
    corr = toeplitz(gamma / gamma[0])
    try:
        np.linalg.cholesky(corr)
    except np.linalg.LinAlgError:
        raise DegenerateCovarianceError(
            f"correlation matrix not positive definite for phi={model.params.phi}, "
            f"theta={model.params.theta}, n={n} (near-unit-root parameters)"
        ) from None
    return corr


def constrain(u):
    """Map an unconstrained real to the open interval (-CLAMP, CLAMP).

    Smooth, odd and strictly increasing: u / (1 + |u|) scaled by CLAMP.
    Total on all of R, so any optimizer iterate yields valid parameters.
    """
    u = np.asarray(u, dtype=np.float64)
    out = CLAMP * u / (1.0 + np.abs(u))
    return float(out) if out.ndim == 0 else out


def unconstrain(x):
    """Inverse of :func:`constrain`; defined for |x| < CLAMP."""
    x = np.asarray(x, dtype=np.float64)
    if np.any(np.abs(x) >= CLAMP):
        raise ParameterError(f"|x| must be < {CLAMP}")
    v = x / CLAMP
    out = v / (1.0 - np.abs(v))
    return float(out) if out.ndim == 0 else out
