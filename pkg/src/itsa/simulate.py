"""Synthetic ITS data generation and Monte Carlo studies.

Randomness comes from numpy's PCG64 generator with explicit 64-bit seeds.
Replicate r of a multi-replicate study uses seed ``seed ^ r``, so replicates
are independent streams and any one of them can be regenerated in isolation.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy.special import stdtrit

from . import _kernels
from .arma import ARMA11, IID, ErrorModel
from .design import InterventionSpec, TimeSeriesDataset, build_design
from .exceptions import ConfigError
from .periods import Period, month_range

BURN_IN = 500


@dataclass(frozen=True)
class SimulationSpec:
    """Ground truth for a synthetic segmented-regression dataset.

    ``intervention_index`` is 1-based: the period at that index is the first
    post-intervention month (where the dummy switches to 1 and S = 1).
    """

    n: int
    intervention_index: int
    beta: tuple[float, float, float, float]
    error: ErrorModel
    seed: int
    replicates: int = 1
    start_period: Period = Period(2000, 1)
    label: str = "y"

    def __post_init__(self):
        if not 1 < self.intervention_index <= self.n:
            raise ConfigError(
                f"intervention_index must be in (1, n], got "
                f"{self.intervention_index} with n={self.n}"
            )
        if len(self.beta) != 4:
            raise ConfigError("beta must have exactly 4 coefficients")

    @property
    def intervention_period(self) -> Period:
        return self.start_period + (self.intervention_index - 1)

    def intervention_spec(self) -> InterventionSpec:
        return InterventionSpec(
            intervention=self.intervention_period, time_origin=self.start_period
        )


def gen_arma_noise(model: ErrorModel, n: int, seed: int) -> np.ndarray:
    """A stationary length-n draw from the error process.

    The state is initialized from the exact stationary distribution
    (a_0 ~ N(0, s2); e_0 | a_0 ~ N(a_0, g0 - s2)) and a further
    :data:`BURN_IN` steps are run and discarded. Deterministic per seed.
    """
    rng = np.random.default_rng(seed)
    p = model.params
    sd = np.sqrt(p.sigma2)
    phi = p.phi
    theta = p.theta if model.kind == ARMA11 else 0.0
    init = rng.standard_normal(2)
    a0 = sd * init[0]
    if model.kind == IID:
        e0 = a0
    else:
        # Var(e0) - Cov(e0,a0)^2/s2 = g0 - s2 = s2*(phi+theta)^2/(1-phi^2)
        e0 = a0 + sd * abs(phi + theta) / np.sqrt(1.0 - phi * phi) * init[1]
    innov = sd * rng.standard_normal(BURN_IN + n)
    path = _kernels.arma_recursion(np.ascontiguousarray(innov), phi, theta, e0, a0)
    return np.asarray(path)[BURN_IN:].copy()


def gen_arma_paths(model: ErrorModel, n: int, m: int, seed: int) -> np.ndarray:
    """``m`` independent stationary draws of length ``n``, one per row."""
    rng = np.random.default_rng(seed)
    p = model.params
    sd = np.sqrt(p.sigma2)
    phi = p.phi
    theta = p.theta if model.kind == ARMA11 else 0.0
    a0 = sd * rng.standard_normal(m)
    if model.kind == IID:
        e0 = a0.copy()
    else:
        e0 = a0 + sd * abs(phi + theta) / np.sqrt(1.0 - phi * phi) * rng.standard_normal(m)
    innov = sd * rng.standard_normal((m, BURN_IN + n))
    paths = _kernels.arma_recursion_batch(
        np.ascontiguousarray(innov), phi, theta, e0, a0
    )
    return np.asarray(paths)[:, BURN_IN:].copy()


def gen_its_dataset(spec: SimulationSpec) -> TimeSeriesDataset:
    """Generate y_t = b0 + b1*T + b2*X + b3*X*S + e_t as a monthly dataset."""
    b0, b1, b2, b3 = spec.beta
    t = np.arange(1, spec.n + 1, dtype=np.float64)
    x = (t >= spec.intervention_index).astype(np.float64)
    s = np.where(x > 0, t - (spec.intervention_index - 1), 0.0)
    noise = gen_arma_noise(spec.error, spec.n, spec.seed)
    y = b0 + b1 * t + b2 * x + b3 * x * s + noise
    return TimeSeriesDataset(
        periods=month_range(spec.start_period, spec.n),
        values={spec.label: y},
    )


def monte_carlo_coverage(
    spec: SimulationSpec, level: float = 0.95, method: str = "ols"
) -> np.ndarray:
    """Fraction of replicates whose t-intervals cover each true coefficient.

    Intervals are beta_hat +- t_{df, (1+level)/2} * se. ``method`` selects the
    estimator: "ols", or "gls-ml-ar1" / "gls-ml-arma11" for the
    maximum-likelihood GLS fits.
    """
    from .estimation import fit_gls_ml, fit_ols

    if spec.replicates < 200:
        raise ConfigError(
            f"coverage studies need at least 200 replicates, got {spec.replicates}"
        )
    if not 0.0 < level < 1.0:
        raise ConfigError(f"level must be in (0, 1), got {level}")
    beta_true = np.asarray(spec.beta)
    hits = np.zeros(4)
    for r in range(spec.replicates):
        rep = replace(spec, seed=spec.seed ^ r)
        dataset = gen_its_dataset(rep)
        design = build_design(dataset, rep.label, rep.intervention_spec())
        if method == "ols":
            fit = fit_ols(design)
        elif method == "gls-ml-ar1":
            fit = fit_gls_ml(design, kind="ar1")
        elif method == "gls-ml-arma11":
            fit = fit_gls_ml(design, kind="arma11")
        else:
            raise ConfigError(f"unknown coverage method {method!r}")
        tcrit = stdtrit(fit.df, 0.5 + level / 2.0)
        half = tcrit * fit.se
        hits += (np.abs(fit.beta - beta_true) <= half).astype(float)
    return hits / spec.replicates
