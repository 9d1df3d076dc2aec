"""Counterfactual projection and per-horizon intervention effects.

For a fitted segmented regression the no-intervention counterfactual at time
index T is b0 + b1*T; the absolute effect at a post-intervention horizon with
clock value S is b2 + b3*S and the relative effect is the absolute effect as
a percentage of the counterfactual.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .design import InterventionSpec
from .estimation import FitResult
from .exceptions import ConfigError, HorizonRangeError
from .periods import Period

# Display label for the relative-effect rows; reproduced verbatim from the
# reference presentation even though the quantity is a gap ratio.
REL_LABEL = "% m-t-m"

# Counterfactual magnitudes below this leave the relative effect undefined.
REL_EPS = 1e-12

COEF_NAMES = ("Constant", "Time", "Post period", "Time x post period")


@dataclass(frozen=True)
class EffectTable:
    """Absolute and relative counterfactual gaps per horizon."""

    series: str
    unit: str
    periods: tuple[Period, ...]
    time_index: np.ndarray
    since_intervention: np.ndarray
    counterfactual: np.ndarray
    actual_fitted: np.ndarray
    delta_abs: np.ndarray
    delta_rel: np.ndarray
    rel_undefined: np.ndarray

    def __len__(self) -> int:
        return len(self.periods)


def counterfactual(fit: FitResult, time_index: Sequence[int]) -> np.ndarray:
    """Projected no-intervention outcome b0 + b1*T at each time index."""
    t = np.asarray(time_index, dtype=np.float64)
    return fit.beta[0] + fit.beta[1] * t


def effect_table(
    fit: FitResult,
    spec: InterventionSpec,
    horizons: Sequence[Period],
    series: str = "y",
    unit: str = "unit",
) -> EffectTable:
    """Effects at post-intervention horizons.

    Values are stored at full precision; rounding happens only in renderers.

    Raises
    ------
    HorizonRangeError
        If any horizon is before the intervention period.
    """
    if spec.time_origin is None and fit.design is not None:
        # borrow the clock the coefficients were actually fitted on
        spec = InterventionSpec(
            spec.intervention,
            fit.design.intervention.time_origin,
            spec.post_clock_start,
        )
    resolved = spec.resolve()
    horizons = tuple(horizons)
    for h in horizons:
        if h < resolved.intervention:
            raise HorizonRangeError(
                f"horizon {h} is before the intervention {resolved.intervention}"
            )
    coded = np.array([resolved.encode(h) for h in horizons], dtype=np.int64)
    t = coded[:, 0] if len(horizons) else np.empty(0, dtype=np.int64)
    s = coded[:, 2] if len(horizons) else np.empty(0, dtype=np.int64)
    cf = counterfactual(fit, t)
    delta_abs = fit.beta[2] + fit.beta[3] * s.astype(np.float64)
    undefined = np.abs(cf) < REL_EPS
    with np.errstate(divide="ignore", invalid="ignore"):
        delta_rel = np.where(undefined, np.nan, 100.0 * delta_abs / cf)
    return EffectTable(
        series=series,
        unit=unit,
        periods=horizons,
        time_index=t,
        since_intervention=s,
        counterfactual=cf,
        actual_fitted=cf + delta_abs,
        delta_abs=delta_abs,
        delta_rel=delta_rel,
        rel_undefined=undefined,
    )


def significance_stars(p: float) -> str:
    """Star code for a p-value: *** below 1%, ** below 5%, * below 10%.

    Thresholds are left-closed: p = 0.01 earns exactly two stars.
    """
    if np.isnan(p):
        return ""
    if p < 0.01:
        return "***"
    if p < 0.05:
        return "**"
    if p < 0.10:
        return "*"
    return ""


@dataclass(frozen=True)
class CoefficientRow:
    name: str
    estimate: float
    se: float
    t_stat: float
    p_value: float
    stars: str


def format_significance(fit: FitResult) -> list[CoefficientRow]:
    """Annotated coefficient rows in table order (t-statistics in parens)."""
    if np.all(np.isnan(fit.p_values)):
        raise ConfigError("fit carries no inference (p-values unset)")
    return [
        CoefficientRow(
            name=COEF_NAMES[i],
            estimate=float(fit.beta[i]),
            se=float(fit.se[i]),
            t_stat=float(fit.t_stats[i]),
            p_value=float(fit.p_values[i]),
            stars=significance_stars(float(fit.p_values[i])),
        )
        for i in range(len(fit.beta))
    ]
