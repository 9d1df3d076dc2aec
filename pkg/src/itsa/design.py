"""Dataset and intervention representations plus the segmented design matrix.

The single-intervention segmented regression is

    y_t = b0 + b1*T_t + b2*X_t + b3*X_t*S_t + e_t

with T_t the time index (1 at the time origin, +1 per month), X_t the
post-intervention dummy (0 before the intervention month, 1 from it onward)
and S_t the post-intervention clock (0 before, then 1, 2, 3, ... starting at
the intervention month). ``build_design`` assembles the n-by-4 matrix
[1, T, X, X*S] and the response vector.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .exceptions import (
    ConfigError,
    InsufficientDataError,
    InterventionRangeError,
    MissingColumnError,
    PeriodGapError,
)
from .periods import Period

MIN_SEGMENT = 4  # observations required on each side of the intervention


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class TimeSeriesDataset:
    """Dated monthly observations of one or more outcome series.

    Parameters
    ----------
    periods : sequence of Period
        Strictly consecutive calendar months.
    values : mapping of str to sequence of float
        One value per period for every series; all values finite.
    units : mapping of str to str, optional
        Display unit label per series (e.g. ``"Billion IDR"``, ``"Point"``).
    """

    periods: tuple[Period, ...]
    values: Mapping[str, np.ndarray]
    units: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        periods = tuple(self.periods)
        object.__setattr__(self, "periods", periods)
        if not periods:
            raise PeriodGapError("dataset has no periods")
        for prev, cur in zip(periods, periods[1:]):
            if cur.index != prev.index + 1:
                raise PeriodGapError(
                    f"periods must be consecutive months: expected {prev + 1} "
                    f"after {prev}, got {cur}"
                )
        series = {}
        for name, vals in self.values.items():
            arr = np.asarray(vals, dtype=np.float64)
            if arr.ndim != 1 or arr.shape[0] != len(periods):
                raise PeriodGapError(
                    f"series {name!r} has {arr.shape[0] if arr.ndim == 1 else 'non-1d'} "
                    f"values for {len(periods)} periods"
                )
            if not np.all(np.isfinite(arr)):
                bad = int(np.flatnonzero(~np.isfinite(arr))[0])
                raise PeriodGapError(
                    f"series {name!r} has a non-finite value at {periods[bad]}"
                )
            series[name] = _readonly(arr)
        object.__setattr__(self, "values", series)
        object.__setattr__(self, "units", dict(self.units))

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(self.values.keys())

    @property
    def n(self) -> int:
        return len(self.periods)

    def series(self, label: str) -> np.ndarray:
        try:
            return self.values[label]
        except KeyError:
            raise MissingColumnError(
                f"series {label!r} not in dataset (have {', '.join(self.labels)})"
            ) from None

    def unit(self, label: str) -> str:
        return self.units.get(label, "unit")


@dataclass(frozen=True)
class InterventionSpec:
    """Intervention timing and the time-coding convention.

    ``time_origin`` is the period mapped to T=1; when omitted it defaults to
    the first period of the dataset it is applied to.
    ``post_clock_start`` is the offset c in S_t = T_t - c for post periods;
    when omitted it is derived so that S=1 at the intervention month.
    """

    intervention: Period
    time_origin: Period | None = None
    post_clock_start: int | None = None

    def resolve(self, dataset: TimeSeriesDataset | None = None) -> InterventionSpec:
        """Fill defaults (from ``dataset`` if given) and validate."""
        if dataset is not None:
            if not dataset.periods[0] <= self.intervention <= dataset.periods[-1]:
                raise InterventionRangeError(
                    f"intervention {self.intervention} outside dataset range "
                    f"{dataset.periods[0]}..{dataset.periods[-1]}"
                )
        origin = self.time_origin
        if origin is None:
            if dataset is None:
                raise ConfigError(
                    "time_origin must be set when no dataset is supplied"
                )
            origin = dataset.periods[0]
        if origin > self.intervention:
            raise ConfigError(
                f"time origin {origin} is after the intervention {self.intervention}"
            )
        t_iv = self.intervention - origin + 1
        clock = self.post_clock_start
        if clock is None:
            clock = t_iv - 1
        elif t_iv - clock != 1:
            raise ConfigError(
                f"post_clock_start={clock} gives S={t_iv - clock} at the "
                f"intervention month; S must equal 1 there"
            )
        return InterventionSpec(self.intervention, origin, clock)

    def encode(self, period: Period) -> tuple[int, int, int]:
        """(T, X, S) for one period; requires a resolved spec."""
        if self.time_origin is None or self.post_clock_start is None:
            raise ConfigError("intervention spec is not resolved")
        t = period - self.time_origin + 1
        if period >= self.intervention:
            return t, 1, t - self.post_clock_start
        return t, 0, 0


def encode_time_index(
    dataset: TimeSeriesDataset, spec: InterventionSpec
) -> list[tuple[int, int, int]]:
    """Encode every dataset period as an (T_t, X_t, S_t) triple.

    T_t is 1 at the time origin and increments by one per month; X_t is 0
    strictly before the intervention and 1 from it onward; S_t counts
    1, 2, 3, ... from the intervention month and is 0 before it.
    """
    resolved = spec.resolve(dataset)
    return [resolved.encode(p) for p in dataset.periods]


@dataclass(frozen=True)
class SegmentedDesign:
    """The n-by-4 design [1, T, X, X*S] with its response vector."""

    periods: tuple[Period, ...]
    series: str
    matrix: np.ndarray
    response: np.ndarray
    time_index: np.ndarray
    dummy: np.ndarray
    since_intervention: np.ndarray
    intervention: InterventionSpec

    COLUMNS = ("const", "time", "level_change", "trend_change")

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_pre(self) -> int:
        return int(np.sum(self.dummy == 0))

    @property
    def n_post(self) -> int:
        return int(np.sum(self.dummy == 1))


def build_design(
    dataset: TimeSeriesDataset, series: str, spec: InterventionSpec
) -> SegmentedDesign:
    """Build the segmented-regression design for one outcome series.

    Requires at least :data:`MIN_SEGMENT` observations on each side of the
    intervention, otherwise the four coefficients are weakly identified.

    Raises
    ------
    MissingColumnError
        If ``series`` is not in the dataset.
    InterventionRangeError
        If the intervention is outside the dataset's period range.
    InsufficientDataError
        If either segment has fewer than :data:`MIN_SEGMENT` observations.
    """
    y = dataset.series(series)
    resolved = spec.resolve(dataset)
    triples = np.array([resolved.encode(p) for p in dataset.periods], dtype=np.int64)
    t, x, s = triples[:, 0], triples[:, 1], triples[:, 2]
    n_pre = int(np.sum(x == 0))
    n_post = int(np.sum(x == 1))
    if n_pre < MIN_SEGMENT or n_post < MIN_SEGMENT:
        raise InsufficientDataError(
            f"need at least {MIN_SEGMENT} observations on each side of the "
            f"intervention, got {n_pre} pre and {n_post} post"
        )
    matrix = np.column_stack(
        [np.ones(len(y)), t.astype(np.float64), x.astype(np.float64), (x * s).astype(np.float64)]
    )
    return SegmentedDesign(
        periods=dataset.periods,
        series=series,
        matrix=_readonly(matrix),
        response=_readonly(y.copy()),
        time_index=_readonly(t),
        dummy=_readonly(x),
        since_intervention=_readonly(s),
        intervention=resolved,
    )
