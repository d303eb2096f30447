"""Series container, forecast-accuracy metric, and the calibration/test split rule.

A series of length T is written a_1..a_T in the docs; storage is a plain
read-only float64 array. Every type here is frozen, every function pure, so
everything is safe to share across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    EmptySeriesError,
    InfeasibleDeltaError,
    InvalidParamsError,
    InvalidPeriodError,
    LengthMismatchError,
    NonFiniteValueError,
    SeriesTooShortError,
    ZeroActualError,
)

# Absorbs float representation dust in floor/ceil expressions involving delta
# (e.g. 1/0.05 - 1 evaluating to 19.000000000000004).
_DUST = 1e-9


def _freeze(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, dtype=float)
    out.setflags(write=False)
    return out


def _positive_int(name: str, value) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or value < 1:
        raise InvalidParamsError(f"{name} must be a positive integer, got {value!r}")
    return int(value)


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """Univariate series with seasonal-period metadata."""

    values: np.ndarray
    period: int = 12
    label: str | None = None

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=float)
        if arr.ndim != 1:
            raise ValueError("series values must be one-dimensional")
        if arr.size == 0:
            raise EmptySeriesError("series must contain at least one observation")
        bad = np.flatnonzero(~np.isfinite(arr))
        if bad.size:
            i = int(bad[0])
            raise NonFiniteValueError(i, float(arr[i]))
        if isinstance(self.period, bool) or not isinstance(self.period, (int, np.integer)) or self.period < 1:
            raise InvalidPeriodError(
                f"period must be a positive integer, got {self.period!r}"
            )
        object.__setattr__(self, "values", _freeze(arr))
        object.__setattr__(self, "period", int(self.period))

    def __len__(self) -> int:
        return int(self.values.size)


def validate_series(
    raw: Sequence[float], period: int, label: str | None = None
) -> TimeSeries:
    """Construct a TimeSeries, rejecting empty input, non-finite values and bad periods."""
    return TimeSeries(np.asarray(raw, dtype=float), period, label)


@dataclass(frozen=True)
class HorizonConfig:
    """Forecast geometry: n values per step, a window of n*p lags, k neighbors."""

    n: int
    p: int
    k: int

    def __post_init__(self):
        for name in ("n", "p", "k"):
            object.__setattr__(self, name, _positive_int(name, getattr(self, name)))

    @property
    def window(self) -> int:
        """Length of the lagged object window (n*p); derived, never stored."""
        return self.n * self.p


def min_calibration_count(delta: float) -> int:
    """Smallest calibration count h for which floor(delta*(h+1)) reaches 1."""
    return math.ceil(1.0 / delta - 1.0 - _DUST)


@dataclass(frozen=True)
class SplitSpec:
    """Counts of calibration (i1) and test (i2) examples plus significance level."""

    i1: int
    i2: int
    delta: float

    def __post_init__(self):
        if not 0.0 < self.delta < 1.0:
            raise InvalidParamsError(f"delta must lie in (0, 1), got {self.delta!r}")
        object.__setattr__(self, "i1", _positive_int("i1", self.i1))
        object.__setattr__(self, "i2", _positive_int("i2", self.i2))
        # floor(delta*(i1+1)) >= 1 must hold so a rank exists at the first step.
        if self.i1 < 1.0 / self.delta - 1.0 - _DUST:
            raise InfeasibleDeltaError(self.delta, min_calibration_count(self.delta))


def mape(actual: Sequence[float], predicted: Sequence[float]) -> float:
    """Mean absolute percentage error, in percent.

    A zero actual value is a hard error: silently skipping those points would
    bias any objective built on top of this metric.
    """
    a = np.asarray(actual, dtype=float)
    f = np.asarray(predicted, dtype=float)
    if a.ndim != 1 or f.ndim != 1 or a.shape != f.shape:
        raise LengthMismatchError(
            f"actual has length {a.size}, predicted has length {f.size}"
        )
    if a.size == 0:
        raise LengthMismatchError("need at least one point")
    zeros = np.flatnonzero(a == 0.0)
    if zeros.size:
        raise ZeroActualError(int(zeros[0]))
    return float(100.0 * np.mean(np.abs((f - a) / a)))


def _ceil_div(num: int, den: int) -> int:
    return -(-num // den)


def split_sizes(T: int, n: int, delta: float) -> SplitSpec:
    """Derive (i1, i2) from the 20%-test-block rule with a feasibility floor on i1.

    i2 = ceil(0.2*T/n). i1 = ceil(0.2*(T - n*i2)/n) when that is large enough
    for the first rank to exist, otherwise the floor ceil(1/delta - 1). Both
    ceilings are evaluated in exact integer arithmetic.
    """
    if not isinstance(T, (int, np.integer)) or T < 1:
        raise InvalidParamsError(f"T must be a positive integer, got {T!r}")
    n = _positive_int("n", n)
    if not 0.0 < delta < 1.0:
        raise InvalidParamsError(f"delta must lie in (0, 1), got {delta!r}")
    i2 = _ceil_div(int(T), 5 * n)
    i1 = _ceil_div(int(T) - n * i2, 5 * n)
    if i1 < 1.0 / delta - 1.0 - _DUST:
        i1 = min_calibration_count(delta)
    if T - n * (i1 + i2) < n:
        raise SeriesTooShortError(
            f"series of length {T} leaves no training data after holding out "
            f"n*(i1+i2) = {n * (i1 + i2)} observations"
        )
    return SplitSpec(i1=i1, i2=i2, delta=delta)
