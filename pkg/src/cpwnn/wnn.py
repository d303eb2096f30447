"""Nearest-neighbor forecasting over lagged windows, with grid-search tuning.

The forecaster matches the trailing window of n*p observations against every
historical window of the same length whose next n observations are known,
then averages those continuations over the k closest windows (Euclidean
distance; uniform or inverse-square-distance weights).

Tuning evaluates a (p, k) grid by rolling-origin validation: fold i trains on
everything before the last i*n observations and scores the n observations
that follow. The cell minimising the mean fold MAPE wins, with ties broken
toward smaller p, then smaller k, so results are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import (
    GridInfeasibleError,
    HistoryTooShortError,
    InvalidParamsError,
    TooFewCandidatesError,
)
from .series import HorizonConfig, TimeSeries, mape

# Regularizer for inverse-distance weights: an exact-match neighbor then
# dominates the average instead of dividing by zero.
_WEIGHT_EPS = 1e-8


class Weighting(str, Enum):
    """Neighbor-averaging scheme."""

    UNIFORM = "uniform"
    INVERSE_DISTANCE = "inverse-distance"


class ForecasterKind(str, Enum):
    WNN = "wnn"
    SEASONAL_NAIVE = "seasonal-naive"


@dataclass(frozen=True)
class ForecasterSpec:
    """Dispatchable description of a point forecaster."""

    kind: ForecasterKind
    config: HorizonConfig | None = None
    period: int | None = None
    weighting: Weighting = Weighting.INVERSE_DISTANCE

    def __post_init__(self):
        object.__setattr__(self, "kind", ForecasterKind(self.kind))
        object.__setattr__(self, "weighting", Weighting(self.weighting))
        if self.kind is ForecasterKind.WNN and self.config is None:
            raise InvalidParamsError("a WNN forecaster needs a HorizonConfig")
        if self.kind is ForecasterKind.SEASONAL_NAIVE and (
            self.period is None or self.period < 1
        ):
            raise InvalidParamsError("a seasonal-naive forecaster needs a positive period")

    @classmethod
    def wnn(
        cls, config: HorizonConfig, weighting: Weighting | str = Weighting.INVERSE_DISTANCE
    ) -> "ForecasterSpec":
        return cls(ForecasterKind.WNN, config=config, weighting=Weighting(weighting))

    @classmethod
    def seasonal_naive(cls, period: int) -> "ForecasterSpec":
        return cls(ForecasterKind.SEASONAL_NAIVE, period=int(period))

    def describe(self) -> str:
        if self.kind is ForecasterKind.WNN:
            return f"wnn(p={self.config.p}, k={self.config.k}, {self.weighting.value})"
        return f"seasonal-naive(m={self.period})"


@dataclass(frozen=True, eq=False)
class TuneResult:
    """Grid-search outcome; the trace preserves grid order (p-major, k-minor)."""

    p_star: int
    k_star: int
    objective: float
    trace: tuple[tuple[int, int, float], ...]
    skipped: tuple[tuple[int, int, str], ...] = ()


def _candidate_table(values: np.ndarray, window: int, n: int):
    """Distance table of every complete candidate window against the trailing query.

    Candidate i is values[i : i+window]; its continuation is the n values that
    follow, so only windows whose continuation lies inside the history count.
    Returns (d2, continuations, order) with order a stable nearest-first
    ranking: on ties the earlier window wins.
    """
    count = int(values.size) - window - n + 1
    windows = sliding_window_view(values, window)[:count]
    continuations = sliding_window_view(values, n)[window : window + count]
    diff = windows - values[-window:]
    d2 = np.einsum("ij,ij->i", diff, diff)
    order = np.argsort(d2, kind="stable")
    return d2, continuations, order


def _neighbor_average(
    d2: np.ndarray, continuations: np.ndarray, order: np.ndarray, k: int, weighting: Weighting
) -> np.ndarray:
    chosen = order[:k]
    if weighting is Weighting.UNIFORM:
        return continuations[chosen].mean(axis=0)
    w = 1.0 / (d2[chosen] + _WEIGHT_EPS)
    w /= w.sum()
    return w @ continuations[chosen]


def _forecast_values(
    values: np.ndarray, config: HorizonConfig, weighting: Weighting
) -> np.ndarray:
    window = config.window
    length = int(values.size)
    if length < window + config.n:
        raise HistoryTooShortError(window + config.n, length)
    count = length - window - config.n + 1
    if config.k > count:
        raise TooFewCandidatesError(config.k, count)
    d2, continuations, order = _candidate_table(values, window, config.n)
    return _neighbor_average(d2, continuations, order, config.k, weighting)


def wnn_forecast(
    history: TimeSeries,
    config: HorizonConfig,
    weighting: Weighting | str = Weighting.INVERSE_DISTANCE,
) -> np.ndarray:
    """Forecast the next config.n values of the history.

    The trailing n*p observations form the query; candidates are all sliding
    windows (step 1) of the same length followed by n known values.
    """
    return _forecast_values(history.values, config, Weighting(weighting))


def fpto_tune(
    series: TimeSeries,
    n: int,
    folds: int,
    p_grid: Iterable[int] = range(1, 13),
    k_grid: Iterable[int] = range(1, 13),
    weighting: Weighting | str = Weighting.INVERSE_DISTANCE,
) -> TuneResult:
    """Pick the (p, k) minimising the mean MAPE over rolling validation folds.

    Fold i (i = 1..folds) trains on values[: T - i*n] and scores the n
    observations that follow. A cell that cannot be evaluated on every fold is
    skipped and recorded; tuning fails only if the whole grid is infeasible.
    """
    weighting = Weighting(weighting)
    if folds < 1:
        raise InvalidParamsError("folds must be >= 1")
    values = series.values
    T = int(values.size)
    ps = sorted({int(p) for p in p_grid})
    ks = sorted({int(k) for k in k_grid})
    if not ps or not ks or ps[0] < 1 or ks[0] < 1:
        raise InvalidParamsError("p_grid and k_grid must contain positive integers")

    actuals = [values[T - i * n : T - i * n + n] for i in range(1, folds + 1)]
    trace: list[tuple[int, int, float]] = []
    skipped: list[tuple[int, int, str]] = []
    for p in ps:
        window = n * p
        shortest = T - folds * n
        if shortest < window + n:
            reason = (
                f"shortest training fold has {shortest} observations, "
                f"window+n needs {window + n}"
            )
            skipped.extend((p, k, reason) for k in ks)
            continue
        tables = [
            _candidate_table(values[: T - i * n], window, n)
            for i in range(1, folds + 1)
        ]
        max_k = min(table[0].size for table in tables)
        for k in ks:
            if k > max_k:
                skipped.append(
                    (p, k, f"k={k} exceeds {max_k} candidate windows on the shortest fold")
                )
                continue
            fold_errors = [
                mape(actuals[i], _neighbor_average(d2, conts, order, k, weighting))
                for i, (d2, conts, order) in enumerate(tables)
            ]
            trace.append((p, k, float(np.mean(fold_errors))))
    if not trace:
        raise GridInfeasibleError(skipped)
    best = min(range(len(trace)), key=lambda i: trace[i][2])
    p_star, k_star, objective = trace[best]
    return TuneResult(p_star, k_star, objective, tuple(trace), tuple(skipped))


def forecaster_fn(spec: ForecasterSpec, n: int) -> Callable[[np.ndarray], np.ndarray]:
    """Bind a spec to a function mapping history values to the next n values."""
    if spec.kind is ForecasterKind.WNN:
        config = spec.config
        if config.n != n:
            raise InvalidParamsError(
                f"forecaster is configured for n={config.n}, asked for n={n}"
            )
        weighting = spec.weighting
        return lambda values: _forecast_values(values, config, weighting)

    period = int(spec.period)

    def seasonal_naive(values: np.ndarray) -> np.ndarray:
        if values.size < period:
            raise HistoryTooShortError(period, int(values.size))
        return np.resize(values[-period:], n)

    return seasonal_naive


def point_forecast(spec: ForecasterSpec, history: TimeSeries, n: int) -> np.ndarray:
    """Dispatch a point forecast of the next n values to the spec'd forecaster."""
    return forecaster_fn(spec, n)(history.values)
