"""Pair transform, nonconformity scores, p-values, and product prediction regions.

A series a_1..a_T is cut into (object, label) pairs ending at
t in {T-n, T-2n, ...}: the object is the window of n*p observations up to t,
the label the n observations that follow. Scoring a pair means forecasting
its label from the observations up to t only, so every score reflects a
forecaster refit on its own prefix (no lookahead, no caching across
prefixes).

The region for the next n unseen values is symmetric about the point
forecast; component j's half-width is the s-th largest of that column's
calibration scores with s = floor(delta*(h+1)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import (
    InsufficientCalibrationError,
    InvalidParamsError,
    SeriesTooShortError,
)
from .series import _DUST, HorizonConfig, TimeSeries, _freeze, min_calibration_count
from .wnn import Weighting, _forecast_values, wnn_forecast


def rank_for(delta: float, h: int) -> int:
    """Order-statistic rank floor(delta*(h+1)), guarded against float dust."""
    return int(math.floor(delta * (h + 1) + _DUST))


@dataclass(frozen=True, eq=False)
class PairedDataset:
    """(t, object, label) pairs in chronological order of t."""

    t_values: tuple[int, ...]
    objects: np.ndarray  # c x (n*p)
    labels: np.ndarray   # c x n
    n: int
    p: int

    @property
    def c(self) -> int:
        return len(self.t_values)

    def __len__(self) -> int:
        return len(self.t_values)

    def __iter__(self) -> Iterator[tuple[int, np.ndarray, np.ndarray]]:
        for i, t in enumerate(self.t_values):
            yield t, self.objects[i], self.labels[i]


def make_pairs(series: TimeSeries, n: int, p: int) -> PairedDataset:
    """Cut the series into object/label pairs ending at t = T-n, T-2n, ...

    The pair count c is the largest for which the earliest object window
    still fits, i.e. T - n*c >= n*p.
    """
    if n < 1 or p < 1:
        raise InvalidParamsError("n and p must be positive integers")
    values = series.values
    T = int(values.size)
    window = n * p
    if T < window + n:
        raise SeriesTooShortError(
            f"need at least n*p + n = {window + n} observations for one pair, have {T}"
        )
    c = (T - window) // n
    t_values = tuple(T - j * n for j in range(c, 0, -1))
    objects = np.stack([values[t - window : t] for t in t_values])
    labels = np.stack([values[t : t + n] for t in t_values])
    return PairedDataset(t_values, objects, labels, n=n, p=p)


@dataclass(frozen=True, eq=False)
class ScoreMatrix:
    """Nonconformity scores: one row per calibration pair, one column per step."""

    rows: np.ndarray
    row_tags: tuple[int, ...]

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=float)
        if rows.ndim != 2:
            raise InvalidParamsError("score matrix must be two-dimensional")
        if rows.shape[0] != len(self.row_tags):
            raise InvalidParamsError("row_tags length must match the row count")
        if not np.all(np.isfinite(rows)) or np.any(rows < 0.0):
            raise InvalidParamsError("scores must be finite and non-negative")
        if any(a >= b for a, b in zip(self.row_tags, self.row_tags[1:])):
            raise InvalidParamsError("row_tags must be strictly increasing")
        object.__setattr__(self, "rows", _freeze(rows))
        object.__setattr__(self, "row_tags", tuple(int(t) for t in self.row_tags))

    @property
    def h(self) -> int:
        return int(self.rows.shape[0])

    @property
    def n(self) -> int:
        return int(self.rows.shape[1])


def nonconformity_scores(
    series: TimeSeries,
    t: int,
    config: HorizonConfig,
    weighting: Weighting | str = Weighting.INVERSE_DISTANCE,
) -> np.ndarray:
    """Componentwise |actual - forecast| after refitting on the values up to t."""
    values = series.values
    T = int(values.size)
    n = config.n
    if not 1 <= t <= T - n:
        raise SeriesTooShortError(
            f"pair at t={t} needs n={n} realized observations inside the series (T={T})"
        )
    predicted = _forecast_values(values[:t], config, Weighting(weighting))
    return np.abs(values[t : t + n] - predicted)


def score_matrix(
    series: TimeSeries,
    config: HorizonConfig,
    h: int,
    weighting: Weighting | str = Weighting.INVERSE_DISTANCE,
) -> ScoreMatrix:
    """Scores of the h most recent pairs (t = T-h*n, ..., T-n), oldest row first."""
    if h < 1:
        raise InvalidParamsError("h must be >= 1")
    T = len(series)
    n = config.n
    tags = tuple(T - j * n for j in range(h, 0, -1))
    if tags[0] < 1:
        raise SeriesTooShortError(
            f"h={h} calibration pairs with n={n} reach before the start of the series"
        )
    rows = np.stack([nonconformity_scores(series, t, config, weighting) for t in tags])
    return ScoreMatrix(rows, tags)


def p_value(calibration_scores: Sequence[float], alpha_new: float) -> float:
    """Fraction of scores at least alpha_new, counting alpha_new itself."""
    scores = np.asarray(calibration_scores, dtype=float)
    if scores.ndim != 1 or scores.size < 1:
        raise InvalidParamsError("need a one-dimensional, non-empty calibration set")
    return (1 + int(np.count_nonzero(scores >= alpha_new))) / (scores.size + 1)


@dataclass(frozen=True, eq=False)
class PredictionRegion:
    """Product of per-step symmetric intervals around the point forecast.

    Intervals are notated open; membership testing uses the closed comparison
    |y - center| <= half_width, matching how coverage is counted downstream.
    """

    center: np.ndarray
    half_widths: np.ndarray
    delta: float
    rank: int

    def __post_init__(self):
        center = np.asarray(self.center, dtype=float)
        half = np.asarray(self.half_widths, dtype=float)
        if center.ndim != 1 or center.shape != half.shape:
            raise InvalidParamsError("center and half_widths must be 1-D and congruent")
        if not np.all(np.isfinite(half)) or np.any(half < 0.0):
            raise InvalidParamsError("half-widths must be finite and non-negative")
        if self.rank < 1:
            raise InvalidParamsError("rank must be >= 1")
        object.__setattr__(self, "center", _freeze(center))
        object.__setattr__(self, "half_widths", _freeze(half))

    @property
    def n(self) -> int:
        return int(self.center.size)

    @property
    def lower(self) -> np.ndarray:
        return self.center - self.half_widths

    @property
    def upper(self) -> np.ndarray:
        return self.center + self.half_widths

    def component_mask(self, y: Sequence[float]) -> np.ndarray:
        return np.abs(np.asarray(y, dtype=float) - self.center) <= self.half_widths

    def contains(self, y: Sequence[float]) -> bool:
        return bool(np.all(self.component_mask(y)))

    def to_dict(self) -> dict:
        return {
            "center": self.center.tolist(),
            "half_widths": self.half_widths.tolist(),
            "lower": self.lower.tolist(),
            "upper": self.upper.tolist(),
            "delta": self.delta,
            "rank": self.rank,
        }


def conformal_region(
    series: TimeSeries,
    config: HorizonConfig,
    h: int,
    delta: float,
    weighting: Weighting | str = Weighting.INVERSE_DISTANCE,
) -> PredictionRegion:
    """Region for the next n values, calibrated on the h most recent pair scores.

    Component j's half-width is the rank-th largest score in column j,
    rank = floor(delta*(h+1)); the rank must be >= 1 for the region to exist.
    """
    if not 0.0 < delta < 1.0:
        raise InvalidParamsError(f"delta must lie in (0, 1), got {delta!r}")
    s = rank_for(delta, h)
    if s < 1:
        raise InsufficientCalibrationError(h, min_calibration_count(delta))
    scores = score_matrix(series, config, h, weighting)
    descending = np.sort(scores.rows, axis=0)[::-1]
    half = descending[s - 1]
    center = wnn_forecast(series, config, weighting)
    return PredictionRegion(center=center, half_widths=half, delta=float(delta), rank=s)
