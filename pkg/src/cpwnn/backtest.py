"""Online coverage backtest over a held-out block at the end of a series.

Each test step reads the current rank-based half-widths off the calibration
score matrix, then appends its own scores to the matrix, so later steps
calibrate on a strictly larger history (the matrix grows online; there is no
fixed window). A component counts as covered when its absolute error is <=
the half-width recorded for that step.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .conformal import rank_for
from .errors import ForecastError, InfeasibleDeltaError, InvalidParamsError, SeriesTooShortError
from .series import HorizonConfig, SplitSpec, TimeSeries, mape, min_calibration_count
from .wnn import ForecasterKind, ForecasterSpec, Weighting, forecaster_fn


@dataclass(frozen=True, eq=False)
class CheckReport:
    """Backtest outputs: per-step half-widths, hits, and their summaries."""

    half_widths: np.ndarray        # i2 x n; row i holds the widths used at test step i
    hits: np.ndarray               # i2 x n; 1 where the step's score was covered
    overall_coverage: float        # percent over all cells
    component_coverage: np.ndarray # percent per horizon component
    mean_width: np.ndarray         # 2 * column means of half_widths
    median_width: np.ndarray       # 2 * column medians of half_widths
    config: dict

    @classmethod
    def from_matrices(cls, half_widths, hits, config: dict) -> "CheckReport":
        half = np.asarray(half_widths, dtype=float)
        hit = np.asarray(hits, dtype=np.uint8)
        if half.ndim != 2 or half.shape != hit.shape:
            raise InvalidParamsError("half_widths and hits must be congruent 2-D arrays")
        if np.any(half < 0.0) or not np.all(np.isfinite(half)):
            raise InvalidParamsError("half-widths must be finite and non-negative")
        return cls(
            half_widths=half,
            hits=hit,
            overall_coverage=float(100.0 * hit.sum() / hit.size),
            component_coverage=100.0 * hit.mean(axis=0),
            mean_width=2.0 * half.mean(axis=0),
            median_width=2.0 * np.median(half, axis=0),
            config=dict(config),
        )

    @property
    def i2(self) -> int:
        return int(self.hits.shape[0])

    @property
    def n(self) -> int:
        return int(self.hits.shape[1])

    def to_dict(self) -> dict:
        return {
            "half_widths": self.half_widths.tolist(),
            "hits": self.hits.tolist(),
            "overall_coverage": self.overall_coverage,
            "component_coverage": self.component_coverage.tolist(),
            "mean_width": self.mean_width.tolist(),
            "median_width": self.median_width.tolist(),
            "config": self.config,
        }


def backtest_matrices(
    calibration_rows, test_rows, delta: float
) -> tuple[np.ndarray, np.ndarray]:
    """Run the growing-calibration loop on precomputed score rows.

    At step i the pool holds i1+i rows; the recorded half-width per column is
    its rank-th largest entry with rank = floor(delta*(i1+i+1)), taken before
    the step's own row joins the pool. Returns (half_widths, hits).
    """
    calib = np.atleast_2d(np.asarray(calibration_rows, dtype=float))
    test = np.atleast_2d(np.asarray(test_rows, dtype=float))
    i1, n = calib.shape
    i2 = test.shape[0]
    if test.shape[1] != n:
        raise InvalidParamsError("calibration and test rows must have the same width")
    pool = np.empty((i1 + i2, n))
    pool[:i1] = calib
    half = np.empty((i2, n))
    for i in range(i2):
        s = rank_for(delta, i1 + i)
        if s < 1:
            raise InfeasibleDeltaError(delta, min_calibration_count(delta))
        descending = np.sort(pool[: i1 + i], axis=0)[::-1]
        half[i] = descending[s - 1]
        pool[i1 + i] = test[i]
    hits = (test <= half).astype(np.uint8)
    return half, hits


def _minimum_start(spec: ForecasterSpec) -> int:
    if spec.kind is ForecasterKind.WNN:
        return spec.config.window
    return int(spec.period)


def run_backtest(
    series: TimeSeries, spec: ForecasterSpec, n: int, split: SplitSpec
) -> tuple[CheckReport, float]:
    """Backtest any forecaster spec; returns the report and the test-block MAPE.

    Score rows are built for t = T - n*(i1+i2), stepping by n: the first i1
    seed the calibration pool, the remaining i2 are the test block.
    """
    values = series.values
    T = int(values.size)
    i1, i2, delta = split.i1, split.i2, split.delta
    start = T - n * (i1 + i2)
    if start < _minimum_start(spec):
        raise SeriesTooShortError(
            f"series of length {T} cannot seed the earliest scored pair at t={start} "
            f"(needs history of at least {_minimum_start(spec)})"
        )
    forecast = forecaster_fn(spec, n)
    t_values = [start + j * n for j in range(i1 + i2)]
    predicted = np.stack([forecast(values[:t]) for t in t_values])
    actual = np.stack([values[t : t + n] for t in t_values])
    scores = np.abs(actual - predicted)
    half, hits = backtest_matrices(scores[:i1], scores[i1:], delta)
    test_mape = mape(actual[i1:].ravel(), predicted[i1:].ravel())
    config = {
        "forecaster": spec.describe(),
        "n": n,
        "i1": i1,
        "i2": i2,
        "delta": delta,
    }
    if spec.kind is ForecasterKind.WNN:
        config.update(p=spec.config.p, k=spec.config.k, weighting=spec.weighting.value)
    else:
        config.update(period=spec.period)
    return CheckReport.from_matrices(half, hits, config), float(test_mape)


def check_cp(
    series: TimeSeries,
    config: HorizonConfig,
    split: SplitSpec,
    weighting: Weighting | str = Weighting.INVERSE_DISTANCE,
) -> CheckReport:
    """Backtest the nearest-neighbor forecaster's regions over the test block."""
    spec = ForecasterSpec.wnn(config, weighting)
    report, _ = run_backtest(series, spec, config.n, split)
    return report


@dataclass(frozen=True, eq=False)
class CompareResult:
    spec: ForecasterSpec
    mape: float | None
    report: CheckReport | None
    error: str | None = None


def compare_forecasters(
    series: TimeSeries, specs: Sequence[ForecasterSpec], n: int, split: SplitSpec
) -> list[CompareResult]:
    """Backtest several forecasters side by side; per-spec failures are recorded, not raised."""
    results: list[CompareResult] = []
    for spec in specs:
        try:
            report, test_mape = run_backtest(series, spec, n, split)
        except ForecastError as exc:
            results.append(CompareResult(spec, None, None, error=str(exc)))
        else:
            results.append(CompareResult(spec, test_mape, report))
    return results
