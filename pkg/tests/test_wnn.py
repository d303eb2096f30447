import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cpwnn import (
    ForecasterSpec,
    HorizonConfig,
    TimeSeries,
    Weighting,
    fpto_tune,
    mape,
    point_forecast,
    wnn_forecast,
)
from cpwnn.errors import (
    GridInfeasibleError,
    HistoryTooShortError,
    InvalidParamsError,
    TooFewCandidatesError,
)

WEIGHT_EPS = 1e-8


def naive_wnn(values, n, p, k, weighting=Weighting.INVERSE_DISTANCE):
    """Slow reference: enumerate every window, sort by (distance, position)."""
    values = np.asarray(values, dtype=float)
    window = n * p
    query = values[-window:]
    candidates = []
    for i in range(values.size - window - n + 1):
        d2 = float(((values[i : i + window] - query) ** 2).sum())
        candidates.append((d2, i, values[i + window : i + window + n]))
    candidates.sort(key=lambda c: (c[0], c[1]))
    chosen = candidates[:k]
    if weighting is Weighting.UNIFORM:
        return np.mean([c[2] for c in chosen], axis=0)
    raw = np.array([1.0 / (c[0] + WEIGHT_EPS) for c in chosen])
    w = raw / raw.sum()
    return sum(wi * c[2] for wi, c in zip(w, chosen))


def naive_mape_star(values, n, folds, p, k, weighting=Weighting.INVERSE_DISTANCE):
    total = 0.0
    T = len(values)
    for i in range(1, folds + 1):
        predicted = naive_wnn(values[: T - i * n], n, p, k, weighting)
        total += mape(values[T - i * n : T - i * n + n], predicted)
    return total / folds


class TestWnnForecast:
    def test_constant_series(self):
        ts = TimeSeries(np.full(30, 5.0), 12)
        forecast = wnn_forecast(ts, HorizonConfig(n=2, p=2, k=3))
        assert forecast == pytest.approx([5.0, 5.0])

    def test_exact_periodic_next_period(self):
        profile = np.array([3.0, 7.0, 1.0, 9.0])
        ts = TimeSeries(np.tile(profile, 10), 4)
        forecast = wnn_forecast(ts, HorizonConfig(n=4, p=1, k=1))
        assert np.array_equal(forecast, profile)
        assert np.array_equal(forecast, naive_wnn(ts.values, 4, 1, 1))

    def test_k1_returns_nearest_continuation(self):
        rng = np.random.default_rng(7)
        values = rng.normal(10.0, 2.0, size=40)
        ts = TimeSeries(values, 4)
        forecast = wnn_forecast(ts, HorizonConfig(n=2, p=3, k=1))
        assert np.array_equal(forecast, naive_wnn(values, 2, 3, 1))

    def test_matches_naive_reference(self):
        rng = np.random.default_rng(3)
        values = rng.normal(50.0, 5.0, size=60)
        ts = TimeSeries(values, 12)
        for weighting in Weighting:
            got = wnn_forecast(ts, HorizonConfig(n=3, p=2, k=4), weighting)
            want = naive_wnn(values, 3, 2, 4, weighting)
            assert got == pytest.approx(want, rel=1e-12)

    def test_history_too_short(self):
        ts = TimeSeries(np.arange(1.0, 7.0), 2)
        with pytest.raises(HistoryTooShortError):
            wnn_forecast(ts, HorizonConfig(n=3, p=2, k=1))

    def test_too_few_candidates(self):
        ts = TimeSeries(np.arange(1.0, 10.0), 2)
        with pytest.raises(TooFewCandidatesError):
            wnn_forecast(ts, HorizonConfig(n=2, p=3, k=5))

    def test_bounded_by_neighbor_labels(self):
        rng = np.random.default_rng(11)
        values = rng.normal(0.0, 3.0, size=50)
        ts = TimeSeries(values, 4)
        config = HorizonConfig(n=2, p=2, k=5)
        forecast = wnn_forecast(ts, config)
        # reference labels of the selected neighbors
        window = config.window
        query = values[-window:]
        d2 = [((values[i : i + window] - query) ** 2).sum() for i in range(values.size - window - 1)]
        order = np.argsort(d2, kind="stable")[:5]
        labels = np.array([values[i + window : i + window + 2] for i in order])
        assert np.all(forecast >= labels.min(axis=0) - 1e-9)
        assert np.all(forecast <= labels.max(axis=0) + 1e-9)

    @settings(max_examples=60, deadline=None)
    @given(
        st.lists(st.floats(min_value=-50.0, max_value=50.0), min_size=18, max_size=40),
        st.floats(min_value=-100.0, max_value=100.0),
    )
    def test_shift_equivariance(self, xs, shift):
        values = np.asarray(xs)
        config = HorizonConfig(n=2, p=2, k=3)
        base = wnn_forecast(TimeSeries(values, 4), config)
        shifted = wnn_forecast(TimeSeries(values + shift, 4), config)
        assert shifted == pytest.approx(base + shift, rel=1e-9, abs=1e-7)


class TestPointForecast:
    def test_seasonal_naive_repeats_last_period(self):
        ts = TimeSeries(np.array([9.0, 9.0, 9.0, 9.0, 1.0, 2.0, 3.0, 4.0]), 4)
        spec = ForecasterSpec.seasonal_naive(4)
        assert point_forecast(spec, ts, 2) == pytest.approx([1.0, 2.0])

    def test_seasonal_naive_cyclic_extension(self):
        ts = TimeSeries(np.array([1.0, 2.0, 3.0, 4.0]), 4)
        spec = ForecasterSpec.seasonal_naive(4)
        assert point_forecast(spec, ts, 6) == pytest.approx([1.0, 2.0, 3.0, 4.0, 1.0, 2.0])

    def test_wnn_dispatch_identity(self):
        rng = np.random.default_rng(5)
        ts = TimeSeries(rng.normal(20.0, 1.0, size=40), 4)
        config = HorizonConfig(n=2, p=3, k=2)
        spec = ForecasterSpec.wnn(config)
        assert np.array_equal(point_forecast(spec, ts, 2), wnn_forecast(ts, config))

    def test_wnn_dispatch_checks_n(self):
        ts = TimeSeries(np.arange(1.0, 41.0), 4)
        spec = ForecasterSpec.wnn(HorizonConfig(n=2, p=3, k=2))
        with pytest.raises(InvalidParamsError):
            point_forecast(spec, ts, 3)


class TestFptoTune:
    def test_singleton_grid(self):
        rng = np.random.default_rng(2)
        ts = TimeSeries(rng.normal(30.0, 2.0, size=60), 12)
        result = fpto_tune(ts, n=2, folds=4, p_grid=[2], k_grid=[3])
        assert (result.p_star, result.k_star) == (2, 3)
        assert len(result.trace) == 1
        assert result.objective == result.trace[0][2]

    def test_deterministic_periodic_attains_zero(self):
        profile = 10.0 + np.sin(2 * np.pi * np.arange(12) / 12)
        ts = TimeSeries(np.tile(profile, 20), 12)
        result = fpto_tune(ts, n=12, folds=3, p_grid=[1, 2], k_grid=[1, 2, 3])
        assert result.objective == pytest.approx(0.0, abs=1e-9)

    def test_trace_matches_naive_double_loop(self):
        rng = np.random.default_rng(9)
        ts = TimeSeries(rng.normal(40.0, 3.0, size=55), 4)
        result = fpto_tune(ts, n=2, folds=3, p_grid=[1, 2, 3], k_grid=[1, 2, 4])
        assert len(result.trace) == 9
        for p, k, objective in result.trace:
            want = naive_mape_star(ts.values, 2, 3, p, k)
            assert objective == pytest.approx(want, rel=1e-10)

    def test_tie_break_prefers_small_p_then_k(self):
        ts = TimeSeries(np.tile(np.array([4.0, 8.0, 6.0, 2.0]), 15), 4)
        result = fpto_tune(ts, n=4, folds=2, p_grid=[2, 1], k_grid=[3, 1])
        # every cell is exact on a deterministic periodic series -> all tie at 0
        assert result.objective == pytest.approx(0.0, abs=1e-9)
        assert (result.p_star, result.k_star) == (1, 1)

    def test_infeasible_cells_are_skipped_not_fatal(self):
        rng = np.random.default_rng(4)
        ts = TimeSeries(rng.normal(25.0, 1.0, size=30), 4)
        result = fpto_tune(ts, n=2, folds=3, p_grid=[1, 40], k_grid=[1])
        assert [(p, k) for p, k, _ in result.trace] == [(1, 1)]
        assert any(p == 40 for p, _, _ in result.skipped)

    def test_whole_grid_infeasible_raises(self):
        ts = TimeSeries(np.arange(1.0, 21.0), 4)
        with pytest.raises(GridInfeasibleError):
            fpto_tune(ts, n=2, folds=3, p_grid=[30], k_grid=[1, 2])

    def test_deterministic_given_inputs(self):
        rng = np.random.default_rng(12)
        ts = TimeSeries(rng.normal(15.0, 1.0, size=48), 4)
        a = fpto_tune(ts, n=2, folds=3, p_grid=range(1, 4), k_grid=range(1, 4))
        b = fpto_tune(ts, n=2, folds=3, p_grid=range(1, 4), k_grid=range(1, 4))
        assert a.trace == b.trace and (a.p_star, a.k_star) == (b.p_star, b.k_star)
