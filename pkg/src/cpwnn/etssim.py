"""Additive exponential-smoothing simulators and closed-form interval widths.

Two state-space forms are supported, both with additive errors and additive
seasonality: one without trend (ANA) and one with a damped additive trend
(AAdA). Simulation follows the recursions

    ANA:   a_t = l_{t-1} + s_{t-m} + e_t
           l_t = l_{t-1} + alpha*e_t
           s_t = s_{t-m} + gamma*e_t

    AAdA:  a_t = l_{t-1} + phi*b_{t-1} + s_{t-m} + e_t
           l_t = l_{t-1} + phi*b_{t-1} + alpha*e_t
           b_t = phi*b_{t-1} + beta*e_t
           s_t = s_{t-m} + gamma*e_t

with e_t iid Normal(0, sigma2). Initial states are treated as exact (no
burn-in). The h-step forecast variance has a closed form in the smoothing
parameters; interval widths are 2*c*sigma_h with c the two-sided
standard-normal quantile of the confidence level.

Randomness comes from numpy's default_rng(seed) (PCG64), so a seed pins the
whole path for this implementation. Bit-reproducibility across libraries is
not a goal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.stats import norm

from .errors import InvalidParamsError
from .series import TimeSeries, _freeze


class EtsKind(str, Enum):
    ANA = "ana"    # additive error, no trend, additive seasonality
    AADA = "aada"  # additive error, damped additive trend, additive seasonality


def default_seasonal(period: int, amplitude: float = 10.0) -> np.ndarray:
    """Zero-sum sinusoidal seasonal profile over one period."""
    raw = amplitude * np.sin(2.0 * np.pi * np.arange(period) / period)
    return raw - raw.mean()


@dataclass(frozen=True, eq=False)
class EtsParams:
    """Parameters and initial states of an additive-seasonal smoothing model."""

    kind: EtsKind
    alpha: float
    gamma: float
    sigma2: float = 1.0
    period: int = 12
    beta: float | None = None
    phi: float | None = None
    init_level: float = 100.0
    init_trend: float = 1.0
    init_seasonal: np.ndarray | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", EtsKind(self.kind))
        if not 0.0 < self.alpha < 1.0:
            raise InvalidParamsError(f"alpha must lie in (0, 1), got {self.alpha!r}")
        if not 0.0 < self.gamma < 1.0:
            raise InvalidParamsError(f"gamma must lie in (0, 1), got {self.gamma!r}")
        if self.sigma2 < 0.0:
            raise InvalidParamsError(f"sigma2 must be >= 0, got {self.sigma2!r}")
        if self.period < 1:
            raise InvalidParamsError(f"period must be >= 1, got {self.period!r}")
        if self.kind is EtsKind.AADA:
            if self.beta is None or not 0.0 < self.beta < 1.0:
                raise InvalidParamsError("the damped-trend model needs beta in (0, 1)")
            if self.phi is None or not 0.0 < self.phi < 1.0:
                raise InvalidParamsError("the damped-trend model needs phi in (0, 1)")
        elif self.beta is not None or self.phi is not None:
            raise InvalidParamsError("beta and phi only apply to the damped-trend model")
        seasonal = (
            default_seasonal(self.period)
            if self.init_seasonal is None
            else np.asarray(self.init_seasonal, dtype=float)
        )
        if seasonal.shape != (self.period,):
            raise InvalidParamsError(
                f"init_seasonal must have length period={self.period}"
            )
        scale = max(1.0, float(np.max(np.abs(seasonal))) if seasonal.size else 1.0)
        if abs(float(seasonal.sum())) > 1e-8 * scale:
            raise InvalidParamsError("init_seasonal must sum to zero")
        object.__setattr__(self, "init_seasonal", _freeze(seasonal))


def ana_params(
    alpha: float,
    gamma: float,
    sigma2: float = 1.0,
    period: int = 12,
    init_level: float = 100.0,
    init_seasonal=None,
) -> EtsParams:
    return EtsParams(
        EtsKind.ANA,
        alpha=alpha,
        gamma=gamma,
        sigma2=sigma2,
        period=period,
        init_level=init_level,
        init_seasonal=init_seasonal,
    )


def aada_params(
    alpha: float,
    beta: float,
    gamma: float,
    phi: float,
    sigma2: float = 1.0,
    period: int = 12,
    init_level: float = 100.0,
    init_trend: float = 1.0,
    init_seasonal=None,
) -> EtsParams:
    return EtsParams(
        EtsKind.AADA,
        alpha=alpha,
        gamma=gamma,
        sigma2=sigma2,
        period=period,
        beta=beta,
        phi=phi,
        init_level=init_level,
        init_trend=init_trend,
        init_seasonal=init_seasonal,
    )


def simulate_with_means(
    params: EtsParams, T: int, seed: int
) -> tuple[TimeSeries, np.ndarray]:
    """Simulate a path and also return the one-step conditional means.

    means[t] is the observation minus its own shock (level + damped trend +
    seasonal state in force at t), which is what an oracle one-step forecast
    would predict.
    """
    if T < 1:
        raise InvalidParamsError("T must be >= 1")
    rng = np.random.default_rng(seed)
    shocks = rng.standard_normal(T) * math.sqrt(params.sigma2)
    m = params.period
    alpha, gamma = params.alpha, params.gamma
    damped = params.kind is EtsKind.AADA
    beta = params.beta if damped else 0.0
    phi = params.phi if damped else 0.0
    seasonal = params.init_seasonal.copy()
    level = params.init_level
    trend = params.init_trend if damped else 0.0
    values = np.empty(T)
    means = np.empty(T)
    for t in range(T):
        slot = t % m
        mu = level + phi * trend + seasonal[slot]
        e = shocks[t]
        values[t] = mu + e
        means[t] = mu
        level = level + phi * trend + alpha * e
        trend = phi * trend + beta * e
        seasonal[slot] = seasonal[slot] + gamma * e
    series = TimeSeries(values, period=m, label=f"sim-{params.kind.value}")
    return series, means


def simulate_ets(params: EtsParams, T: int, seed: int) -> TimeSeries:
    """Simulate T observations; fully determined by (params, T, seed)."""
    series, _ = simulate_with_means(params, T, seed)
    return series


def ets_forecast_variance(params: EtsParams, h: int) -> float:
    """Closed-form variance of the h-step-ahead forecast error."""
    if h < 1:
        raise InvalidParamsError("h must be >= 1")
    m = params.period
    k = (h - 1) // m
    alpha, gamma = params.alpha, params.gamma
    core = 1.0 + alpha * alpha * (h - 1) + gamma * k * (2.0 * alpha + gamma)
    if params.kind is EtsKind.ANA:
        return params.sigma2 * core
    beta, phi = params.beta, params.phi
    one = 1.0 - phi
    grow = beta * phi * h / one**2 * (2.0 * alpha * one + beta * phi)
    decay = (
        beta * phi * (1.0 - phi**h) / (one**2 * (1.0 - phi**2))
        * (2.0 * alpha * (1.0 - phi**2) + beta * phi * (1.0 + 2.0 * phi - phi**h))
    )
    seasonal_coupling = (
        2.0 * beta * gamma * phi / (one * (1.0 - phi**m))
        * (k * (1.0 - phi**m) - phi**m * (1.0 - phi ** (m * k)))
    )
    return params.sigma2 * (core + grow - decay + seasonal_coupling)


def theoretical_width(params: EtsParams, h: int, confidence: float) -> float:
    """Width 2*c*sigma_h of the symmetric interval at the given confidence."""
    if not 0.0 <= confidence < 1.0:
        raise InvalidParamsError(f"confidence must lie in [0, 1), got {confidence!r}")
    c = float(norm.ppf(0.5 + 0.5 * confidence))
    return 2.0 * c * math.sqrt(ets_forecast_variance(params, h))
