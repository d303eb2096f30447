#!/usr/bin/env python3
"""Regenerate data/milk_uk_monthly.csv, the bundled benchmark series.

A synthetic stand-in for monthly UK cow's-milk production in hundred
thousand tonnes: 634 points, January 1968 through October 2020, built from a
smooth multi-decade level curve, a strong annual profile peaking in May and
bottoming in November, and mild autocorrelated multiplicative noise. Fully
deterministic (fixed seed), so the committed CSV is reproducible.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

T = 634
SEED = 196801
OUT = Path(__file__).resolve().parent.parent / "data" / "milk_uk_monthly.csv"

# Anchor years for the long-run level (hundred thousand tonnes).
LEVEL_KNOTS = [
    (1968.0, 10.7),
    (1973.0, 11.6),
    (1978.0, 12.6),
    (1983.5, 13.6),
    (1987.0, 12.7),
    (1992.0, 12.1),
    (1997.0, 12.2),
    (2003.0, 11.9),
    (2009.0, 11.3),
    (2014.0, 12.2),
    (2017.0, 12.0),
    (2021.0, 12.5),
]

# Multiplicative monthly profile, Jan..Dec: spring flush, autumn trough.
MONTH_PROFILE = np.array(
    [1.000, 0.930, 1.065, 1.085, 1.140, 1.075, 1.040, 0.995, 0.945, 0.955, 0.915, 0.960]
)


def build_series() -> np.ndarray:
    months = np.arange(T)
    year = 1968.0 + (months + 0.5) / 12.0
    knot_x = np.array([x for x, _ in LEVEL_KNOTS])
    knot_y = np.array([y for _, y in LEVEL_KNOTS])
    level = np.interp(year, knot_x, knot_y)
    # soften the knot corners with a two-year moving average
    pad = 12
    padded = np.concatenate([np.full(pad, level[0]), level, np.full(pad, level[-1])])
    kernel = np.ones(2 * pad + 1) / (2 * pad + 1)
    level = np.convolve(padded, kernel, mode="valid")

    profile = MONTH_PROFILE / MONTH_PROFILE.mean()
    seasonal = profile[months % 12]

    rng = np.random.default_rng(SEED)
    innovations = rng.standard_normal(T)
    rho, marginal_sd = 0.5, 0.0125
    noise = np.empty(T)
    noise[0] = innovations[0] * marginal_sd
    step_sd = marginal_sd * np.sqrt(1.0 - rho * rho)
    for t in range(1, T):
        noise[t] = rho * noise[t - 1] + step_sd * innovations[t]

    values = level * seasonal * (1.0 + noise)
    return np.round(values, 3)


def month_labels() -> list[str]:
    return [f"{1968 + t // 12}-{t % 12 + 1:02d}" for t in range(T)]


def main() -> None:
    values = build_series()
    OUT.parent.mkdir(parents=True, exist_ok=True)
    lines = ["date,value"]
    lines.extend(f"{d},{v}" for d, v in zip(month_labels(), values))
    OUT.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {OUT} ({len(values)} rows, min {values.min()}, max {values.max()})")


if __name__ == "__main__":
    main()
