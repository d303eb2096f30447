"""Command-line front end: CSV in, tuned forecasts / regions / backtests out.

Subcommands: tune | forecast | check | simulate | compare. User-facing flags
take confidence levels (e.g. 0.95); internally the significance level is
delta = 1 - confidence. Exit codes: 0 success, 2 usage error, 3 data error,
4 infeasible configuration.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__
from .backtest import check_cp, compare_forecasters
from .conformal import conformal_region
from .errors import (
    ColumnNotFoundError,
    ConfigError,
    CsvParseError,
    DataError,
    InvalidParamsError,
)
from .etssim import EtsKind, aada_params, ana_params, simulate_ets
from .series import HorizonConfig, TimeSeries, split_sizes, validate_series
from .wnn import ForecasterSpec, TuneResult, Weighting, fpto_tune

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_INFEASIBLE = 4

DEFAULT_GRID = tuple(range(1, 13))


@dataclass
class RunConfig:
    """Validated bundle of everything one CLI invocation needs."""

    command: str
    input_path: str | None = None
    column: str = "value"
    period: int = 12
    n: int = 1
    confidences: tuple[float, ...] = (0.95,)
    p: int | None = None
    k: int | None = None
    p_grid: tuple[int, ...] = DEFAULT_GRID
    k_grid: tuple[int, ...] = DEFAULT_GRID
    folds: int | None = None
    weighting: Weighting = Weighting.INVERSE_DISTANCE
    model: str | None = None
    length: int | None = None
    alpha: float = 0.5
    beta: float = 0.3
    gamma: float = 0.2
    phi: float = 0.82
    sigma2: float = 1.0
    init_level: float = 100.0
    init_trend: float = 1.0
    seed: int | None = None
    output_path: str | None = None
    output_format: str = "text"
    no_timestamp: bool = False

    def __post_init__(self):
        if self.n < 1:
            raise InvalidParamsError("n must be >= 1")
        for conf in self.confidences:
            if not 0.0 < conf < 1.0:
                raise InvalidParamsError(
                    f"confidence levels must lie in (0, 1), got {conf!r}"
                )
        self.weighting = Weighting(self.weighting)


# ---------------------------------------------------------------------------
# CSV input / output


def load_csv(path, column="value", period: int = 12) -> TimeSeries:
    """Read one numeric column (by header name or 0-based index) into a TimeSeries."""
    if path == "-":
        rows = list(csv.reader(sys.stdin))
        name = "<stdin>"
    else:
        with open(path, newline="", encoding="utf-8") as handle:
            rows = list(csv.reader(handle))
        name = str(path)
    if not rows:
        raise CsvParseError(1, column, "empty file (expected a header row)")
    header = [cell.strip() for cell in rows[0]]
    index: int | None = None
    if isinstance(column, int):
        if 0 <= column < len(header):
            index = column
    elif column in header:
        index = header.index(column)
    elif isinstance(column, str) and column.isdigit() and int(column) < len(header):
        index = int(column)
    if index is None:
        raise ColumnNotFoundError(column, header)
    values: list[float] = []
    for rownum, row in enumerate(rows[1:], start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if index >= len(row):
            raise CsvParseError(rownum, header[index], "<missing cell>")
        text = row[index].strip()
        try:
            values.append(float(text))
        except ValueError:
            raise CsvParseError(rownum, header[index], text) from None
    return validate_series(values, period, label=name)


def series_to_csv(values: Sequence[float]) -> str:
    """Render a series as a two-column CSV that round-trips float64 exactly."""
    out = io.StringIO()
    out.write("t,value\n")
    for t, v in enumerate(values, start=1):
        out.write(f"{t},{float(v)!r}\n")
    return out.getvalue()


# ---------------------------------------------------------------------------
# Emission helpers


def _emit(text: str, output_path: str | None) -> None:
    if output_path is None or output_path == "-":
        sys.stdout.write(text)
    else:
        Path(output_path).write_text(text, encoding="utf-8")


def _provenance(cfg: RunConfig) -> dict:
    info: dict = {"seed": cfg.seed, "version": __version__}
    if not cfg.no_timestamp:
        info["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return info


def _json_doc(cfg: RunConfig, config: dict, results: dict) -> str:
    doc = {"config": config, "results": results, "provenance": _provenance(cfg)}
    return json.dumps(doc, indent=2) + "\n"


def _csv_table(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return out.getvalue()


# ---------------------------------------------------------------------------
# Shared workflow pieces


def _train_series(series: TimeSeries, n: int, i2: int) -> TimeSeries:
    cut = len(series) - n * i2
    return TimeSeries(series.values[:cut], period=series.period, label=series.label)


def _resolve_config(
    series: TimeSeries, cfg: RunConfig, delta: float
) -> tuple[HorizonConfig, TuneResult | None]:
    """Use --p/--k when given, otherwise tune on the training block."""
    if cfg.p is not None and cfg.k is not None:
        return HorizonConfig(cfg.n, cfg.p, cfg.k), None
    split = split_sizes(len(series), cfg.n, delta)
    folds = cfg.folds if cfg.folds is not None else split.i1
    train = _train_series(series, cfg.n, split.i2)
    tuned = fpto_tune(train, cfg.n, folds, cfg.p_grid, cfg.k_grid, cfg.weighting)
    return HorizonConfig(cfg.n, tuned.p_star, tuned.k_star), tuned


def _base_config_dict(cfg: RunConfig) -> dict:
    return {
        "command": cfg.command,
        "input": cfg.input_path,
        "column": cfg.column,
        "period": cfg.period,
        "n": cfg.n,
        "weighting": cfg.weighting.value,
    }


# ---------------------------------------------------------------------------
# Commands


def _cmd_tune(cfg: RunConfig) -> int:
    series = load_csv(cfg.input_path, cfg.column, cfg.period)
    delta = 1.0 - cfg.confidences[0]
    folds = cfg.folds
    if folds is None:
        folds = split_sizes(len(series), cfg.n, delta).i1
    result = fpto_tune(series, cfg.n, folds, cfg.p_grid, cfg.k_grid, cfg.weighting)
    config = _base_config_dict(cfg) | {
        "folds": folds,
        "p_grid": list(cfg.p_grid),
        "k_grid": list(cfg.k_grid),
    }
    if cfg.output_format == "json":
        results = {
            "p_star": result.p_star,
            "k_star": result.k_star,
            "objective": result.objective,
            "trace": [{"p": p, "k": k, "mape": m} for p, k, m in result.trace],
            "skipped": [{"p": p, "k": k, "reason": r} for p, k, r in result.skipped],
        }
        _emit(_json_doc(cfg, config, results), cfg.output_path)
    elif cfg.output_format == "csv":
        rows = [(p, k, repr(m)) for p, k, m in result.trace]
        _emit(_csv_table(("p", "k", "mape"), rows), cfg.output_path)
    else:
        lines = [
            f"tuned over {len(result.trace)} grid cells, {folds} folds",
            f"  p* = {result.p_star}   k* = {result.k_star}   objective MAPE = {result.objective:.4f}",
        ]
        best5 = sorted(result.trace, key=lambda cell: cell[2])[:5]
        lines.append("best cells:")
        lines.extend(f"  p={p:<3d} k={k:<3d} mape={m:.4f}" for p, k, m in best5)
        if result.skipped:
            lines.append(f"skipped {len(result.skipped)} infeasible cells")
        _emit("\n".join(lines) + "\n", cfg.output_path)
    return EXIT_OK


def _cmd_forecast(cfg: RunConfig) -> int:
    series = load_csv(cfg.input_path, cfg.column, cfg.period)
    config, tuned = _resolve_config(series, cfg, 1.0 - cfg.confidences[0])
    regions = []
    for conf in cfg.confidences:
        delta = 1.0 - conf
        split = split_sizes(len(series), cfg.n, delta)
        h = split.i1 + split.i2
        region = conformal_region(series, config, h, delta, cfg.weighting)
        regions.append((conf, h, region))
    config_dict = _base_config_dict(cfg) | {
        "p": config.p,
        "k": config.k,
        "tuned": tuned is not None,
        "confidences": list(cfg.confidences),
    }
    if cfg.output_format == "json":
        results = {
            "center": regions[0][2].center.tolist(),
            "regions": [
                {"confidence": conf, "h": h} | region.to_dict()
                for conf, h, region in regions
            ],
        }
        _emit(_json_doc(cfg, config_dict, results), cfg.output_path)
    elif cfg.output_format == "csv":
        rows = []
        for conf, _, region in regions:
            for j in range(region.n):
                rows.append(
                    (
                        conf,
                        j + 1,
                        repr(float(region.center[j])),
                        repr(float(region.lower[j])),
                        repr(float(region.upper[j])),
                        repr(float(region.half_widths[j])),
                    )
                )
        header = ("confidence", "component", "center", "lower", "upper", "half_width")
        _emit(_csv_table(header, rows), cfg.output_path)
    else:
        center = regions[0][2].center
        lines = [
            f"point forecast (n={cfg.n}, p={config.p}, k={config.k}): "
            + ", ".join(f"{v:.4f}" for v in center)
        ]
        for conf, h, region in regions:
            lines.append(
                f"{100 * conf:.1f}% region (delta={region.delta:.3f}, h={h}, rank={region.rank}):"
            )
            for j in range(region.n):
                lines.append(
                    f"  j={j + 1}: ({region.lower[j]:.4f}, {region.upper[j]:.4f})"
                    f"  half-width {region.half_widths[j]:.4f}"
                )
        _emit("\n".join(lines) + "\n", cfg.output_path)
    return EXIT_OK


def _level_runs(series: TimeSeries, cfg: RunConfig, config: HorizonConfig):
    """One coverage backtest per requested confidence level."""
    runs = []
    for conf in cfg.confidences:
        delta = 1.0 - conf
        split = split_sizes(len(series), cfg.n, delta)
        report = check_cp(series, config, split, cfg.weighting)
        runs.append((conf, split, report))
    return runs


def _check_csv_rows(method: str, runs) -> list[tuple]:
    rows = []
    for conf, _, report in runs:
        for j in range(report.n):
            rows.append(
                (
                    conf,
                    method,
                    j + 1,
                    repr(float(report.mean_width[j])),
                    repr(float(report.median_width[j])),
                    repr(float(report.component_coverage[j])),
                )
            )
        rows.append(
            (
                conf,
                method,
                "overall",
                repr(float(report.mean_width.mean())),
                repr(float(np.median(report.half_widths) * 2.0)),
                repr(float(report.overall_coverage)),
            )
        )
    return rows


def _check_text_lines(runs) -> list[str]:
    lines = []
    for conf, split, report in runs:
        lines.append(
            f"confidence {100 * conf:.1f}%  (delta={split.delta:.3f}, "
            f"i1={split.i1}, i2={split.i2})"
        )
        lines.append(f"  overall coverage: {report.overall_coverage:.2f}%")
        lines.append("  j   mean width   median width   coverage%")
        for j in range(report.n):
            lines.append(
                f"  {j + 1:<3d} {report.mean_width[j]:<12.4f} "
                f"{report.median_width[j]:<14.4f} {report.component_coverage[j]:.2f}"
            )
    return lines


def _cmd_check(cfg: RunConfig) -> int:
    series = load_csv(cfg.input_path, cfg.column, cfg.period)
    config, tuned = _resolve_config(series, cfg, 1.0 - cfg.confidences[0])
    runs = _level_runs(series, cfg, config)
    config_dict = _base_config_dict(cfg) | {
        "p": config.p,
        "k": config.k,
        "tuned": tuned is not None,
        "confidences": list(cfg.confidences),
    }
    if cfg.output_format == "json":
        results = {
            "levels": [
                {
                    "confidence": conf,
                    "delta": split.delta,
                    "i1": split.i1,
                    "i2": split.i2,
                    "report": report.to_dict(),
                }
                for conf, split, report in runs
            ]
        }
        _emit(_json_doc(cfg, config_dict, results), cfg.output_path)
    elif cfg.output_format == "csv":
        header = ("confidence", "method", "component", "mean_width", "median_width", "coverage")
        _emit(_csv_table(header, _check_csv_rows(f"wnn(p={config.p},k={config.k})", runs)), cfg.output_path)
    else:
        lines = [
            f"coverage backtest: n={cfg.n}, forecaster wnn(p={config.p}, k={config.k}), "
            f"weighting={cfg.weighting.value}"
        ]
        lines.extend(_check_text_lines(runs))
        _emit("\n".join(lines) + "\n", cfg.output_path)
    return EXIT_OK


def _cmd_simulate(cfg: RunConfig) -> int:
    kind = EtsKind(cfg.model)
    if kind is EtsKind.ANA:
        params = ana_params(
            cfg.alpha, cfg.gamma, cfg.sigma2, cfg.period, cfg.init_level
        )
    else:
        params = aada_params(
            cfg.alpha,
            cfg.beta,
            cfg.gamma,
            cfg.phi,
            cfg.sigma2,
            cfg.period,
            cfg.init_level,
            cfg.init_trend,
        )
    series = simulate_ets(params, cfg.length, cfg.seed if cfg.seed is not None else 0)
    _emit(series_to_csv(series.values), cfg.output_path)
    return EXIT_OK


def _cmd_compare(cfg: RunConfig) -> int:
    series = load_csv(cfg.input_path, cfg.column, cfg.period)
    config, tuned = _resolve_config(series, cfg, 1.0 - cfg.confidences[0])
    specs = [
        ForecasterSpec.wnn(config, cfg.weighting),
        ForecasterSpec.seasonal_naive(series.period),
    ]
    by_level = []
    for conf in cfg.confidences:
        delta = 1.0 - conf
        split = split_sizes(len(series), cfg.n, delta)
        by_level.append((conf, split, compare_forecasters(series, specs, cfg.n, split)))
    config_dict = _base_config_dict(cfg) | {
        "p": config.p,
        "k": config.k,
        "tuned": tuned is not None,
        "confidences": list(cfg.confidences),
    }
    if cfg.output_format == "json":
        results = {"levels": []}
        for conf, split, outcomes in by_level:
            results["levels"].append(
                {
                    "confidence": conf,
                    "i1": split.i1,
                    "i2": split.i2,
                    "methods": [
                        {
                            "method": res.spec.describe(),
                            "mape": res.mape,
                            "error": res.error,
                            "report": res.report.to_dict() if res.report else None,
                        }
                        for res in outcomes
                    ],
                }
            )
        _emit(_json_doc(cfg, config_dict, results), cfg.output_path)
    elif cfg.output_format == "csv":
        header = ("confidence", "method", "mape", "mean_width", "median_width", "coverage")
        rows = []
        for conf, _, outcomes in by_level:
            for res in outcomes:
                if res.report is None:
                    rows.append((conf, res.spec.describe(), "", "", "", f"error: {res.error}"))
                    continue
                rows.append(
                    (
                        conf,
                        res.spec.describe(),
                        repr(float(res.mape)),
                        repr(float(res.report.mean_width.mean())),
                        repr(float(np.median(res.report.half_widths) * 2.0)),
                        repr(float(res.report.overall_coverage)),
                    )
                )
        _emit(_csv_table(header, rows), cfg.output_path)
    else:
        lines = [f"method comparison: n={cfg.n}"]
        for conf, split, outcomes in by_level:
            lines.append(
                f"confidence {100 * conf:.1f}%  (i1={split.i1}, i2={split.i2})"
            )
            lines.append("  method                         MAPE      coverage%  mean width")
            for res in outcomes:
                if res.report is None:
                    lines.append(f"  {res.spec.describe():<30s} error: {res.error}")
                    continue
                lines.append(
                    f"  {res.spec.describe():<30s} {res.mape:<9.4f} "
                    f"{res.report.overall_coverage:<10.2f} {res.report.mean_width.mean():.4f}"
                )
        _emit("\n".join(lines) + "\n", cfg.output_path)
    return EXIT_OK


_DISPATCH = {
    "tune": _cmd_tune,
    "forecast": _cmd_forecast,
    "check": _cmd_check,
    "simulate": _cmd_simulate,
    "compare": _cmd_compare,
}


# ---------------------------------------------------------------------------
# Argument parsing


def _confidence_arg(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number") from None
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError("confidence must lie strictly between 0 and 1")
    return value


def _positive_int_arg(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if value < 1:
        raise argparse.ArgumentTypeError("value must be a positive integer")
    return value


def _grid_arg(text: str) -> tuple[int, ...]:
    """Parse '1:12' (inclusive range) or '3,5,7' (explicit list)."""
    try:
        if ":" in text:
            lo, hi = text.split(":", 1)
            values = tuple(range(int(lo), int(hi) + 1))
        else:
            values = tuple(int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"{text!r} is not a grid (use 'lo:hi' or 'a,b,c')"
        ) from None
    if not values or min(values) < 1:
        raise argparse.ArgumentTypeError("grid entries must be positive integers")
    return values


def _add_output_options(sub: argparse.ArgumentParser, formats=("text", "json", "csv")) -> None:
    sub.add_argument("--format", dest="output_format", choices=formats, default=formats[0])
    sub.add_argument("--output", dest="output_path", default=None)
    sub.add_argument("--no-timestamp", action="store_true")
    sub.add_argument("--seed", type=int, default=None)


def _add_input_options(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--input", required=True, dest="input_path", help="CSV path, or - for stdin")
    sub.add_argument("--column", default="value")
    sub.add_argument("--period", type=_positive_int_arg, default=12)


def _add_model_options(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--n", type=_positive_int_arg, default=1)
    sub.add_argument("--p", type=_positive_int_arg, default=None)
    sub.add_argument("--k", type=_positive_int_arg, default=None)
    sub.add_argument("--p-grid", dest="p_grid", type=_grid_arg, default=DEFAULT_GRID)
    sub.add_argument("--k-grid", dest="k_grid", type=_grid_arg, default=DEFAULT_GRID)
    sub.add_argument("--folds", type=_positive_int_arg, default=None)
    sub.add_argument(
        "--weighting",
        choices=[w.value for w in Weighting],
        default=Weighting.INVERSE_DISTANCE.value,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cpwnn",
        description=(
            "Nearest-neighbor forecasts with conformal prediction regions "
            "and coverage backtesting for univariate seasonal series."
        ),
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    tune = commands.add_parser("tune", help="grid-search (p, k) by rolling validation")
    _add_input_options(tune)
    _add_model_options(tune)
    tune.add_argument("--confidence", dest="confidences", action="append", type=_confidence_arg)
    _add_output_options(tune)

    forecast = commands.add_parser("forecast", help="point forecast plus conformal regions")
    _add_input_options(forecast)
    _add_model_options(forecast)
    forecast.add_argument("--confidence", dest="confidences", action="append", type=_confidence_arg)
    _add_output_options(forecast)

    check = commands.add_parser("check", help="backtest region coverage and width")
    _add_input_options(check)
    _add_model_options(check)
    check.add_argument("--confidence", dest="confidences", action="append", type=_confidence_arg)
    _add_output_options(check)

    simulate = commands.add_parser("simulate", help="simulate a seasonal smoothing model to CSV")
    simulate.add_argument("--model", choices=[k.value for k in EtsKind], required=True)
    simulate.add_argument("--length", type=_positive_int_arg, required=True)
    simulate.add_argument("--alpha", type=float, default=0.5)
    simulate.add_argument("--beta", type=float, default=0.3)
    simulate.add_argument("--gamma", type=float, default=0.2)
    simulate.add_argument("--phi", type=float, default=0.82)
    simulate.add_argument("--sigma2", type=float, default=1.0)
    simulate.add_argument("--period", type=_positive_int_arg, default=12)
    simulate.add_argument("--init-level", dest="init_level", type=float, default=100.0)
    simulate.add_argument("--init-trend", dest="init_trend", type=float, default=1.0)
    simulate.add_argument("--output", dest="output_path", default=None)
    simulate.add_argument("--seed", type=int, default=0)

    compare = commands.add_parser("compare", help="tuned WNN vs seasonal-naive side by side")
    _add_input_options(compare)
    _add_model_options(compare)
    compare.add_argument("--confidence", dest="confidences", action="append", type=_confidence_arg)
    _add_output_options(compare)

    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    payload = {
        key: value
        for key, value in vars(args).items()
        if key in RunConfig.__dataclass_fields__ and value is not None
    }
    if getattr(args, "confidences", None):
        payload["confidences"] = tuple(args.confidences)
    return RunConfig(**payload)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if (getattr(args, "p", None) is None) != (getattr(args, "k", None) is None):
        parser.error("--p and --k must be given together")
    try:
        cfg = _config_from_args(args)
        return _DISPATCH[cfg.command](cfg)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE


if __name__ == "__main__":
    sys.exit(main())
