"""Exception hierarchy.

Two branches matter to callers: DataError (the input itself is unusable;
CLI exit code 3) and ConfigError (the requested configuration cannot be
satisfied by the data at hand; CLI exit code 4).
"""


class ForecastError(Exception):
    """Base class for every error raised by this package."""


class DataError(ForecastError):
    """Input data is malformed or unusable."""


class ConfigError(ForecastError):
    """Configuration is incompatible with the provided data."""


class EmptySeriesError(DataError):
    pass


class NonFiniteValueError(DataError):
    def __init__(self, index: int, value: float):
        self.index = index
        self.value = value
        super().__init__(f"non-finite value {value!r} at position {index}")


class InvalidPeriodError(DataError):
    pass


class LengthMismatchError(DataError):
    pass


class ZeroActualError(DataError):
    """MAPE is undefined wherever the actual value is exactly zero."""

    def __init__(self, index: int):
        self.index = index
        super().__init__(
            f"actual value at position {index} is zero; MAPE is undefined there"
        )


class ColumnNotFoundError(DataError):
    def __init__(self, column, available):
        self.column = column
        self.available = list(available)
        super().__init__(
            f"column {column!r} not found; available columns: {', '.join(self.available)}"
        )


class CsvParseError(DataError):
    def __init__(self, row: int, column, text: str):
        self.row = row
        self.column = column
        self.text = text
        super().__init__(
            f"row {row}, column {column!r}: cannot parse {text!r} as a number"
        )


class SeriesTooShortError(ConfigError):
    pass


class HistoryTooShortError(ConfigError):
    def __init__(self, needed: int, available: int):
        self.needed = needed
        self.available = available
        super().__init__(
            f"need at least {needed} observations of history, have {available}"
        )


class TooFewCandidatesError(ConfigError):
    def __init__(self, k: int, candidates: int):
        self.k = k
        self.candidates = candidates
        super().__init__(
            f"k={k} neighbors requested but only {candidates} candidate windows exist"
        )


class GridInfeasibleError(ConfigError):
    def __init__(self, cells):
        self.cells = list(cells)
        lines = "; ".join(f"(p={p}, k={k}): {why}" for p, k, why in self.cells[:5])
        more = "" if len(self.cells) <= 5 else f" (+{len(self.cells) - 5} more)"
        super().__init__(f"no grid cell is feasible: {lines}{more}")


class InsufficientCalibrationError(ConfigError):
    def __init__(self, h: int, min_h: int):
        self.h = h
        self.min_h = min_h
        super().__init__(
            f"h={h} calibration examples are too few for this significance level; "
            f"need at least {min_h}"
        )


class InfeasibleDeltaError(ConfigError):
    def __init__(self, delta: float, min_i1: int):
        self.delta = delta
        self.min_i1 = min_i1
        super().__init__(
            f"delta={delta} needs at least i1={min_i1} calibration examples"
        )


class InvalidParamsError(ConfigError):
    pass
