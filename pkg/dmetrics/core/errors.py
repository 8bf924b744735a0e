"""Exception hierarchy.

Input problems subclass ``ValueError`` so callers that only know the builtin
still catch them. Failures that happen while a metric is running on valid input
derive from ``MetricComputationError`` and are recorded per metric by the runner.
"""


class MetricsError(Exception):
    """Base class for every error raised by dmetrics."""


class InputError(MetricsError, ValueError):
    """Invalid user input (shapes, values, files, configuration)."""


class DimensionMismatchError(InputError):
    def __init__(self, factor_rows: int, code_rows: int):
        self.factor_rows = factor_rows
        self.code_rows = code_rows
        super().__init__(f"Row count mismatch: factors have {factor_rows} rows, codes have {code_rows} rows")


class NonFiniteDataError(InputError):
    def __init__(self, what: str, row: int, column: int):
        self.what = what
        self.row = row
        self.column = column
        super().__init__(f"Non-finite value in {what} at row {row}, column {column}")


class InvalidChanceError(InputError):
    pass


class EmptyInputError(InputError):
    pass


class BinIndexError(InputError):
    pass


class EmptyHistogramError(InputError):
    pass


class ShapeMismatchError(InputError):
    pass


class SingleClassError(InputError):
    pass


class InsufficientDataError(InputError):
    pass


class AllTiedError(InputError):
    pass


class MixedMetricError(InputError):
    pass


class ConfigError(InputError):
    pass


class DataParseError(InputError):
    def __init__(self, path: str, line: int, reason: str):
        self.path = path
        self.line = line
        super().__init__(f"{path}:{line}: {reason}")


class MetricComputationError(MetricsError):
    """A metric could not be evaluated on otherwise valid data."""


class InsufficientSamplesError(MetricComputationError):
    """A required pair set or stratum could not be filled."""


class ZeroEntropyError(MetricComputationError):
    pass
