"""Exception hierarchy shared by the library and the CLI.

Every error carries a stable machine-readable ``code`` and the process
``exit_code`` the CLI maps it to: 1 internal/numerical, 2 config/validation,
3 data.
"""

from __future__ import annotations


class ItsaError(Exception):
    """Base class for all errors raised by this package."""

    code = "E_INTERNAL"
    exit_code = 1


class ConfigError(ItsaError):
    """Invalid configuration or argument values."""

    code = "E_CONFIG"
    exit_code = 2


class InterventionRangeError(ConfigError):
    """Intervention period outside the dataset's period range."""

    code = "E_INTERVENTION_RANGE"


class HorizonRangeError(ConfigError):
    """Effect horizon before the intervention period."""

    code = "E_HORIZON_RANGE"


class MissingColumnError(ConfigError):
    """A configured column is absent from the input file."""

    code = "E_MISSING_COLUMN"


class ParameterError(ConfigError):
    """Error-process parameters outside the stationary/invertible region."""

    code = "E_PARAMETER"


class DataError(ItsaError):
    """Invalid input data."""

    code = "E_DATA"
    exit_code = 3


class PeriodGapError(DataError):
    """Non-consecutive monthly periods."""

    code = "E_PERIOD_GAP"


class ParseError(DataError):
    """Unparseable cell in an input file."""

    code = "E_PARSE"


class InsufficientDataError(DataError):
    """Too few observations on one side of the intervention."""

    code = "E_INSUFFICIENT_DATA"


class DegenerateInputError(DataError):
    """Degenerate input to a diagnostic (e.g. an all-zero residual vector)."""

    code = "E_DEGENERATE_INPUT"


class SingularDesignError(ItsaError):
    """Rank-deficient design matrix."""

    code = "E_SINGULAR_DESIGN"


class DegenerateCovarianceError(ItsaError):
    """Covariance/correlation matrix not numerically positive definite."""

    code = "E_DEGENERATE_COVARIANCE"


class ConvergenceError(ItsaError):
    """Optimizer failed to converge; carries the best iterate found."""

    code = "E_CONVERGENCE"

    def __init__(self, message: str, best_result=None):
        super().__init__(message)
        self.best_result = best_result
