"""Exception types shared across the package."""


class MemtransformError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(MemtransformError, ValueError):
    """An argument violates a documented precondition."""


class RangeError(MemtransformError, OverflowError):
    """A computation left the representable floating-point range."""


class SingularityError(MemtransformError, ValueError):
    """Evaluation requested at a mathematical singularity of the model."""


class FitDegenerateError(MemtransformError, ValueError):
    """The observation set cannot identify the model parameters."""


class ConfigError(MemtransformError, ValueError):
    """A configuration value is inconsistent or unusable."""


class FormatError(MemtransformError, ValueError):
    """A file does not conform to its expected layout."""


class CalibrationError(MemtransformError, ValueError):
    """Calibration data is degenerate (zero input range)."""
