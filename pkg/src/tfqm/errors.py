"""Exception hierarchy.

Every domain error derives from :class:`TfqmError` (and from ``ValueError``,
so generic callers that catch bad-argument errors keep working).
"""


class TfqmError(ValueError):
    """Base class for all domain errors raised by tfqm."""


# spectra
class ZeroSpectrum(TfqmError):
    pass


class NotNormalized(TfqmError):
    pass


class GridTooNarrow(TfqmError):
    pass


class InvalidN(TfqmError):
    pass


class UnsupportedN(TfqmError):
    pass


class NotPositiveSemidefinite(TfqmError):
    pass


class DimensionMismatch(TfqmError):
    pass


# metrology
class NegativeStatistics(TfqmError):
    pass


class StepTooLarge(TfqmError):
    pass


class NonFiniteDensity(TfqmError):
    pass


class NonPositiveFisher(TfqmError):
    pass


class InvalidEta(TfqmError):
    pass


class InsufficientPoints(TfqmError):
    pass


class NonPositiveValue(TfqmError):
    pass


# phasespace
class NyquistViolation(TfqmError):
    pass


class NotFactorizable(TfqmError):
    pass


# statedef
class StateSyntaxError(TfqmError):
    """Malformed state document (not valid JSON, or not a JSON object)."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)


class SchemaError(TfqmError):
    """Missing, unknown or ill-typed key. ``key`` holds the dotted key path."""

    def __init__(self, message, key=None):
        self.key = key
        if key is not None:
            message = f"{key}: {message}"
        super().__init__(message)


class RangeError(TfqmError):
    """Well-typed value outside its admissible range."""

    def __init__(self, message, key=None):
        self.key = key
        if key is not None:
            message = f"{key}: {message}"
        super().__init__(message)
