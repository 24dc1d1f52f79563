"""Exception types shared across the toolkit."""


class EcotailError(Exception):
    """Base class for all toolkit errors."""


class ParseError(EcotailError):
    """Malformed input data; the message carries file and line context."""


class DegenerateDataError(EcotailError):
    """Data admits no meaningful result (zero spread, too few points)."""


class FitError(EcotailError):
    """Numeric fitting failed to produce a usable result."""
