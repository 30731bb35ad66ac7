"""Error types raised by the QES solver and verifier."""


class QESError(Exception):
    """Base class for all solver errors."""


class ZeroPolynomialError(QESError, ValueError):
    """An operation that needs a nonzero polynomial received the zero polynomial."""


class InvalidBracketError(QESError, ValueError):
    """A root bracket does not isolate exactly one real root."""


class IndexOutOfRangeError(QESError, ValueError):
    """A coefficient index or root index lies outside its admissible range."""


class InvalidGridError(QESError, ValueError):
    """Grid or box parameters violate their preconditions."""


class UnsupportedOrderError(QESError, ValueError):
    """Requested derivative order is not supported."""


class NodeCountPrecisionError(QESError):
    """Node counting is ambiguous at the available precision of the shift."""


class InternalConsistencyError(QESError):
    """An identity that holds by construction failed; signals a bug."""


class GoldenTableError(QESError):
    """Golden table data is missing or malformed."""
