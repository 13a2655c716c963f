"""Exception types shared across the package."""


class LrdetectError(Exception):
    """Base class for all package-specific errors."""


class DegenerateDesign(LrdetectError):
    """Regression design has no usable variation (all abscissae equal, or fewer than two points)."""


class EmbeddingFailure(LrdetectError):
    """Circulant embedding produced a significantly negative eigenvalue."""


class OverflowValue(LrdetectError):
    """A pointwise transform would exceed the floating-point range."""


class WindowExceedsSeries(LrdetectError):
    """A requested estimation window does not fit the series."""


class DegenerateBlockVariance(LrdetectError):
    """A block variance of zero makes the log-log regression undefined."""


class OutOfRangeTheta(LrdetectError):
    """Slope parameter outside the open interval (-2, 0)."""


class ZeroPeriodogramOrdinate(LrdetectError):
    """A periodogram ordinate used in the log regression is zero."""


class ConfigError(LrdetectError):
    """Invalid study or command-line configuration."""
