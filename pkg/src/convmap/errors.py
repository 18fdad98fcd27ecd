"""Exception types and warning categories shared across the package."""


class ConvmapError(Exception):
    """Base class for errors raised by this package."""


class RadiusExceeded(ConvmapError):
    """Evaluation was requested outside the certified radius of a series."""


class SingularPoint(ConvmapError):
    """The first derivative vanishes, so derivative ratios are undefined."""


class DegenerateDenominator(ConvmapError):
    """2 + z f''/f' vanished; the map is not convex at this point."""


class PhiOutOfRange(ConvmapError):
    """A candidate generator function exceeds modulus one on the circle."""


class LevelNotOnRay(ConvmapError):
    """The requested level value is not attained along the given ray."""


class NormalVanished(ConvmapError):
    """|p| fell to the tracer floor.  ``curve`` holds any partial result."""

    def __init__(self, message: str, curve=None):
        super().__init__(message)
        self.curve = curve


class TruncationTail(UserWarning):
    """Estimated truncation tail of a stored series is above the reporting bar."""
