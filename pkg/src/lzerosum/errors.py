"""Exception hierarchy shared by every module in the package."""


class LZeroSumError(Exception):
    """Base class for all errors raised by lzerosum."""


class PoleError(LZeroSumError, ValueError):
    """Evaluation requested at (or too close to) a pole."""


class AccuracyError(LZeroSumError, ArithmeticError):
    """A configuration cannot meet the requested error budget."""


class NotPrimitiveError(LZeroSumError, ValueError):
    """An operation that needs a primitive character was given an imprimitive one."""


class NearZeroError(LZeroSumError, ArithmeticError):
    """A quotient was requested where the denominator is below its floor."""

    def __init__(self, message, floor=None, value=None):
        super().__init__(message)
        self.floor = floor
        self.value = value


class RealityError(LZeroSumError, ArithmeticError):
    """The rotated critical-line function failed to come out real."""


class ZeroCountMismatch(LZeroSumError):
    """Scanned zeros disagree with the argument-principle count."""

    def __init__(self, message, interval=None, expected=None, found=None):
        super().__init__(message)
        self.interval = interval
        self.expected = expected
        self.found = found


class MeshError(LZeroSumError):
    """Phase tracking along a contour could not be resolved."""
