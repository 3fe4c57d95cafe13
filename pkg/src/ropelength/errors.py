"""Exception hierarchy shared by all modules."""


class ThicknessError(Exception):
    """Base class for errors raised by this package."""


class DimensionMismatch(ThicknessError, ValueError):
    pass


class DegenerateComponent(ThicknessError, ValueError):
    pass


class OutOfRange(ThicknessError, ValueError):
    pass


class NotClosed(ThicknessError, ValueError):
    pass


class MultiComponent(ThicknessError, ValueError):
    pass


class IdenticalPoints(ThicknessError, ValueError):
    pass


class NotEmbedded(ThicknessError, ValueError):
    """Two distinct curve points coincide in space."""

    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class InvalidB(ThicknessError, ValueError):
    pass


class NoConvergence(ThicknessError, RuntimeError):
    def __init__(self, message, cell=None):
        super().__init__(message)
        self.cell = cell


class TooFewEdges(ThicknessError, ValueError):
    pass


class UnknownGenerator(ThicknessError, KeyError):
    pass


class BadParameters(ThicknessError, ValueError):
    pass


class NoKnownValues(ThicknessError, KeyError):
    pass


class InitialNotEmbedded(ThicknessError, ValueError):
    pass


class BadDimension(ThicknessError, ValueError):
    pass


class ParseError(ThicknessError, ValueError):
    pass
