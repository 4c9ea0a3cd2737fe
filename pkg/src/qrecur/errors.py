"""Exception hierarchy shared by all modules."""


class QrecurError(Exception):
    """Base class for all library errors."""


class NotHermitian(QrecurError):
    pass


class NotPositive(QrecurError):
    pass


class BadTrace(QrecurError):
    pass


class NotNormalized(QrecurError):
    pass


class BadParameter(QrecurError):
    pass


class DimensionMismatch(QrecurError):
    pass


class BadDomain(QrecurError):
    pass


class EigenFailure(QrecurError):
    pass


class StationaryState(QrecurError):
    pass


class PreconditionViolated(QrecurError):
    """Raised when a bound's hypothesis fails; carries the admissible limit."""

    def __init__(self, message, max_epsilon=None):
        super().__init__(message)
        self.max_epsilon = max_epsilon


class DegenerateSpectrum(QrecurError):
    pass


class BadN(QrecurError):
    pass


class ZeroProbability(QrecurError):
    pass


class ZeroPopulation(QrecurError):
    pass


class NotIsometry(QrecurError):
    pass


class NotMeasurePreserving(QrecurError):
    pass


class BallEmpty(QrecurError):
    pass


class GridTooCoarse(QrecurError):
    pass
