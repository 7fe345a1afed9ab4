"""Exception hierarchy shared by the toolkit."""


class ExplainSimError(Exception):
    """Base class for all errors raised by explainsim."""


class RankingError(ExplainSimError, ValueError):
    """Raised for invalid or incomparable rankings."""


class DataError(ExplainSimError, ValueError):
    """Raised when an input file or sample is malformed."""


class NumericAssertionError(ExplainSimError, ArithmeticError):
    """An internal numeric guarantee was violated (e.g. d > d_max)."""


class ConvergenceWarning(UserWarning):
    """An iterative fit stopped before meeting its tolerance."""


class NumericalWarning(UserWarning):
    """A solve needed regularization to proceed."""
