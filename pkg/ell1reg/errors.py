"""
errors.py

Exception hierarchy shared by the forecasters, the comparator oracle and the CLI.
"""


class Ell1Error(Exception):
    """Base class for every error raised by the package"""


class ProtocolError(Ell1Error, RuntimeError):
    """Step/feed alternation of the online protocol was violated"""


class DimensionError(Ell1Error, ValueError):
    """Input dimension differs from the one fixed at construction or first round"""


class NonFiniteError(Ell1Error, ValueError):
    """A gradient, prediction or observation is NaN or infinite"""


class RegimeError(Ell1Error, ValueError):
    """Parameters fall outside the regime an algorithm or bound is defined for"""


class GridTooLargeError(Ell1Error, ValueError):
    """The discretized ball would exceed the configured enumeration cap"""


class ConvergenceError(Ell1Error, RuntimeError):
    """The comparator oracle hit its iteration cap before certifying the gap"""
