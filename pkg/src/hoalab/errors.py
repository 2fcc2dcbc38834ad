"""Exception taxonomy shared by every module.

ConstraintError covers parameter and domain violations (CLI exit code 2),
NumericalError covers convergence and evaluation failures (CLI exit code 3).
"""


class HoalabError(Exception):
    """Base class for all package errors."""


class ConstraintError(HoalabError):
    """A parameter lies outside the domain a formula is defined on."""


class UndefinedCriterionError(ConstraintError):
    """A ratio criterion has a vanishing denominator (vacuum-like states)."""


class NumericalError(HoalabError):
    """A numerical evaluation could not be completed reliably."""


class ConvergenceError(NumericalError):
    """An infinite series hit its term cap before converging."""


class DegenerateParameterError(NumericalError):
    """A hypergeometric denominator parameter vanished mid-series."""


class TruncationWarning(UserWarning):
    """A truncated distribution may bias the requested moment."""
