"""Semantic exception hierarchy shared by every module.

Public functions never raise bare ValueError/RuntimeError; they raise one of
the classes below so callers (and the CLI exit-code mapping) can tell a bad
argument from a numerical failure.
"""


class MLEBoundsError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(MLEBoundsError, ValueError):
    """An argument violates a documented precondition (wrong range, wrong
    parameter space, sample outside the support, unknown identifier)."""


class QuadratureError(MLEBoundsError, RuntimeError):
    """Adaptive integration exhausted its refinement budget before meeting
    the requested tolerance, or the integrand produced non-finite values."""


class RootFindError(MLEBoundsError, RuntimeError):
    """The generic one-dimensional inversion failed to converge."""


class ConsistencyError(MLEBoundsError, RuntimeError):
    """Two algebraically equivalent computations disagreed beyond tolerance,
    or a model produced values that contradict its own contract."""
