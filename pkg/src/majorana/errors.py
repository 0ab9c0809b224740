"""Exception hierarchy shared by all majorana modules.

Two branches matter for the command line tool: bad input (exit code 2)
and numerical failure of an otherwise valid computation (exit code 3).
"""


class MajoranaError(Exception):
    """Base class for all errors raised by this package."""


class InputError(MajoranaError):
    """Invalid argument, dimension mismatch, or malformed data."""


class DimensionMismatchError(InputError):
    """Two states or spectra of different dimension were combined."""


class ZeroStateError(InputError):
    """All amplitudes of a state vector are numerically zero."""


class CoincidentStarsError(InputError):
    """An operation that needs distinct stars received coincident ones."""


class DegenerateTriangleError(InputError):
    """A triple overlap vanished; the geodesic triangle is undefined."""


class NumericalError(MajoranaError):
    """A computation failed to reach its accuracy contract."""


class QuadratureConvergenceError(NumericalError):
    """Entropy quadrature did not converge within the refinement budget.

    Carries the last two successive estimates.
    """

    def __init__(self, msg, last_two):
        super().__init__(msg)
        self.last_two = tuple(last_two)
