"""Exception hierarchy shared by all modules."""


class MZVError(Exception):
    """Base class for every error raised by this package."""


class CompositeP(MZVError, ValueError):
    pass


class ReducibleModulus(MZVError, ValueError):
    pass


class DegreeMismatch(MZVError, ValueError):
    pass


class ZeroDenominator(MZVError, ZeroDivisionError):
    pass


class NonUnitConstantTerm(MZVError, ZeroDivisionError):
    pass


class ExponentOverflow(MZVError, OverflowError):
    pass


class InvalidIndex(MZVError, ValueError):
    pass


class TooLarge(MZVError, ValueError):
    pass


class VerificationFailed(MZVError, AssertionError):
    """A computed object failed its own defining-property check."""


class NoPolynomialSolution(MZVError, ValueError):
    """The functional equation for G_k has no polynomial solution."""


class NoSolution(MZVError):
    """Delta(a, b) is not an F_p-combination of the candidate basis."""

    def __init__(self, message, q=None, a=None, b=None):
        super().__init__(message)
        self.q, self.a, self.b = q, a, b


class NonUniqueSolution(MZVError):
    """The relation is not determined uniquely by the linear system.

    ``solutions`` holds a particular solution and ``kernel`` a basis of the
    homogeneous solutions (each a list of ``(c, a_j)`` pairs).
    """

    def __init__(self, message, solutions=(), kernel=()):
        super().__init__(message)
        self.solutions = list(solutions)
        self.kernel = list(kernel)


class UndefinedCoefficient(MZVError, ZeroDivisionError):
    pass


class NotApplicable(MZVError, ValueError):
    pass


class NotCovered(MZVError, ValueError):
    pass


class InvalidFamily(MZVError, ValueError):
    pass
