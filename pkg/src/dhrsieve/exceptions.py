"""Exception hierarchy shared by every module of the package."""


class SieveError(Exception):
    """Base class for all errors raised by dhrsieve."""


class DomainError(SieveError, ValueError):
    """An argument lies outside the domain of the function."""


class ConvergenceError(SieveError, ArithmeticError):
    """An iterative solve did not converge within its budget."""

    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = residuals


class AccuracyError(SieveError, ArithmeticError):
    """A tabulation could not meet its accuracy invariant."""


class InfeasibleParametersError(SieveError, ValueError):
    """Parameters violate the ordering or make the lower-bound sieve void."""


class HypothesisError(SieveError, ValueError):
    """A closed-form bound was requested outside the range where it holds."""


class NoRootError(InfeasibleParametersError):
    """A stationarity equation has no sign change in its admissible bracket."""


class InputError(SieveError, ValueError):
    """Malformed user input (polynomial text, ranges, flags)."""


class DegeneratePrimeError(SieveError, ArithmeticError):
    """A factor of a sieve product is non-positive at some prime."""

    def __init__(self, p, message=None):
        super().__init__(message or f"non-positive local factor at p={p}")
        self.p = p


class FactorizationBudgetError(SieveError, RuntimeError):
    """Pollard rho exceeded its iteration budget."""

    def __init__(self, n, message=None):
        super().__init__(message or f"factorization budget exceeded for {n}")
        self.n = n
