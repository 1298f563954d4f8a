"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where a formula is defined."""


class DivergentWeightError(DomainError):
    """The weight exponent N - n - 1 is negative, so the defining integral diverges."""


class ConvergenceError(RuntimeError):
    """A series or quadrature did not reach its tolerance before the cap.

    ``best_bound`` carries the smallest error bound that was achieved.
    """

    def __init__(self, message, best_bound=float("inf")):
        super().__init__(message)
        self.best_bound = best_bound
