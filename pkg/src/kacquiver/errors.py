"""Exception hierarchy."""


class KacError(Exception):
    """Base class for all errors raised by kacquiver."""


class InputError(KacError):
    """Malformed user input (quiver documents, bounds, options)."""


class LoopEdge(InputError):
    pass


class BadIndex(InputError):
    pass


class NegativeMultiplicity(InputError):
    pass


class BoundMismatch(KacError):
    pass


class DivisionByZero(KacError, ZeroDivisionError):
    pass


class PoleAtZero(KacError):
    def __init__(self, message: str, alpha=None):
        super().__init__(message)
        self.alpha = alpha


class NotAPolynomial(KacError):
    pass


class NonzeroConstantTerm(KacError):
    pass


class BadConstantTerm(KacError):
    pass


class NonIntegral(KacError):
    pass


class DegenerateRecursion(KacError):
    pass


class BudgetExceeded(KacError):
    def __init__(self, required: int, budget: int):
        super().__init__(f"group size {required} exceeds budget {budget}")
        self.required = required
        self.budget = budget


class ConsistencyError(KacError):
    """A theorem-backed identity failed; this means an implementation bug.

    ``alpha`` names the offending dimension vector when there is one.
    """

    def __init__(self, message: str, alpha=None):
        if alpha is not None:
            message = f"{message} at alpha={tuple(alpha)}"
        super().__init__(message)
        self.alpha = alpha
