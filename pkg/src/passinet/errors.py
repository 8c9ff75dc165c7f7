"""Exception types raised across passinet."""


class PassinetError(Exception):
    """Base class for all passinet errors."""


class DimensionError(PassinetError, ValueError):
    pass


class InvalidInputError(PassinetError, ValueError):
    pass


class DomainError(PassinetError, ValueError):
    pass


class ConvergenceError(PassinetError, ArithmeticError):
    """An iterative numerical kernel failed to converge."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class MultiplicityError(PassinetError, ArithmeticError):
    """Zero eigenvalue of a Laplace-type matrix is not simple."""


class AssumptionError(PassinetError):
    """A standing assumption on the agent or the topology does not hold."""


class PassifiabilityError(AssumptionError):
    """Agent transfer function is not hyper-minimum-phase (A1)."""


class TopologyError(AssumptionError):
    """Digraph has no directed spanning tree (A2)."""


class BracketError(PassinetError, ValueError):
    pass


class DivergenceError(PassinetError, ArithmeticError):
    """Simulated state norm exceeded the overflow guard."""

    def __init__(self, message, time):
        super().__init__(message)
        self.time = time
