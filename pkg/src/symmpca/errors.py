"""Exception types raised by symmpca."""


class ContractError(ValueError):
    """An argument violates a documented precondition (shape, symmetry, range)."""


class ConfigurationError(ValueError):
    """Unknown preset, rule or mode name."""


class ConvergenceError(RuntimeError):
    """An iterative solver hit its iteration cap."""


class SingularMatrixError(ArithmeticError):
    """A matrix that must be positive definite is (numerically) singular."""


class DivergenceError(RuntimeError):
    """A simulation produced non-finite entries or a degenerate Gram matrix.

    ``step`` is the index of the Euler step that failed (``None`` if unknown).
    """

    def __init__(self, message, step=None):
        if step is not None:
            message = f"step {step}: {message}"
        super().__init__(message)
        self.step = step
