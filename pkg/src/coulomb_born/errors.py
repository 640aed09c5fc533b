"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class LadderError(DomainError):
    """A screening-parameter ladder is too short, unordered or degenerate."""


class ConvergenceError(RuntimeError):
    """A numerical procedure exhausted its budget without meeting tolerance."""


class IdentityError(ArithmeticError):
    """A quantity that must vanish (or agree) by an exact identity does not, numerically."""
