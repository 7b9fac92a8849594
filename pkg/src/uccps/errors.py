"""Shared exception types."""


class FcidumpError(ValueError):
    """Malformed or inconsistent FCIDUMP content."""


class DegenerateDenominatorError(ArithmeticError):
    """A perturbative denominator is too close to zero to divide by."""


class NonCanonicalReferenceError(ValueError):
    """The occupied-virtual Fock block is not numerically zero."""


class ConvergenceError(RuntimeError):
    """An iterative solver failed to converge within its budget."""
