"""Exception types raised by the solver stack."""


class IncompatibleGridsError(ValueError):
    """Quadrature grid and partition cannot be coupled (m not a multiple of n)."""


class OutOfDomainError(ValueError):
    """Evaluation point lies outside [a, b]."""


class NumericDomainError(ArithmeticError):
    """The kernel returned a non-finite value.

    Carries the offending ``(s, t, u)`` triple so a pole hit can be located.
    """

    def __init__(self, s, t, u):
        self.s, self.t, self.u = float(s), float(t), float(u)
        super().__init__(
            f"non-finite kernel value at s={self.s!r}, t={self.t!r}, u={self.u!r}"
        )


class CapabilityError(RuntimeError):
    """A kernel derivative needed by the requested operation is missing."""


class SingularMatrixError(ArithmeticError):
    """LU factorisation met a pivot below the singularity threshold."""


class ConvergenceError(RuntimeError):
    """An internal iteration (e.g. root finding) failed to converge."""
