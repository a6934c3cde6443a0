"""Error types shared across the package."""


class NearEigenvalueError(RuntimeError):
    """Raised when the channel determinant is too small to invert safely.

    Carries the determinant value so callers can report how close to an
    eigenvalue the requested wavenumber sits.
    """

    def __init__(self, k, d_value):
        self.k = k
        self.d_value = d_value
        super().__init__(
            f"wavenumber k={k} is at or near an eigenvalue: |D(k)|={abs(d_value):.3e}"
        )


class ConvergenceError(RuntimeError):
    """Raised when an adaptive quadrature or an averaged extraction fails
    to meet its advertised error bound."""


class ConsistencyError(RuntimeError):
    """Raised when two independent evaluation paths of the same quantity
    disagree beyond tolerance (internal cross-check failure)."""
