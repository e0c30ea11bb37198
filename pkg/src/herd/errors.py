"""Exception types shared across modules."""


class NumericalError(RuntimeError):
    """A numerical routine failed to meet its contract."""


class NotHurwitzError(ValueError):
    """The state matrix is not asymptotically stable."""

    def __init__(self, abscissa: float):
        self.abscissa = abscissa
        super().__init__(f"state matrix is not Hurwitz (spectral abscissa {abscissa:.6g})")


class InfeasibleError(NumericalError):
    """The terminal orthant does not intersect the reachable subspace.

    ``certificate`` is a nonnegative vector y with sum 1 and V^T y ~ 0, which
    rules out any alpha with V alpha >= d.
    """

    def __init__(self, message, phase1_value=None, certificate=None):
        super().__init__(message)
        self.phase1_value = phase1_value
        self.certificate = certificate


class OutOfRangeError(ValueError):
    """A target state lies outside the range of the Gramian."""

    def __init__(self, residual: float):
        self.residual = residual
        super().__init__(f"target is outside range(W); projection residual {residual:.3g}")
