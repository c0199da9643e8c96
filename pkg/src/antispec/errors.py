"""Exception hierarchy shared by all modules."""


class AntispecError(Exception):
    """Base class for every error raised by the package."""


class DimensionMismatch(AntispecError, ValueError):
    pass


class InvalidMatrix(AntispecError, ValueError):
    """Input is not a square matrix with finite entries."""


class NoConvergence(AntispecError):
    """The dense eigenvalue iteration failed.

    ``index`` is the LAPACK position below which eigenvalues did not converge.
    """

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class NotDiagonalizable(AntispecError):
    """Eigenvector conditioning exceeds the accepted bound (exceptional point nearby)."""

    def __init__(self, message, cond=None):
        super().__init__(message)
        self.cond = cond


class NotUnitary(AntispecError, ValueError):
    pass


class NotUnimodular(AntispecError, ValueError):
    pass


class NotProportional(AntispecError, ValueError):
    pass


class SymmetryViolated(AntispecError):
    """H does not commute with the anti-unitary operator, or its spectrum is not conjugation-closed."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class InconsistentBlock(AntispecError):
    pass


class InvalidPlan(AntispecError, ValueError):
    pass


class NoRootInRegion(AntispecError):
    pass


class BracketInvalid(AntispecError, ValueError):
    pass


class OutOfRegime(AntispecError, ValueError):
    pass


class UnknownM(AntispecError, ValueError):
    pass
