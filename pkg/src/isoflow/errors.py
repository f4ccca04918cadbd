"""Exception types raised by the integrator library."""


class IsoflowError(Exception):
    """Base class for all library errors."""


class DimensionMismatchError(IsoflowError):
    """Operands have incompatible shapes."""


class SingularMatrixError(IsoflowError):
    """A linear solve hit a (numerically) singular matrix.

    Carries a condition-number estimate of the offending matrix when one
    could be computed.
    """

    def __init__(self, message: str, cond: float | None = None):
        if cond is not None:
            message = f"{message} (condition estimate {cond:.3e})"
        super().__init__(message)
        self.cond = cond


class EigensolverError(IsoflowError):
    """The eigenvalue iteration failed to converge."""


class NonConvergenceError(IsoflowError):
    """Nonlinear solver hit its iteration cap."""

    def __init__(self, iters: int, residual: float):
        super().__init__(
            f"no convergence after {iters} iterations, final residual {residual:.3e}"
        )
        self.iters = iters
        self.residual = residual


class DivergenceDetectedError(IsoflowError):
    """Nonlinear solver residual blew up relative to the initial guess."""

    def __init__(self, iters: int, residual: float, initial_residual: float):
        super().__init__(
            f"residual {residual:.3e} grew by more than 1e6 over the initial "
            f"{initial_residual:.3e} after {iters} iterations"
        )
        self.iters = iters
        self.residual = residual
        self.initial_residual = initial_residual


class LinearSolveFailureError(IsoflowError):
    """Singular Newton Jacobian."""


class AntipodalDegeneracyError(IsoflowError):
    """Spherical midpoint hit a near-antipodal particle pair."""


class CollisionProximityError(IsoflowError):
    """Two vortices came close enough to blow up the interaction kernel."""


class ConfigError(IsoflowError):
    """Invalid experiment configuration."""
