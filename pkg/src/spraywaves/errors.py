"""Exception types shared across the package."""


class SprayWaveError(Exception):
    """Base class for all numerical/domain failures raised by this package."""


class StripViolation(SprayWaveError):
    """Complex evaluation requested outside the analyticity strip of a profile."""


class InvalidBump(SprayWaveError):
    """Bump-on-tail parameters outside their admissible range."""


class VacuumViolation(SprayWaveError):
    """Volume fraction would be non-positive (kappa * m0 >= 1)."""


class ZeroSigma(SprayWaveError):
    """Phase velocity too close to the sigma = 0 pole."""


class QuadratureDivergence(SprayWaveError):
    """Truncated-tail estimate exceeds the allowed fraction of the result."""


class LaplaceDomain(SprayWaveError):
    """Forcing functional requested outside the Laplace half-plane Im omega > 0."""


class BoundaryRoot(SprayWaveError):
    """A zero sits too close to a winding-count contour even after dilation."""


class NonConvergence(SprayWaveError):
    """Newton or continuation iteration failed to reach tolerance."""


class DegenerateDerivative(SprayWaveError):
    """Real-part derivative of the dispersion function is numerically zero."""


class DegenerateSpectrum(SprayWaveError):
    """Symmetric matrix has (nearly) repeated eigenvalues; strict hyperbolicity fails."""


class ResolventSingularity(SprayWaveError):
    """Secular function evaluated on top of an eigenvalue of the uncoupled matrix."""


class RefineGrid(SprayWaveError):
    """Velocity grid too coarse to resolve the requested eigenmode."""


class NotARoot(SprayWaveError):
    """Eigenmode seeding requested at a sigma that does not solve the dispersion relation."""


class CflViolation(SprayWaveError):
    """Time step violates the explicit-integrator stability bound."""


class DegenerateFit(SprayWaveError):
    """Growth-rate fit residual too large to report a rate."""


class NoUnstableRoot(SprayWaveError):
    """Scaling experiment requires an unstable root but none exists."""
