"""Exception types shared across the package."""


class FloqbathError(Exception):
    """Base class for package-specific failures."""


class NumericalFailure(FloqbathError):
    """Integrator or linear-algebra breakdown.

    Carries the integration time reached when that is meaningful.
    """

    def __init__(self, message, time_reached=None):
        super().__init__(message)
        self.time_reached = time_reached


class BranchTrackingError(FloqbathError):
    """Continuation of the characteristic exponent hit an unstable region."""

    def __init__(self, message, omega1=None):
        super().__init__(message)
        self.omega1 = omega1


class MarginalStabilityError(FloqbathError):
    """Monodromy sits on the stability border; Floquet eigenvectors degenerate."""


class SingularFrequencyError(FloqbathError):
    """A transition frequency fell inside the zero-frequency guard."""


class DegenerateCouplingError(FloqbathError):
    """Every spectral term underflowed; the bath does not couple at all."""


class InstabilityError(FloqbathError):
    """r >= 1: there is no normalizable quasistationary distribution."""


class ConfigError(FloqbathError):
    """Configuration file or flag validation failure."""
