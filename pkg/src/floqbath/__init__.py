"""Quasistationary occupation of Floquet states for a parametrically
driven harmonic oscillator coupled to a thermal oscillator bath.

The package splits into a deterministic layer (``mathieu``: monodromy,
stability, characteristic exponent, Fourier sidebands of the periodic
solution) and a statistical layer (``bath``, ``rates``,
``master_equation``) that turns the sideband weights into golden-rule
transition rates and the resulting ladder occupations. ``experiments``
wires both into parameter sweeps; ``cli`` exposes them as a command-line
tool.
"""

from .bath import GaussianDensity, SpectralDensity, ThermalBath, density_at, occupation
from .errors import (
    BranchTrackingError,
    ConfigError,
    DegenerateCouplingError,
    FloqbathError,
    InstabilityError,
    MarginalStabilityError,
    NumericalFailure,
    SingularFrequencyError,
)
from .experiments import SolverOptions, SweepConfig, SweepRecord, figure_preset, sweep
from .master_equation import (
    RateGenerator,
    StationarySolve,
    auto_nmax,
    build_generator,
    relax,
    steady_state_numeric,
)
from .mathieu import (
    DriveParams,
    FloquetSolution,
    Monodromy,
    Stability,
    Verdict,
    characteristic_exponent,
    classify_stability,
    integrate_fundamental,
    periodic_fourier,
)
from .rates import (
    SteadyState,
    TransitionSpectrum,
    dominant_ell,
    ground_enhancement,
    quasienergy,
    quasitemperature_ratio,
    ratio_exact,
    ratio_instability_approx,
    ratio_plateau_approx,
    steady_distribution,
)

__version__ = "0.1.0"

__all__ = [
    "BranchTrackingError",
    "ConfigError",
    "DegenerateCouplingError",
    "DriveParams",
    "FloqbathError",
    "FloquetSolution",
    "GaussianDensity",
    "InstabilityError",
    "MarginalStabilityError",
    "Monodromy",
    "NumericalFailure",
    "RateGenerator",
    "SingularFrequencyError",
    "SolverOptions",
    "Stability",
    "StationarySolve",
    "SteadyState",
    "SweepConfig",
    "SweepRecord",
    "ThermalBath",
    "TransitionSpectrum",
    "Verdict",
    "auto_nmax",
    "build_generator",
    "characteristic_exponent",
    "classify_stability",
    "density_at",
    "dominant_ell",
    "figure_preset",
    "ground_enhancement",
    "integrate_fundamental",
    "occupation",
    "periodic_fourier",
    "quasienergy",
    "quasitemperature_ratio",
    "ratio_exact",
    "ratio_instability_approx",
    "ratio_plateau_approx",
    "relax",
    "steady_distribution",
    "steady_state_numeric",
    "sweep",
]
