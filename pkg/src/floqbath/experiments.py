"""Density-center sweeps and the three reference figure presets."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bath import GaussianDensity, ThermalBath
from .errors import ConfigError
from .mathieu import (
    DriveParams,
    characteristic_exponent,
    classify_stability,
    integrate_fundamental,
    periodic_fourier,
)
from .rates import (
    TransitionSpectrum,
    dominant_ell,
    ground_enhancement,
    quasitemperature_ratio,
    ratio_exact,
    ratio_instability_approx,
    ratio_plateau_approx,
)

#: column order of the tabular sweep output (the CSV contract lives in cli)
RECORD_FIELDS = (
    "omega_c",
    "r",
    "tau_over_Tbath",
    "p0_over_P0",
    "ell1",
    "ell2",
    "r_plateau",
    "r_instab",
)


@dataclass(frozen=True)
class SolverOptions:
    """Numerical knobs shared by sweeps and the CLI.

    tail_threshold defaults far below the single-solution default of
    periodic_fourier: the outer instability windows of the narrow-density
    sweeps ride on sideband weights around 1e-22, which a 1e-14 squared
    tail cut would silently drop. 1e-28 keeps everything above the double
    precision noise floor of the transform.
    """

    ode_rtol: float = 1e-10
    margin: float = 1e-9
    max_L: int = 64
    tail_threshold: float = 1e-28

    def __post_init__(self):
        if not 0.0 < self.ode_rtol <= 1e-6:
            raise ValueError("ode_rtol must lie in (0, 1e-6]")
        if not 0.0 < self.margin <= 1e-3:
            raise ValueError("margin must lie in (0, 1e-3]")
        if self.max_L < 8:
            raise ValueError("max_L must be at least 8")
        if not 0.0 < self.tail_threshold < 1.0:
            raise ValueError("tail_threshold must lie in (0, 1)")


@dataclass(frozen=True)
class SweepConfig:
    """Sweep of the density center omega_c at fixed drive, bath and width."""

    drive: DriveParams
    beta: float
    width: float
    start: float = 0.0
    stop: float = 10.0
    step: float = 0.01
    amplitude: float = 1.0
    n_max: int | None = None
    columns: tuple[str, ...] = RECORD_FIELDS

    def __post_init__(self):
        if not self.start < self.stop:
            raise ValueError("start must be below stop")
        if not self.step > 0:
            raise ValueError("step must be positive")
        unknown = [c for c in self.columns if c not in RECORD_FIELDS]
        if unknown:
            raise ValueError(f"unknown columns: {unknown}")


@dataclass(frozen=True)
class SweepRecord:
    """One grid point of a sweep.

    tau_over_Tbath is None only at r = 1 (infinite quasitemperature);
    p0_over_P0 is None exactly when r >= 1, which is also how instability
    gaps are encoded in the CSV. r_plateau and r_instab carry the
    single-line reference values for the dominant sidebands, when those
    exist.
    """

    omega_c: float
    r: float
    tau_over_Tbath: float | None
    p0_over_P0: float | None
    ell1: int | None
    ell2: int | None
    r_plateau: float | None
    r_instab: float | None


def grid_points(start: float, stop: float, step: float) -> list[float]:
    """Inclusive uniform grid, rounded to 10 decimals.

    The rounding makes decimal steps produce decimal centers (0.07, not
    0.07000000000000001), which keeps the emitted tables tidy without
    moving any point by more than 5e-11.
    """
    count = int(math.floor((stop - start) / step + 1e-9))
    return [round(start + i * step, 10) for i in range(count + 1)]


def sweep(config: SweepConfig, solver: SolverOptions = SolverOptions()) -> list[SweepRecord]:
    """One record per grid point, ordered by omega_c.

    The drive is classified once up front; an unstable or marginal drive
    is a configuration error, not a per-point failure. The Floquet data
    (nu and the sideband weights) is computed once and reused across the
    whole grid.
    """
    stab = classify_stability(
        integrate_fundamental(config.drive, solver.ode_rtol), solver.margin
    )
    if not stab.is_stable:
        raise ConfigError(
            f"drive is {stab.verdict.value} (trace {stab.trace:.6g}); "
            "sweeps require a stable drive"
        )
    nu = characteristic_exponent(config.drive, solver.ode_rtol)
    sol = periodic_fourier(config.drive, nu, solver.max_L, solver.tail_threshold)
    ts = TransitionSpectrum.from_floquet(sol)
    bath = ThermalBath(config.beta)

    records = []
    for center in grid_points(config.start, config.stop, config.step):
        sd = GaussianDensity(
            amplitude=config.amplitude, center=center, width=config.width
        )
        r = ratio_exact(ts, bath, sd)
        ell1, ell2 = dominant_ell(ts, sd)
        tau = quasitemperature_ratio(r, nu, bath)
        records.append(
            SweepRecord(
                omega_c=center,
                r=r,
                tau_over_Tbath=None if math.isinf(tau) else tau,
                p0_over_P0=(
                    ground_enhancement(r, bath, config.drive.omega0)
                    if r < 1.0 else None
                ),
                ell1=ell1,
                ell2=ell2,
                r_plateau=(
                    ratio_plateau_approx(nu, ell1, bath)
                    if ell1 is not None else None
                ),
                r_instab=(
                    ratio_instability_approx(nu, ell2, bath)
                    if ell2 is not None else None
                ),
            )
        )
    return records


_PRESET_WIDTHS = {"fig1": 1.0, "fig2": 0.316, "fig3": 0.1}


def figure_preset(name: str) -> SweepConfig:
    """Reference sweeps: Omega0 = sqrt(2), Omega1 = 1, beta = 0.1.

    The three presets differ only in the density width (1.0, 0.316, 0.1);
    the center runs over [0, 10] in steps of 0.01.
    """
    try:
        width = _PRESET_WIDTHS[name]
    except KeyError:
        raise ValueError(
            f"unknown figure preset {name!r}; expected one of "
            f"{sorted(_PRESET_WIDTHS)}"
        ) from None
    return SweepConfig(
        drive=DriveParams(omega0=float(np.sqrt(2.0)), omega1=1.0),
        beta=0.1,
        width=width,
    )
