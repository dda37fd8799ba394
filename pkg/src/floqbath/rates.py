"""Transition spectrum and rate ratios of the driven oscillator in the bath.

The ladder coupling connects neighboring Floquet states through every
drive sideband: the upward and downward base rates are

    g_up   = sum_l |v_l|^2 N(nu + l)  J(|nu + l|)
    g_down = sum_l |v_l|^2 N(-nu - l) J(|nu + l|)

and their ratio r = g_up / g_down fixes the whole quasistationary state.
The global coupling prefactor and the sqrt(n+1) ladder factor cancel in
r, so absolute rates are defined only up to a configuration constant
(rate_scale in master_equation.build_generator).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bath import ZERO_FREQ_GUARD, SpectralDensity, ThermalBath, density_at
from .errors import DegenerateCouplingError, InstabilityError, SingularFrequencyError
from .mathieu import FloquetSolution

#: |r - 1| at or below this is reported as infinite quasitemperature
UNIT_RATIO_TOL = 1e-14


@dataclass(frozen=True)
class TransitionSpectrum:
    """Sideband transition data: frequencies nu + l and weights |v_l|^2.

    Frequencies increase strictly in l with unit spacing; negative entries
    are the "bad" channels whose excitation heats the oscillator ladder.
    The source solution is kept for provenance.
    """

    ells: np.ndarray
    frequencies: np.ndarray
    weights: np.ndarray
    source: FloquetSolution | None = None

    @property
    def nu(self) -> float:
        return float(self.frequencies[self.ells == 0][0])

    @classmethod
    def from_floquet(cls, sol: FloquetSolution) -> "TransitionSpectrum":
        ells = sol.ells.astype(float)
        return cls(
            ells=sol.ells.copy(),
            frequencies=sol.nu + ells,
            weights=sol.weights(),
            source=sol,
        )


@dataclass(frozen=True)
class SteadyState:
    """Quasistationary summary: ratio, quasitemperature, populations.

    Populations, remainder and enhancement are present exactly when the
    ratio is below 1; above it the ladder has no normalizable stationary
    distribution and only the (negative) quasitemperature survives.
    """

    ratio: float
    quasitemperature: float
    populations: np.ndarray | None
    remainder: float | None
    enhancement: float | None
    stable: bool

    @classmethod
    def from_ratio(cls, r: float, nu: float, bath: ThermalBath,
                   omega0: float, n_max: int) -> "SteadyState":
        tau = quasitemperature_ratio(r, nu, bath)
        if r < 1.0:
            pops, rem = steady_distribution(r, n_max)
            enh = ground_enhancement(r, bath, omega0)
            return cls(r, tau, pops, rem, enh, True)
        return cls(r, tau, None, None, None, False)


def quasienergy(n: int, nu: float) -> float:
    """Quasienergy representative nu (n + 1/2), folded into [0, 1)."""
    if n < 0:
        raise ValueError("n must be a non-negative integer")
    if nu <= 0:
        raise ValueError("nu must be positive")
    return float((nu * (n + 0.5)) % 1.0)


def _ordered_sum(terms: np.ndarray) -> float:
    # ascending-magnitude, exactly-rounded accumulation; the terms span
    # many decades and naive left-to-right summation loses the small ones
    return math.fsum(sorted(terms, key=abs))


def _rate_sums(ts: TransitionSpectrum, bath: ThermalBath, sd: SpectralDensity):
    freqs = ts.frequencies
    if np.any(np.abs(freqs) <= ZERO_FREQ_GUARD):
        bad = freqs[np.abs(freqs) <= ZERO_FREQ_GUARD]
        raise SingularFrequencyError(
            f"transition frequency {bad[0]!r} inside the zero-frequency guard"
        )
    with np.errstate(over="ignore"):
        n_abs = 1.0 / np.expm1(bath.beta * np.abs(freqs))
    n_up = np.where(freqs > 0, n_abs, n_abs + 1.0)      # N(+nu+l)
    n_down = np.where(freqs > 0, n_abs + 1.0, n_abs)    # N(-nu-l)
    dens = density_at(sd, freqs)
    return ts.weights * n_up * dens, ts.weights * n_down * dens


def ratio_exact(ts: TransitionSpectrum, bath: ThermalBath,
                sd: SpectralDensity) -> float:
    """Exact ratio r of upward to downward base rates.

    The coupling scale cancels, so r depends only on weight ratios, the
    bath temperature, and the density shape. r < 1 means the ladder
    relaxes to a geometric quasistationary distribution; r > 1 means the
    "bad" negative-frequency channels win and the population climbs.
    """
    up_terms, down_terms = _rate_sums(ts, bath, sd)
    num = _ordered_sum(up_terms)
    den = _ordered_sum(down_terms)
    if num <= 0.0 or den <= 0.0:
        raise DegenerateCouplingError(
            "every weight * density product underflowed; the density does "
            "not overlap the transition spectrum"
        )
    return num / den


def ratio_plateau_approx(nu: float, ell1: int, bath: ThermalBath) -> float:
    """Single dominant positive line nu + ell1: r ~ e^{-beta (nu + ell1)} < 1."""
    f = nu + ell1
    if f <= 0:
        raise ValueError(
            "nu + ell1 must be positive; negative lines belong to "
            "ratio_instability_approx"
        )
    return float(np.exp(-bath.beta * f))


def ratio_instability_approx(nu: float, ell2: int, bath: ThermalBath) -> float:
    """Single dominant negative line nu + ell2: r ~ e^{-beta (nu + ell2)} > 1."""
    f = nu + ell2
    if f >= 0:
        raise ValueError(
            "nu + ell2 must be negative; positive lines belong to "
            "ratio_plateau_approx"
        )
    return float(np.exp(-bath.beta * f))


def quasitemperature_ratio(r: float, nu: float, bath: ThermalBath) -> float:
    """tau / T_bath from reading r as a Boltzmann factor at spacing nu.

    Positive below r = 1, negative above (the instability signature), and
    +inf when r is 1 to within UNIT_RATIO_TOL. The infinity is a value,
    not an error: sweeps crossing r = 1 report it and move on.
    """
    if not (np.isfinite(r) and r > 0):
        raise ValueError("r must be positive and finite")
    if abs(r - 1.0) <= UNIT_RATIO_TOL:
        return math.inf
    return -bath.beta * nu / math.log(r)


def steady_distribution(r: float, n_max: int):
    """Geometric quasistationary populations p_n = (1 - r) r^n, n = 0..n_max.

    Returns (populations, remainder) where remainder = r^(n_max + 1) is
    the probability mass beyond the truncation, so the populations plus
    the remainder sum to 1 exactly (up to rounding).
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    if r < 0:
        raise ValueError("r must be non-negative")
    if r >= 1.0:
        raise InstabilityError(
            f"r = {r!r} >= 1: the geometric distribution is not normalizable"
        )
    n = np.arange(n_max + 1)
    return (1.0 - r) * r ** n, float(r ** (n_max + 1))


def ground_enhancement(r: float, bath: ThermalBath, omega0: float) -> float:
    """p_0 / P_0: driven ground-state occupation over the undriven thermal one.

    P_0 = 1 - e^{-beta omega0} is the equilibrium ground occupation of the
    bare oscillator; values above 1 mean the drive cools.
    """
    if r < 0:
        raise ValueError("r must be non-negative")
    if r >= 1.0:
        raise InstabilityError(
            f"r = {r!r} >= 1: no stationary ground-state occupation"
        )
    return float((1.0 - r) / -np.expm1(-bath.beta * omega0))


def dominant_ell(ts: TransitionSpectrum, sd: SpectralDensity):
    """Sidebands selected by the density: (ell1, ell2).

    ell1 maximizes weight * J over the positive-frequency lines, ell2 over
    the negative ones; either is None when all its products underflow to
    zero. This is the label used to tell cooling plateaus from
    instability windows in sweep output.
    """
    products = ts.weights * density_at(sd, ts.frequencies)
    ell1 = ell2 = None
    pos = ts.frequencies > 0
    if np.any(pos) and float(products[pos].max()) > 0.0:
        ell1 = int(ts.ells[pos][np.argmax(products[pos])])
    neg = ts.frequencies < 0
    if np.any(neg) and float(products[neg].max()) > 0.0:
        ell2 = int(ts.ells[neg][np.argmax(products[neg])])
    return ell1, ell2
