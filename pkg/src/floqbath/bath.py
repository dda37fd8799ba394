"""Thermal reservoir: Bose occupations and engineered spectral densities."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SingularFrequencyError

#: frequencies with |f| at or below this are treated as singular
ZERO_FREQ_GUARD = 1e-12


@dataclass(frozen=True)
class ThermalBath:
    """Inverse bath temperature beta = hbar omega / (k_B T_bath), scaled units."""

    beta: float

    def __post_init__(self):
        if not (np.isfinite(self.beta) and self.beta > 0):
            raise ValueError("beta must be positive and finite")


def occupation(bath: ThermalBath, freq: float) -> float:
    """Thermal occupation N(freq) with the negative-frequency rule.

    N(f) = 1/(e^{beta f} - 1) for f > 0 and N(f) = N(-f) + 1 for f < 0;
    the extra 1 is the spontaneous-emission contribution and is exactly
    what detailed balance requires. Frequencies inside the zero guard are
    rejected because the formula diverges there.
    """
    if abs(freq) <= ZERO_FREQ_GUARD:
        raise SingularFrequencyError(
            f"occupation diverges at frequency {freq!r}"
        )
    if freq > 0:
        return float(1.0 / np.expm1(bath.beta * freq))
    return float(1.0 / np.expm1(-bath.beta * freq) + 1.0)


class SpectralDensity:
    """Evaluator of the bath coupling density J at non-negative frequency.

    Subclasses implement ``value(freq)`` for freq >= 0 (scalar or ndarray)
    and should set a ``name``. All physics goes through density_at, which
    applies the absolute-value rule for transition frequencies.
    """

    name = "abstract"

    def value(self, freq):
        raise NotImplementedError


@dataclass(frozen=True)
class GaussianDensity(SpectralDensity):
    """J(f) = amplitude exp(-(f - center)^2 / width^2) for f >= 0.

    A single width in the exponent denominator, no factor 2: the density
    falls to amplitude/e one width away from the center.
    """

    amplitude: float = 1.0
    center: float = 0.0
    width: float = 1.0

    name = "gaussian"

    def __post_init__(self):
        if not (np.isfinite(self.amplitude) and self.amplitude > 0):
            raise ValueError("amplitude must be positive and finite")
        if not (np.isfinite(self.center) and self.center >= 0):
            raise ValueError("center must be non-negative and finite")
        if not (np.isfinite(self.width) and self.width > 0):
            raise ValueError("width must be positive and finite")

    def value(self, freq):
        x = (freq - self.center) / self.width
        return self.amplitude * np.exp(-x * x)


def density_at(sd: SpectralDensity, freq):
    """J(|freq|): only the magnitude of a transition frequency couples."""
    return sd.value(np.abs(freq))
