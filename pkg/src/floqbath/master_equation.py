"""Truncated tridiagonal rate ladder: generator, steady state, relaxation.

The secular master equation couples neighboring ladder states only, with
rates growing linearly up the ladder: n -> n+1 at (n+1) g_up and
n+1 -> n at (n+1) g_down. The truncation edge reflects (the outflow
above n_max is deleted) so the generator conserves probability exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .bath import SpectralDensity, ThermalBath
from .errors import NumericalFailure
from .rates import TransitionSpectrum, _ordered_sum, _rate_sums

#: population tail dropped when choosing a truncation automatically
_AUTO_TAIL = 1e-12
_AUTO_NMAX_LO = 16
_AUTO_NMAX_HI = 512


@dataclass(frozen=True)
class RateGenerator:
    """Birth-death generator on n = 0..n_max with linear ladder rates."""

    matrix: np.ndarray
    g_up: float
    g_down: float
    n_max: int

    @property
    def ratio(self) -> float:
        return self.g_up / self.g_down

    @classmethod
    def from_rates(cls, g_up: float, g_down: float, n_max: int) -> "RateGenerator":
        if n_max < 2:
            raise ValueError("n_max must be at least 2")
        if g_up < 0 or g_down <= 0:
            raise ValueError("rates must satisfy g_up >= 0 and g_down > 0")
        dim = n_max + 1
        g = np.zeros((dim, dim))
        for n in range(n_max):
            up = (n + 1) * g_up
            down = (n + 1) * g_down
            g[n + 1, n] += up
            g[n, n] -= up
            g[n, n + 1] += down
            g[n + 1, n + 1] -= down
        return cls(matrix=g, g_up=g_up, g_down=g_down, n_max=n_max)


def build_generator(ts: TransitionSpectrum, bath: ThermalBath,
                    sd: SpectralDensity, n_max: int,
                    rate_scale: float = 1.0) -> RateGenerator:
    """Assemble the generator from the sideband sums.

    g_up and g_down use the same ordered summation as ratio_exact, so
    gen.ratio reproduces it to rounding. rate_scale collects the global
    coupling prefactor (and the harmonic ladder normalization) that the
    ratio is blind to; it only sets the overall time unit.
    """
    if rate_scale <= 0:
        raise ValueError("rate_scale must be positive")
    up_terms, down_terms = _rate_sums(ts, bath, sd)
    g_up = _ordered_sum(up_terms) * rate_scale
    g_down = _ordered_sum(down_terms) * rate_scale
    return RateGenerator.from_rates(g_up, g_down, n_max)


@dataclass(frozen=True)
class StationarySolve:
    """Numeric steady state with its balance residual.

    truncation_dominated marks r >= 1 solves, where the result is an
    artifact of the reflecting edge (population piles up at n_max).
    """

    populations: np.ndarray
    residual: float
    truncation_dominated: bool


def steady_state_numeric(gen: RateGenerator, tol: float = 1e-10) -> StationarySolve:
    """Stationary distribution of the truncated ladder.

    Detailed balance of the tridiagonal chain gives p_{n+1} = r p_n; the
    normalized result is checked against the assembled generator and the
    max-norm residual of G p (per unit base rate) must stay below tol.
    """
    r = gen.ratio
    n = np.arange(gen.n_max + 1, dtype=float)
    # exponent relative to the largest term keeps r >= 1 overflow-free
    x = r ** (n - gen.n_max) if r >= 1.0 else r ** n
    p = x / x.sum()
    residual = float(np.max(np.abs(gen.matrix @ p)))
    residual /= max(gen.g_up, gen.g_down)
    if residual > tol:
        raise NumericalFailure(
            f"steady-state residual {residual:g} exceeds tol {tol:g}"
        )
    return StationarySolve(
        populations=p,
        residual=residual,
        truncation_dominated=bool(r >= 1.0),
    )


def relax(gen: RateGenerator, p_init, t_final: float,
          tol: float = 1e-10, n_snapshots: int = 50):
    """Integrate dp/dt = G p from p_init; uniform snapshot grid.

    Returns (times, populations) with populations[k] the distribution at
    times[k]. Every snapshot must stay normalized to within tol, else the
    integration is considered failed.
    """
    p0 = np.asarray(p_init, dtype=float)
    if p0.shape != (gen.n_max + 1,):
        raise ValueError(
            f"p_init must have length {gen.n_max + 1}, got {p0.shape}"
        )
    if abs(p0.sum() - 1.0) > tol:
        raise ValueError("p_init is not normalized")
    if not t_final > 0:
        raise ValueError("t_final must be positive")
    if n_snapshots < 2:
        raise ValueError("n_snapshots must be at least 2")

    times = np.linspace(0.0, t_final, n_snapshots)
    sol = solve_ivp(
        lambda _t, p: gen.matrix @ p,
        (0.0, t_final),
        p0,
        method="DOP853",
        t_eval=times,
        rtol=1e-10,
        atol=1e-14,
    )
    if not sol.success:
        raise NumericalFailure(
            f"relaxation integration failed: {sol.message}",
            time_reached=float(sol.t[-1]) if len(sol.t) else 0.0,
        )
    traj = sol.y.T
    drift = float(np.max(np.abs(traj.sum(axis=1) - 1.0)))
    if drift > tol:
        raise NumericalFailure(
            f"normalization drifted by {drift:g} (tol {tol:g})",
            time_reached=t_final,
        )
    return times, traj


def auto_nmax(r: float) -> int:
    """Truncation choice: smallest n with r^n below 1e-12, clamped to [16, 512]."""
    if r <= 0:
        return _AUTO_NMAX_LO
    if r >= 1.0:
        return _AUTO_NMAX_HI
    n = int(np.ceil(np.log(_AUTO_TAIL) / np.log(r)))
    return int(min(max(n, _AUTO_NMAX_LO), _AUTO_NMAX_HI))
