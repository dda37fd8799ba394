"""Classical Mathieu oscillator: monodromy, stability, exponent, Fourier data.

Scaled units are used throughout: the drive frequency omega, the mass and
hbar are all 1, so the drive period is T = 2 pi and the equation of motion
reads

    xi''(t) = -(Omega0^2 - Omega1^2 cos t) xi(t).

Stability follows from the trace of the one-period propagator (monodromy
matrix). For stable parameters the complex Floquet solution

    xi(t) = v(t) e^{i nu t},    v(t + T) = v(t)

is fixed on the branch where the characteristic exponent nu connects
continuously to Omega0 as Omega1 -> 0, and the periodic part is expanded
as v(t) = sum_l v_l e^{i l t}. The squared magnitudes |v_l|^2 are the
sideband weights that every rate computation downstream consumes.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .errors import BranchTrackingError, MarginalStabilityError, NumericalFailure

TWO_PI = 2.0 * np.pi

#: default relative tolerance of the adaptive integrator
DEFAULT_TOL = 1e-10

#: half-width of the |trace| band around 2 reported as marginal
DEFAULT_MARGIN = 1e-9

#: Fourier truncation defaults, see periodic_fourier
DEFAULT_MAX_L = 64
DEFAULT_TAIL_THRESHOLD = 1e-14

# The Fourier extraction integrates on its own, tighter tolerance: tail
# coefficients sit many orders below the leading one and inherit absolute
# errors of order rtol from the dense solution.
_FOURIER_RTOL = 1e-12
_FOURIER_ATOL = 1e-15


@dataclass(frozen=True)
class DriveParams:
    """Dimensionless drive parameters, frequencies in units of omega."""

    omega0: float
    omega1: float = 0.0

    def __post_init__(self):
        if not (np.isfinite(self.omega0) and self.omega0 > 0):
            raise ValueError("omega0 must be positive and finite")
        if not (np.isfinite(self.omega1) and self.omega1 >= 0):
            raise ValueError("omega1 must be non-negative and finite")


@dataclass(frozen=True)
class Monodromy:
    """One-period propagator of (xi, xi') for the real Mathieu equation."""

    matrix: np.ndarray
    integration_tolerance: float

    @property
    def trace(self) -> float:
        return float(self.matrix[0, 0] + self.matrix[1, 1])

    @property
    def determinant(self) -> float:
        return float(np.linalg.det(self.matrix))


class Verdict(enum.Enum):
    STABLE = "Stable"
    UNSTABLE = "Unstable"
    MARGINAL = "Marginal"


@dataclass(frozen=True)
class Stability:
    """Trace-test verdict together with the trace it was derived from."""

    verdict: Verdict
    trace: float

    @property
    def is_stable(self) -> bool:
        return self.verdict is Verdict.STABLE


@dataclass(frozen=True)
class FloquetSolution:
    """Characteristic exponent and Fourier coefficients of the periodic part.

    Coefficients are Wronskian-normalized: i (xi xi'* - xi* xi') = 2 nu,
    which reduces to |v_0| = 1 in the undriven limit. Only weight ratios
    matter for the rate ratio downstream; the convention tag records the
    choice for provenance.
    """

    params: DriveParams
    nu: float
    ells: np.ndarray
    coefficients: np.ndarray
    truncated: bool
    normalization: str = "wronskian-2nu"

    @property
    def L(self) -> int:
        return int(self.ells[-1])

    def weights(self) -> np.ndarray:
        """Sideband weights |v_l|^2 for l = -L..L."""
        return np.abs(self.coefficients) ** 2


def _fundamental_rhs(t, y, om0sq, om1sq):
    # two solutions side by side: y = (xi_a, xi_a', xi_b, xi_b')
    k = om0sq - om1sq * np.cos(t)
    return (y[1], -k * y[0], y[3], -k * y[2])


def _solve_fundamental(params: DriveParams, rtol: float, atol: float,
                       dense: bool = False):
    sol = solve_ivp(
        _fundamental_rhs,
        (0.0, TWO_PI),
        (1.0, 0.0, 0.0, 1.0),
        method="DOP853",
        rtol=rtol,
        atol=atol,
        args=(params.omega0 ** 2, params.omega1 ** 2),
        dense_output=dense,
    )
    if not sol.success:
        raise NumericalFailure(
            f"Mathieu integration failed: {sol.message}",
            time_reached=float(sol.t[-1]),
        )
    return sol


def _matrix_from_endpoint(sol) -> np.ndarray:
    ya, dya, yb, dyb = sol.y[:, -1]
    return np.array([[ya, yb], [dya, dyb]])


def integrate_fundamental(params: DriveParams, tol: float = DEFAULT_TOL) -> Monodromy:
    """One-period propagator of the fundamental solutions (1,0) and (0,1).

    Parameters
    ----------
    params : DriveParams
    tol : float
        Relative tolerance of the adaptive Runge-Kutta integrator,
        restricted to (0, 1e-6].

    Returns
    -------
    Monodromy
        Maps (xi(0), xi'(0)) to (xi(T), xi'(T)). Its determinant is the
        conserved Wronskian of the two solutions and must equal 1; a
        deviation beyond 100 tol is treated as an integration failure.
    """
    if not 0.0 < tol <= 1e-6:
        raise ValueError("tol must lie in (0, 1e-6]")
    sol = _solve_fundamental(params, rtol=tol, atol=tol * 1e-3)
    m = Monodromy(matrix=_matrix_from_endpoint(sol), integration_tolerance=tol)
    if abs(m.determinant - 1.0) > 100.0 * tol:
        raise NumericalFailure(
            f"monodromy determinant {m.determinant!r} violates the Wronskian "
            f"identity at tol={tol:g}",
            time_reached=TWO_PI,
        )
    return m


def classify_stability(m: Monodromy, margin: float = DEFAULT_MARGIN) -> Stability:
    """Trace test: |tr| < 2 stable, |tr| > 2 unstable, within margin marginal.

    Marginal verdicts are reported as such, never coerced to a neighbor.
    """
    if not 0.0 < margin <= 1e-3:
        raise ValueError("margin must lie in (0, 1e-3]")
    tr = m.trace
    if abs(abs(tr) - 2.0) <= margin:
        verdict = Verdict.MARGINAL
    elif abs(tr) < 2.0:
        verdict = Verdict.STABLE
    else:
        verdict = Verdict.UNSTABLE
    return Stability(verdict=verdict, trace=tr)


def _principal_exponent(trace: float) -> float:
    # principal value in [0, 1/2] from cos(2 pi nu) = trace / 2
    return float(np.arccos(np.clip(trace / 2.0, -1.0, 1.0)) / TWO_PI)


def _continuation_path(params: DriveParams, tol: float = DEFAULT_TOL,
                       margin: float = DEFAULT_MARGIN):
    """Samples (omega1, nu) along the continuation from 0 to params.omega1.

    The monodromy fixes nu only modulo 1 and up to sign. Starting from the
    exact undriven value nu = omega0, each step picks the candidate
    +-principal + k closest to the previous sample; if even the closest
    candidate jumps by 0.25 or more the step is halved and retried.
    """
    path = [(0.0, params.omega0)]
    target = params.omega1
    if target == 0.0:
        return path
    nu = params.omega0
    om1 = 0.0
    step = target / 8.0
    halvings = 0
    while om1 < target:
        here = min(om1 + step, target)
        mono = integrate_fundamental(DriveParams(params.omega0, here), tol)
        stab = classify_stability(mono, margin)
        if not stab.is_stable:
            raise BranchTrackingError(
                f"stability lost at omega1 = {here:.9g} "
                f"({stab.verdict.value}, trace = {stab.trace:.6g})",
                omega1=here,
            )
        base = _principal_exponent(mono.trace)
        ks = np.arange(np.floor(nu) - 2.0, np.floor(nu) + 4.0)
        candidates = np.concatenate([base + ks, -base + ks])
        best = float(candidates[np.argmin(np.abs(candidates - nu))])
        if abs(best - nu) >= 0.25:
            step *= 0.5
            halvings += 1
            if halvings > 60:
                raise BranchTrackingError(
                    f"continuation step underflow near omega1 = {here:.9g}",
                    omega1=here,
                )
            continue
        om1, nu = here, best
        path.append((om1, nu))
    return path


def characteristic_exponent(params: DriveParams, tol: float = DEFAULT_TOL) -> float:
    """Branch-resolved characteristic exponent nu > 0 (units of omega).

    Continuation in the drive strength keeps the branch with nu -> omega0
    as omega1 -> 0; consecutive samples along the path differ by less than
    0.25, which is what makes the modulo-1 and sign ambiguities decidable.

    Raises
    ------
    BranchTrackingError
        If any point on the continuation path (including the target) is
        not strictly stable.
    """
    return _continuation_path(params, tol)[-1][1]


def periodic_fourier(params: DriveParams, nu: float,
                     max_L: int = DEFAULT_MAX_L,
                     tail_threshold: float = DEFAULT_TAIL_THRESHOLD) -> FloquetSolution:
    """Fourier coefficients v_l of the periodic part of the Floquet solution.

    The complex solution is assembled from the monodromy eigenvector for
    the eigenvalue e^{i nu T}, scaled so that the conserved Wronskian
    i (xi xi'* - xi* xi') equals 2 nu. v(t) = xi(t) e^{-i nu t} is sampled
    on 2^k >= 4 max_L uniform points over one period and transformed; the
    retained half-width L is the smallest index whose relative squared
    tail |v_(+-L)|^2 / max|v_l|^2 drops below tail_threshold, capped at
    max_L with the `truncated` flag set.

    Parameters
    ----------
    params : DriveParams
        Must be strictly stable.
    nu : float
        Branch-resolved exponent belonging to params, normally straight
        from characteristic_exponent. Consistency with the monodromy trace
        is checked, so rounded literature values are rejected.
    max_L : int
        Truncation cap, at least 8.
    tail_threshold : float
        Relative squared-tail cutoff. The default 1e-14 suits single
        solutions; sweeps that must resolve far sidebands pass something
        smaller (see experiments.SolverOptions).
    """
    if max_L < 8:
        raise ValueError("max_L must be at least 8")
    if not 0.0 < tail_threshold < 1.0:
        raise ValueError("tail_threshold must lie in (0, 1)")

    sol = _solve_fundamental(params, rtol=_FOURIER_RTOL, atol=_FOURIER_ATOL,
                             dense=True)
    m = _matrix_from_endpoint(sol)
    mono = Monodromy(matrix=m, integration_tolerance=_FOURIER_RTOL)
    stab = classify_stability(mono)
    if stab.verdict is Verdict.MARGINAL:
        raise MarginalStabilityError(
            f"monodromy trace {stab.trace!r} is marginal; the Floquet "
            "eigenvectors are degenerate"
        )
    if stab.verdict is Verdict.UNSTABLE:
        raise ValueError("periodic_fourier requires stable drive parameters")

    lam = np.exp(2j * np.pi * (nu % 1.0))
    if abs(lam.real - 0.5 * stab.trace) > 1e-8:
        raise ValueError(
            f"nu = {nu!r} is inconsistent with the monodromy trace "
            f"{stab.trace!r}; pass the value from characteristic_exponent"
        )

    # Eigenvector (xi(0), xi'(0)); take the better-conditioned row.
    if abs(m[0, 1]) >= abs(m[1, 0]):
        w = np.array([m[0, 1], lam - m[0, 0]])
    else:
        w = np.array([lam - m[1, 1], m[1, 0]])
    wronskian = 2.0 * np.imag(np.conj(w[0]) * w[1])
    if wronskian <= 0.0:
        raise NumericalFailure(
            "Floquet eigenvector has non-positive Wronskian; branch data "
            "inconsistent", time_reached=TWO_PI,
        )
    w = w * np.sqrt(2.0 * nu / wronskian)

    n = 256
    while n < 4 * max_L:
        n *= 2
    ts = np.arange(n) * (TWO_PI / n)
    ya, _, yb, _ = sol.sol(ts)
    v = (w[0] * ya + w[1] * yb) * np.exp(-1j * nu * ts)
    c = np.fft.fft(v) / n

    ells_full = np.arange(-max_L, max_L + 1)
    coeffs_full = c[ells_full % n]
    amp2 = np.abs(coeffs_full) ** 2
    peak = float(amp2.max())
    L = None
    for cand in range(1, max_L + 1):
        tail = max(amp2[max_L + cand], amp2[max_L - cand]) / peak
        if tail < tail_threshold:
            L = cand
            break
    truncated = L is None
    if truncated:
        L = max_L
    keep = slice(max_L - L, max_L + L + 1)
    return FloquetSolution(
        params=params,
        nu=float(nu),
        ells=ells_full[keep],
        coefficients=coeffs_full[keep],
        truncated=truncated,
    )
