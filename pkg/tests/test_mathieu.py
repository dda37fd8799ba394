"""Monodromy, stability classification, exponent continuation, Fourier
sidebands. Oracles: closed-form undriven propagator, an independent
RK45 run for the driven trace, and a three-term-recurrence (Miller)
construction of the sideband coefficients in 50-digit arithmetic."""

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.integrate import solve_ivp

from floqbath import (
    BranchTrackingError,
    DriveParams,
    MarginalStabilityError,
    NumericalFailure,
    Verdict,
    characteristic_exponent,
    classify_stability,
    integrate_fundamental,
    periodic_fourier,
)
from floqbath.mathieu import TWO_PI, _continuation_path

from conftest import (
    NU_REF,
    NU_WEAK_DRIVE_REF,
    OMEGA0_REF,
    OMEGA1_REF,
    TRACE_REF,
    WEIGHT_RATIO_M1_REF,
)


def undriven_monodromy(omega0):
    # rotation through omega0*T in the (xi, xi') phase plane
    c, s = np.cos(omega0 * TWO_PI), np.sin(omega0 * TWO_PI)
    return np.array([[c, s / omega0], [-omega0 * s, c]])


# ---------------------------------------------------------------- monodromy


@pytest.mark.parametrize("omega0", [0.8, 1.0, OMEGA0_REF, 2.3])
def test_undriven_matches_rotation(omega0):
    mono = integrate_fundamental(DriveParams(omega0))
    assert_allclose(mono.matrix, undriven_monodromy(omega0), atol=1e-10)


def test_determinant_is_unimodular(drive):
    mono = integrate_fundamental(drive)
    assert abs(mono.determinant - 1.0) < 1e-10


def test_reference_trace_regression(drive):
    mono = integrate_fundamental(drive, tol=1e-12)
    assert mono.trace == pytest.approx(TRACE_REF, abs=1e-8)


def test_trace_cross_checked_against_rk45(drive):
    # independent method, looser tolerance: guards against a DOP853-only
    # artifact
    k = lambda t: drive.omega0**2 - drive.omega1**2 * np.cos(t)
    sol = solve_ivp(
        lambda t, y: [y[1], -k(t) * y[0], y[3], -k(t) * y[2]],
        (0.0, TWO_PI), [1.0, 0.0, 0.0, 1.0],
        method="RK45", rtol=1e-11, atol=1e-13, dense_output=False,
    )
    trace = sol.y[0, -1] + sol.y[3, -1]
    assert trace == pytest.approx(TRACE_REF, abs=1e-8)


def test_symplectic_over_random_draws():
    rng = np.random.default_rng(1812)
    for _ in range(100):
        omega0 = rng.uniform(0.05, 3.0)
        omega1 = rng.uniform(0.0, 1.5)
        mono = integrate_fundamental(DriveParams(omega0, omega1))
        assert abs(mono.determinant - 1.0) < 1e-8


def test_bad_tolerance_rejected(drive):
    with pytest.raises(ValueError):
        integrate_fundamental(drive, tol=1e-3)
    with pytest.raises(ValueError):
        integrate_fundamental(drive, tol=0.0)


def test_invalid_drive_params():
    with pytest.raises(ValueError):
        DriveParams(0.0, 1.0)
    with pytest.raises(ValueError):
        DriveParams(1.0, -0.2)


# ---------------------------------------------------------------- stability


def test_classify_reference_drive(drive):
    stab = classify_stability(integrate_fundamental(drive))
    assert stab.verdict is Verdict.STABLE
    assert stab.is_stable


def test_classify_unstable_tongue():
    # principal resonance omega0 = 1/2: any drive opens the tongue
    mono = integrate_fundamental(DriveParams(0.5, 0.3))
    stab = classify_stability(mono)
    assert stab.verdict is Verdict.UNSTABLE
    assert stab.trace == pytest.approx(-2.0798693143060967, abs=1e-8)


def test_classify_marginal_at_half_integer():
    # undriven omega0 = 1/2 gives trace exactly -2
    stab = classify_stability(integrate_fundamental(DriveParams(0.5)))
    assert stab.verdict is Verdict.MARGINAL
    assert not stab.is_stable


def test_marginal_band_respects_margin():
    class Fake:
        matrix = np.array([[1.0 + 5e-10, 0.0], [0.0, 1.0 + 5e-10]])
        trace = 2.0 + 1e-9

    assert classify_stability(Fake(), margin=1e-8).verdict is Verdict.MARGINAL
    assert classify_stability(Fake(), margin=1e-10).verdict is Verdict.UNSTABLE


def test_margin_domain():
    mono = integrate_fundamental(DriveParams(1.0))
    with pytest.raises(ValueError):
        classify_stability(mono, margin=0.0)
    with pytest.raises(ValueError):
        classify_stability(mono, margin=1.0)


def test_resonance_tongue_is_unstable_along_drive_axis():
    for omega1 in np.linspace(0.05, 0.5, 8):
        stab = classify_stability(integrate_fundamental(DriveParams(0.5, omega1)))
        assert stab.verdict is Verdict.UNSTABLE, omega1


# ----------------------------------------------------------- exponent


def test_exponent_undriven_is_omega0():
    assert characteristic_exponent(DriveParams(1.3)) == pytest.approx(1.3, abs=1e-10)


def test_exponent_reference_value(nu):
    assert nu == pytest.approx(NU_REF, abs=1e-8)
    # consistency with the monodromy trace
    assert np.cos(TWO_PI * nu) == pytest.approx(TRACE_REF / 2.0, abs=1e-9)


def test_exponent_weak_drive_regression():
    nu = characteristic_exponent(DriveParams(OMEGA0_REF, 0.1), tol=1e-12)
    assert nu == pytest.approx(NU_WEAK_DRIVE_REF, abs=1e-9)
    assert nu < OMEGA0_REF


def test_continuation_steps_stay_small(drive):
    path = _continuation_path(drive, 1e-10)
    assert path[0] == (0.0, drive.omega0)
    assert path[-1][0] == drive.omega1
    nus = [p[1] for p in path]
    assert max(abs(np.diff(nus))) < 0.25


def test_continuation_refuses_unstable_target():
    with pytest.raises(BranchTrackingError) as err:
        characteristic_exponent(DriveParams(0.5, 0.3))
    assert err.value.omega1 is not None


# ----------------------------------------------------------- fourier


def test_undriven_fourier_is_single_line():
    sol = periodic_fourier(DriveParams(1.3), 1.3)
    w = sol.weights()
    zero = np.where(sol.ells == 0)[0][0]
    assert w[zero] == pytest.approx(1.0, abs=1e-10)
    assert np.all(np.delete(w, zero) < 1e-12)


def test_reference_weight_ratio(floquet):
    w = floquet.weights()
    i0 = np.where(floquet.ells == 0)[0][0]
    im1 = np.where(floquet.ells == -1)[0][0]
    assert w[im1] / w[i0] == pytest.approx(WEIGHT_RATIO_M1_REF, rel=1e-6)


def test_retained_order_and_truncation_flag(floquet, drive, nu):
    assert floquet.L == 8
    assert not floquet.truncated
    tight = periodic_fourier(drive, nu, max_L=8, tail_threshold=1e-30)
    assert tight.truncated
    assert tight.L == 8


def test_fourier_rejects_rounded_exponent(drive):
    # 1.387 is the prose value; the internal consistency check must
    # reject it because cos(2 pi nu) no longer matches the trace
    with pytest.raises(ValueError):
        periodic_fourier(drive, 1.387)


def test_fourier_rejects_unstable_and_marginal():
    with pytest.raises(ValueError):
        periodic_fourier(DriveParams(0.5, 0.3), 0.5)
    with pytest.raises(MarginalStabilityError):
        periodic_fourier(DriveParams(0.5), 0.5)


def test_wronskian_normalization(floquet, nu):
    # sum_l (nu + l) |v_l|^2 = nu under the adopted scaling
    vals = (nu + floquet.ells) * floquet.weights()
    assert vals.sum() == pytest.approx(nu, rel=1e-10)


def test_solution_satisfies_equation(drive, nu, floquet):
    # plug xi(t) = sum_l v_l e^{i(nu+l)t} into the oscillator equation;
    # the residual couples l to l+-1 through the cos t term
    ells = floquet.ells
    v = floquet.coefficients
    lookup = dict(zip(ells.tolist(), v))
    res_max = 0.0
    for ell in range(int(ells.min()) + 1, int(ells.max())):
        term = (drive.omega0**2 - (nu + ell) ** 2) * lookup[ell]
        term -= 0.5 * drive.omega1**2 * (lookup[ell - 1] + lookup[ell + 1])
        res_max = max(res_max, abs(term))
    assert res_max < 1e-8


def test_grid_doubling_does_not_move_coefficients(drive, nu):
    a = periodic_fourier(drive, nu, max_L=64, tail_threshold=1e-28)
    b = periodic_fourier(drive, nu, max_L=128, tail_threshold=1e-28)
    common = np.intersect1d(a.ells, b.ells)
    ia = np.searchsorted(a.ells, common)
    ib = np.searchsorted(b.ells, common)
    assert np.max(np.abs(a.coefficients[ia] - b.coefficients[ib])) < 1e-10


def test_fourier_tail_against_miller_recurrence(drive, nu, deep_floquet):
    mp = pytest.importorskip("mpmath")
    mp.mp.dps = 50
    # three-term recurrence for the sideband amplitudes:
    #   (omega0^2 - (nu+l)^2) v_l = (omega1^2/2)(v_{l-1} + v_{l+1})
    # run Miller-style downward from far sidebands on each side, then
    # match to v_0
    om0sq = mp.mpf(2)
    om1sq = mp.mpf(1)
    nu_mp = mp.mpf(repr(nu))
    hi, lo = 25, -25

    def coeff(l):
        return om0sq - (nu_mp + l) ** 2

    up = {hi + 1: mp.mpf(0), hi: mp.mpf(1e-60)}
    for l in range(hi, 0, -1):
        up[l - 1] = 2 * coeff(l) * up[l] / om1sq - up[l + 1]
    dn = {lo - 1: mp.mpf(0), lo: mp.mpf(1e-60)}
    for l in range(lo, 0):
        dn[l + 1] = 2 * coeff(l) * dn[l] / om1sq - dn[l - 1]
    ref = {l: up[l] / up[0] for l in range(0, hi - 5)}
    ref.update({l: dn[l] / dn[0] for l in range(lo + 5, 0)})

    v = dict(zip(deep_floquet.ells.tolist(), deep_floquet.coefficients))
    v0 = v[0]
    for ell in range(-9, 7):
        got = v[ell] / v0
        want = complex(ref[ell])
        # absolute floor ~1e-14: the integrator noise level on order-one
        # coefficients, which dominates once |v_l| drops below ~1e-10
        assert abs(got - want) <= 1e-4 * abs(want) + 1e-14, ell


def test_fourier_argument_domains(drive, nu):
    with pytest.raises(ValueError):
        periodic_fourier(drive, nu, max_L=4)
    with pytest.raises(ValueError):
        periodic_fourier(drive, nu, tail_threshold=0.0)
    with pytest.raises(ValueError):
        periodic_fourier(drive, nu, tail_threshold=1.5)


def test_integration_failure_carries_time():
    err = NumericalFailure("integration stalled", time_reached=3.2)
    assert err.time_reached == 3.2
