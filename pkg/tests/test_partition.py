"""Partition-function schemes against brute-force and quadrature oracles.

Reference constants were produced with the mpmath brute-force summation below
at 50 significant digits (termination when a term drops below 1e-44 of the
partial sum); the cheaper in-test oracle re-derives a subset at run time.
"""

import math

import mpmath
import numpy as np
import pytest
from scipy.integrate import quad

from ncgraphene import (
    NCParams,
    PartitionEvaluation,
    Scheme,
    SumControl,
    convergence_integral,
    evaluate,
    n_particle_log_z,
    relative_error,
    z_direct,
    z_euler_maclaurin,
    z_hurwitz,
)

COMM = NCParams()
DEFORMED = NCParams(0.1, 0.1)

# brute-force references (50-digit summation of exp(-sqrt(A n)/tau))
Z_DIRECT_TAU1_A1 = 2.6704068179663397212
Z_DIRECT_TAU10_A1 = 200.520376202666459
Z_DIRECT_TAU05_A1 = 1.2814462011251196181
Z_DIRECT_TAU2_A132 = 6.6670787700063950319

# exact evaluations of the integral-plus-corrections closed form
Z_EM_TAU1_A1 = 2.6405762509324373116
Z_EM_TAU05_A1 = 1.2600035146347840362
Z_EM_TAU2_A132 = 6.6406529235056739063
Z_EM_TAU100_A1 = 20000.501259337551734


def brute_force_z(tau, a, dps=30):
    """Independent high-precision level sum, no tail bound, no chunking."""
    with mpmath.workdps(dps):
        tau_mp = mpmath.mpf(tau)
        a_mp = mpmath.mpf(a)
        total = mpmath.mpf(0)
        n = 0
        while True:
            term = mpmath.exp(-mpmath.sqrt(a_mp * n) / tau_mp)
            total += term
            if n > 4 and term < mpmath.mpf(10) ** (-(dps - 5)) * total:
                return total
            n += 1


# ----------------------------------------------------------------------
# Direct summation
# ----------------------------------------------------------------------

def test_direct_reference_values():
    assert z_direct(1.0, COMM).z_value == pytest.approx(Z_DIRECT_TAU1_A1, rel=3e-12)
    assert z_direct(10.0, COMM).z_value == pytest.approx(Z_DIRECT_TAU10_A1, rel=3e-12)
    assert z_direct(0.5, COMM).z_value == pytest.approx(Z_DIRECT_TAU05_A1, rel=3e-12)
    assert z_direct(2.0, DEFORMED).z_value == pytest.approx(Z_DIRECT_TAU2_A132, rel=3e-12)


@pytest.mark.parametrize("tau, params", [(0.7, COMM), (1.3, NCParams(0.1, 0.0)), (2.0, DEFORMED)])
def test_direct_against_live_oracle(tau, params):
    a = (1.0 + params.theta_bar) * (1.0 + params.theta_bar + params.eta_bar)
    reference = float(brute_force_z(tau, a))
    assert z_direct(tau, params).z_value == pytest.approx(reference, rel=3e-12)


def test_direct_low_temperature_limit():
    assert z_direct(1e-4, COMM).z_value == 1.0
    assert z_direct(1e-6, DEFORMED).z_value == 1.0


def test_direct_high_temperature_asymptote():
    # Z approaches 2 tau^2 / A from above at high temperature
    ev = z_direct(10.0, COMM)
    assert ev.z_value == pytest.approx(200.0, rel=0.05)
    assert ev.z_value > 200.0


def test_direct_tail_bound_certifies_remainder():
    for tau, params in [(1.0, COMM), (5.0, DEFORMED)]:
        loose = z_direct(tau, params, SumControl(rel_tol=1e-7))
        tight = z_direct(tau, params, SumControl(rel_tol=1e-12))
        remainder = tight.z_value - loose.z_value
        assert remainder >= 0.0
        assert remainder <= loose.tail_bound


def test_direct_reports_cap_exhaustion():
    ev = z_direct(50.0, COMM, SumControl(rel_tol=1e-12, n_cap=1000))
    assert not ev.converged
    assert ev.terms_used == 1000
    assert ev.z_value > 0.0
    assert ev.tail_bound > 1e-12 * ev.z_value


def test_direct_metadata():
    ev = z_direct(1.0, COMM)
    assert ev.scheme is Scheme.DIRECT_SUM
    assert ev.converged
    assert ev.terms_used >= 1
    assert 0.0 <= ev.tail_bound <= 1e-12 * ev.z_value


@pytest.mark.parametrize("tau", [0.0, -1.0, float("nan"), float("inf")])
def test_direct_rejects_bad_tau(tau):
    with pytest.raises(ValueError):
        z_direct(tau, COMM)


def test_sum_control_invariants():
    with pytest.raises(ValueError):
        SumControl(rel_tol=1e-5)
    with pytest.raises(ValueError):
        SumControl(rel_tol=0.0)
    with pytest.raises(ValueError):
        SumControl(n_cap=999)


# ----------------------------------------------------------------------
# Regularized closed form
# ----------------------------------------------------------------------

def test_hurwitz_exact_values():
    assert z_hurwitz(1.0, COMM).z_value == 1.5
    assert z_hurwitz(2.0, DEFORMED).z_value == pytest.approx(0.5 + 4.0 / 1.32, rel=1e-15)
    assert z_hurwitz(1e-6, COMM).z_value == pytest.approx(0.5, abs=1e-11)


def test_hurwitz_random_grid_against_reevaluation():
    rng = np.random.default_rng(20240811)
    for _ in range(20):
        tau = float(rng.uniform(0.05, 10.0))
        theta = float(rng.uniform(0.0, 0.5))
        eta = float(rng.uniform(0.0, 0.5))
        expected = 0.5 + tau * tau / ((1.0 + theta) * (1.0 + theta + eta))
        assert z_hurwitz(tau, NCParams(theta, eta)).z_value == pytest.approx(expected, rel=1e-14)


def test_hurwitz_derivatives_are_exact():
    ev = z_hurwitz(3.0, DEFORMED)
    assert ev.dz_dtau == pytest.approx(2.0 * 3.0 / 1.32, rel=1e-15)
    assert ev.d2z_dtau2 == pytest.approx(2.0 / 1.32, rel=1e-15)


# ----------------------------------------------------------------------
# Euler-Maclaurin closed form
# ----------------------------------------------------------------------

def test_em_reference_values():
    assert z_euler_maclaurin(1.0, COMM).z_value == pytest.approx(Z_EM_TAU1_A1, rel=1e-14)
    assert z_euler_maclaurin(0.5, COMM).z_value == pytest.approx(Z_EM_TAU05_A1, rel=1e-14)
    assert z_euler_maclaurin(2.0, DEFORMED).z_value == pytest.approx(Z_EM_TAU2_A132, rel=1e-14)
    assert z_euler_maclaurin(100.0, COMM).z_value == pytest.approx(Z_EM_TAU100_A1, rel=1e-14)


def test_em_low_temperature_limit():
    ev = z_euler_maclaurin(0.01, COMM)
    assert not ev.clamped
    assert ev.z_value == pytest.approx(1.0, abs=1e-30)


def test_em_clamps_below_floor():
    ev = z_euler_maclaurin(1e-4, COMM)
    assert ev.clamped
    assert (ev.z_value, ev.dz_dtau, ev.d2z_dtau2) == (1.0, 0.0, 0.0)


def test_em_clamps_on_exponent_underflow():
    # sqrt(231)/0.02 = 760 exceeds the flush threshold even though tau > 1e-3
    ev = z_euler_maclaurin(0.02, NCParams(10.0, 10.0))
    assert ev.clamped
    assert ev.z_value == 1.0


def test_em_rejects_bad_tau():
    with pytest.raises(ValueError):
        z_euler_maclaurin(0.0, COMM)


# ----------------------------------------------------------------------
# Convergence integral
# ----------------------------------------------------------------------

def test_convergence_integral_values():
    assert convergence_integral(1.0, COMM) == pytest.approx(4.0 / math.e, rel=1e-14)
    assert convergence_integral(10.0, COMM) == pytest.approx(199.064231967911106, rel=1e-14)
    assert convergence_integral(0.5, DEFORMED) == pytest.approx(0.125513645437886019, rel=1e-13)
    assert convergence_integral(1e-3, COMM) == pytest.approx(0.0, abs=1e-300)


@pytest.mark.parametrize("tau, params", [(1.0, COMM), (3.0, DEFORMED)])
def test_convergence_integral_against_quadrature(tau, params):
    a = (1.0 + params.theta_bar) * (1.0 + params.theta_bar + params.eta_bar)
    numeric, _ = quad(lambda x: math.exp(-math.sqrt(a * x + a) / tau), 0.0, np.inf)
    assert convergence_integral(tau, params) == pytest.approx(numeric, rel=1e-9)


def test_convergence_integral_rejects_bad_tau():
    with pytest.raises(ValueError):
        convergence_integral(-1.0, COMM)


# ----------------------------------------------------------------------
# Derivatives vs finite differences
# ----------------------------------------------------------------------

def _central_fd(fn, tau, h):
    up, down = fn(tau + h), fn(tau - h)
    mid = fn(tau)
    first = (up - down) / (2.0 * h)
    second = (up - 2.0 * mid + down) / (h * h)
    return first, second


@pytest.mark.parametrize("scheme_fn", [z_hurwitz, z_euler_maclaurin])
@pytest.mark.parametrize("tau", [0.5, 1.0, 2.0, 5.0])
@pytest.mark.parametrize("params", [COMM, NCParams(0.1, 0.0), NCParams(0.0, 0.1), DEFORMED])
def test_closed_form_derivatives_match_fd(scheme_fn, tau, params):
    h = 1e-4 * tau
    first, second = _central_fd(lambda t: scheme_fn(t, params).z_value, tau, h)
    ev = scheme_fn(tau, params)
    assert ev.dz_dtau == pytest.approx(first, rel=1e-6)
    assert ev.d2z_dtau2 == pytest.approx(second, rel=1e-6)


@pytest.mark.parametrize("tau, params", [(0.7, COMM), (1.3, DEFORMED)])
def test_direct_derivatives_match_high_precision_fd(tau, params):
    # float central differences cannot certify the second derivative of the
    # summed series at 1e-6, so the differencing runs at 40 digits
    a = (1.0 + params.theta_bar) * (1.0 + params.theta_bar + params.eta_bar)
    h = 1e-4 * tau
    zp = brute_force_z(tau + h, a, dps=40)
    zm = brute_force_z(tau - h, a, dps=40)
    z0 = brute_force_z(tau, a, dps=40)
    first = float((zp - zm) / (2 * mpmath.mpf(h)))
    second = float((zp - 2 * z0 + zm) / mpmath.mpf(h) ** 2)
    ev = z_direct(tau, params)
    assert ev.dz_dtau == pytest.approx(first, rel=1e-6)
    assert ev.d2z_dtau2 == pytest.approx(second, rel=1e-6)


# ----------------------------------------------------------------------
# Cross-scheme behavior
# ----------------------------------------------------------------------

def test_all_schemes_positive_and_increasing():
    taus = np.geomspace(0.05, 20.0, 12)
    for scheme in Scheme:
        for params in (COMM, DEFORMED):
            for tau in taus:
                ev = evaluate(scheme, float(tau), params)
                assert ev.z_value > 0.0
                assert ev.dz_dtau >= 0.0


def test_low_temperature_scheme_limits():
    # the summed and integral-corrected forms go to 1, the regularized one to 1/2
    assert z_direct(5e-3, COMM).z_value == pytest.approx(1.0, abs=1e-17)
    assert z_euler_maclaurin(5e-3, COMM).z_value == pytest.approx(1.0, abs=1e-17)
    assert z_hurwitz(5e-3, COMM).z_value == pytest.approx(0.5, abs=1e-4)


def test_high_temperature_equivalence():
    for params in (COMM, DEFORMED):
        a = (1.0 + params.theta_bar) * (1.0 + params.theta_bar + params.eta_bar)
        for tau in (20.0, 30.0):
            zd = z_direct(tau, params, SumControl(rel_tol=1e-10, n_cap=10_000_000)).z_value
            ze = z_euler_maclaurin(tau, params).z_value
            assert abs(zd - ze) / zd <= 1e-3
            assert abs(zd - 2.0 * tau * tau / a) / zd <= 0.1


def test_mid_range_agreement():
    for params in (COMM, NCParams(0.1, 0.0), NCParams(0.0, 0.1), DEFORMED):
        for tau in np.linspace(0.5, 10.0, 20):
            zd = z_direct(float(tau), params).z_value
            ze = z_euler_maclaurin(float(tau), params).z_value
            assert abs(ze - zd) / zd <= 0.02


def test_deformation_suppresses_z_in_every_scheme():
    # strictly decreasing along each parameter direction at fixed temperature
    steps = (0.0, 0.1, 0.2, 0.3)
    for scheme in Scheme:
        for tau in (0.5, 1.0, 5.0):
            for eta in (0.0, 0.1):
                zs = [evaluate(scheme, tau, NCParams(t, eta)).z_value for t in steps]
                assert all(hi > lo for hi, lo in zip(zs, zs[1:]))
            for theta in (0.0, 0.1):
                zs = [evaluate(scheme, tau, NCParams(theta, e)).z_value for e in steps]
                assert all(hi > lo for hi, lo in zip(zs, zs[1:]))


# ----------------------------------------------------------------------
# Relative deviation of the two closed forms
# ----------------------------------------------------------------------

def test_relative_error_values():
    assert relative_error(1.0, COMM) == pytest.approx(0.431942175701, rel=1e-9)
    assert relative_error(100.0, COMM) == pytest.approx(0.499987531796, rel=1e-9)


def test_relative_error_saturates_at_half():
    for tau in (100.0, 1000.0):
        assert relative_error(tau, COMM) == pytest.approx(0.5, abs=5e-3)


def test_relative_error_interior_minimum():
    taus = np.linspace(0.1, 2.0, 381)
    errors = [relative_error(float(t), COMM) for t in taus]
    k = int(np.argmin(errors))
    assert 0 < k < len(taus) - 1                  # interior, not an endpoint
    assert 0.3 < taus[k] < 1.0
    assert errors[k] == pytest.approx(0.403887355098, abs=1e-6)


def test_relative_error_positive_on_domain():
    for tau in np.geomspace(0.05, 200.0, 15):
        assert relative_error(float(tau), COMM) > 0.0
        assert relative_error(float(tau), DEFORMED) > 0.0


def test_small_deformation_reduces_relative_error():
    nc = NCParams(0.001, 0.001)
    for tau in (1.0, 5.0, 20.0, 100.0):
        assert relative_error(tau, nc) < relative_error(tau, COMM)


# ----------------------------------------------------------------------
# N-particle scaling
# ----------------------------------------------------------------------

def test_n_particle_identity_case():
    ev = z_hurwitz(1.0, COMM)
    single = n_particle_log_z(ev, 1)
    assert single.log_z == pytest.approx(math.log(1.5), rel=1e-15)
    assert single.dlog_z == pytest.approx((4.0 / 3.0), rel=1e-15)


def test_n_particle_hundred_copies():
    ev = z_hurwitz(1.0, COMM)
    hundred = n_particle_log_z(ev, 100)
    assert hundred.log_z == pytest.approx(100.0 * math.log(1.5), rel=1e-15)
    assert hundred.log_z == pytest.approx(40.546510810816, rel=1e-12)


def test_n_particle_scaling_is_exactly_linear():
    ev = z_euler_maclaurin(2.0, DEFORMED)
    one = n_particle_log_z(ev, 1)
    fifty = n_particle_log_z(ev, 50)
    assert fifty.log_z == 50.0 * one.log_z
    assert fifty.dlog_z == 50.0 * one.dlog_z
    assert fifty.d2log_z == 50.0 * one.d2log_z


def test_n_particle_rejects_bad_input():
    ev = z_hurwitz(1.0, COMM)
    with pytest.raises(ValueError):
        n_particle_log_z(ev, 0)
    bad = PartitionEvaluation(scheme=Scheme.HURWITZ_ZETA, tau=1.0,
                              z_value=-2.0, dz_dtau=0.0, d2z_dtau2=0.0)
    with pytest.raises(ValueError):
        n_particle_log_z(bad, 1)
