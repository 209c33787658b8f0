import math

import numpy as np
import pytest

from heterojj import (InvalidParameterError, JunctionParams, NoEquilibriumError,
                      NonFiniteStateError, PhaseState, acceleration, derive,
                      detect_switching, equilibrium, integrate,
                      potential_gradient, reduced_voltage,
                      small_oscillation_frequencies)
from heterojj import _kernels
from heterojj.dynamics import _kernel_coeffs
from helpers import dominant_angular_frequency, random_params

SYMMETRIC = JunctionParams(ej1=50.0, ej2=50.0, ein=125.0, alpha1=0.1, alpha2=0.1)


# --------------------------------------------------------------- acceleration

def test_acceleration_at_rest_no_bias():
    assert acceleration(PhaseState(0.0, 0.0, 0.0, 0.0), SYMMETRIC) == (0.0, 0.0)


def test_acceleration_at_origin_with_bias():
    p = SYMMETRIC.replace(bias=0.5)
    scales = derive(p)
    tdd, pdd = acceleration(PhaseState(0.0, 0.0, 0.0, 0.0), p)
    assert tdd == pytest.approx(scales.lambda_cap * scales.omega_p ** 2 * 0.5, rel=1e-14)
    assert pdd == 0.0


def test_acceleration_matches_channel_frequency_form():
    # Independent re-derivation: Lambda*(2 ej_tilt b - w1^2 sin t1 - w2^2 sin t2)
    # and -kappa w_JL^2 sin psi - a1 w1^2 sin t1 + a2 w2^2 sin t2.
    rng = np.random.default_rng(99)
    for _ in range(25):
        p = random_params(rng, bias_range=(0.0, 0.9), kappa_choices=(1, -1))
        s = derive(p)
        theta = float(rng.uniform(-3, 3))
        psi = float(rng.uniform(-3, 3))
        state = PhaseState(theta, psi, 0.0, 0.0)
        asum = p.alpha1 + p.alpha2
        t1 = theta + (p.alpha1 / asum) * psi
        t2 = theta - (p.alpha2 / asum) * psi
        expected_tdd = s.lambda_cap * (2.0 * s.ej_tilt * p.bias
                                       - s.omega_p1 ** 2 * math.sin(t1)
                                       - s.omega_p2 ** 2 * math.sin(t2))
        expected_pdd = (-p.kappa * s.omega_jl ** 2 * math.sin(psi)
                        - p.alpha1 * s.omega_p1 ** 2 * math.sin(t1)
                        + p.alpha2 * s.omega_p2 ** 2 * math.sin(t2))
        tdd, pdd = acceleration(state, p)
        assert tdd == pytest.approx(expected_tdd, rel=1e-12, abs=1e-10)
        assert pdd == pytest.approx(expected_pdd, rel=1e-12, abs=1e-10)


# ----------------------------------------------------------------- integrate

def test_integrate_argument_validation():
    state = PhaseState(0.0, 0.0, 0.0, 0.0)
    with pytest.raises(InvalidParameterError):
        integrate(state, 0.0, 10, SYMMETRIC)
    with pytest.raises(InvalidParameterError):
        integrate(state, 1e-3, 0, SYMMETRIC)
    with pytest.raises(InvalidParameterError):
        integrate(state, 1e-3, 10, SYMMETRIC, stride=0)


def test_phase_state_rejects_non_finite():
    with pytest.raises(InvalidParameterError):
        PhaseState(math.inf, 0.0, 0.0, 0.0)


def test_energy_conservation_small_oscillation():
    traj = integrate(PhaseState(0.1, 0.0, 0.0, 0.0), 1e-3, 10000, SYMMETRIC)
    drift = np.max(np.abs(traj.energy - traj.energy[0])) / abs(traj.energy[0])
    assert drift < 1e-8


def test_symmetric_subspace_stays_on_axis():
    traj = integrate(PhaseState(0.3, 0.0, 0.0, 0.0), 1e-3, 20000, SYMMETRIC)
    assert np.max(np.abs(traj.psi)) < 1e-10
    assert np.max(np.abs(traj.psi_dot)) < 1e-10


def test_trajectory_sampling_uniform_and_increasing():
    traj = integrate(PhaseState(0.05, 0.02, 0.0, 0.0), 1e-3, 1000, SYMMETRIC, stride=7)
    steps = np.diff(traj.tau)
    assert np.all(steps > 0)
    assert np.max(np.abs(steps - 7e-3)) < 1e-12
    assert len(traj) == 1000 // 7 + 1


def test_stride_thins_the_same_run():
    full = integrate(PhaseState(0.05, 0.02, 0.0, 0.0), 1e-3, 1000, SYMMETRIC)
    thin = integrate(PhaseState(0.05, 0.02, 0.0, 0.0), 1e-3, 1000, SYMMETRIC, stride=10)
    assert np.array_equal(thin.theta, full.theta[::10])
    assert np.array_equal(thin.psi_dot, full.psi_dot[::10])


def test_trajectory_state_accessor():
    traj = integrate(PhaseState(0.05, 0.0, 0.0, 0.0), 1e-3, 100, SYMMETRIC)
    state = traj.state(3)
    assert state.tau == pytest.approx(3e-3, rel=1e-12)
    assert state.theta == traj.theta[3]


def test_non_finite_abort_reports_step():
    # Kernel coefficients overflow (2*ej1 -> inf), so step 1 is non-finite.
    p = JunctionParams(ej1=1e308, ej2=1e308, ein=1.0)
    with pytest.raises(NonFiniteStateError) as info:
        integrate(PhaseState(0.1, 0.0, 0.0, 0.0), 1e-3, 100, p)
    assert info.value.step == 1


def test_fourth_order_convergence():
    p = SYMMETRIC.replace(bias=0.3)
    state = PhaseState(0.4, 0.1, 0.0, 0.0)

    def end_state(dt, n):
        t = integrate(state, dt, n, p)
        return np.array([t.theta[-1], t.psi[-1], t.theta_dot[-1], t.psi_dot[-1]])

    reference = end_state(1.25e-4, 16000)
    errors = [float(np.linalg.norm(end_state(dt, n) - reference))
              for dt, n in ((4e-3, 500), (2e-3, 1000), (1e-3, 2000))]
    for coarse, fine in zip(errors, errors[1:]):
        order = math.log2(coarse / fine)
        assert 3.5 < order < 4.5


def test_backend_paths_agree():
    if _kernels.rk4_numba is None:
        pytest.skip("numba unavailable")
    coeffs = _kernel_coeffs(SYMMETRIC.replace(bias=0.2))
    out_py = np.empty((2001, 4))
    out_nb = np.empty((2001, 4))
    assert _kernels.rk4_python(0.3, 0.1, 0.0, 0.0, 1e-3, 2000, 1, *coeffs, out_py) == -1
    assert _kernels.rk4_numba(0.3, 0.1, 0.0, 0.0, 1e-3, 2000, 1, *coeffs, out_nb) == -1
    assert float(np.max(np.abs(out_py - out_nb))) < 1e-12


# ------------------------------------------------------------------ equilibria

def test_equilibrium_zero_bias():
    theta, psi = equilibrium(SYMMETRIC)
    assert theta == 0.0
    assert psi == 0.0


def test_equilibrium_symmetric_half_bias():
    theta, psi = equilibrium(SYMMETRIC.replace(bias=0.5))
    assert theta == pytest.approx(math.asin(0.5), rel=1e-12)
    assert psi == pytest.approx(0.0, abs=1e-13)


def test_equilibrium_asymmetric_residual():
    p = JunctionParams(ej1=70.0, ej2=30.0, ein=80.0, alpha1=0.15, alpha2=0.07,
                       kappa=1, bias=0.6)
    theta, psi = equilibrium(p)
    residual = np.linalg.norm(potential_gradient(theta, psi, p))
    assert residual < 1e-12
    assert psi != 0.0  # asymmetry pulls the relative phase off the axis


def test_equilibrium_above_critical_tilt():
    with pytest.raises(NoEquilibriumError):
        equilibrium(SYMMETRIC.replace(bias=1.2))


# ------------------------------------------------------------- normal modes

def test_mode_frequencies_symmetric_zero_bias():
    p = SYMMETRIC
    scales = derive(p)
    f_low, f_high = small_oscillation_frequencies(p)
    # decoupled modes: theta at sqrt(Lambda*2EJ), psi at the Leggett frequency
    # stiffened by the channel curvature 2(alpha1+alpha2)*2EJ*g_plus
    assert f_high == pytest.approx(math.sqrt(1.05 * 200.0), rel=1e-12)
    psi_sq = scales.omega_jl ** 2 + 2.0 * (p.alpha1 + p.alpha2) * 2.0 * scales.ej_sum * scales.g_plus
    assert f_low == pytest.approx(math.sqrt(psi_sq), rel=1e-12)


def test_mode_frequencies_positive_when_equilibrium_exists():
    # Strongly asymmetric junctions can lose their connected minimum below
    # bias = 1; wherever one exists, both mode frequencies must be positive.
    rng = np.random.default_rng(42)
    found = 0
    for _ in range(40):
        p = random_params(rng, bias_range=(0.0, 0.8))
        try:
            f_low, f_high = small_oscillation_frequencies(p)
        except NoEquilibriumError:
            continue
        found += 1
        assert 0.0 < f_low <= f_high
    assert found >= 20


def test_mode_frequencies_propagate_no_equilibrium():
    with pytest.raises(NoEquilibriumError):
        small_oscillation_frequencies(SYMMETRIC.replace(bias=1.5))


def test_fft_matches_linearization():
    f_low, f_high = small_oscillation_frequencies(SYMMETRIC)
    n, dt = 2 ** 17, 1e-3
    theta_run = integrate(PhaseState(1e-3, 0.0, 0.0, 0.0), dt, n, SYMMETRIC)
    psi_run = integrate(PhaseState(0.0, 1e-3, 0.0, 0.0), dt, n, SYMMETRIC)
    measured_high = dominant_angular_frequency(theta_run.theta, dt)
    measured_low = dominant_angular_frequency(psi_run.psi, dt)
    assert abs(measured_high - f_high) / f_high < 0.01
    assert abs(measured_low - f_low) / f_low < 0.01


# ------------------------------------------------------------------- voltage

def test_reduced_voltage():
    assert reduced_voltage(PhaseState(0.3, 0.1, 0.0, 0.0), SYMMETRIC) == 0.0
    assert reduced_voltage(PhaseState(0.0, 0.0, 2.1, 0.0), SYMMETRIC) == pytest.approx(2.0, rel=1e-15)
    # relative-phase motion generates no junction voltage
    assert reduced_voltage(PhaseState(0.0, 1.0, 0.0, 5.0), SYMMETRIC) == 0.0


# ----------------------------------------------------------------- switching

def test_no_switching_for_trapped_oscillation():
    traj = integrate(PhaseState(0.1, 0.0, 0.0, 0.0), 1e-3, 20000, SYMMETRIC)
    assert detect_switching(traj) is None


def test_switching_above_critical_bias():
    p = SYMMETRIC.replace(bias=1.2)
    traj = integrate(PhaseState(0.0, 0.0, 0.0, 0.0), 1e-3, 20000, p)
    tau = detect_switching(traj)
    assert tau is not None
    assert 0.0 < tau < traj.tau[-1]


def test_switching_time_decreases_with_bias():
    taus = []
    for bias in (1.05, 1.1, 1.2, 1.4):
        p = SYMMETRIC.replace(bias=bias)
        traj = integrate(PhaseState(0.0, 0.0, 0.0, 0.0), 1e-3, 40000, p)
        tau = detect_switching(traj)
        assert tau is not None
        taus.append(tau)
    assert all(a > b for a, b in zip(taus, taus[1:]))


def test_switching_window_validation():
    traj = integrate(PhaseState(0.1, 0.0, 0.0, 0.0), 1e-3, 10, SYMMETRIC)
    with pytest.raises(InvalidParameterError):
        detect_switching(traj, window=0.0)
