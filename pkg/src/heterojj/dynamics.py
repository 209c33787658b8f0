"""Classical dynamics of the coupled phases: integration, equilibria, modes.

The equations of motion follow from the junction Lagrangian with kinetic
energy T = theta_dot^2/(4 Lambda) + psi_dot^2/(4 (alpha1+alpha2)) and the
exact potential of :mod:`heterojj.model`:

    theta_ddot = Lambda * (2 ej_tilt bias - w_P1^2 sin(theta1) - w_P2^2 sin(theta2))
    psi_ddot   = -kappa w_JL^2 sin(psi) - alpha1 w_P1^2 sin(theta1)
                                        + alpha2 w_P2^2 sin(theta2)

The bias drives only theta; psi has no source term, so the junction voltage
is carried entirely by the center-of-mass phase.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
import scipy.linalg

from . import _kernels, model
from .errors import InvalidParameterError, NoEquilibriumError, NonFiniteStateError
from .model import JunctionParams

__all__ = [
    "PhaseState",
    "Trajectory",
    "acceleration",
    "integrate",
    "equilibrium",
    "small_oscillation_frequencies",
    "reduced_voltage",
    "detect_switching",
]

DEFAULT_SWITCH_WINDOW = 2.0 * math.pi


@dataclass(frozen=True)
class PhaseState:
    """Instantaneous classical state (theta, psi, velocities, time)."""

    theta: float
    psi: float
    theta_dot: float
    psi_dot: float
    tau: float = 0.0

    def __post_init__(self):
        for name in ("theta", "psi", "theta_dot", "psi_dot", "tau"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidParameterError(f"PhaseState.{name} must be finite")


@dataclass(frozen=True)
class Trajectory:
    """Uniformly sampled trajectory with its parameter snapshot.

    Rows are spaced by ``dt * stride``; ``energy`` holds kinetic plus
    potential energy per sample.  Arrays are not copied; treat them as
    read-only.
    """

    tau: np.ndarray
    theta: np.ndarray
    psi: np.ndarray
    theta_dot: np.ndarray
    psi_dot: np.ndarray
    energy: np.ndarray
    params: JunctionParams
    dt: float
    stride: int = 1

    def __len__(self) -> int:
        return self.tau.size

    def state(self, i: int) -> PhaseState:
        """The i-th sample as a :class:`PhaseState`."""
        return PhaseState(float(self.theta[i]), float(self.psi[i]),
                          float(self.theta_dot[i]), float(self.psi_dot[i]),
                          float(self.tau[i]))


def _kernel_coeffs(params: JunctionParams) -> tuple:
    s = params.alpha1 + params.alpha2
    lam = 1.0 + params.alpha1 * params.alpha2 / s
    ej_tilt = abs(params.ej1 + params.kappa * params.ej2)
    return (lam,
            2.0 * params.ej1,
            2.0 * params.ej2,
            2.0 * ej_tilt * params.bias,
            params.kappa * 2.0 * s * params.ein,
            params.alpha1 / s,
            params.alpha2 / s,
            2.0 * params.alpha1 * params.ej1,
            2.0 * params.alpha2 * params.ej2)


def acceleration(state: PhaseState, params: JunctionParams) -> Tuple[float, float]:
    """Angular accelerations (theta_ddot, psi_ddot) at a state.

    Computed from the analytic potential gradient and the diagonal mass
    matrix, which is algebraically identical to the explicit sine form used
    inside the integration kernel.
    """
    dv_dtheta, dv_dpsi = model.potential_gradient(state.theta, state.psi, params)
    s = params.alpha1 + params.alpha2
    lam = 1.0 + params.alpha1 * params.alpha2 / s
    return -2.0 * lam * dv_dtheta, -2.0 * s * dv_dpsi


def integrate(initial: PhaseState, dt: float, n_steps: int,
              params: JunctionParams, stride: int = 1) -> Trajectory:
    """Fixed-step 4th-order integration of the coupled phase equations.

    Parameters
    ----------
    initial : PhaseState
        Starting state; its ``tau`` offsets the output time axis.
    dt : float
        Time step (units hbar/E_C).  Plasma periods are O(1) in reduced
        units, so dt = 1e-3 resolves them comfortably.
    n_steps : int
        Number of steps to take.
    stride : int
        Store every ``stride``-th step (the initial state is always stored).

    Raises
    ------
    NonFiniteStateError
        If any step produces a non-finite state (reports the step index).
    """
    if not (dt > 0 and math.isfinite(dt)):
        raise InvalidParameterError(f"dt must be finite and positive, got {dt!r}")
    if n_steps < 1:
        raise InvalidParameterError(f"n_steps must be >= 1, got {n_steps!r}")
    if stride < 1:
        raise InvalidParameterError(f"stride must be >= 1, got {stride!r}")
    coeffs = _kernel_coeffs(params)
    out = np.empty((n_steps // stride + 1, 4))
    bad_step = _kernels.rk4_step_loop(initial.theta, initial.psi,
                                      initial.theta_dot, initial.psi_dot,
                                      dt, n_steps, stride, *coeffs, out)
    if bad_step >= 0:
        raise NonFiniteStateError(int(bad_step))
    tau = initial.tau + (dt * stride) * np.arange(out.shape[0])
    theta, psi = out[:, 0], out[:, 1]
    theta_dot, psi_dot = out[:, 2], out[:, 3]
    s = params.alpha1 + params.alpha2
    lam = coeffs[0]
    kinetic = theta_dot ** 2 / (4.0 * lam) + psi_dot ** 2 / (4.0 * s)
    energy = kinetic + model.potential(theta, psi, params)
    return Trajectory(tau=tau, theta=theta, psi=psi, theta_dot=theta_dot,
                      psi_dot=psi_dot, energy=energy, params=params,
                      dt=dt, stride=stride)


def equilibrium(params: JunctionParams, tol: float = 1e-12,
                max_iter: int = 200) -> Tuple[float, float]:
    """Static minimum (theta*, psi*) of the exact potential.

    Safeguarded Newton iteration on the analytic gradient starting from
    (asin(min(bias, 1)), 0): indefinite Hessians are shifted positive
    definite for the step and the step length is backtracked until the
    potential decreases, so strongly asymmetric junctions cannot trap the
    iteration in a cycle.  Near the solution this is plain Newton and the
    gradient norm is polished below ``tol`` (widened to the rounding floor
    of the energy scale, which only matters above E_J ~ 10^3 E_C).

    Raises :class:`NoEquilibriumError` when the iteration runs off the
    washboard, stalls, or lands on a non-minimum stationary point - the
    signatures of a bias at or above the classical critical tilt.
    """
    energy_scale = params.ej1 + params.ej2 + params.ein
    floor = 8.0 * np.finfo(float).eps * energy_scale * max(1.0, params.bias)
    goal = max(tol, floor)
    theta_start = math.asin(min(params.bias, 1.0))
    x = np.array([theta_start, 0.0])
    value = float(model.potential(x[0], x[1], params))
    converged = False
    for _ in range(max_iter):
        grad = np.array(model.potential_gradient(x[0], x[1], params))
        if np.linalg.norm(grad) < goal:
            converged = True
            break
        hess = model.potential_hessian(x[0], x[1], params)
        lam_min = float(np.linalg.eigvalsh(hess)[0])
        if lam_min <= 0.0:
            hess = hess + (abs(lam_min) + 1e-9 * energy_scale) * np.eye(2)
        step = np.linalg.solve(hess, -grad)
        # The tilt makes V unbounded below in +theta, so an uncapped step from
        # a near-flat Hessian could leap down the washboard and still pass the
        # decrease test; one period per iteration keeps the descent local.
        step_norm = float(np.linalg.norm(step))
        if step_norm > math.pi:
            step = step * (math.pi / step_norm)
        slope = float(grad @ step)
        if abs(slope) <= 1e-12 * max(abs(value), 1.0):
            # Predicted decrease is below the rounding resolution of V:
            # inside the quadratic basin, polish with full Newton steps.
            scale = 1.0
        else:
            scale = 1.0
            while scale > 1e-12:
                trial = x + scale * step
                trial_value = float(model.potential(trial[0], trial[1], params))
                if trial_value <= value + 1e-4 * scale * slope:
                    break
                scale *= 0.5
            else:
                raise NoEquilibriumError(
                    f"descent stalled at bias={params.bias} before reaching "
                    f"gradient norm {goal}")
        x = x + scale * step
        value = float(model.potential(x[0], x[1], params))
        # theta running away means the tilt has no local minimum left; psi may
        # legitimately travel far (its landscape has wavelength ~2 pi/alpha_i).
        if not np.all(np.isfinite(x)) or abs(x[0] - theta_start) > 6.0 * math.pi:
            raise NoEquilibriumError(
                f"iteration ran down the washboard at bias={params.bias} "
                "(no static solution below the critical tilt)")
    if not converged:
        raise NoEquilibriumError(
            f"Newton iteration did not reach gradient norm {goal} at bias={params.bias}")
    eigs = np.linalg.eigvalsh(model.potential_hessian(x[0], x[1], params))
    if eigs[0] <= 0.0:
        raise NoEquilibriumError(
            f"stationary point at bias={params.bias} is not a minimum "
            "(bias at or above the classical critical tilt)")
    return float(x[0]), float(x[1])


def small_oscillation_frequencies(params: JunctionParams) -> Tuple[float, float]:
    """Normal-mode angular frequencies about the equilibrium, ascending.

    Solves the generalized eigenproblem H v = w^2 M v with H the potential
    Hessian and M = diag(1/(2 Lambda), 1/(2 (alpha1+alpha2))).  For a
    symmetric junction at zero bias the modes decouple into a pure
    center-of-mass (plasma) mode and a pure relative-phase (Leggett) mode.
    """
    theta_star, psi_star = equilibrium(params)
    hess = model.potential_hessian(theta_star, psi_star, params)
    s = params.alpha1 + params.alpha2
    lam = 1.0 + params.alpha1 * params.alpha2 / s
    mass = np.diag([1.0 / (2.0 * lam), 1.0 / (2.0 * s)])
    w2 = scipy.linalg.eigh(hess, mass, eigvals_only=True)
    if w2[0] <= 0.0:
        raise NoEquilibriumError("equilibrium is not stable (negative mode)")
    return float(math.sqrt(w2[0])), float(math.sqrt(w2[1]))


def reduced_voltage(state: PhaseState, params: JunctionParams) -> float:
    """Reduced junction voltage 2 e v / hbar = theta_dot / Lambda.

    Only the center-of-mass phase couples to the voltage; relative-phase
    motion contributes nothing.
    """
    s = params.alpha1 + params.alpha2
    lam = 1.0 + params.alpha1 * params.alpha2 / s
    return state.theta_dot / lam


def detect_switching(trajectory: Trajectory,
                     window: float = DEFAULT_SWITCH_WINDOW) -> Optional[float]:
    """Earliest tau at which theta has advanced more than ``window`` from
    its starting value, or None if the phase stays trapped.

    The default window of one full washboard period (2 pi) unambiguously
    signals the running (voltage) state.
    """
    if not (window > 0):
        raise InvalidParameterError(f"window must be positive, got {window!r}")
    advance = np.abs(trajectory.theta - trajectory.theta[0])
    hits = np.nonzero(advance > window)[0]
    if hits.size == 0:
        return None
    return float(trajectory.tau[hits[0]])
