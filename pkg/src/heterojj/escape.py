"""Zero-point renormalization of the washboard barrier and escape rates.

At zero temperature the quantized relative-phase (Josephson-Leggett) mode
has ground-state variance <psi^2> = (alpha1+alpha2)/omega_JL.  Treating the
quadratic coupling g_plus E_J psi^2 cos(theta) in mean field renormalizes
the center-of-mass washboard to

    V_eff(theta) = -E_J [ (1 - eps) cos(theta) + bias * theta ],
    eps = g_plus <psi^2>,

which lowers the barrier and enhances the tunneling escape rate.  The rate
is evaluated in the cubic-barrier instanton approximation,

    Gamma = 12 w(I) sqrt(3 V0 / (2 pi w(I))) exp(-36 V0 / (5 w(I))),

with w(I) = omega_P [(1-eps)^2 - I^2]^(1/4), (1-eps) sin(theta0) = I and
V0 = w(I)^2 cot^2(theta0) / 3.  All rates are carried as natural logs to
stay overflow-safe at large E_J/E_C.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .errors import InvalidAxisError, InvalidParameterError, NoBarrierError
from .model import JunctionParams, derive

__all__ = [
    "FluctuationRenorm",
    "EscapeResult",
    "AxisSpec",
    "SweepGrid",
    "zero_point_variance",
    "epsilon",
    "effective_potential",
    "barrier_params",
    "escape_rate_ln",
    "enhancement_ratio_ln",
    "sweep_grid",
]

# Above this value the psi^2 truncation of the interaction is itself suspect.
EPSILON_STRAIN_THRESHOLD = 0.2

AXIS_NAMES = ("bias", "omega_ratio", "ej_over_ec", "alpha")


@dataclass(frozen=True)
class FluctuationRenorm:
    """Zero-point variance of the relative phase and the barrier shift eps.

    ``epsilon`` is g_plus * <psi^2>; ``epsilon_from_ratio`` is the
    equivalent frequency-ratio form (g_plus/sqrt(2)) (alpha1+alpha2)
    (omega_P/omega_JL) sqrt(1/E_J) - the two are algebraically identical and
    both are kept as a cross-check.  ``valid`` is False once eps >= 1 (the
    renormalization wipes out the barrier); ``strained`` marks eps > 0.2
    where the small-psi expansion is stretched.
    """

    psi_variance: float
    epsilon: float
    epsilon_from_ratio: float
    valid: bool
    strained: bool


@dataclass(frozen=True)
class EscapeResult:
    """Barrier geometry and log escape rate for one parameter point."""

    omega_p_i: float
    theta0: float
    v0: float
    exponent_b: float
    ln_prefactor: float
    ln_gamma: float
    eps: float


@dataclass(frozen=True)
class AxisSpec:
    """One sweep axis: parameter name and an inclusive linear range."""

    name: str
    start: float
    stop: float
    count: int

    def __post_init__(self):
        if self.name not in AXIS_NAMES:
            raise InvalidAxisError(
                f"unknown axis name {self.name!r}; expected one of {AXIS_NAMES}")
        if self.count < 2:
            raise InvalidAxisError(f"axis {self.name!r} needs count >= 2, got {self.count}")
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            raise InvalidAxisError(f"axis {self.name!r} range must be finite")
        if not (self.start < self.stop):
            raise InvalidAxisError(
                f"axis {self.name!r} range is inverted or empty: "
                f"[{self.start}, {self.stop}]")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.count)


@dataclass(frozen=True)
class SweepGrid:
    """Rectangular grid of ln(Gamma/Gamma0) over two parameter axes.

    ``values[i, j]`` corresponds to axis1 value i, axis2 value j (row-major).
    Cells without a barrier (bias >= 1 - eps) or with invalid parameters are
    NaN with ``valid[i, j]`` False; neighbors are unaffected.
    """

    axis1: AxisSpec
    axis2: AxisSpec
    values: np.ndarray
    valid: np.ndarray
    base: JunctionParams


def zero_point_variance(params: JunctionParams) -> float:
    """Ground-state variance <psi^2> of the relative phase at T = 0.

    Equals (alpha1+alpha2)/omega_JL in reduced units, i.e.
    1/(2 m_rlt omega_JL) for the harmonic Leggett well.  The mean <psi>
    vanishes at T = 0.
    """
    scales = derive(params)
    return (params.alpha1 + params.alpha2) / scales.omega_jl


def epsilon(params: JunctionParams) -> FluctuationRenorm:
    """Barrier renormalization eps = g_plus <psi^2>, with its dual form."""
    scales = derive(params)
    var = (params.alpha1 + params.alpha2) / scales.omega_jl
    eps = scales.g_plus * var
    eps_ratio = (scales.g_plus / math.sqrt(2.0)) * (params.alpha1 + params.alpha2) \
        * (scales.omega_p / scales.omega_jl) * math.sqrt(1.0 / scales.ej_sum)
    return FluctuationRenorm(psi_variance=var, epsilon=eps,
                             epsilon_from_ratio=eps_ratio,
                             valid=eps < 1.0,
                             strained=eps > EPSILON_STRAIN_THRESHOLD)


def effective_potential(theta, params: JunctionParams, eps: float):
    """Renormalized tilted washboard V_eff(theta) for the center-of-mass phase.

    With eps = 0 this is the bare one-dimensional washboard
    -E_J (cos(theta) + bias*theta) with E_J = ej1 + ej2.  Accepts scalar or
    array theta.
    """
    if not (0.0 <= eps < 1.0):
        raise InvalidParameterError(
            f"eps must satisfy 0 <= eps < 1 (barrier wiped out otherwise), got {eps!r}")
    ej_sum = params.ej1 + params.ej2
    return -ej_sum * ((1.0 - eps) * np.cos(theta) + params.bias * theta)


def barrier_params(params: JunctionParams, eps: float) -> Tuple[float, float, float]:
    """Cubic-barrier geometry (theta0, omega_p_i, v0) of the renormalized well.

    theta0 solves (1-eps) sin(theta0) = bias; omega_p_i is the bias- and
    eps-softened plasma frequency omega_P [(1-eps)^2 - bias^2]^(1/4); v0
    is the barrier height omega_p_i^2 cot^2(theta0)/3 (here evaluated as
    omega_p_i^2 u / (3 bias^2) with u = (1-eps)^2 - bias^2, the same closed
    form without re-entering trig functions).

    Raises NoBarrierError when bias >= 1 - eps (classical running state).
    The chain requires bias > 0: the cubic expansion degenerates in the
    untilted well.
    """
    if not (0.0 <= eps < 1.0):
        raise InvalidParameterError(
            f"eps must satisfy 0 <= eps < 1, got {eps!r}")
    if params.bias <= 0.0:
        raise InvalidParameterError(
            "the cubic-barrier chain requires bias > 0 (the untilted well has no "
            "cubic exit path)")
    if params.bias >= 1.0 - eps:
        raise NoBarrierError(
            f"no barrier: bias={params.bias} >= 1 - eps = {1.0 - eps} "
            "(classical running state)")
    scales = derive(params)
    theta0 = math.asin(params.bias / (1.0 - eps))
    # factored form of (1-eps)^2 - bias^2: no cancellation near critical tilt
    u = (1.0 - eps - params.bias) * (1.0 - eps + params.bias)
    omega_p_i = scales.omega_p * u ** 0.25
    v0 = omega_p_i * omega_p_i * u / (3.0 * params.bias * params.bias)
    return theta0, omega_p_i, v0


def escape_rate_ln(params: JunctionParams, eps: float) -> EscapeResult:
    """Log escape rate ln(Gamma) of the cubic-barrier instanton formula.

    Assembled entirely in log space,

        ln(Gamma) = ln 12 + ln w(I) + (1/2) ln(3 V0 / (2 pi w(I)))
                    - 36 V0 / (5 w(I)),

    so the bare exponent is never exponentiated (rates at large E_J/E_C
    would overflow a double).
    """
    theta0, omega_p_i, v0 = barrier_params(params, eps)
    exponent_b = 36.0 * v0 / (5.0 * omega_p_i)
    ln_prefactor = (math.log(12.0) + math.log(omega_p_i)
                    + 0.5 * math.log(3.0 * v0 / (2.0 * math.pi * omega_p_i)))
    return EscapeResult(omega_p_i=omega_p_i, theta0=theta0, v0=v0,
                        exponent_b=exponent_b, ln_prefactor=ln_prefactor,
                        ln_gamma=ln_prefactor - exponent_b, eps=eps)


def enhancement_ratio_ln(params: JunctionParams,
                         eps_override: Optional[float] = None) -> float:
    """ln(Gamma/Gamma0): corrected minus bare log escape rate.

    Gamma0 uses the same parameters with eps forced to zero.  By default eps
    is computed from the parameters; ``eps_override`` substitutes a fixed
    value instead (eps_override = 0 gives exactly 0.0).
    """
    eps = epsilon(params).epsilon if eps_override is None else eps_override
    corrected = escape_rate_ln(params, eps)
    bare = escape_rate_ln(params, 0.0)
    return corrected.ln_gamma - bare.ln_gamma


def _apply_axis_value(params: JunctionParams, name: str, value: float) -> JunctionParams:
    if name == "bias":
        return params.replace(bias=value)
    if name == "alpha":
        return params.replace(alpha1=value, alpha2=value)
    if name == "ej_over_ec":
        ej_sum = params.ej1 + params.ej2
        f1 = params.ej1 / ej_sum
        f2 = params.ej2 / ej_sum
        return params.replace(ej1=value * f1, ej2=value * f2)
    if name == "omega_ratio":
        s = params.alpha1 + params.alpha2
        ein = (params.ej1 + params.ej2) / (s * value * value)
        return params.replace(ein=ein)
    raise InvalidAxisError(f"unknown axis name {name!r}")


def _cell_params(base: JunctionParams, assignments) -> JunctionParams:
    # omega_ratio resolves ein from the *final* ej and alpha, so apply it last.
    ordered = sorted(assignments, key=lambda kv: kv[0] == "omega_ratio")
    p = base
    for name, value in ordered:
        p = _apply_axis_value(p, name, float(value))
    return p


def sweep_grid(base: JunctionParams, axis1: AxisSpec, axis2: AxisSpec,
               eps_override: Optional[float] = None) -> SweepGrid:
    """Evaluate ln(Gamma/Gamma0) over a rectangular parameter grid.

    Cells where the parameters are invalid or the barrier is gone are
    flagged invalid (NaN value) without affecting their neighbors.  The
    result matrix is assembled in deterministic row-major order.
    """
    if axis1.name == axis2.name:
        raise InvalidAxisError(f"axes must differ, both are {axis1.name!r}")
    vals1 = axis1.values()
    vals2 = axis2.values()
    values = np.full((axis1.count, axis2.count), np.nan)
    valid = np.zeros((axis1.count, axis2.count), dtype=bool)
    for i, v1 in enumerate(vals1):
        for j, v2 in enumerate(vals2):
            try:
                cell = _cell_params(base, ((axis1.name, v1), (axis2.name, v2)))
                values[i, j] = enhancement_ratio_ln(cell, eps_override)
                valid[i, j] = bool(np.isfinite(values[i, j]))
            except (InvalidParameterError, NoBarrierError):
                pass
    return SweepGrid(axis1=axis1, axis2=axis2, values=values, valid=valid, base=base)
