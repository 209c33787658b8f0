"""Junction parameters, derived scales, and the exact two-phase potential.

Reduced units are used throughout the package: hbar = 1 and the charging
energy E_C = 1, so energies are in units of E_C, frequencies in E_C/hbar,
time in hbar/E_C, and phases in radians.

The junction has two tunneling channels with phases theta1, theta2.  The
dynamical coordinates are the center-of-mass phase ``theta`` (the weighted
average that couples to voltage and bias) and the relative phase ``psi``
(the out-of-phase combination that hosts the Josephson-Leggett mode).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import InvalidParameterError

__all__ = [
    "JunctionParams",
    "DerivedScales",
    "derive",
    "split_phases",
    "combine_phases",
    "potential",
    "potential_gradient",
    "potential_hessian",
]


@dataclass(frozen=True)
class JunctionParams:
    """Physical parameters of a two-channel Josephson junction.

    Parameters
    ----------
    ej1, ej2 : float
        Josephson coupling energies of the two tunneling channels (units E_C).
    ein : float
        Magnitude of the inter-band coupling energy inside the two-gap
        electrode (units E_C).
    alpha1, alpha2 : float
        Dimensionless charge-screening parameters of the two bands.
    kappa : int
        Sign of the inter-band coupling, +1 or -1 (gap symmetry).
    bias : float
        External bias current over the critical current, I_ex/I_c.
    """

    ej1: float
    ej2: float
    ein: float
    alpha1: float = 0.1
    alpha2: float = 0.1
    kappa: int = 1
    bias: float = 0.0

    def __post_init__(self):
        for name in ("ej1", "ej2", "ein"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise InvalidParameterError(f"{name} must be a finite positive energy, got {v!r}")
        for name in ("alpha1", "alpha2"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise InvalidParameterError(f"{name} must be finite and positive, got {v!r}")
        if self.kappa not in (1, -1):
            raise InvalidParameterError(f"kappa must be +1 or -1 exactly, got {self.kappa!r}")
        if not (isinstance(self.bias, (int, float)) and math.isfinite(self.bias) and self.bias >= 0):
            raise InvalidParameterError(f"bias must be finite and >= 0, got {self.bias!r}")

    @classmethod
    def from_ratios(cls, ej_over_ec: float, omega_ratio: float, j_ratio: float = 1.0,
                    alpha1: float = 0.1, alpha2: float = 0.1, kappa: int = 1,
                    bias: float = 0.0) -> "JunctionParams":
        """Build parameters from the sweep-style ratios.

        ``ej_over_ec`` is the total Josephson energy E_J1 + E_J2, ``j_ratio``
        the channel asymmetry j1/j2, and ``omega_ratio`` the plasma-to-Leggett
        frequency ratio omega_P/omega_JL, from which the inter-band coupling
        is solved.
        """
        if not (math.isfinite(ej_over_ec) and ej_over_ec > 0):
            raise InvalidParameterError(f"ej_over_ec must be positive, got {ej_over_ec!r}")
        if not (math.isfinite(omega_ratio) and omega_ratio > 0):
            raise InvalidParameterError(f"omega_ratio must be positive, got {omega_ratio!r}")
        if not (math.isfinite(j_ratio) and j_ratio > 0):
            raise InvalidParameterError(f"j_ratio must be positive, got {j_ratio!r}")
        ej1 = ej_over_ec * j_ratio / (1.0 + j_ratio)
        ej2 = ej_over_ec / (1.0 + j_ratio)
        # omega_JL = omega_P / ratio with omega_P^2 = 2(ej1+ej2)
        ein = ej_over_ec / ((alpha1 + alpha2) * omega_ratio * omega_ratio)
        return cls(ej1=ej1, ej2=ej2, ein=ein, alpha1=alpha1, alpha2=alpha2,
                   kappa=kappa, bias=bias)

    def replace(self, **changes) -> "JunctionParams":
        """Return a copy with the given fields replaced (revalidated)."""
        return replace(self, **changes)


@dataclass(frozen=True)
class DerivedScales:
    """Secondary quantities computed once from :class:`JunctionParams`.

    ``ej_sum`` (= E_J1 + E_J2) sets the plasma frequency and all escape-rate
    formulas; ``ej_tilt`` (= |E_J1 + kappa E_J2|) scales only the bias tilt of
    the exact potential.  The two coincide for kappa = +1.
    """

    lambda_cap: float
    ej_sum: float
    ej_tilt: float
    omega_p: float
    omega_p1: float
    omega_p2: float
    omega_jl: float
    m_cm: float
    m_rlt: float
    g_plus: float
    g_minus: float


def derive(params: JunctionParams) -> DerivedScales:
    """Compute all derived scales for a parameter set.

    The couplings of the quadratic relative-phase expansion are

        g_plus  = (E_J1/2E_J) a1^2 + (E_J2/2E_J) a2^2,
        g_minus = (E_J1/E_J) a1 - (E_J2/E_J) a2,

    with a_i = alpha_i/(alpha1+alpha2) and E_J = E_J1 + E_J2.  For a
    symmetric junction (ej1 = ej2, alpha1 = alpha2) these evaluate exactly
    to 1/8 and 0 in IEEE arithmetic.
    """
    s = params.alpha1 + params.alpha2
    a1 = params.alpha1 / s
    a2 = params.alpha2 / s
    ej_sum = params.ej1 + params.ej2
    g_plus = (params.ej1 / (2.0 * ej_sum)) * a1 * a1 + (params.ej2 / (2.0 * ej_sum)) * a2 * a2
    g_minus = (params.ej1 / ej_sum) * a1 - (params.ej2 / ej_sum) * a2
    return DerivedScales(
        lambda_cap=1.0 + params.alpha1 * params.alpha2 / s,
        ej_sum=ej_sum,
        ej_tilt=abs(params.ej1 + params.kappa * params.ej2),
        omega_p=math.sqrt(2.0 * ej_sum),
        omega_p1=math.sqrt(2.0 * params.ej1),
        omega_p2=math.sqrt(2.0 * params.ej2),
        omega_jl=math.sqrt(2.0 * s * params.ein),
        m_cm=0.5,
        m_rlt=1.0 / (2.0 * s),
        g_plus=g_plus,
        g_minus=g_minus,
    )


def split_phases(theta, psi, params: JunctionParams):
    """Map (theta, psi) to the per-channel phases (theta1, theta2)."""
    s = params.alpha1 + params.alpha2
    theta1 = theta + (params.alpha1 / s) * psi
    theta2 = theta - (params.alpha2 / s) * psi
    return theta1, theta2


def combine_phases(theta1, theta2, params: JunctionParams):
    """Map per-channel phases back to (theta, psi); inverse of split_phases."""
    s = params.alpha1 + params.alpha2
    theta = (params.alpha2 / s) * theta1 + (params.alpha1 / s) * theta2
    psi = theta1 - theta2
    return theta, psi


def potential(theta, psi, params: JunctionParams):
    """Exact tilted two-phase potential V(theta, psi).

    V = -E_J1 cos(theta1) - E_J2 cos(theta2) - kappa E_in cos(psi)
        - ej_tilt * bias * theta

    Accepts scalars or numpy arrays (broadcasting).  Angles are never
    wrapped; theta may grow without bound.
    """
    theta1, theta2 = split_phases(theta, psi, params)
    ej_tilt = abs(params.ej1 + params.kappa * params.ej2)
    return (-params.ej1 * np.cos(theta1)
            - params.ej2 * np.cos(theta2)
            - params.kappa * params.ein * np.cos(psi)
            - ej_tilt * params.bias * theta)


def potential_gradient(theta, psi, params: JunctionParams):
    """Analytic partials (dV/dtheta, dV/dpsi) of :func:`potential`."""
    s = params.alpha1 + params.alpha2
    a1 = params.alpha1 / s
    a2 = params.alpha2 / s
    theta1 = theta + a1 * psi
    theta2 = theta - a2 * psi
    s1 = np.sin(theta1)
    s2 = np.sin(theta2)
    ej_tilt = abs(params.ej1 + params.kappa * params.ej2)
    dv_dtheta = params.ej1 * s1 + params.ej2 * s2 - ej_tilt * params.bias
    dv_dpsi = params.ej1 * a1 * s1 - params.ej2 * a2 * s2 + params.kappa * params.ein * np.sin(psi)
    return dv_dtheta, dv_dpsi


def potential_hessian(theta: float, psi: float, params: JunctionParams) -> np.ndarray:
    """Analytic 2x2 Hessian of :func:`potential` at a point."""
    s = params.alpha1 + params.alpha2
    a1 = params.alpha1 / s
    a2 = params.alpha2 / s
    theta1 = theta + a1 * psi
    theta2 = theta - a2 * psi
    c1 = math.cos(theta1)
    c2 = math.cos(theta2)
    vtt = params.ej1 * c1 + params.ej2 * c2
    vtp = params.ej1 * a1 * c1 - params.ej2 * a2 * c2
    vpp = (params.ej1 * a1 * a1 * c1 + params.ej2 * a2 * a2 * c2
           + params.kappa * params.ein * math.cos(psi))
    return np.array([[vtt, vtp], [vtp, vpp]])
