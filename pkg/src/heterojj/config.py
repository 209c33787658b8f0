"""Run configuration: flat key=value files with [junction] and [run] sections.

The junction block accepts either the direct energies (ej1, ej2, ein) or the
sweep-style ratios (ej_over_ec, omega_ratio, and optionally j_ratio) -
exactly one of the two styles.  alpha1, alpha2, kappa, and bias are common
to both and default to the symmetric reference point alpha = 0.1,
kappa = +1, bias = 0.95.

Example::

    [junction]
    ej_over_ec = 100      # E_J1 + E_J2, units E_C
    omega_ratio = 2       # omega_P / omega_JL
    bias = 0.95

    [run]
    dt = 1e-3
    n_steps = 10000
    axis1 = bias:0.90:0.99:50
    axis2 = omega_ratio:0.5:5:50
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, field
from typing import Optional

from .errors import ConfigError, InvalidAxisError
from .escape import AxisSpec
from .model import JunctionParams

__all__ = ["RunConfig", "default_params", "default_config", "load_config", "parse_axis"]

_DIRECT_KEYS = ("ej1", "ej2", "ein")
_RATIO_KEYS = ("ej_over_ec", "omega_ratio", "j_ratio")
_SHARED_KEYS = ("alpha1", "alpha2", "kappa", "bias")
_RUN_KEYS = ("dt", "n_steps", "stride", "theta0", "psi0", "theta_dot0",
             "psi_dot0", "window", "axis1", "axis2", "out",
             "epsilon_override", "spectrum_points", "spectrum_levels",
             "bounce_tol")

_SHARED_DEFAULTS = {"alpha1": 0.1, "alpha2": 0.1, "kappa": 1.0, "bias": 0.95}


def default_params() -> JunctionParams:
    """Reference point: E_J/E_C = 100, omega_P/omega_JL = 2, symmetric
    channels, alpha = 0.1, bias = 0.95."""
    return JunctionParams.from_ratios(100.0, 2.0, 1.0, 0.1, 0.1, 1, 0.95)


@dataclass(frozen=True)
class RunConfig:
    """Validated junction parameters plus command options."""

    params: JunctionParams
    dt: float = 1e-3
    n_steps: int = 10000
    stride: int = 1
    theta0: float = 0.0
    psi0: float = 0.0
    theta_dot0: float = 0.0
    psi_dot0: float = 0.0
    window: float = 2.0 * math.pi
    axis1: AxisSpec = field(default_factory=lambda: AxisSpec("bias", 0.90, 0.99, 50))
    axis2: AxisSpec = field(default_factory=lambda: AxisSpec("omega_ratio", 0.5, 5.0, 50))
    out: Optional[str] = None
    epsilon_override: Optional[float] = None
    spectrum_points: int = 2000
    spectrum_levels: int = 7
    bounce_tol: float = 1e-10


def default_config() -> RunConfig:
    return RunConfig(params=default_params())


def parse_axis(text: str) -> AxisSpec:
    """Parse 'name:start:stop:count' into an :class:`AxisSpec`."""
    parts = text.split(":")
    if len(parts) != 4:
        raise InvalidAxisError(
            f"axis spec {text!r} must have the form name:start:stop:count")
    name = parts[0].strip()
    try:
        start = float(parts[1])
        stop = float(parts[2])
        count = int(parts[3])
    except ValueError as exc:
        raise InvalidAxisError(f"axis spec {text!r}: {exc}") from exc
    return AxisSpec(name, start, stop, count)


def _get_float(section, key: str, section_name: str) -> float:
    raw = section[key]
    try:
        return float(raw)
    except ValueError as exc:
        raise ConfigError(
            f"key '{key}' in [{section_name}] is not a number: {raw!r}") from exc


def _get_int(section, key: str, section_name: str) -> int:
    raw = section[key]
    try:
        return int(raw)
    except ValueError as exc:
        raise ConfigError(
            f"key '{key}' in [{section_name}] is not an integer: {raw!r}") from exc


def _junction_params(section) -> JunctionParams:
    keys = set(section.keys())
    unknown = keys - set(_DIRECT_KEYS) - set(_RATIO_KEYS) - set(_SHARED_KEYS)
    if unknown:
        raise ConfigError(f"unknown key '{sorted(unknown)[0]}' in [junction]")
    direct = keys & set(_DIRECT_KEYS)
    ratio = keys & set(_RATIO_KEYS)
    if direct and ratio:
        raise ConfigError(
            "exactly one parameterization style allowed in [junction]: "
            f"found direct keys {sorted(direct)} and ratio keys {sorted(ratio)}")
    shared = dict(_SHARED_DEFAULTS)
    for key in _SHARED_KEYS:
        if key in keys:
            shared[key] = _get_float(section, key, "junction")
    kappa = shared.pop("kappa")
    kappa = int(kappa) if float(kappa).is_integer() else kappa
    if direct:
        for key in _DIRECT_KEYS:
            if key not in keys:
                raise ConfigError(f"missing key '{key}' in [junction] "
                                  "(direct style needs ej1, ej2, ein)")
        return JunctionParams(ej1=_get_float(section, "ej1", "junction"),
                              ej2=_get_float(section, "ej2", "junction"),
                              ein=_get_float(section, "ein", "junction"),
                              kappa=kappa, **shared)
    if ratio:
        for key in ("ej_over_ec", "omega_ratio"):
            if key not in keys:
                raise ConfigError(f"missing key '{key}' in [junction] "
                                  "(ratio style needs ej_over_ec and omega_ratio)")
        j_ratio = _get_float(section, "j_ratio", "junction") if "j_ratio" in keys else 1.0
        return JunctionParams.from_ratios(
            _get_float(section, "ej_over_ec", "junction"),
            _get_float(section, "omega_ratio", "junction"),
            j_ratio, kappa=kappa, **shared)
    raise ConfigError("missing key 'ein' in [junction]: provide ej1/ej2/ein "
                      "or ej_over_ec/omega_ratio")


def load_config(path: str) -> RunConfig:
    """Read and validate a configuration file.

    Raises :class:`ConfigError` for unreadable files, unknown sections or
    keys, missing keys, and non-numeric values; axis specs raise
    :class:`InvalidAxisError`.  Physical invariant violations surface later
    as :class:`InvalidParameterError` from :class:`JunctionParams`.
    """
    parser = configparser.ConfigParser(interpolation=None, delimiters=("=",),
                                       comment_prefixes=("#",),
                                       inline_comment_prefixes=("#",))
    try:
        with open(path, "r", encoding="utf-8") as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path!r}: {exc}") from exc
    except configparser.Error as exc:
        raise ConfigError(f"malformed config file {path!r}: {exc}") from exc

    unknown_sections = set(parser.sections()) - {"junction", "run"}
    if unknown_sections:
        raise ConfigError(f"unknown section [{sorted(unknown_sections)[0]}]")
    if "junction" not in parser:
        raise ConfigError("missing [junction] section")
    params = _junction_params(parser["junction"])

    options: dict = {"params": params}
    if "run" in parser:
        run = parser["run"]
        unknown = set(run.keys()) - set(_RUN_KEYS)
        if unknown:
            raise ConfigError(f"unknown key '{sorted(unknown)[0]}' in [run]")
        for key in ("dt", "theta0", "psi0", "theta_dot0", "psi_dot0",
                    "window", "bounce_tol"):
            if key in run:
                options[key] = _get_float(run, key, "run")
        for key in ("n_steps", "stride", "spectrum_points", "spectrum_levels"):
            if key in run:
                options[key] = _get_int(run, key, "run")
        if "epsilon_override" in run:
            options["epsilon_override"] = _get_float(run, "epsilon_override", "run")
        if "out" in run:
            options["out"] = run["out"].strip()
        if "axis1" in run:
            options["axis1"] = parse_axis(run["axis1"])
        if "axis2" in run:
            options["axis2"] = parse_axis(run["axis2"])
    return RunConfig(**options)
