"""Dielectric response models on the imaginary frequency axis.

Every model exposes eps(i xi) for xi > 0.  Metals (Drude, plasma) diverge at
xi = 0, so the n = 0 Matsubara term never evaluates raw eps; it uses
:func:`static_limit`, which carries the exact xi -> 0+ behaviour.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from .quantities import CONST


class DivergentStaticLimit(ValueError):
    """Raised when a metal is evaluated at xi = 0; use the static-limit path."""


class PoleError(ValueError):
    """Raised when eps(-i xi) is requested on the Drude pole xi = gamma."""


@dataclass(frozen=True)
class Vacuum:
    pass


@dataclass(frozen=True)
class ConstantEps:
    eps: float

    def __post_init__(self):
        if not self.eps >= 1.0:
            raise ValueError("ConstantEps requires eps >= 1")


@dataclass(frozen=True)
class IdealMetal:
    pass


@dataclass(frozen=True)
class Plasma:
    omega_p: float

    def __post_init__(self):
        if not self.omega_p > 0:
            raise ValueError("plasma frequency must be positive")


@dataclass(frozen=True)
class Drude:
    omega_p: float
    gamma_diss: float

    def __post_init__(self):
        if not self.omega_p > 0:
            raise ValueError("plasma frequency must be positive")
        if not self.gamma_diss >= 0:
            raise ValueError("dissipation must be non-negative")


@dataclass(frozen=True)
class Oscillator:
    """Sum of Lorentz oscillators, eps = 1 + sum_i s_i / (1 + xi^2/w_i^2)."""

    terms: Tuple[Tuple[float, float], ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple((float(s), float(w)) for s, w in self.terms))
        if not self.terms:
            raise ValueError("Oscillator needs at least one (strength, omega_0) pair")
        for s, w in self.terms:
            if not (s > 0 and w > 0):
                raise ValueError("oscillator strengths and frequencies must be positive")


DielectricModel = Union[Vacuum, ConstantEps, IdealMetal, Plasma, Drude, Oscillator]

METALS = (Drude, Plasma)


def _check_xi(xi):
    if np.any(np.asarray(xi) < 0):
        raise ValueError("imaginary frequency must be non-negative")


def eps_imag_axis(model: DielectricModel, xi):
    """eps(i xi) for ``xi >= 0`` (scalar or array); ``math.inf`` for IdealMetal."""
    _check_xi(xi)
    if isinstance(model, IdealMetal):
        return math.inf if np.ndim(xi) == 0 else np.full(np.shape(xi), math.inf)
    if isinstance(model, Vacuum):
        return 1.0 if np.ndim(xi) == 0 else np.ones(np.shape(xi))
    if isinstance(model, ConstantEps):
        return model.eps if np.ndim(xi) == 0 else np.full(np.shape(xi), model.eps)
    if isinstance(model, Oscillator):
        xi = np.asarray(xi, dtype=float)
        out = 1.0 + sum(s / (1.0 + (xi / w) ** 2) for s, w in model.terms)
        return float(out) if out.ndim == 0 else out
    if np.any(np.asarray(xi) == 0):
        raise DivergentStaticLimit(f"{type(model).__name__} diverges at xi = 0")
    xi = np.asarray(xi, dtype=float)
    if isinstance(model, Plasma):
        out = 1.0 + model.omega_p**2 / xi**2
    elif isinstance(model, Drude):
        out = 1.0 + model.omega_p**2 / (xi * (xi + model.gamma_diss))
    else:
        raise TypeError(f"not a dielectric model: {model!r}")
    return float(out) if out.ndim == 0 else out


def eps_off_axis(model: DielectricModel, xi, sign: int):
    """eps(sign * i xi) by direct substitution; defined for Drude and Plasma only.

    For Drude, eps(-i xi) = 1 + wp^2 / (xi (xi - gamma)) is real and negative on
    0 < xi < gamma.  The value is returned as a complex number.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if not isinstance(model, METALS):
        raise TypeError("off-axis evaluation supports Drude and Plasma only")
    xi_arr = np.asarray(xi, dtype=float)
    if np.any(xi_arr <= 0):
        raise ValueError("off-axis evaluation needs xi > 0")
    if isinstance(model, Plasma):
        out = 1.0 + model.omega_p**2 / xi_arr**2
    else:
        shifted = xi_arr + sign * model.gamma_diss
        if np.any(shifted == 0):
            raise PoleError(f"xi = gamma = {model.gamma_diss} is a pole of eps(-i xi)")
        out = 1.0 + model.omega_p**2 / (xi_arr * shifted)
    out = out.astype(complex)
    return complex(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class StaticLimit:
    """Exact xi -> 0+ data of a model.

    ``eps0`` is the static value (``inf`` for metals).  ``q0sq`` is the limit of
    eps(i xi) xi^2 / c^2, i.e. the offset that survives inside gamma_i at n = 0.
    A divergent eps behaves as ``coeff * xi**(-order)``, which fixes the limiting
    ratio eps_1 / eps_2 between two metals.
    """

    eps0: float
    q0sq: float = 0.0
    order: int = 0
    coeff: float = 0.0


def static_limit(model: DielectricModel) -> StaticLimit:
    if isinstance(model, IdealMetal):
        return StaticLimit(math.inf, math.inf)
    if isinstance(model, Plasma) or (isinstance(model, Drude) and model.gamma_diss == 0):
        return StaticLimit(math.inf, (model.omega_p / CONST.c) ** 2, 2, model.omega_p**2)
    if isinstance(model, Drude):
        return StaticLimit(math.inf, 0.0, 1, model.omega_p**2 / model.gamma_diss)
    return StaticLimit(float(eps_imag_axis(model, 0.0)))


def static_eps_ratio(a: StaticLimit, b: StaticLimit) -> float:
    """lim_{xi->0+} eps_a / eps_b (may be 0 or inf)."""
    fa, fb = math.isfinite(a.eps0), math.isfinite(b.eps0)
    if fa and fb:
        return a.eps0 / b.eps0
    if fa:
        return 0.0
    if fb:
        return math.inf
    if a.order != b.order:
        return math.inf if a.order > b.order else 0.0
    return a.coeff / b.coeff


def from_config(kind: str, **params) -> DielectricModel:
    """Build a model from CLI-style parameters; frequencies given in eV."""
    from .quantities import ev_to_rad_s

    kind = kind.lower()
    if kind == "vacuum":
        return Vacuum()
    if kind == "ideal":
        return IdealMetal()
    if kind == "constant":
        return ConstantEps(float(params["eps"]))
    if kind == "plasma":
        return Plasma(ev_to_rad_s(params["omega_p_eV"]))
    if kind == "drude":
        return Drude(ev_to_rad_s(params["omega_p_eV"]), ev_to_rad_s(params["gamma_eV"]))
    if kind == "oscillator":
        strengths = params["strengths"]
        omegas = params["omega0_eV"]
        if len(strengths) != len(omegas):
            raise ValueError("oscillator strengths and frequencies differ in length")
        return Oscillator(tuple((s, ev_to_rad_s(w)) for s, w in zip(strengths, omegas)))
    raise ValueError(f"unknown dielectric model {kind!r}")
