"""Resonance interaction of an excited and a ground-state identical atom.

Only the (+-; x) branch is modelled.  The field susceptibility is normalised
so that linearising ln(1 + alpha T) and replacing (hbar/pi) int dxi by
2 k_B T sum'_n reproduces the large-separation series term by term.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .quadrature import ConvergenceError, tanh_sinh
from .quantities import CONST, matsubara_frequency, thermal_x

# x * sum'_n e^{-xn}(1 + xn + x^2 n^2) near x = 0 as (power, coefficient); no x^2 term
_SMALL_X_SERIES = ((0, 4.0), (4, -1.0 / 180.0), (6, 1.0 / 1890.0), (8, -1.0 / 33600.0),
                   (10, 1.0 / 748440.0), (12, -691.0 / 13076743680.0), (14, 1.0 / 518918400.0))
SMALL_X = 1e-2


class ModeInstability(ValueError):
    """1 +- alpha T <= 0 somewhere on the imaginary axis."""

    def __init__(self, xi):
        super().__init__(f"1 +- alpha T <= 0 at xi = {xi:.6e} rad/s")
        self.xi = xi


class PolarizabilityMode(enum.Enum):
    StaticOnly = "static"
    London = "london"


@dataclass(frozen=True)
class PolarizabilityModel:
    alpha0: float
    omega0: float = math.inf
    mode: PolarizabilityMode = PolarizabilityMode.StaticOnly

    def __post_init__(self):
        if not self.alpha0 > 0:
            raise ValueError("alpha0 must be positive")
        if self.mode is PolarizabilityMode.London and not (self.omega0 > 0 and math.isfinite(self.omega0)):
            raise ValueError("London polarizability needs a finite omega0 > 0")

    @classmethod
    def london(cls, alpha0, omega0):
        return cls(alpha0, omega0, PolarizabilityMode.London)

    def __call__(self, xi):
        if self.mode is PolarizabilityMode.StaticOnly:
            return self.alpha0 * np.ones_like(np.asarray(xi, dtype=float)) if np.ndim(xi) else self.alpha0
        return self.alpha0 / (1.0 + (np.asarray(xi, dtype=float) / self.omega0) ** 2)


@dataclass(frozen=True)
class ResonanceQuery:
    d: float
    T: float
    sign: int = 1
    branch: str = "x"

    def __post_init__(self):
        if not self.d > 0 or self.T < 0:
            raise ValueError("need d > 0 and T >= 0")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if self.branch != "x":
            raise ValueError("only the x branch is implemented")

    @property
    def x(self) -> float:
        return thermal_x(self.d, self.T)


def field_susceptibility(d: float, xi):
    """T(d | i xi) = (1 + u + u^2) e^{-u} / d^3 with u = xi d / c."""
    if not d > 0 or np.any(np.asarray(xi) < 0):
        raise ValueError("need d > 0 and xi >= 0")
    u = np.asarray(xi, dtype=float) * d / CONST.c
    out = (1.0 + u + u * u) * np.exp(-u) / d**3
    return float(out) if out.ndim == 0 else out


def _x_weighted_sum(x: float) -> float:
    """x * sum'_n e^{-xn}(1 + xn + x^2 n^2), with the series used for x < SMALL_X."""
    if x < SMALL_X:
        return math.fsum(c * x**k for k, c in _SMALL_X_SERIES)
    if x > 1.0:
        # divide bracket and denominator by e^{3x}
        q = math.exp(-x)
        bracket = 1.0 + q * (-1.0 + 2.0 * x + 2.0 * x * x) - q * q * (1.0 + 2.0 * x - 2.0 * x * x) + q**3
        return x * bracket / (2.0 * (-math.expm1(-x)) ** 3)
    em1 = math.expm1(x)
    ex = em1 + 1.0
    bracket = 1.0 + ex**3 - ex * (1.0 + 2.0 * x - 2.0 * x * x) + ex * ex * (-1.0 + 2.0 * x + 2.0 * x * x)
    return x * bracket / (2.0 * em1**3)


def resonance_closed_form(query: ResonanceQuery, alpha0: float) -> float:
    """+- 2 k_B T alpha0 / (2 d^3 (e^x - 1)^3) [1 + e^{3x} - e^x(1 + 2x - 2x^2) + e^{2x}(-1 + 2x + 2x^2)]."""
    if not query.T > 0:
        raise ValueError("closed form needs T > 0")
    x = query.x
    # 2 k_B T alpha0 / d^3 * S(x), with S = (x S) / x
    return query.sign * 2.0 * CONST.k_B * query.T * alpha0 / query.d**3 * _x_weighted_sum(x) / x


def resonance_series(query: ResonanceQuery, pol: PolarizabilityModel, tol: float = 1e-13) -> float:
    """+- (2 k_B T / d^3) sum'_n alpha(i xi_n) e^{-xn}(1 + xn + x^2 n^2)."""
    if not query.T > 0:
        raise ValueError("series needs T > 0")
    x = query.x
    if not x > 0:
        raise ConvergenceError("series needs x > 0")
    # tail past n_max <= (1/x) int_{s0}^inf e^{-s}(1 + s + s^2) ds = e^{-s0}(s0^2 + 3 s0 + 4) / x,
    # s0 = x n_max, against a primed sum of at least 1/2
    nmax = 8
    while True:
        s0 = x * nmax
        if math.exp(-s0) * (s0 * s0 + 3.0 * s0 + 4.0) / x <= 0.05 * tol:
            break
        nmax *= 2
        if nmax > 1 << 34:
            raise ConvergenceError("resonance series does not converge")
    ratio = 0.0
    if pol.mode is PolarizabilityMode.London:
        ratio = matsubara_frequency(1, query.T) / pol.omega0
    terms = kernels.resonance_terms(x, nmax, ratio)
    s = math.fsum(terms)
    return query.sign * 2.0 * CONST.k_B * query.T * pol.alpha0 / query.d**3 * s


def resonance_n0(d: float, T: float, alpha0: float, sign: int = 1) -> float:
    """Classical term +- k_B T alpha0 / d^3."""
    if not (d > 0 and T > 0):
        raise ValueError("need d > 0 and T > 0")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    return sign * CONST.k_B * T * alpha0 / d**3


def small_x_limit(d: float, alpha0: float, sign: int = 1) -> float:
    """Retarded, temperature-independent law +- (4 / pi) hbar c alpha0 / d^4."""
    return sign * 4.0 / math.pi * CONST.hbar * CONST.c * alpha0 / d**4


def resonance_integral(d: float, pol: PolarizabilityModel, tol: float = 1e-10, sign: int = 1) -> float:
    """Zero-temperature (hbar / pi) int_0^inf ln[1 +- alpha(i xi) T(d | i xi)] dxi.

    The integral runs over u = xi d / c on [0, U] with the decay of T bounding
    the remainder; StaticOnly polarizabilities are accepted too.
    """
    if not d > 0:
        raise ValueError("d must be positive")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    scale = CONST.c / d
    U = 60.0

    def f(u):
        xi = u * scale
        at = sign * pol(xi) * field_susceptibility(d, xi)
        if np.any(1.0 + at <= 0):
            raise ModeInstability(float(xi[np.argmax(1.0 + at <= 0)]))
        return np.log1p(at)

    q = tanh_sinh(f, 0.0, U, tol)
    return CONST.hbar / math.pi * scale * float(q.value)
