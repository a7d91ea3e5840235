"""Reflection coefficients and the dispersion function of a symmetric 1|2|1 stack.

Material 1 fills both half-spaces, material 2 the gap of width ``d``.  On the
imaginary axis gamma_i = sqrt(kappa^2 + eps_i(i xi) xi^2 / c^2) and

    D = (1 - Delta_TM^2 e^{-2 gamma_2 d}) (1 - Delta_TE^2 e^{-2 gamma_2 d}).

The Matsubara integrals run over t = 2 gamma_2 d, in which
kappa dkappa = t dt / (4 d^2) and the integrand decays like e^{-t}.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .dielectric import (METALS, DielectricModel, IdealMetal, PoleError, Vacuum, eps_imag_axis,
                         static_eps_ratio, static_limit)
from .quantities import CONST


class KernelDomainError(ValueError):
    pass


class PoleProximity(PoleError):
    """The requested xi lies inside the exclusion window around the Drude pole."""


class BranchTrackingError(RuntimeError):
    """Adjacent samples of ln D differ by an ambiguous phase; refine the xi grid."""


# largest accepted phase step between adjacent samples of a tracked logarithm
MAX_PHASE_STEP = 0.5 * math.pi


@dataclass(frozen=True)
class PlanarScenario:
    halfspace: DielectricModel
    gap: DielectricModel
    d: float
    T: float = 0.0

    def __post_init__(self):
        if not self.d > 0:
            raise ValueError("separation d must be positive")
        if not self.T >= 0:
            raise ValueError("temperature must be non-negative")
        if isinstance(self.gap, IdealMetal):
            raise ValueError("an ideal metal cannot fill the gap")

    @property
    def trivial(self) -> bool:
        """Identical media: the kernel vanishes identically."""
        return self.halfspace == self.gap


@dataclass(frozen=True)
class KernelParams:
    """Everything the t-kernel needs at one imaginary frequency.

    ``A`` is 4 d^2 (gamma_1^2 - gamma_2^2), ``t0`` the lower limit 2 d gamma_2(kappa=0).
    """

    t0: float
    A: float
    r: float
    mode: int


def kernel_params(sc: PlanarScenario, xi: float) -> KernelParams:
    """t-kernel parameters; ``xi == 0`` means the exact xi -> 0+ limit."""
    if xi < 0:
        raise ValueError("xi must be non-negative")
    four_d2 = 4.0 * sc.d * sc.d
    if xi == 0:
        s1, s2 = static_limit(sc.halfspace), static_limit(sc.gap)
        t0 = 2.0 * sc.d * math.sqrt(s2.q0sq)
        if isinstance(sc.halfspace, IdealMetal):
            return KernelParams(t0, math.inf, math.inf, kernels.IDEAL)
        A = four_d2 * (s1.q0sq - s2.q0sq)
        r = static_eps_ratio(s1, s2)
    else:
        k0sq = (xi / CONST.c) ** 2
        e2 = float(eps_imag_axis(sc.gap, xi))
        t0 = 2.0 * sc.d * math.sqrt(e2 * k0sq)
        if isinstance(sc.halfspace, IdealMetal):
            return KernelParams(t0, math.inf, math.inf, kernels.IDEAL)
        e1 = float(eps_imag_axis(sc.halfspace, xi))
        A = four_d2 * (e1 - e2) * k0sq
        r = e1 / e2
    if math.isinf(r):
        return KernelParams(t0, A, r, kernels.TM_PLUS_ONE)
    if r == 0:
        return KernelParams(t0, A, r, kernels.TM_MINUS_ONE)
    return KernelParams(t0, A, r, kernels.TM_FINITE)


def _eps_pair(sc, xi):
    if xi == 0:
        s1, s2 = static_limit(sc.halfspace), static_limit(sc.gap)
        return s1, s2
    return float(eps_imag_axis(sc.halfspace, xi)), float(eps_imag_axis(sc.gap, xi))


def gammas(sc: PlanarScenario, kappa: float, xi: float):
    """(gamma_1, gamma_2) in 1/m; gamma_1 is ``inf`` for an ideal-metal half-space."""
    if kappa < 0 or xi < 0:
        raise ValueError("kappa and xi must be non-negative")
    if xi == 0:
        s1, s2 = _eps_pair(sc, 0.0)
        return math.sqrt(kappa**2 + s1.q0sq), math.sqrt(kappa**2 + s2.q0sq)
    e1, e2 = _eps_pair(sc, xi)
    k0sq = (xi / CONST.c) ** 2
    return math.sqrt(kappa**2 + e1 * k0sq), math.sqrt(kappa**2 + e2 * k0sq)


def reflection(sc: PlanarScenario, kappa: float, xi: float):
    """(Delta_TE, Delta_TM); exactly (-1, +1) for an ideal metal."""
    if isinstance(sc.halfspace, IdealMetal):
        if kappa < 0 or xi < 0:
            raise ValueError("kappa and xi must be non-negative")
        return -1.0, 1.0
    g1, g2 = gammas(sc, kappa, xi)
    te = (g2 - g1) / (g2 + g1) if g2 + g1 > 0 else 0.0
    if xi == 0:
        s1, s2 = _eps_pair(sc, 0.0)
        r = static_eps_ratio(s1, s2)
        if math.isinf(r):
            return te, 1.0
        e1, e2 = r, 1.0
    else:
        e1, e2 = _eps_pair(sc, xi)
    den = e1 * g2 + e2 * g1
    tm = (e1 * g2 - e2 * g1) / den if den > 0 else 0.0
    return te, tm


def log_dispersion(sc: PlanarScenario, kappa: float, xi: float, split: bool = False):
    """ln D on the imaginary axis (always <= 0).  ``split`` returns (ln D_TE, ln D_TM)."""
    if kappa < 0 or xi < 0:
        raise ValueError("kappa and xi must be non-negative")
    p = kernel_params(sc, xi)
    t = 2.0 * sc.d * _gamma2(sc, kappa, xi)
    if t == 0 and p.mode != kernels.TM_FINITE:
        raise KernelDomainError("ln D diverges at kappa = xi = 0 for a metallic half-space")
    te, tm = kernels.planar_lnd_np(np.array([t]), p.A, p.r, p.mode)
    if split:
        return float(te[0]), float(tm[0])
    return float(te[0] + tm[0])


def _gamma2(sc, kappa, xi):
    if xi == 0:
        return math.sqrt(kappa**2 + static_limit(sc.gap).q0sq)
    return math.sqrt(kappa**2 + float(eps_imag_axis(sc.gap, xi)) * (xi / CONST.c) ** 2)


# --------------------------------------------------------------------------
# off-axis evaluation for the extra-term diagnostic

def _check_offaxis(sc: PlanarScenario):
    if not isinstance(sc.halfspace, METALS):
        raise TypeError("off-axis ln D needs a Drude or plasma half-space")
    if not isinstance(sc.gap, Vacuum):
        raise TypeError("off-axis ln D needs a vacuum gap")


def offaxis_dispersion(sc: PlanarScenario, kappa, xi, sign: int):
    """Complex (D_TE, D_TM) at omega = sign * i xi on the (kappa, xi) grid."""
    _check_offaxis(sc)
    m = sc.halfspace
    gamma = getattr(m, "gamma_diss", 0.0)
    return kernels.offaxis_grid(kappa, xi, m.omega_p, gamma, sc.d, CONST.c, sign)


def track_log(D, axis: int = -1):
    """Continuous complex logarithm of ``D`` along ``axis``, anchored at its last sample.

    Samples must run in ascending xi, so the anchor is the largest xi where
    D -> 1.  Real negative values take the phase +pi.  A phase step larger than
    MAX_PHASE_STEP that is not a crossing of the real axis raises
    BranchTrackingError.
    """
    D = np.moveaxis(np.asarray(D, dtype=complex), axis, -1)
    mag = np.abs(D)
    on_real = np.abs(D.imag) <= 1e-13 * mag
    phase = np.angle(D)
    phase = np.where(on_real, np.where(D.real < 0, math.pi, 0.0), phase)
    rev = phase[..., ::-1]
    steps = np.diff(rev, axis=-1)
    steps = (steps + math.pi) % (2 * math.pi) - math.pi
    # a jump of exactly +-pi between real samples is a sign change of D, kept as is
    real_pair = on_real[..., ::-1][..., 1:] & on_real[..., ::-1][..., :-1]
    steps = np.where(real_pair, np.diff(rev, axis=-1), steps)
    bad = (np.abs(steps) > MAX_PHASE_STEP) & ~real_pair
    if np.any(bad):
        raise BranchTrackingError("ln D phase step exceeds pi/2 between adjacent xi samples")
    tracked = np.concatenate([rev[..., :1], rev[..., :1] + np.cumsum(steps, axis=-1)], axis=-1)[..., ::-1]
    with np.errstate(divide="ignore"):
        out = np.log(mag) + 1j * tracked
    return np.moveaxis(out, -1, axis)


def log_dispersion_off_axis(sc: PlanarScenario, kappa, xi, sign: int, pole_window: float = 0.0):
    """Branch-tracked complex ln D at omega = sign * i xi.

    ``xi`` is an ascending array (a scalar is treated as a one-point track).
    Returns an array of shape (len(kappa), len(xi)).  Points closer than
    ``pole_window * gamma`` to the Drude pole raise PoleProximity.
    """
    _check_offaxis(sc)
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    kappa = np.atleast_1d(np.asarray(kappa, dtype=float))
    if np.any(xi <= 0):
        raise ValueError("off-axis evaluation needs xi > 0")
    if np.any(np.diff(xi) <= 0):
        raise ValueError("xi samples must be strictly ascending")
    gamma = getattr(sc.halfspace, "gamma_diss", 0.0)
    if gamma > 0 and sign < 0:
        near = np.abs(xi - gamma) <= pole_window * gamma
        if np.any(near) or np.any(xi == gamma):
            raise PoleProximity(f"xi within the exclusion window of the pole at {gamma:g} rad/s")
    dte, dtm = offaxis_dispersion(sc, kappa, xi, sign)
    return track_log(dte) + track_log(dtm)
