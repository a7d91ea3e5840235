"""Free energy per unit area of the planar stack.

Finite temperature uses the primed Matsubara sum

    F(d, T) = (k_B T / 2 pi) sum'_n  int_0^inf kappa ln D(i xi_n; kappa, d) dkappa,

zero temperature the double integral (hbar / 4 pi^2) int dxi int kappa ln D dkappa.
The kappa integral runs over t = 2 gamma_2 d on [t0, t0 + TAIL_SPAN] with
tanh-sinh, and the discarded tail is bounded analytically by
2 (T + 1) e^{-T} / (1 - e^{-T}) / (4 d^2) because |ln(1 - Delta^2 e^{-t})| <=
e^{-t} / (1 - e^{-t}) whenever |Delta| <= 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from . import kernels
from .dielectric import Drude, Plasma, Vacuum
from .planar_kernel import PlanarScenario, kernel_params, offaxis_dispersion, track_log
from .quadrature import ConvergenceError, composite_gl, tanh_sinh
from .quantities import CONST, matsubara_frequency

TAIL_SPAN = 40.0
ZERO_T_SPAN = 45.0
MAX_TERMS = 200_000
QUIET_TERMS = 3


@dataclass(frozen=True)
class MatsubaraGrid:
    T: float
    n_max: int
    tail_estimate: float
    frequencies: np.ndarray = field(repr=False)


@dataclass(frozen=True)
class TermContribution:
    n: int
    xi: float
    te: float
    tm: float
    error: float


@dataclass
class EnergyResult:
    value: float
    abs_error: float
    n_terms_used: int
    quad_evals: int
    breakdown: Optional[List[TermContribution]] = None
    grid: Optional[MatsubaraGrid] = None

    @property
    def te(self) -> float:
        return sum(b.te for b in self.breakdown or ())

    @property
    def tm(self) -> float:
        return sum(b.tm for b in self.breakdown or ())


def _check_tol(tol):
    if not 1e-14 < tol < 1e-2:
        raise ValueError("tol must lie in (1e-14, 1e-2)")


def kappa_integral(sc: PlanarScenario, xi: float, rtol: float, atol: float = 0.0):
    """(te, tm, abs_error, evals) of int_0^inf kappa ln D_pol dkappa in 1/m^2."""
    p = kernel_params(sc, xi)
    four_d2 = 4.0 * sc.d * sc.d
    hi = p.t0 + TAIL_SPAN

    def f(t):
        te, tm = kernels.planar_lnd(t, p.A, p.r, p.mode)
        return np.vstack((t * te, t * tm))

    q = tanh_sinh(f, p.t0, hi, rtol, atol * four_d2)
    tail = 2.0 * (hi + 1.0) * math.exp(-hi) / -math.expm1(-hi)
    te, tm = q.value
    return te / four_d2, tm / four_d2, (q.error + tail) / four_d2, q.evals


def free_energy(sc: PlanarScenario, tol: float = 1e-8, max_terms: int = MAX_TERMS) -> EnergyResult:
    """Primed Matsubara sum; the n = 0 term uses the xi -> 0+ kernel limit."""
    _check_tol(tol)
    if not sc.T > 0:
        raise ValueError("free_energy needs T > 0; use free_energy_zero_T")
    if sc.trivial:
        return EnergyResult(0.0, 0.0, 0, 0, [], MatsubaraGrid(sc.T, 0, 0.0, np.zeros(1)))
    pref = CONST.k_B * sc.T / (2.0 * math.pi)
    total = 0.0
    err = 0.0
    evals = 0
    quiet = 0
    terms: List[TermContribution] = []
    prev = None
    ratio = 0.0
    for n in range(max_terms):
        xi = matsubara_frequency(n, sc.T)
        weight = 0.5 if n == 0 else 1.0
        atol = 1e-3 * tol * abs(total) / (pref * weight)
        te, tm, e, ev = kappa_integral(sc, xi, tol / 10.0, atol)
        te, tm, e = pref * weight * te, pref * weight * tm, pref * weight * e
        contrib = te + tm
        terms.append(TermContribution(n, xi, te, tm, e))
        total += contrib
        err += e
        evals += ev
        if prev not in (None, 0.0):
            ratio = abs(contrib / prev)
        prev = contrib
        quiet = quiet + 1 if abs(contrib) <= 0.1 * tol * abs(total) else 0
        if quiet >= QUIET_TERMS and n >= 1:
            break
    else:
        res = EnergyResult(total, err, len(terms), evals, terms)
        raise ConvergenceError(f"Matsubara sum not converged after {max_terms} terms", partial=res)
    if ratio < 1.0:
        tail = abs(prev) * ratio / (1.0 - ratio)
    else:
        tail = QUIET_TERMS * abs(prev)
    grid = MatsubaraGrid(sc.T, len(terms) - 1, tail, matsubara_frequency(np.arange(len(terms)), sc.T))
    return EnergyResult(total, err + tail, len(terms), evals, terms, grid)


def free_energy_zero_T(sc: PlanarScenario, tol: float = 1e-8) -> EnergyResult:
    """T = 0 free energy from the xi-integral, s = 2 d xi / c on [0, ZERO_T_SPAN]."""
    _check_tol(tol)
    if sc.trivial:
        return EnergyResult(0.0, 0.0, 0, 0)
    scale = CONST.c / (2.0 * sc.d)
    pref = CONST.hbar / (4.0 * math.pi**2) * scale
    counter = {"evals": 0, "err": 0.0}
    ideal_scale = 1.0 / (sc.d * sc.d)

    def outer(s):
        out = np.empty((2, s.size))
        for i, si in enumerate(s):
            te, tm, e, ev = kappa_integral(sc, si * scale, tol / 100.0, 1e-3 * tol * ideal_scale)
            out[0, i], out[1, i] = te, tm
            counter["evals"] += ev
        return out

    q = tanh_sinh(outer, 0.0, ZERO_T_SPAN, tol / 10.0, 0.0)
    S = ZERO_T_SPAN
    tail = 2.0 * (S + 2.0) * math.exp(-S) / -math.expm1(-S) / (4.0 * sc.d * sc.d)
    te, tm = q.value
    value = pref * (te + tm)
    # inner errors are bounded by their rtol relative to each node value
    inner = pref * (tol / 100.0) * (abs(te) + abs(tm))
    abs_error = pref * (q.error + tail) + inner
    breakdown = [TermContribution(-1, 0.0, pref * te, pref * tm, abs_error)]
    return EnergyResult(value, abs_error, 0, counter["evals"], breakdown)


def drude_plasma_ratio(d: float, T: float, omega_p: float, gamma_diss: float, tol: float = 1e-8) -> float:
    """F(Drude) / F(plasma) for metal half-spaces across vacuum."""
    fd = free_energy(PlanarScenario(Drude(omega_p, gamma_diss), Vacuum(), d, T), tol)
    fp = free_energy(PlanarScenario(Plasma(omega_p), Vacuum(), d, T), tol)
    return fd.value / fp.value


# --------------------------------------------------------------------------
# extra (sine-integral) term

EXTRA_U_MAX = 30.0  # upper limit of 2 d xi / c
EXTRA_EXACT_ZEROS = 10  # sine orders whose zeros all become panel edges
EXTRA_CHUNK = 2048  # xi nodes per block, bounds memory at large n_cap
EXTRA_GEOM_LEVELS = 40  # halvings of the first panel towards xi = 0
EXTRA_KAPPA_EDGES = np.array([0.0, 0.05, 0.1, 0.2, 0.35, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 4.5,
                              6.5, 9.0, 13.0, 18.0, 25.0, 35.0, 50.0])


@dataclass
class ExtraTermResult:
    value_real: float
    value_imag_part: float
    n_series_terms: int
    pv_windows: List[tuple]
    abs_error: float = 0.0
    remainder_estimate: float = 0.0
    pv_converged: bool = True
    per_n: List[complex] = field(default_factory=list)


def _extra_xi_edges(sc, n_cap, gamma, w_max, w_min):
    c = CONST.c
    xi_max = EXTRA_U_MAX * c / (2.0 * sc.d)
    half_period = math.pi * CONST.k_B * sc.T / CONST.hbar  # first sine zero of n = 1
    n_exact = min(n_cap, EXTRA_EXACT_ZEROS)
    zeros = [half_period * np.arange(1, int(xi_max * n / half_period) + 1) / n for n in range(1, n_exact + 1)]
    edges = [np.array([0.0, xi_max])] + zeros
    if n_cap > n_exact:
        # all zeros would cost O(n_cap^2) panels; half-periods of the fastest sine suffice
        edges.append(np.arange(0.0, xi_max, half_period / n_cap))
    edges.append(np.linspace(0.0, xi_max, int(2 * EXTRA_U_MAX) + 1))  # panel width <= 0.5 in 2 d xi / c
    first = half_period / n_cap
    # the -i xi branch point of gamma_1 sits at xi ~ kappa^2 gamma c^2 / omega_p^2, far below first
    edges.append(first * 2.0 ** -np.arange(1, EXTRA_GEOM_LEVELS + 1))
    shells = []
    if gamma > 0:
        w = w_max
        while w >= w_min:
            shells.append(w)
            w *= 0.5
        shells = np.array(shells)
        edges.append(gamma * (1.0 - shells))
        edges.append(gamma * (1.0 + shells))
    e = np.unique(np.concatenate(edges))
    return e[(e >= 0) & (e <= xi_max)], np.asarray(shells)


def extra_term(sc: PlanarScenario, tol: float = 1e-6, n_cap: int = 10, xi_order: int = 7,
               kappa_order: int = 10, pv_window: float = 0.05, pv_min: float = 1e-7) -> ExtraTermResult:
    """Sine-series term dropped by the standard Matsubara formula.

    Evaluates -(i hbar / 2 pi) sum_{n=1}^{n_cap} int_0^inf sin(n beta hbar xi)
    ln[D(i xi) / D(-i xi)] dxi with the kappa weight (1 / 2 pi) int kappa dkappa.
    The logarithm of D(-i xi) is tracked continuously from the largest xi down.
    For Drude, the symmetric window |xi - gamma| < w gamma is excluded and
    w halves until the excluded shell changes the sum by less than ``tol``.

    ``remainder_estimate`` is the magnitude of the last term only. For Drude the
    terms fall off roughly like 1/n, so partial sums keep growing slowly
    (about logarithmically) with ``n_cap`` and the estimate does not bound the
    tail.
    """
    if not isinstance(sc.halfspace, (Drude, Plasma)) or not isinstance(sc.gap, Vacuum):
        raise TypeError("extra_term needs a Drude or plasma half-space and a vacuum gap")
    if not sc.T > 0:
        raise ValueError("extra_term needs T > 0")
    if n_cap < 1:
        raise ValueError("n_cap must be >= 1")
    gamma = getattr(sc.halfspace, "gamma_diss", 0.0)
    edges, shells = _extra_xi_edges(sc, n_cap, gamma, pv_window, pv_min)
    beta_hbar = CONST.hbar / (CONST.k_B * sc.T)

    def kappa_rule(order):
        u, w = composite_gl(EXTRA_KAPPA_EDGES, order)
        kap = u / (2.0 * sc.d)
        return kap, w * kap / (2.0 * sc.d)  # kappa dkappa

    def xi_rule(order):
        x, w = composite_gl(edges, order)
        if gamma > 0:
            keep = np.abs(x - gamma) > pv_min * gamma
            x, w = x[keep], w[keep]
        return x, w

    def weighted_log_ratio(x, wx, kap, wk):
        """wx times (1 / 2 pi) int kappa dkappa ln[D(i xi) / D(-i xi)], in xi blocks."""
        g = np.empty(x.shape, dtype=complex)
        # tracking runs from the largest xi down, so blocks are taken from the top
        top = len(x)
        ref_p = ref_m = None
        while top > 0:
            lo = max(top - EXTRA_CHUNK, 0)
            hi = min(top + 1, len(x))  # overlap one sample with the block above
            dp_te, dp_tm = offaxis_dispersion(sc, kap, x[lo:hi], +1)
            dm_te, dm_tm = offaxis_dispersion(sc, kap, x[lo:hi], -1)
            lp = track_log(dp_te) + track_log(dp_tm)
            lm = track_log(dm_te) + track_log(dm_tm)
            if ref_p is not None:
                # whole turns only, so the block joins the tracked phase above exactly
                lp += (ref_p - lp[:, -1])[:, None]
                lm += (ref_m - lm[:, -1])[:, None]
            ref_p, ref_m = lp[:, 0], lm[:, 0]
            g[lo:top] = (wk @ (lp - lm)[:, :top - lo]) / (2.0 * math.pi)
            top = lo
        return wx * g

    def sine_moments(x, wg, masks):
        """sum over xi of sin(n beta hbar xi) wg for n = 1..n_cap, one vector per mask."""
        out = [np.zeros(n_cap, dtype=complex) for _ in masks]
        n = np.arange(1, n_cap + 1)[:, None]
        for lo in range(0, len(x), EXTRA_CHUNK):
            sl = slice(lo, lo + EXTRA_CHUNK)
            s = np.sin(n * beta_hbar * x[None, sl])
            for acc, m in zip(out, masks):
                acc += s[:, m[sl]] @ wg[sl][m[sl]]
        return out

    kap, wk = kappa_rule(kappa_order)
    x, wx = xi_rule(xi_order)
    wg = weighted_log_ratio(x, wx, kap, wk)

    # cumulative sums over the pole shells, outermost window first
    dist = np.abs(x - gamma) / gamma if gamma > 0 else np.full(x.shape, np.inf)
    windows = list(shells) if gamma > 0 else [0.0]
    per_w = sine_moments(x, wg, [dist > w for w in windows])
    pv_converged = True
    chosen = 0
    for i in range(1, len(per_w)):
        chosen = i
        delta = abs(np.sum(per_w[i]) - np.sum(per_w[i - 1]))
        if delta <= tol * max(abs(np.sum(per_w[i])), 1e-300):
            break
    else:
        pv_converged = len(per_w) <= 1
    per_n = per_w[chosen]
    pv_err = abs(np.sum(per_w[chosen]) - np.sum(per_w[chosen - 1])) if chosen > 0 else 0.0

    # quadrature error from coarser rules on the same panels
    kap2, wk2 = kappa_rule(max(kappa_order // 2, 2))
    x2, wx2 = xi_rule(max(xi_order - 3, 2))
    wsel = windows[chosen]
    d2 = np.abs(x2 - gamma) / gamma if gamma > 0 else np.full(x2.shape, np.inf)
    (coarse_k,) = sine_moments(x, weighted_log_ratio(x, wx, kap2, wk2), [dist > wsel])
    (coarse_x,) = sine_moments(x2, weighted_log_ratio(x2, wx2, kap, wk), [d2 > wsel])
    quad_err = abs(np.sum(coarse_k) - np.sum(per_n)) + abs(np.sum(coarse_x) - np.sum(per_n))

    pref = -1j * CONST.hbar / (2.0 * math.pi)
    total = pref * np.sum(per_n)
    remainder = abs(pref * per_n[-1])
    abs_err = abs(pref) * (quad_err + pv_err) + remainder
    win = [(gamma * (1 - wsel), gamma * (1 + wsel))] if gamma > 0 else []
    return ExtraTermResult(float(total.real), float(total.imag), n_cap, win, abs_err, remainder,
                           pv_converged, [complex(pref * v) for v in per_n])
