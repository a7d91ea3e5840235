"""Hot numeric kernels, each in a numba and a pure-numpy flavour.

The backend is chosen once at import time: numba when it is importable and
``LIFSHITZ_NUMBA`` is not set to ``0``; numpy otherwise.  Both flavours are
always importable as ``<name>_nb`` / ``<name>_np`` so tests and the benchmark
can compare them directly.
"""
from __future__ import annotations

import math
import os

import numpy as np
from scipy.special import bernoulli, zeta

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

USE_NUMBA = numba is not None and os.environ.get("LIFSHITZ_NUMBA", "1").lower() not in ("0", "false", "no")
BACKEND = "numba" if USE_NUMBA else "numpy"


def _njit(fn):
    if numba is None:
        return fn
    return numba.njit(cache=True, nogil=True)(fn)


# TM reflection modes of the planar kernel
TM_FINITE, TM_PLUS_ONE, TM_MINUS_ONE, IDEAL = 0, 1, 2, 3

ZETA2 = math.pi**2 / 6.0
ZETA3 = float(zeta(3.0))

# zeta(1 - m) / m! for m = 0..N, used by the log-expansions of Li_2 and Li_3
_NSER = 30
_B = bernoulli(_NSER + 2)
_ZNEG = np.zeros(_NSER + 2)  # _ZNEG[m] = zeta(-m), m >= 1
for _m in range(1, _NSER + 1):
    _ZNEG[_m] = -_B[_m + 1] / (_m + 1)
_FACT = np.array([math.factorial(k) for k in range(_NSER + 3)], dtype=float)
# Li2(e^mu) = zeta2 + mu (1 - log(-mu)) + sum_{k>=2} zeta(2-k) mu^k / k!
LI2_COEF = np.array([_ZNEG[k - 2] / _FACT[k] if k >= 3 else 0.0 for k in range(_NSER)])
LI2_COEF[2] = (-0.5) / 2.0  # zeta(0) / 2!
# Li3(e^mu) = zeta3 + zeta2 mu + mu^2/2 (3/2 - log(-mu)) + sum_{k>=3} zeta(3-k) mu^k / k!
LI3_COEF = np.array([_ZNEG[k - 3] / _FACT[k] if k >= 4 else 0.0 for k in range(_NSER)])
LI3_COEF[3] = (-0.5) / 6.0  # zeta(0) / 3!


# --------------------------------------------------------------------------
# planar Lifshitz kernel in the variable t = 2 gamma_2 d

def _log_d(delta, w, t):
    """ln(1 - delta^2 e^{-t}) given w = 1 - delta^2, computed without cancellation."""
    q = delta * delta * math.exp(-t)
    if q < 0.5:
        return math.log1p(-q)
    return math.log(-math.expm1(-t) + w * math.exp(-t))


_log_d_nb = _njit(_log_d)


def _tm_coeffs(t, tau1, A, r):
    """(Delta_TM, 1 - Delta_TM^2); for r > 1 numerator and denominator are divided by r^2."""
    if r > 1.0:
        u = 1.0 / r
        den = t + tau1 * u
        if den > 0:
            return ((1.0 - u * u) * t * t - A * u * u) / (den * den), 4.0 * t * tau1 * u / (den * den)
        return 0.0, 1.0
    den = r * t + tau1
    if den > 0:
        return ((r * r - 1.0) * t * t - A) / (den * den), 4.0 * r * t * tau1 / (den * den)
    return 0.0, 1.0


_tm_coeffs_nb = _njit(_tm_coeffs)


def _planar_lnd_nb_impl(t, A, r, mode):
    n = t.shape[0]
    te = np.empty(n)
    tm = np.empty(n)
    for i in range(n):
        ti = t[i]
        if mode == IDEAL:
            dte, wte, dtm, wtm = -1.0, 0.0, 1.0, 0.0
        else:
            tau1 = math.sqrt(ti * ti + A)
            s = ti + tau1
            if s > 0:
                dte = -A / (s * s)
                wte = (1.0 - dte) * 2.0 * ti / s  # 1 + delta_TE = 2 t / s
            else:
                dte, wte = 0.0, 1.0
            if mode == TM_PLUS_ONE:
                dtm, wtm = 1.0, 0.0
            elif mode == TM_MINUS_ONE:
                dtm, wtm = -1.0, 0.0
            else:
                dtm, wtm = _tm_coeffs_nb(ti, tau1, A, r)
        te[i] = _log_d_nb(dte, wte, ti)
        tm[i] = _log_d_nb(dtm, wtm, ti)
    return te, tm


planar_lnd_nb = _njit(_planar_lnd_nb_impl)


def _log_d_np(delta, w, t):
    e = np.exp(-t)
    q = delta * delta * e
    small = q < 0.5
    out = np.empty_like(t)
    out[small] = np.log1p(-q[small])
    big = ~small
    out[big] = np.log(-np.expm1(-t[big]) + w[big] * e[big])
    return out


def planar_lnd_np(t, A, r, mode):
    """ln D_TE and ln D_TM at the nodes ``t`` (vectorised numpy)."""
    t = np.asarray(t, dtype=float)
    if mode == IDEAL:
        dte, wte = np.full_like(t, -1.0), np.zeros_like(t)
        dtm, wtm = np.ones_like(t), np.zeros_like(t)
    else:
        tau1 = np.sqrt(t * t + A)
        s = t + tau1
        with np.errstate(divide="ignore", invalid="ignore"):
            pos = s > 0
            dte = np.where(pos, -A / (s * s), 0.0)
            wte = np.where(pos, (1.0 - dte) * 2.0 * t / s, 1.0)
            if mode == TM_PLUS_ONE:
                dtm, wtm = np.ones_like(t), np.zeros_like(t)
            elif mode == TM_MINUS_ONE:
                dtm, wtm = -np.ones_like(t), np.zeros_like(t)
            else:
                if r > 1.0:
                    u = 1.0 / r
                    den = t + tau1 * u
                    num, w = (1.0 - u * u) * t * t - A * u * u, 4.0 * t * tau1 * u
                else:
                    den = r * t + tau1
                    num, w = (r * r - 1.0) * t * t - A, 4.0 * r * t * tau1
                pos = den > 0
                dtm = np.where(pos, num / (den * den), 0.0)
                wtm = np.where(pos, w / (den * den), 1.0)
    return _log_d_np(dte, wte, t), _log_d_np(dtm, wtm, t)


# --------------------------------------------------------------------------
# polylogarithms Li_2, Li_3 on z = exp(-y), y >= 0

def _li23_scalar(y, li2c, li3c):
    """Return (Li2(e^-y), Li3(e^-y)) for y >= 0."""
    if y > 0.6931471805599453:
        z = math.exp(-y)
        s2 = 0.0
        s3 = 0.0
        zk = z
        k = 1
        while k < 200:
            s2 += zk / (k * k)
            s3 += zk / (k * k * k)
            zk *= z
            if zk < 1e-18 * s2:
                break
            k += 1
        return s2, s3
    mu = -y
    if y == 0.0:
        return ZETA2, ZETA3
    lg = math.log(y)
    li2 = ZETA2 + mu * (1.0 - lg)
    li3 = ZETA3 + ZETA2 * mu + 0.5 * mu * mu * (1.5 - lg)
    p = mu * mu
    for k in range(2, li2c.shape[0]):
        li2 += li2c[k] * p
        p *= mu
    p = mu * mu * mu
    for k in range(3, li3c.shape[0]):
        li3 += li3c[k] * p
        p *= mu
    return li2, li3


_li23_nb = _njit(_li23_scalar)


def _screened_sum_nb_impl(y, li2c, li3c):
    out = np.empty(y.shape[0])
    for i in range(y.shape[0]):
        li2, li3 = _li23_nb(y[i], li2c, li3c)
        out[i] = li3 + y[i] * li2
    return out


_screened_sum_nb = _njit(_screened_sum_nb_impl)


def screened_sum_nb(y):
    return _screened_sum_nb(np.ascontiguousarray(y, dtype=float), LI2_COEF, LI3_COEF)


def li23_np(y):
    """Vectorised (Li2(e^-y), Li3(e^-y))."""
    y = np.atleast_1d(np.asarray(y, dtype=float))
    li2 = np.empty_like(y)
    li3 = np.empty_like(y)
    far = y > math.log(2.0)
    if far.any():
        z = np.exp(-y[far])
        k = np.arange(1, 61, dtype=float)[:, None]
        zk = z[None, :] ** k
        li2[far] = np.sum(zk / k**2, axis=0)
        li3[far] = np.sum(zk / k**3, axis=0)
    near = ~far
    if near.any():
        yn = y[near]
        mu = -yn
        with np.errstate(divide="ignore", invalid="ignore"):
            mlog = np.where(yn > 0, mu * np.log(yn), 0.0)
            m2log = np.where(yn > 0, mu * mu * np.log(yn), 0.0)
        a2 = ZETA2 + mu - mlog
        a3 = ZETA3 + ZETA2 * mu + 0.75 * mu * mu - 0.5 * m2log
        k = np.arange(_NSER)
        powers = mu[None, :] ** k[:, None]
        a2 = a2 + np.sum(LI2_COEF[2:, None] * powers[2:], axis=0)
        a3 = a3 + np.sum(LI3_COEF[3:, None] * powers[3:], axis=0)
        li2[near] = a2
        li3[near] = a3
    return li2, li3


def screened_sum_np(y):
    """Li3(e^-y) + y Li2(e^-y), so that int_0^inf q ln(1 - e^{-2 d sqrt(q^2+a^2)}) dq
    equals -screened_sum(2 d a) / (4 d^2)."""
    li2, li3 = li23_np(y)
    return li3 + np.atleast_1d(y) * li2


# --------------------------------------------------------------------------
# resonance Matsubara series  sum'_n a(n) e^{-xn} (1 + xn + x^2 n^2)

def _resonance_terms_nb_impl(x, nmax, ratio):
    out = np.empty(nmax + 1)
    for n in range(nmax + 1):
        xn = x * n
        a = 1.0 / (1.0 + (ratio * n) ** 2)
        out[n] = a * math.exp(-xn) * (1.0 + xn + xn * xn)
    out[0] *= 0.5
    return out


resonance_terms_nb = _njit(_resonance_terms_nb_impl)


def resonance_terms_np(x, nmax, ratio):
    n = np.arange(nmax + 1, dtype=float)
    xn = x * n
    out = np.exp(-xn) * (1.0 + xn + xn * xn) / (1.0 + (ratio * n) ** 2)
    out[0] *= 0.5
    return out


# --------------------------------------------------------------------------
# off-axis Drude/plasma kernel for the extra-term diagnostic

def _offaxis_grid_nb_impl(kappa, xi, wp, gamma, d, c, sign):
    """D_TE, D_TM at omega = sign * i xi on a (kappa, xi) grid, vacuum gap."""
    m = kappa.shape[0]
    n = xi.shape[0]
    dte = np.empty((m, n), dtype=np.complex128)
    dtm = np.empty((m, n), dtype=np.complex128)
    for j in range(n):
        x = xi[j]
        eps = 1.0 + wp * wp / (x * (x + sign * gamma))
        k0sq = (x / c) ** 2
        for i in range(m):
            g2 = math.sqrt(kappa[i] ** 2 + k0sq)
            g1 = np.sqrt(complex(kappa[i] ** 2 + eps * k0sq, 0.0))
            rte = (g2 - g1) / (g2 + g1)
            rtm = (eps * g2 - g1) / (eps * g2 + g1)
            e = math.exp(-2.0 * g2 * d)
            dte[i, j] = 1.0 - rte * rte * e
            dtm[i, j] = 1.0 - rtm * rtm * e
    return dte, dtm


offaxis_grid_nb = _njit(_offaxis_grid_nb_impl)


def offaxis_grid_np(kappa, xi, wp, gamma, d, c, sign):
    kap = np.asarray(kappa, dtype=float)[:, None]
    x = np.asarray(xi, dtype=float)[None, :]
    eps = 1.0 + wp * wp / (x * (x + sign * gamma))
    k0sq = (x / c) ** 2
    g2 = np.sqrt(kap**2 + k0sq)
    g1 = np.sqrt((kap**2 + eps * k0sq).astype(complex))
    rte = (g2 - g1) / (g2 + g1)
    rtm = (eps * g2 - g1) / (eps * g2 + g1)
    e = np.exp(-2.0 * g2 * d)
    return 1.0 - rte * rte * e, 1.0 - rtm * rtm * e


# --------------------------------------------------------------------------
# dispatch

if USE_NUMBA:
    def planar_lnd(t, A, r, mode):
        return planar_lnd_nb(np.ascontiguousarray(t, dtype=float), float(A), float(r), int(mode))

    screened_sum = screened_sum_nb

    def resonance_terms(x, nmax, ratio):
        return resonance_terms_nb(float(x), int(nmax), float(ratio))

    def offaxis_grid(kappa, xi, wp, gamma, d, c, sign):
        return offaxis_grid_nb(np.ascontiguousarray(kappa, dtype=float), np.ascontiguousarray(xi, dtype=float),
                               float(wp), float(gamma), float(d), float(c), float(sign))
else:
    planar_lnd = planar_lnd_np
    screened_sum = screened_sum_np
    resonance_terms = resonance_terms_np
    offaxis_grid = offaxis_grid_np
