"""Numba and numpy kernels must agree; both are checked against direct formulas."""
import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lifshitz import kernels

MODES = [kernels.TM_FINITE, kernels.TM_PLUS_ONE, kernels.TM_MINUS_ONE, kernels.IDEAL]


def test_backend_flag():
    assert kernels.BACKEND in ("numba", "numpy")


@settings(max_examples=60, deadline=None)
@given(st.floats(0.0, 1e6), st.floats(0.01, 1e4), st.sampled_from(MODES))
def test_planar_parity(A, r, mode):
    t = np.concatenate((np.geomspace(1e-12, 50.0, 97), [0.3, 1.0]))
    a = kernels.planar_lnd_nb(t, A, r, mode)
    b = kernels.planar_lnd_np(t, A, r, mode)
    np.testing.assert_allclose(a[0], b[0], rtol=1e-13, atol=0)
    np.testing.assert_allclose(a[1], b[1], rtol=1e-13, atol=0)


def direct_lnd(t, A, r):
    """ln(1 - Delta^2 e^{-t}) from the textbook reflection coefficients, 50 digits."""
    with mp.workdps(50):
        t, A, r = mp.mpf(t), mp.mpf(A), mp.mpf(r)
        tau = mp.sqrt(t * t + A)
        te = (t - tau) / (t + tau)
        tm = (r * t - tau) / (r * t + tau)
        return float(mp.log(1 - te**2 * mp.exp(-t))), float(mp.log(1 - tm**2 * mp.exp(-t)))


@pytest.mark.parametrize("t,A,r", [(1e-9, 7.5e4, 30.0), (0.5, 2.0, 3.0), (3.0, 0.0, 1.0), (1e-6, 1e8, 1e3),
                                   (10.0, 1e3, 0.2)])
def test_planar_against_high_precision(t, A, r):
    te, tm = kernels.planar_lnd_np(np.array([t]), A, r, kernels.TM_FINITE)
    ete, etm = direct_lnd(t, A, r)
    assert te[0] == pytest.approx(ete, rel=1e-12, abs=1e-300)
    assert tm[0] == pytest.approx(etm, rel=1e-12, abs=1e-300)


def test_ideal_kernel():
    t = np.array([0.1, 1.0, 2.0])
    te, tm = kernels.planar_lnd(t, math.inf, math.inf, kernels.IDEAL)
    np.testing.assert_allclose(te, np.log(-np.expm1(-t)), rtol=1e-15)
    np.testing.assert_array_equal(te, tm)


def test_large_A_small_t_is_finite():
    # regression: 1 + Delta_TE used to cancel to a negative number
    t = np.geomspace(1e-300, 1e-3, 200)
    te, tm = kernels.planar_lnd(t, 7.5e4, math.inf, kernels.TM_PLUS_ONE)
    assert np.all(np.isfinite(te)) and np.all(te < 0)


@pytest.mark.parametrize("y", [0.0, 1e-8, 0.01, 0.3, 0.6931, 0.6932, 1.0, 5.0, 40.0])
def test_polylog_against_mpmath(y):
    li2, li3 = kernels.li23_np(np.array([y]))
    with mp.workdps(40):
        z = mp.exp(-mp.mpf(y))
        assert li2[0] == pytest.approx(float(mp.polylog(2, z)), rel=2e-15)
        assert li3[0] == pytest.approx(float(mp.polylog(3, z)), rel=2e-15)


@settings(max_examples=80, deadline=None)
@given(st.floats(0.0, 60.0))
def test_screened_sum_parity(y):
    a = kernels.screened_sum_nb(np.array([y]))[0]
    b = kernels.screened_sum_np(np.array([y]))[0]
    assert a == pytest.approx(b, rel=1e-14, abs=1e-300)


def test_resonance_terms_parity():
    a = kernels.resonance_terms_nb(0.3, 200, 0.01)
    b = kernels.resonance_terms_np(0.3, 200, 0.01)
    np.testing.assert_allclose(a, b, rtol=1e-14)
    assert a[0] == 0.5


@pytest.mark.parametrize("sign", [1, -1])
def test_offaxis_parity(sign):
    kap = np.linspace(0.0, 2e7, 7)
    xi = np.geomspace(1e12, 1e16, 9)
    a = kernels.offaxis_grid_nb(kap, xi, 1.4e16, 5e13, 1e-6, 299792458.0, float(sign))
    b = kernels.offaxis_grid_np(kap, xi, 1.4e16, 5e13, 1e-6, 299792458.0, sign)
    for u, v in zip(a, b):
        np.testing.assert_allclose(u, v, rtol=1e-13)
