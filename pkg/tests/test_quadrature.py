import math

import numpy as np
import pytest
from scipy import integrate

from lifshitz.quadrature import ConvergenceError, composite_gl, tanh_sinh


def test_polynomial_exact():
    q = tanh_sinh(lambda x: x**3 - 2 * x, 0.0, 2.0, 1e-13, atol=1e-12)
    assert float(q.value) == pytest.approx(0.0, abs=1e-13)


def test_log_endpoint_singularity():
    # int_0^1 ln x dx = -1
    q = tanh_sinh(np.log, 0.0, 1.0, 1e-12)
    assert float(q.value) == pytest.approx(-1.0, rel=1e-12)
    assert q.error < 1e-10


def test_zeta3_guard():
    # int_0^inf t ln(1 - e^{-t}) dt = -zeta(3)
    q = tanh_sinh(lambda t: t * np.log(-np.expm1(-t)), 0.0, 60.0, 1e-13)
    assert float(q.value) == pytest.approx(-1.2020569031595942, rel=1e-11)


def test_vector_valued_against_scipy():
    f = lambda x: np.vstack((np.exp(-x) * np.sin(3 * x), np.sqrt(x) * np.exp(-x)))
    q = tanh_sinh(f, 0.0, 30.0, 1e-12)
    ref0 = integrate.quad(lambda x: math.exp(-x) * math.sin(3 * x), 0, 30, epsabs=1e-14)[0]
    ref1 = integrate.quad(lambda x: math.sqrt(x) * math.exp(-x), 0, 30, epsabs=1e-14)[0]
    assert q.value[0] == pytest.approx(ref0, rel=1e-11)
    assert q.value[1] == pytest.approx(ref1, rel=1e-11)


def test_error_estimate_is_honest():
    q = tanh_sinh(lambda x: 1.0 / (1.0 + 25 * x * x), -1.0, 1.0, 1e-10)
    exact = 2.0 * math.atan(5.0) / 5.0
    assert abs(float(q.value) - exact) <= q.error


def test_nonconvergence_carries_partial():
    with pytest.raises(ConvergenceError) as info:
        tanh_sinh(lambda x: np.sin(1e4 * x), 0.0, 1.0, 1e-14, max_level=4)
    assert info.value.partial is not None


def test_bad_interval():
    with pytest.raises(ValueError):
        tanh_sinh(np.exp, 1.0, 1.0, 1e-8)


def test_composite_gl():
    x, w = composite_gl(np.array([0.0, 1.0, 3.0]), 8)
    assert np.sum(w) == pytest.approx(3.0, rel=1e-15)
    assert np.sum(w * x**5) == pytest.approx(3.0**6 / 6, rel=1e-13)
