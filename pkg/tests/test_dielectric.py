import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lifshitz.dielectric import (ConstantEps, DivergentStaticLimit, Drude, IdealMetal, Oscillator, Plasma, PoleError,
                                 Vacuum, eps_imag_axis, eps_off_axis, from_config, static_eps_ratio, static_limit)
from lifshitz.quantities import ev_to_rad_s


def test_imag_axis_examples():
    assert eps_imag_axis(Plasma(1.0), 1.0) == 2.0
    assert eps_imag_axis(Drude(1.0, 0.1), 1.0) == pytest.approx(1 + 1 / 1.1, rel=1e-15)
    assert eps_imag_axis(Vacuum(), 123.0) == 1.0
    assert eps_imag_axis(ConstantEps(3.0), 5.0) == 3.0
    assert math.isinf(eps_imag_axis(IdealMetal(), 1.0))
    assert eps_imag_axis(Oscillator(((2.0, 1.0),)), 1.0) == pytest.approx(2.0)


def test_off_axis_examples():
    assert eps_off_axis(Plasma(1.0), 1.0, -1) == 2.0
    assert eps_off_axis(Drude(1.0, 0.1), 1.0, -1) == pytest.approx(1 + 1 / 0.9, rel=1e-15)
    assert eps_off_axis(Drude(1.0, 0.1), 1.0, +1) == pytest.approx(eps_imag_axis(Drude(1.0, 0.1), 1.0), rel=1e-15)


def test_off_axis_pole():
    with pytest.raises(PoleError):
        eps_off_axis(Drude(1.0, 0.1), 0.1, -1)


def test_off_axis_rejects_non_metal():
    with pytest.raises(TypeError):
        eps_off_axis(ConstantEps(2.0), 1.0, -1)


def test_domain_errors():
    with pytest.raises(ValueError):
        eps_imag_axis(Vacuum(), -1.0)
    with pytest.raises(DivergentStaticLimit):
        eps_imag_axis(Plasma(1.0), 0.0)
    with pytest.raises(DivergentStaticLimit):
        eps_imag_axis(Drude(1.0, 0.1), 0.0)


@pytest.mark.parametrize("bad", [lambda: ConstantEps(0.5), lambda: Plasma(0.0), lambda: Drude(1.0, -1.0),
                                 lambda: Oscillator(((0.0, 1.0),)), lambda: Oscillator(((1.0, -1.0),))])
def test_invariants_enforced(bad):
    with pytest.raises(ValueError):
        bad()


MODELS = [Vacuum(), ConstantEps(4.0), Plasma(1e16), Drude(1e16, 1e14), Oscillator(((1.5, 1e15), (0.5, 1e16)))]


@pytest.mark.parametrize("model", MODELS, ids=lambda m: type(m).__name__)
def test_monotone_and_bounded(model):
    xi = np.geomspace(1e10, 1e20, 400)
    eps = eps_imag_axis(model, xi)
    assert np.all(eps >= 1.0)
    assert np.all(np.diff(eps) <= 0)
    if not isinstance(model, ConstantEps):  # a constant never relaxes to 1
        assert eps[-1] == pytest.approx(1.0, abs=1e-6)


@given(st.floats(1e10, 1e18))
def test_even_models_symmetric(xi):
    assert eps_off_axis(Plasma(1e16), xi, +1) == eps_off_axis(Plasma(1e16), xi, -1)


@given(st.floats(1e10, 1e18).filter(lambda x: abs(x - 1e14) > 1e8))
def test_drude_not_even(xi):
    m = Drude(1e16, 1e14)
    assert eps_off_axis(m, xi, +1) != eps_off_axis(m, xi, -1)


def test_drude_tends_to_plasma():
    xi = 3e14
    vals = [eps_imag_axis(Drude(1e16, g), xi) for g in (1e13, 1e11, 1e9, 1e7)]
    target = eps_imag_axis(Plasma(1e16), xi)
    errs = [abs(v - target) for v in vals]
    assert errs == sorted(errs, reverse=True)
    assert errs[-1] / target < 1e-7


def test_static_limits():
    wp, g = 2e15, 3e13
    sd, sp = static_limit(Drude(wp, g)), static_limit(Plasma(wp))
    assert (sd.order, sd.q0sq) == (1, 0.0)
    assert sp.order == 2 and sp.q0sq == pytest.approx((wp / 299792458.0) ** 2)
    assert static_eps_ratio(sd, static_limit(Vacuum())) == math.inf
    assert static_eps_ratio(static_limit(ConstantEps(3.0)), static_limit(Vacuum())) == 3.0
    assert static_limit(Drude(wp, 0.0)).order == 2  # gamma = 0 Drude is the plasma model


def test_from_config_ev():
    m = from_config("drude", omega_p_eV=9.0, gamma_eV=0.035)
    assert m == Drude(ev_to_rad_s(9.0), ev_to_rad_s(0.035))
    assert from_config("IDEAL") == IdealMetal()
    assert from_config("oscillator", strengths=(1.0,), omega0_eV=(2.0,)).terms[0][1] == ev_to_rad_s(2.0)
    with pytest.raises(ValueError):
        from_config("oscillator", strengths=(1.0, 2.0), omega0_eV=(2.0,))
    with pytest.raises(ValueError):
        from_config("graphene")
