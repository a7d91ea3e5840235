import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lifshitz.quantities import (CONST, Constants, Dimension, UnitSystem, convert, ev_to_rad_s, matsubara_frequency,
                                 quantity, thermal_x)


def test_zeta3_digits():
    assert abs(CONST.zeta3 - 1.2020569031595942) < 1e-12


def test_constants_positive():
    for name in ("hbar", "c", "k_B", "e", "m_e", "alpha", "zeta3"):
        assert getattr(CONST, name) > 0


def test_constants_reject_nonpositive():
    with pytest.raises(ValueError):
        Constants(hbar=-1.0)


def test_fine_structure_route():
    assert CONST.e2_gaussian / (CONST.hbar * CONST.c) == pytest.approx(1 / 137.035999, rel=1e-8)


def test_metre_to_fm():
    assert convert(quantity(1.0, "length"), UnitSystem.NaturalNuclear).value == pytest.approx(1e15, rel=1e-15)


def test_joule_to_mev():
    q = convert(quantity(1.602176634e-13, Dimension.ENERGY), UnitSystem.NaturalNuclear)
    assert q.value == pytest.approx(1.0, rel=1e-15)
    assert q.label == "MeV"


def test_energy_per_area_round_trip():
    q = quantity(3.14, "energy/area")
    back = convert(convert(q, UnitSystem.NaturalNuclear), UnitSystem.SI)
    assert back.value == pytest.approx(3.14, rel=1e-12)
    assert back.label == "J/m^2"


@given(st.floats(1e-30, 1e30), st.sampled_from(list(Dimension)))
def test_round_trip_property(value, dim):
    back = convert(convert(quantity(value, dim), UnitSystem.NaturalNuclear), UnitSystem.SI)
    assert back.value == pytest.approx(value, rel=1e-12)


def test_unknown_dimension_rejected():
    with pytest.raises(ValueError):
        quantity(1.0, "charge")


def test_matsubara_examples():
    assert matsubara_frequency(0, 300.0) == 0.0
    oracle = 2 * math.pi * 1.380649e-23 * 300.0 / (6.62607015e-34 / (2 * math.pi))
    assert matsubara_frequency(1, 300.0) == pytest.approx(oracle, rel=1e-14)
    assert matsubara_frequency(1, 300.0) == pytest.approx(2.468e14, rel=1e-3)
    assert matsubara_frequency(2, 300.0) == 2 * matsubara_frequency(1, 300.0)


@given(st.integers(0, 10**6), st.floats(1e-3, 1e12))
def test_matsubara_linear(n, T):
    assert matsubara_frequency(n, T) == pytest.approx(n * matsubara_frequency(1, T), rel=1e-14)
    assert matsubara_frequency(n, 2 * T) == pytest.approx(2 * matsubara_frequency(n, T), rel=1e-14)


@pytest.mark.parametrize("T", [0.0, -1.0])
def test_matsubara_rejects_nonpositive_T(T):
    with pytest.raises(ValueError):
        matsubara_frequency(1, T)


def test_thermal_x_and_ev():
    assert thermal_x(1e-6, 300.0) == pytest.approx(0.8231662, rel=1e-6)
    assert ev_to_rad_s(1.0) == pytest.approx(1.519267447e15, rel=1e-9)
