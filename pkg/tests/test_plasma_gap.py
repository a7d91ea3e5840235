import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lifshitz.dielectric import IdealMetal, Vacuum
from lifshitz.engine import free_energy
from lifshitz.planar_kernel import PlanarScenario
from lifshitz.plasma_gap import (DEMO_DISCLAIMER, PlasmaGapParams, kappa_from_density, n0_term, nuclear_demo,
                                 pair_density, screened_expansion, screened_free_energy, vacuum_gap_expansion,
                                 vacuum_gap_free_energy)
from lifshitz.quantities import CONST, MEV, thermal_x

# k_B T equal to the charged-pion rest energy; documented demo input
PION_T = 139.57039 * MEV / CONST.k_B


def T_for_x(x, d):
    return x * CONST.hbar * CONST.c / (2 * math.pi * CONST.k_B * d)


def test_pair_density_examples():
    assert pair_density(1e10) == pytest.approx(3.04e37, rel=5e-3)
    assert pair_density(2e10) == pytest.approx(8 * pair_density(1e10), rel=1e-14)
    assert pair_density(0.0) == 0.0


def test_params():
    p = PlasmaGapParams.build(1e-6, 300.0)
    assert p.eta == 2 * CONST.k_B * 300.0 / (CONST.hbar * CONST.c)
    assert p.rho == pair_density(300.0)
    assert p.kappa_pl == kappa_from_density(p.rho) and p.kappa_source == "pair_density"
    q = PlasmaGapParams.build(1e-6, 300.0, kappa_pl=5.0)
    assert q.kappa_pl == 5.0 and q.kappa_source == "given"
    with pytest.raises(ValueError):
        PlasmaGapParams.build(1e-6, 300.0, kappa_pl=-1.0)
    with pytest.raises(ValueError):
        PlasmaGapParams.build(0.0, 300.0)


def test_kappa_zero_reduces_to_vacuum():
    p = PlasmaGapParams.build(1e-6, 300.0, kappa_pl=0.0)
    assert screened_free_energy(p).value == vacuum_gap_free_energy(1e-6, 300.0).value


def test_closed_form_against_quadrature_in_mpmath():
    d, a = 1e-6, 7e5
    y = 2 * d * a
    with mp.workdps(30):
        ref = mp.quad(lambda q: q * mp.log(1 - mp.exp(-2 * d * mp.sqrt(q * q + a * a))), [0, 1e6, 1e7, mp.inf])
        closed = -(mp.polylog(3, mp.exp(-y)) + y * mp.polylog(2, mp.exp(-y))) / (4 * d * d)
        assert float(closed / ref) == pytest.approx(1.0, rel=1e-20)


def mp_vacuum(d, T, dps=40):
    """High-precision primed polylog sum, independent of the package."""
    with mp.workdps(dps):
        x = mp.mpf(thermal_x(d, T))
        total, n = mp.zeta(3) / 2, 1
        while True:
            y = 2 * x * n
            term = mp.polylog(3, mp.exp(-y)) + y * mp.polylog(2, mp.exp(-y))
            total += term
            if term < mp.mpf(10) ** (-dps) * total:
                break
            n += 1
        return float(-mp.mpf(CONST.k_B) * T / mp.pi * total / (4 * mp.mpf(d) ** 2))


@pytest.mark.parametrize("d,T", [(1e-6, 300.0), (1e-7, 30.0), (1e-5, 3000.0)])
def test_vacuum_against_mpmath(d, T):
    res = vacuum_gap_free_energy(d, T)
    ref = mp_vacuum(d, T)
    assert res.value == pytest.approx(ref, rel=1e-13)
    assert abs(res.value - ref) <= res.abs_error + 1e-15 * abs(ref)


def test_vacuum_limits():
    d = 1e-6
    lo = vacuum_gap_free_energy(d, T_for_x(0.05, d)).value
    assert lo == pytest.approx(-math.pi**2 * CONST.hbar * CONST.c / (720 * d**3), rel=1e-4)
    T = T_for_x(40.0, d)
    hi = vacuum_gap_free_energy(d, T).value
    assert hi == pytest.approx(-CONST.zeta3 * CONST.k_B * T / (8 * math.pi * d * d), rel=1e-12)


def test_vacuum_vs_engine():
    tol = 1e-9
    a = vacuum_gap_free_energy(1e-6, 300.0)
    b = free_energy(PlanarScenario(IdealMetal(), Vacuum(), 1e-6, 300.0), tol)
    assert a.value == pytest.approx(b.value, rel=2 * tol)


def test_expansion_terms():
    cas, t3, t4 = vacuum_gap_expansion(1e-6, 0.0)
    assert t3 == 0.0 and t4 == 0.0 and cas < 0
    _, t3a, t4a = vacuum_gap_expansion(1e-6, 300.0)
    _, t3b, t4b = vacuum_gap_expansion(2e-6, 300.0)
    assert t3a == t3b
    assert t4b == pytest.approx(2 * t4a, rel=1e-15)


def test_expansion_at_half():
    d = 1e-6
    T = T_for_x(0.5, d)
    exact = vacuum_gap_free_energy(d, T).value
    assert math.fsum(vacuum_gap_expansion(d, T)) == pytest.approx(exact, rel=0.02)


@pytest.mark.parametrize("kd", [5.0, 8.0, 12.0])
def test_yukawa_n0(kd):
    d = 1e-6
    p = PlasmaGapParams.build(d, 300.0, kd / d)
    assert n0_term(screened_free_energy(p)) == pytest.approx(screened_expansion(p)[0], rel=0.01)


def test_expansion_kappa_zero_limit():
    d, T = 1e-6, 300.0
    limit = -CONST.k_B * T / (8 * math.pi * d * d)
    assert screened_expansion(PlasmaGapParams.build(d, T, 0.0))[0] == limit
    assert screened_expansion(PlasmaGapParams.build(d, T, 1e-3))[0] == pytest.approx(limit, rel=1e-8)


def test_expansion_decays_in_d():
    vals = [screened_expansion(PlasmaGapParams.build(d, 300.0, 1e6)) for d in (1e-6, 2e-6, 4e-6)]
    for i in range(2):
        assert abs(vals[i + 1][0]) < abs(vals[i][0])
        assert abs(vals[i + 1][1]) < abs(vals[i][1])


def test_screening_suppresses():
    d, T = 1e-6, 300.0
    vac = vacuum_gap_free_energy(d, T).value
    kd = 20.0
    ratio = screened_free_energy(PlasmaGapParams.build(d, T, kd / d)).value / vac
    # e^{-2 kappa d} up to a polynomial prefactor in kappa d
    assert math.exp(-2 * kd) < ratio < (1 + 2 * kd) ** 2 * math.exp(-2 * kd)


@settings(max_examples=15, deadline=None)
@given(st.floats(1e3, 1e7), st.floats(1.01, 3.0))
def test_monotone_in_kappa(kappa, factor):
    d, T = 1e-6, 300.0
    a = screened_free_energy(PlasmaGapParams.build(d, T, kappa)).value
    b = screened_free_energy(PlasmaGapParams.build(d, T, kappa * factor)).value
    assert abs(b) < abs(a)


def test_nuclear_demo_report():
    rep = nuclear_demo(1.0, PION_T)
    assert rep.lines()[0] == DEMO_DISCLAIMER
    assert 0.1 <= abs(rep.term_n0_MeV) <= 10.0
    assert rep.kappa_source == "pair_density"


def test_nuclear_demo_cold_limit():
    rep = nuclear_demo(1.0, 1e-3, kappa_per_fm=0.0)
    assert abs(rep.term_n0_MeV) < 1e-12 and abs(rep.term_n_pos_MeV) < 1e-12


@pytest.mark.parametrize("d_fm", [0.05, 11.0])
def test_nuclear_demo_range(d_fm):
    with pytest.raises(ValueError):
        nuclear_demo(d_fm, PION_T)


def test_grid_bookkeeping():
    res = vacuum_gap_free_energy(1e-6, 300.0)
    assert res.grid.n_max + 1 == res.n_terms_used
    assert res.te == pytest.approx(res.tm) and res.te + res.tm == pytest.approx(res.value, rel=1e-14)
