import numpy as np
import pytest

from lifshitz.dielectric import ConstantEps, Drude, Plasma, Vacuum
from lifshitz.engine import extra_term, free_energy
from lifshitz.planar_kernel import PlanarScenario

# regression value of this implementation (no published number exists)
DRUDE_GOLDEN = 1.0528783011390704e-11


def test_plasma_vanishes(gold_like):
    wp, _ = gold_like
    r = extra_term(PlanarScenario(Plasma(wp), Vacuum(), 1e-6, 300.0))
    assert r.value_real == 0.0 and r.value_imag_part == 0.0
    assert r.pv_windows == []


def test_drude_golden(gold_like):
    wp, g = gold_like
    r = extra_term(PlanarScenario(Drude(wp, g), Vacuum(), 1e-6, 300.0), n_cap=5)
    assert r.value_real == pytest.approx(DRUDE_GOLDEN, rel=1e-9)
    assert abs(r.value_real) > r.abs_error > 0
    assert r.n_series_terms == 5 and len(r.per_n) == 5
    assert r.pv_converged
    (lo, hi), = r.pv_windows
    assert lo < g < hi
    assert sum(r.per_n).real == pytest.approx(r.value_real, rel=1e-12)


def test_drude_nonzero_and_small_vs_free_energy(gold_like):
    wp, g = gold_like
    sc = PlanarScenario(Drude(wp, g), Vacuum(), 1e-6, 300.0)
    r = extra_term(sc, n_cap=3)
    assert 0 < abs(r.value_real) < abs(free_energy(sc).value)


def test_large_d_vanishes(gold_like):
    wp, g = gold_like
    vals = [abs(extra_term(PlanarScenario(Drude(wp, g), Vacuum(), d, 300.0), n_cap=5).value_real)
            for d in (1e-6, 1e-5, 1e-4)]
    assert vals[0] > vals[1] > vals[2]
    assert vals[2] < 1e-6 * vals[0]


def test_preconditions(gold_like):
    wp, g = gold_like
    with pytest.raises(TypeError):
        extra_term(PlanarScenario(ConstantEps(2.0), Vacuum(), 1e-6, 300.0))
    with pytest.raises(TypeError):
        extra_term(PlanarScenario(Drude(wp, g), ConstantEps(2.0), 1e-6, 300.0))
    with pytest.raises(ValueError):
        extra_term(PlanarScenario(Drude(wp, g), Vacuum(), 1e-6, 300.0), n_cap=0)
    with pytest.raises(ValueError):
        extra_term(PlanarScenario(Drude(wp, g), Vacuum(), 1e-6, 0.0))


def test_block_size_does_not_change_result(gold_like, monkeypatch):
    import lifshitz.engine as engine

    wp, g = gold_like
    sc = PlanarScenario(Drude(wp, g), Vacuum(), 1e-6, 300.0)
    ref = extra_term(sc, n_cap=4)
    monkeypatch.setattr(engine, "EXTRA_CHUNK", 97)
    assert extra_term(sc, n_cap=4).value_real == pytest.approx(ref.value_real, rel=1e-13)


@pytest.mark.slow
def test_large_n_cap_runs_and_terms_decay_like_one_over_n(gold_like):
    wp, g = gold_like
    r = extra_term(PlanarScenario(Drude(wp, g), Vacuum(), 1e-6, 300.0), n_cap=60)
    assert r.pv_converged and len(r.per_n) == 60
    tail = np.array([abs(v) * n for n, v in enumerate(r.per_n[30:], start=31)])
    # n |term_n| stays O(1) instead of decaying: the series converges slowly at best
    assert tail.max() / tail.min() < 3.0
