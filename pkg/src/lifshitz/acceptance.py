"""Acceptance checks shared by ``lifshitz selftest`` and the test-suite.

Each ``criterion_*`` function returns a :class:`Check`; ``run_all`` runs them
in order. Oracles are closed forms or independent arithmetic, never the code
path under test.
"""
from __future__ import annotations

import math
import os
import tempfile
import time
from dataclasses import dataclass
from typing import Callable, List

import numpy as np

from .dielectric import ConstantEps, Drude, IdealMetal, Oscillator, Plasma, Vacuum
from .engine import drude_plasma_ratio, extra_term, free_energy, free_energy_zero_T
from .planar_kernel import PlanarScenario, log_dispersion
from .plasma_gap import (PlasmaGapParams, n0_term, pair_density, screened_expansion, screened_free_energy,
                         vacuum_gap_expansion, vacuum_gap_free_energy)
from .quantities import CONST, ev_to_rad_s, thermal_x
from .resonance import (PolarizabilityModel, ResonanceQuery, resonance_closed_form, resonance_n0,
                        resonance_series, small_x_limit)

EPS = np.finfo(float).eps

# example metal, gold-like; inputs, not fitted values
OMEGA_P = ev_to_rad_s(9.0)
GAMMA = ev_to_rad_s(0.035)


@dataclass(frozen=True)
class Check:
    number: int
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number:2d} {self.name}: {self.detail}"


def temperature_for_x(x: float, d: float) -> float:
    """Temperature at which 2 pi k_B T d / (hbar c) equals ``x``."""
    return x * CONST.hbar * CONST.c / (2.0 * math.pi * CONST.k_B * d)


def classical_ideal(d: float, T: float) -> float:
    return -CONST.zeta3 * CONST.k_B * T / (8.0 * math.pi * d * d)


def criterion_1() -> Check:
    d = 1e-6
    oracle = -math.pi**2 * CONST.hbar * CONST.c / (720.0 * d**3)
    t0 = time.perf_counter()
    res = free_energy_zero_T(PlanarScenario(IdealMetal(), Vacuum(), d))
    elapsed = time.perf_counter() - t0
    rel = abs(res.value / oracle - 1.0)
    ok = rel <= 1e-3 and elapsed < 5.0
    return Check(1, "zero-T ideal Casimir energy", ok,
                 f"F={res.value:.10e} J/m^2, rel dev {rel:.2e} (<=1e-3), {elapsed:.2f} s (<5 s)")


def criterion_2() -> Check:
    cases = [(30e-6, 300.0), (10e-6, 1000.0), (5e-6, 5000.0)]
    worst, parts = 0.0, []
    ok = True
    for d, T in cases:
        x = thermal_x(d, T)
        ratio = free_energy(PlanarScenario(IdealMetal(), Vacuum(), d, T)).value / classical_ideal(d, T)
        ok &= x >= 20 and 0.99 <= ratio <= 1.01
        parts.append(f"x={x:.1f}:{ratio:.6f}")
    return Check(2, "classical high-T ideal limit", ok, "ratios " + ", ".join(parts) + " in [0.99, 1.01]")


def criterion_3() -> Check:
    d, T = 30e-6, 300.0
    x, wpd = thermal_x(d, T), OMEGA_P * d / CONST.c
    ratio = drude_plasma_ratio(d, T, OMEGA_P, GAMMA)
    plasma = free_energy(PlanarScenario(Plasma(OMEGA_P), Vacuum(), d, T)).value / classical_ideal(d, T)
    ok = x >= 20 and wpd >= 50 and 0.50 <= ratio <= 0.55 and abs(plasma - 1.0) <= 0.02
    return Check(3, "Drude/plasma factor of two", ok,
                 f"x={x:.1f}, w_p d/c={wpd:.0f}, Drude/plasma={ratio:.5f} in [0.50, 0.55], "
                 f"plasma/classical={plasma:.5f} (within 2%)")


def criterion_4() -> Check:
    worst = 0.0
    for d in (1e-6, 3e-6):
        for T in (300.0, 600.0):
            sc = PlanarScenario(Plasma(OMEGA_P), Vacuum(), d, T)
            F = free_energy(sc).value
            worst = max(worst, abs(extra_term(sc).value_real) / abs(F))
    return Check(4, "extra term vanishes for the plasma model", worst <= 1e-10,
                 f"max |extra|/|F| = {worst:.2e} (<=1e-10) on 2x2 (d, T)")


def criterion_5() -> Check:
    worst, xs = 0.0, []
    for d in (0.5e-6, 2e-6, 8e-6):
        for T in (80.0, 300.0, 900.0):
            xs.append(thermal_x(d, T))
            a = vacuum_gap_free_energy(d, T)
            b = free_energy(PlanarScenario(IdealMetal(), Vacuum(), d, T))
            worst = max(worst, abs(a.value - b.value) / (a.abs_error + b.abs_error))
    ok = worst <= 2.0 and min(xs) >= 0.1 and max(xs) <= 20.0
    return Check(5, "polylog vs quadrature dual path", ok,
                 f"max |diff|/combined err = {worst:.3f} (<=2), x in [{min(xs):.2f}, {max(xs):.2f}]")


def expansion_deviation(x: float, d: float = 1e-6):
    """(|expansion - exact| / |exact|, rounding floor) for ideal plates across vacuum."""
    T = temperature_for_x(x, d)
    res = vacuum_gap_free_energy(d, T, tol=1e-14)
    approx = math.fsum(vacuum_gap_expansion(d, T))
    floor = (res.abs_error + 64 * EPS * abs(res.value)) / abs(res.value)
    return abs(approx - res.value) / abs(res.value), floor


def expansion_deviation_mp(x, dps: int = 120):
    """The same relative deviation in mpmath at ``dps`` digits, in units hbar c / d^3."""
    import mpmath as mp

    with mp.workdps(dps):
        x = mp.mpf(x)
        total = mp.zeta(3) / 2
        n = 1
        while True:
            y = 2 * x * n
            term = mp.polylog(3, mp.exp(-y)) + y * mp.polylog(2, mp.exp(-y))
            total += term
            if term < mp.mpf(10) ** (-dps - 5) * total:
                break
            n += 1
        exact = -x / (8 * mp.pi**2) * total
        tt = x / (2 * mp.pi)
        approx = -mp.pi**2 / 720 - mp.zeta(3) * tt**3 / (2 * mp.pi) + mp.pi**2 * tt**4 / 45
        return float(abs(approx - exact) / abs(exact))


def criterion_6(use_mpmath: bool = True) -> Check:
    xs = [0.5, 0.4, 0.3, 0.2, 0.1]
    devs = [expansion_deviation(x) for x in xs]
    at_half = devs[0][0]
    # double precision: non-increasing until the deviation reaches its rounding floor
    mono = all(b[0] <= a[0] or b[0] <= b[1] for a, b in zip(devs, devs[1:]))
    detail = f"dev(0.5)={at_half:.2e} (<=2%); float64 devs " + ", ".join(f"{d:.1e}" for d, _ in devs)
    ok = at_half <= 0.02 and mono
    if use_mpmath:
        try:
            hp = [expansion_deviation_mp(x) for x in xs]
        except ImportError:
            detail += "; mpmath unavailable"
        else:
            ok &= all(b < a for a, b in zip(hp, hp[1:]))
            detail += "; 120-digit devs " + ", ".join(f"{d:.1e}" for d in hp) + " strictly decreasing"
    return Check(6, "low-temperature expansion", ok, detail)


def criterion_7() -> Check:
    d, T = 1e-6, 300.0
    worst, parts = 0.0, []
    for kd in (5.0, 8.0, 12.0):
        params = PlasmaGapParams.build(d, T, kd / d)
        num = n0_term(screened_free_energy(params))
        rel = abs(num / screened_expansion(params)[0] - 1.0)
        worst = max(worst, rel)
        parts.append(f"kd={kd:g}:{rel:.1e}")
    return Check(7, "Yukawa screening n=0 term", worst <= 0.01, "rel dev " + ", ".join(parts) + " (<=1%)")


def criterion_8() -> Check:
    # independent arithmetic from exact SI definitions
    k, h, c = 1.380649e-23, 6.62607015e-34, 299792458.0
    zeta3 = 1.2020569031595942854
    T = 1e10
    oracle = 3.0 * zeta3 * (k * T * 2.0 * math.pi / (h * c)) ** 3 / math.pi**2
    value = pair_density(T)
    rel = abs(value / oracle - 1.0)
    scaling = max(abs(pair_density(f * T) / (f**3 * value) - 1.0) for f in (2.0, 0.5, 10.0))
    ok = rel <= 5e-3 and abs(value / 3.04e37 - 1.0) <= 5e-3 and scaling <= 1e-12
    return Check(8, "pair density", ok,
                 f"rho(1e10 K)={value:.5e} 1/m^3, vs oracle {rel:.1e} (<=0.5%), cubic scaling {scaling:.1e} (<=1e-12)")


def criterion_9() -> Check:
    alpha0, d = 1e-30, 1e-6
    ident = 0.0
    for x in (0.01, 0.1, 1.0, 10.0):
        q = ResonanceQuery(d, temperature_for_x(x, d))
        s = resonance_series(q, PolarizabilityModel(alpha0))
        ident = max(ident, abs(s / resonance_closed_form(q, alpha0) - 1.0))
    large_ok, large = True, []
    for x in (10.0, 20.0, 40.0):
        T = temperature_for_x(x, d)
        dev = abs(resonance_closed_form(ResonanceQuery(d, T), alpha0) / resonance_n0(d, T, alpha0) - 1.0)
        bound = 2.0 * (1.0 + x + x * x) * math.exp(-x) * 1.01 + 1e-15
        large_ok &= dev <= bound
        large.append(f"x={x:g}:{dev:.1e}<={bound:.1e}")
    q = ResonanceQuery(d, temperature_for_x(1e-3, d))
    small = abs(resonance_closed_form(q, alpha0) / small_x_limit(d, alpha0) - 1.0)
    odd = resonance_closed_form(ResonanceQuery(d, q.T, -1), alpha0) == -resonance_closed_form(q, alpha0)
    ok = ident <= 1e-10 and large_ok and small <= 5e-3 and odd
    return Check(9, "resonance resummation identity", ok,
                 f"series/closed max dev {ident:.1e} (<=1e-10); large-x {'; '.join(large)}; "
                 f"small-x dev {small:.1e} (<=0.5%)")


def criterion_10() -> Check:
    d, T = 1e-6, 300.0
    same = [Vacuum(), ConstantEps(3.0), Drude(OMEGA_P, GAMMA), Plasma(OMEGA_P), Oscillator(((2.0, 1e16),))]
    zeros = []
    for m in same:
        sc = PlanarScenario(m, m, d, T)
        zeros.append(free_energy(sc).value)
        zeros.append(free_energy_zero_T(PlanarScenario(m, m, d)).value)
        zeros.append(float(log_dispersion(sc, 1e6, 1e14)))
    all_zero = all(z == 0.0 for z in zeros)
    models = [IdealMetal(), Drude(OMEGA_P, GAMMA), Plasma(OMEGA_P), ConstantEps(3.0), Oscillator(((2.0, 1e16),))]
    decay = []
    for m in models:
        f1 = free_energy(PlanarScenario(m, Vacuum(), d, T)).value
        f2 = free_energy(PlanarScenario(m, Vacuum(), 10 * d, T)).value
        decay.append(abs(f2) < abs(f1))
    vac = abs(vacuum_gap_free_energy(10 * d, T).value) < abs(vacuum_gap_free_energy(d, T).value)
    p1, p2 = PlasmaGapParams.build(d, T, 1e5), PlasmaGapParams.build(10 * d, T, 1e5)
    scr = abs(screened_free_energy(p2).value) < abs(screened_free_energy(p1).value)
    res = abs(resonance_closed_form(ResonanceQuery(10 * d, T), 1e-30)) < abs(resonance_closed_form(ResonanceQuery(d, T), 1e-30))
    ok = all_zero and all(decay) and vac and scr and res
    return Check(10, "trivial zeros and decay with d", ok,
                 f"{len(zeros)} equal-medium values all exactly 0: {all_zero}; "
                 f"|F(10d)|<|F(d)| in {sum(decay) + vac + scr + res}/{len(decay) + 3} models")


SWEEP_SCENARIO = """\
[materials]
halfspace = drude
halfspace_omega_p_eV = 9.0
halfspace_gamma_eV = 0.035
gap = vacuum

[thermal]
T_K = 300

[sweep]
variable = d
start_um = 1
stop_um = 10
points_count = 16
spacing = log
"""


def criterion_11() -> Check:
    from .cli import main

    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "sweep.ini")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(SWEEP_SCENARIO)
        blobs, codes = [], []
        for threads in (1, 8):
            out = os.path.join(tmp, f"t{threads}.csv")
            codes.append(main(["sweep", path, "--threads", str(threads), "--out", out]))
            with open(out, "rb") as fh:
                blobs.append(fh.read())
    ok = codes == [0, 0] and blobs[0] == blobs[1]
    return Check(11, "sweep determinism across threads", ok,
                 f"exit codes {codes}, {len(blobs[0])} bytes, identical: {blobs[0] == blobs[1]}")


CRITERIA: List[Callable[[], Check]] = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
                                       criterion_7, criterion_8, criterion_9, criterion_10, criterion_11]


def run_all() -> List[Check]:
    out = []
    for fn in CRITERIA:
        try:
            out.append(fn())
        except Exception as exc:  # a crash is a failed criterion, reported with its cause
            number = CRITERIA.index(fn) + 1
            out.append(Check(number, fn.__name__, False, f"raised {type(exc).__name__}: {exc}"))
    return out
