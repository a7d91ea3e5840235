"""Ideal-metal plates across vacuum or an electron-positron plasma.

Each Matsubara term has a closed form in polylogarithms:

    int_0^inf q ln(1 - e^{-2 d sqrt(q^2 + a^2)}) dq = -[Li3(e^{-y}) + y Li2(e^{-y})] / (4 d^2),

with y = 2 d a and a^2 = (xi_n / c)^2 + kappa^2.  This path shares nothing
with the quadrature engine, so the two serve as oracles for each other.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import kernels
from .engine import EnergyResult, MatsubaraGrid, TermContribution
from .quadrature import ConvergenceError
from .quantities import CONST, FM, MEV, matsubara_frequency

DEMO_DISCLAIMER = "order-of-magnitude demo - d, T and kappa are illustrative choices, not a nuclear-structure result"

_BLOCK = 256


def pair_density(T: float) -> float:
    """Equilibrium electron plus positron density 3 zeta(3) (k_B T / hbar c)^3 / pi^2 in 1/m^3."""
    if T < 0:
        raise ValueError("temperature must be non-negative")
    return 3.0 * CONST.zeta3 * (CONST.k_B * T / (CONST.hbar * CONST.c)) ** 3 / math.pi**2


def kappa_from_density(rho: float) -> float:
    """Screening wave number omega_p / c with omega_p^2 = 4 pi rho e^2 / m_e (Gaussian)."""
    omega_p2 = 4.0 * math.pi * rho * CONST.e2_gaussian / CONST.m_e
    return math.sqrt(omega_p2) / CONST.c


@dataclass(frozen=True)
class PlasmaGapParams:
    d: float
    T: float
    kappa_pl: float
    eta: float
    rho: float
    rho_star: float
    kappa_source: str = "given"

    @classmethod
    def build(cls, d: float, T: float, kappa_pl: Optional[float] = None, rho: Optional[float] = None):
        """Precompute eta and rho*; kappa comes from ``kappa_pl`` or, if None, from the pair density."""
        if not d > 0:
            raise ValueError("d must be positive")
        if not T > 0:
            raise ValueError("T must be positive")
        rho = pair_density(T) if rho is None else float(rho)
        if kappa_pl is None:
            kappa_pl, source = kappa_from_density(rho), "pair_density"
        else:
            source = "given"
        if kappa_pl < 0:
            raise ValueError("kappa_pl must be non-negative")
        eta = 2.0 * CONST.k_B * T / (CONST.hbar * CONST.c)
        rho_star = rho * CONST.e2_gaussian * CONST.hbar**2 / (math.pi * CONST.m_e * (CONST.k_B * T) ** 2)
        return cls(d, T, float(kappa_pl), eta, rho, rho_star, source)


def _matsubara_polylog(d: float, T: float, kappa: float, tol: float, max_terms: int = 10_000_000) -> EnergyResult:
    pref = CONST.k_B * T / math.pi
    four_d2 = 4.0 * d * d
    xi1_c = matsubara_frequency(1, T) / CONST.c
    total = 0.0
    n0 = 0
    terms = []
    last = 0.0
    ratio = 0.0
    converged = False
    while n0 < max_terms:
        n = np.arange(n0, n0 + _BLOCK, dtype=float)
        a = np.sqrt((xi1_c * n) ** 2 + kappa * kappa)
        vals = -pref * kernels.screened_sum(2.0 * d * a) / four_d2
        if n0 == 0:
            vals[0] *= 0.5
        for k, v in enumerate(vals):
            idx = n0 + k
            terms.append(TermContribution(idx, xi1_c * CONST.c * idx, 0.5 * v, 0.5 * v, 0.0))
            total += v
            if last != 0.0:
                ratio = abs(v / last)
            last = v
            if idx >= QUIET and all(abs(t.te + t.tm) <= 0.1 * tol * abs(total) for t in terms[-QUIET:]):
                converged = True
                break
        if converged:
            break
        n0 += _BLOCK
    if not converged:
        raise ConvergenceError("pair-plasma Matsubara sum did not converge",
                               partial=EnergyResult(total, math.inf, len(terms), len(terms), terms))
    tail = abs(last) * ratio / (1.0 - ratio) if ratio < 1.0 else QUIET * abs(last)
    # each closed-form term is accurate to a few ulps
    rounding = 8.0 * np.finfo(float).eps * sum(abs(t.te + t.tm) for t in terms)
    grid = MatsubaraGrid(T, len(terms) - 1, tail, matsubara_frequency(np.arange(len(terms)), T))
    return EnergyResult(total, tail + rounding, len(terms), len(terms), terms, grid)


QUIET = 3


def vacuum_gap_free_energy(d: float, T: float, tol: float = 1e-10) -> EnergyResult:
    """Ideal plates across vacuum, (k_B T / pi) sum'_n int q ln(1 - e^{-2 d sqrt(q^2 + xi_n^2/c^2)}) dq."""
    if not (d > 0 and T > 0):
        raise ValueError("d and T must be positive")
    return _matsubara_polylog(d, T, 0.0, tol)


def screened_free_energy(params: PlasmaGapParams, tol: float = 1e-10) -> EnergyResult:
    """Ideal plates across a pair plasma with screening wave number kappa_pl."""
    return _matsubara_polylog(params.d, params.T, params.kappa_pl, tol)


def vacuum_gap_expansion(d: float, T: float):
    """(Casimir, T^3, T^4) addends of the low-temperature expansion, J/m^2 each."""
    if not d > 0 or T < 0:
        raise ValueError("need d > 0 and T >= 0")
    hbar, c, kT = CONST.hbar, CONST.c, CONST.k_B * T
    casimir = -math.pi**2 * hbar * c / (720.0 * d**3)
    t3 = -CONST.zeta3 * kT**3 / (2.0 * math.pi * hbar**2 * c**2)
    t4 = math.pi**2 * d * kT**4 / (45.0 * hbar**3 * c**3)
    return casimir, t3, t4


def screened_expansion(params: PlasmaGapParams):
    """(n = 0, n > 0) Yukawa-type terms, evaluated exactly as printed.

    For kappa -> 0 the n = 0 term tends to -k_B T / (8 pi d^2).
    """
    d, kT, kap = params.d, CONST.k_B * params.T, params.kappa_pl
    if kap > 0:
        n0 = -(kT * kap / (4.0 * math.pi)) * math.exp(-2.0 * kap * d) / d * (1.0 + 1.0 / (2.0 * d * kap))
    else:
        n0 = -kT / (8.0 * math.pi * d * d)
    npos = -(kT**2 / (CONST.hbar * CONST.c)) * math.exp(-2.0 * params.eta * d) \
        * math.exp(-params.rho_star * params.eta * d) / d
    return n0, npos


def n0_term(result: EnergyResult) -> float:
    """The isolated n = 0 contribution of a Matsubara result."""
    b = result.breakdown[0]
    return b.te + b.tm


@dataclass
class NuclearDemoReport:
    d_fm: float
    T: float
    kT_MeV: float
    kappa_per_fm: float
    kappa_source: str
    term_n0_MeV: float
    term_n_pos_MeV: float
    term_n0_MeV_per_fm2: float
    term_n_pos_MeV_per_fm2: float
    disclaimer: str = DEMO_DISCLAIMER

    def lines(self):
        return [
            DEMO_DISCLAIMER,
            f"d = {self.d_fm:.6g} fm, k_B T = {self.kT_MeV:.6g} MeV, kappa = {self.kappa_per_fm:.6g} 1/fm ({self.kappa_source})",
            f"n=0 term: {self.term_n0_MeV_per_fm2:.6e} MeV/fm^2 -> {self.term_n0_MeV:.6e} MeV over area d^2",
            f"n>0 term: {self.term_n_pos_MeV_per_fm2:.6e} MeV/fm^2 -> {self.term_n_pos_MeV:.6e} MeV over area d^2",
        ]


def nuclear_demo(d_fm: float, T: float, kappa_per_fm: Optional[float] = None) -> NuclearDemoReport:
    """Yukawa expansion at nuclear scale; energies per area times the area d^2."""
    if not 0.1 <= d_fm <= 10.0:
        raise ValueError("d_fm must lie in [0.1, 10] fm")
    d = d_fm * FM
    kappa = None if kappa_per_fm is None else kappa_per_fm / FM
    params = PlasmaGapParams.build(d, T, kappa)
    n0, npos = screened_expansion(params)
    per_area = MEV / FM**2
    return NuclearDemoReport(
        d_fm, T, CONST.k_B * T / MEV, params.kappa_pl * FM, params.kappa_source,
        n0 * d * d / MEV, npos * d * d / MEV, n0 / per_area, npos / per_area,
    )
