"""Finite-temperature Casimir-Lifshitz free energies between planar half-spaces.

The hot kernels in :mod:`lifshitz.kernels` are compiled with numba when it is
importable; set ``LIFSHITZ_NUMBA=0`` to force the pure-numpy path.
"""
__version__ = "0.1.0"

from .dielectric import (ConstantEps, DivergentStaticLimit, Drude, IdealMetal, Oscillator, Plasma, PoleError,
                         Vacuum, eps_imag_axis, eps_off_axis, from_config, static_limit)
from .engine import (EnergyResult, ExtraTermResult, MatsubaraGrid, drude_plasma_ratio, extra_term, free_energy,
                     free_energy_zero_T)
from .planar_kernel import (BranchTrackingError, KernelDomainError, PlanarScenario, PoleProximity, log_dispersion,
                            log_dispersion_off_axis, reflection)
from .plasma_gap import (DEMO_DISCLAIMER, PlasmaGapParams, nuclear_demo, pair_density, screened_expansion,
                         screened_free_energy, vacuum_gap_expansion, vacuum_gap_free_energy)
from .quadrature import ConvergenceError
from .quantities import CONST, Constants, Dimension, Quantity, UnitSystem, convert, matsubara_frequency, quantity
from .resonance import (ModeInstability, PolarizabilityMode, PolarizabilityModel, ResonanceQuery,
                        field_susceptibility, resonance_closed_form, resonance_integral, resonance_n0,
                        resonance_series)

__all__ = [name for name in dir() if not name.startswith("_")]
