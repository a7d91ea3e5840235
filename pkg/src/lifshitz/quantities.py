"""Physical constants, Matsubara frequencies and the SI / nuclear unit bridge.

All computations run in SI.  The ``NaturalNuclear`` system (fm, MeV) exists
only for presentation of the nuclear-scale numbers.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import scipy.constants as sc
from scipy.special import zeta as _zeta


@dataclass(frozen=True)
class Constants:
    """CODATA constants used throughout the package.

    ``e`` is the elementary charge in coulomb.  Gaussian-form expressions
    (``4 pi rho e^2 / m_e``) must go through :attr:`e2_gaussian`, which equals
    ``alpha * hbar * c`` in J m, so no ``4 pi eps0`` factor ever appears.
    """

    hbar: float = sc.hbar
    c: float = sc.c
    k_B: float = sc.k
    e: float = sc.e
    m_e: float = sc.m_e
    alpha: float = sc.fine_structure
    zeta3: float = float(_zeta(3.0))

    def __post_init__(self):
        for name in ("hbar", "c", "k_B", "e", "m_e", "alpha", "zeta3"):
            if not getattr(self, name) > 0:
                raise ValueError(f"constant {name} must be positive")

    @property
    def e2_gaussian(self) -> float:
        """Squared charge in Gaussian form, e^2 = alpha*hbar*c [J m]."""
        return self.alpha * self.hbar * self.c


CONST = Constants()

MEV = 1e6 * sc.e  # J
FM = 1e-15  # m


class UnitSystem(enum.Enum):
    SI = "si"
    NaturalNuclear = "natural"


class Dimension(enum.Enum):
    ENERGY = "energy"
    ENERGY_PER_AREA = "energy/area"
    LENGTH = "length"
    TEMPERATURE = "temperature"
    FREQUENCY = "frequency"
    PRESSURE = "pressure"
    WAVENUMBER = "wavenumber"


# SI value of one natural unit, per dimension
_NATURAL_SCALE = {
    Dimension.ENERGY: MEV,
    Dimension.ENERGY_PER_AREA: MEV / FM**2,
    Dimension.LENGTH: FM,
    Dimension.TEMPERATURE: MEV / sc.k,  # temperature expressed as k_B T in MeV
    Dimension.FREQUENCY: MEV / sc.hbar,  # angular frequency expressed as hbar*omega in MeV
    Dimension.PRESSURE: MEV / FM**3,
    Dimension.WAVENUMBER: 1.0 / FM,
}

_UNIT_LABEL = {
    (UnitSystem.SI, Dimension.ENERGY): "J",
    (UnitSystem.SI, Dimension.ENERGY_PER_AREA): "J/m^2",
    (UnitSystem.SI, Dimension.LENGTH): "m",
    (UnitSystem.SI, Dimension.TEMPERATURE): "K",
    (UnitSystem.SI, Dimension.FREQUENCY): "rad/s",
    (UnitSystem.SI, Dimension.PRESSURE): "Pa",
    (UnitSystem.SI, Dimension.WAVENUMBER): "1/m",
    (UnitSystem.NaturalNuclear, Dimension.ENERGY): "MeV",
    (UnitSystem.NaturalNuclear, Dimension.ENERGY_PER_AREA): "MeV/fm^2",
    (UnitSystem.NaturalNuclear, Dimension.LENGTH): "fm",
    (UnitSystem.NaturalNuclear, Dimension.TEMPERATURE): "MeV",
    (UnitSystem.NaturalNuclear, Dimension.FREQUENCY): "MeV",
    (UnitSystem.NaturalNuclear, Dimension.PRESSURE): "MeV/fm^3",
    (UnitSystem.NaturalNuclear, Dimension.WAVENUMBER): "1/fm",
}


@dataclass(frozen=True)
class Quantity:
    value: float
    dimension: Dimension
    units: UnitSystem = UnitSystem.SI

    @property
    def label(self) -> str:
        return _UNIT_LABEL[(self.units, self.dimension)]


def _as_dimension(tag) -> Dimension:
    if isinstance(tag, Dimension):
        return tag
    try:
        return Dimension(tag)
    except ValueError:
        raise ValueError(f"unknown dimension tag {tag!r}") from None


def quantity(value: float, dimension, units: UnitSystem = UnitSystem.SI) -> Quantity:
    return Quantity(float(value), _as_dimension(dimension), units)


def convert(q: Quantity, target: UnitSystem) -> Quantity:
    """Express ``q`` in ``target`` units.

    >>> convert(quantity(1.0, "length"), UnitSystem.NaturalNuclear).value
    1000000000000000.0
    """
    dim = _as_dimension(q.dimension)
    if q.units is target:
        return Quantity(q.value, dim, target)
    scale = _NATURAL_SCALE[dim]
    if target is UnitSystem.NaturalNuclear:
        return Quantity(q.value / scale, dim, target)
    return Quantity(q.value * scale, dim, target)


def matsubara_frequency(n, T: float):
    """Angular Matsubara frequency 2 pi k_B T n / hbar in rad/s.

    ``n`` may be an integer or an integer array.
    """
    if not T > 0:
        raise ValueError(f"temperature must be positive, got {T!r}")
    return (2.0 * math.pi * CONST.k_B * T / CONST.hbar) * n


def thermal_x(d: float, T: float) -> float:
    """Dimensionless separation x = 2 pi k_B T d / (hbar c) = xi_1 d / c."""
    return 2.0 * math.pi * CONST.k_B * T * d / (CONST.hbar * CONST.c)


def ev_to_rad_s(energy_ev: float) -> float:
    return energy_ev * sc.e / sc.hbar
