"""Physical constants and unit conversion.

Internal convention: SI throughout, and every rate or frequency (Gamma, omega,
Delta, Omega) is an angular rate in rad/s.  Quantities tagged ``"Hz"`` in a
scenario file are multiplied by 2*pi when loaded.  The built-in material
presets store the published numbers unchanged as rad/s; with this reading the
closed-form N_c values land within about 2% of the published table, while
converting them from Hz shifts every cell by a factor 2-6.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import constants as _sc

from .errors import SchemaError


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float
    c: float
    fine_structure_alpha: float
    amu: float
    eV: float

    def __post_init__(self) -> None:
        for name in ("hbar", "c", "fine_structure_alpha", "amu", "eV"):
            if not getattr(self, name) > 0:
                raise ValueError(f"physical constant {name} must be positive")


# hbar, c and eV are exact in SI.  The atomic mass unit is pinned to CODATA
# 2018 so that lambda0 = 1.66053906660e-16 kg/m regardless of the scipy release.
AMU_CODATA_2018 = 1.66053906660e-27

CONSTANTS = PhysicalConstants(
    hbar=_sc.hbar,
    c=_sc.c,
    fine_structure_alpha=_sc.fine_structure,
    amu=AMU_CODATA_2018,
    eV=_sc.eV,
)

HBAR = CONSTANTS.hbar
ALPHA = CONSTANTS.fine_structure_alpha

#: Minimal support density: a carbon chain at 10 amu per angstrom, in kg/m.
LAMBDA0 = 10.0 * CONSTANTS.amu / 1e-10

TWO_PI = 2.0 * math.pi

# unit -> (dimension, factor to SI / internal convention)
_UNITS: dict[str, tuple[str, float]] = {
    "m": ("length", 1.0),
    "cm": ("length", 1e-2),
    "mm": ("length", 1e-3),
    "um": ("length", 1e-6),
    "µm": ("length", 1e-6),
    "nm": ("length", 1e-9),
    "A": ("length", 1e-10),
    "Å": ("length", 1e-10),
    "rad/s": ("rate", 1.0),
    "1/s": ("rate", 1.0),
    "s^-1": ("rate", 1.0),
    "Hz": ("rate", TWO_PI),
    "kHz": ("rate", TWO_PI * 1e3),
    "MHz": ("rate", TWO_PI * 1e6),
    "GHz": ("rate", TWO_PI * 1e9),
    "THz": ("rate", TWO_PI * 1e12),
    "W/m2": ("intensity", 1.0),
    "W/m^2": ("intensity", 1.0),
    "W/cm2": ("intensity", 1e4),
    "W/cm^2": ("intensity", 1e4),
    "kg/m": ("density", 1.0),
    "amu/A": ("density", CONSTANTS.amu / 1e-10),
    "amu/Å": ("density", CONSTANTS.amu / 1e-10),
    "lambda0": ("density", LAMBDA0),
    "N": ("force", 1.0),
    "nN": ("force", 1e-9),
    "pN": ("force", 1e-12),
    "m4/s2": ("stiffness", 1.0),
    "m^4/s^2": ("stiffness", 1.0),
    "eV": ("energy", 1.0),
    "meV": ("energy", 1e-3),
    "J": ("energy", 1.0 / CONSTANTS.eV),
    "1/m": ("wavenumber", 1.0),
    "1/um": ("wavenumber", 1e6),
    "1/µm": ("wavenumber", 1e6),
    "1/nm": ("wavenumber", 1e9),
    "1": ("dimensionless", 1.0),
    "R": ("dipole", 1.0),
}

# internal unit of each dimension, used when a bare number is given
CANONICAL = {
    "length": "m",
    "rate": "rad/s",
    "intensity": "W/m2",
    "density": "kg/m",
    "force": "N",
    "stiffness": "m4/s2",
    "energy": "eV",
    "wavenumber": "1/m",
    "dimensionless": "1",
    "dipole": "R",
}


def convert(value: float, unit: str, dimension: str) -> float:
    """Convert ``value`` given in ``unit`` to the internal unit of ``dimension``."""
    try:
        dim, factor = _UNITS[unit]
    except KeyError:
        raise SchemaError(f"unknown unit {unit!r}") from None
    if dim != dimension:
        raise SchemaError(f"unit {unit!r} is a {dim}, expected a {dimension}")
    return float(value) * factor


def known_units(dimension: str) -> list[str]:
    return sorted(u for u, (d, _) in _UNITS.items() if d == dimension)


def energy_to_rate(energy_ev: float, hbar: float = HBAR) -> float:
    """Angular frequency (rad/s) of an energy quantum given in eV."""
    return energy_ev * CONSTANTS.eV / hbar


def energy_to_wavenumber(energy_ev: float) -> float:
    """Photon wavenumber (1/m) for a transition energy in eV."""
    return energy_ev * CONSTANTS.eV / (CONSTANTS.hbar * CONSTANTS.c)
