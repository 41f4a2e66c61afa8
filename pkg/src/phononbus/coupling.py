"""Laser-dot coupling chain: Lamb-Dicke parameter through C-phase timing."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvariantError
from .support import ModeSpectrum
from .units import ALPHA, HBAR


def lamb_dicke_from_mass(k2: float, total_mass: float, omega: float, cos_theta: float = 1.0,
                         hbar: float = HBAR) -> float:
    """eta = k2 sqrt(hbar/(M omega)) cos(theta)."""
    if not 0 <= cos_theta <= 1:
        raise InvariantError("cos_theta must lie in [0, 1]")
    return k2 * math.sqrt(hbar / (total_mass * omega)) * cos_theta


def lamb_dicke(k2: float, spectrum: ModeSpectrum, m: int = 1, cos_theta: float = 1.0) -> float:
    mode = spectrum.mode(m)
    return lamb_dicke_from_mass(k2, spectrum.total_mass, mode.omega, cos_theta)


def rabi(intensity: float, dipole: float, fc_product: float, hbar: float = HBAR) -> float:
    """On-resonance Rabi frequency sqrt(2 pi alpha I/hbar) * FC * |d| (d in metres)."""
    if intensity < 0 or fc_product < 0:
        raise InvariantError("intensity and Franck-Condon product must be non-negative")
    return math.sqrt(2 * math.pi * ALPHA * intensity / hbar) * fc_product * abs(dipole)


def raman_rabi(omega_1: float, omega_2: float, delta: float) -> float:
    if not delta > 0:
        raise InvariantError("Raman detuning must be positive")
    return abs(omega_1 * omega_2) / delta


def sideband_strength(eta: float, raman: float) -> float:
    if not 0 <= eta < 1:
        raise InvariantError(f"eta must lie in [0, 1), got {eta}")
    return eta * raman


def cphase_time(omega2: float) -> tuple[float, float]:
    """(tau_A, tau_cphase): single sideband pulse pi/(2 Omega2) and the gate 2 pi/Omega2."""
    if not omega2 > 0:
        raise InvariantError("omega2 must be positive")
    return math.pi / (2 * omega2), 2 * math.pi / omega2


def franck_condon_product(displacements: Sequence[float]) -> float:
    """Displaced-oscillator overlap exp(-sum(d_k^2)/2) for per-mode shifts d_k."""
    d = np.asarray(displacements, dtype=float)
    return float(np.exp(-0.5 * np.sum(d * d)))


@dataclass(frozen=True)
class RamanChannel:
    initial: str
    virtual: str
    final: str
    detuning_delta: float
    pol_1: tuple[complex, complex, complex]
    pol_2: tuple[complex, complex, complex]
    k1: float
    k2: float
    fc_1: float
    fc_2: float

    def __post_init__(self) -> None:
        if not self.detuning_delta > 0:
            raise InvariantError("detuning must be positive")
        for p in (self.pol_1, self.pol_2):
            if abs(np.linalg.norm(np.asarray(p, dtype=complex)) - 1) > 1e-9:
                raise InvariantError("polarizations must be unit vectors")


@dataclass(frozen=True)
class GatePoint:
    omega2: float
    eta: float
    I1: float
    I2: float
    tau_A: float
    tau_cphase: float

    def __post_init__(self) -> None:
        if not self.eta < 1:
            raise InvariantError(f"outside the Lamb-Dicke regime: eta = {self.eta}")
        if abs(self.tau_cphase - 4 * self.tau_A) > 1e-12 * self.tau_cphase:
            raise InvariantError("tau_cphase must equal 4 tau_A")


def gate_point(I1: float, I2: float, eta: float, dipole_1: float, dipole_2: float,
               fc_1: float, fc_2: float, delta: float) -> GatePoint:
    """Sideband strength and timing for given beam intensities (dipoles in metres)."""
    om = sideband_strength(eta, raman_rabi(rabi(I1, dipole_1, fc_1), rabi(I2, dipole_2, fc_2), delta))
    tau_a, tau_c = cphase_time(om)
    return GatePoint(om, eta, I1, I2, tau_a, tau_c)
