"""Sideband fidelity, its optimum, laser intensities and qubit-count limits.

Two bounds limit the number of dots N on a support with fundamental
omega1_s: the fidelity bound (linear in omega1_s) and the nodal-laser
intensity bound (falling as omega1_s^-5/4).  Their minimum is a cusped
curve whose peak N_c is reported in Table 1.
"""

from __future__ import annotations

import dataclasses
import math
import warnings
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .coupling import GatePoint, cphase_time, lamb_dicke_from_mass
from .errors import InvariantError
from .materials import Material, Scenario, WaveConfig, builtin_material, preset_scenario
from .units import ALPHA, HBAR

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class FidelityReport:
    background: float
    offresonant_loss: float
    fidelity: float
    wave_config: WaveConfig

    def __post_init__(self) -> None:
        if self.background < 0 or self.offresonant_loss < 0:
            raise InvariantError("loss terms must be non-negative")

    @property
    def feasible(self) -> bool:
        return self.fidelity > 0.0

    @property
    def clamped(self) -> float:
        return min(max(self.fidelity, 0.0), 1.0)


def _positive(**kw: float) -> None:
    for name, v in kw.items():
        if not v > 0:
            raise InvariantError(f"{name} must be positive, got {v}")


def sideband_fidelity(n: float, gamma: float, omega2: float, omega1_s: float,
                      wave_config: WaveConfig = WaveConfig.STANDING, eta: float | None = None) -> FidelityReport:
    _positive(N=n, omega2=omega2, omega1_s=omega1_s)
    if gamma < 0:
        raise InvariantError("gamma must be non-negative")
    background = math.pi * n * gamma / (2 * omega2)
    if wave_config is WaveConfig.STANDING:
        off = 2 * (omega2 / omega1_s) ** 2
    else:
        if eta is None or not 0 < eta < 1:
            raise InvariantError("travelling-wave fidelity needs 0 < eta < 1")
        off = 4 * (omega2 / (eta * omega1_s)) ** 2
    return FidelityReport(background, off, 1.0 - background - off, wave_config)


def cphase_fidelity(n: float, gamma: float, omega2: float, omega1_s: float) -> float:
    _positive(N=n, omega2=omega2, omega1_s=omega1_s)
    return 1.0 - 2 * math.pi * n * gamma / omega2 - 4 * (omega2 / omega1_s) ** 2


def optimal_omega2(n: float, gamma: float, omega1_s: float) -> float:
    _positive(N=n, gamma=gamma, omega1_s=omega1_s)
    return (math.pi * omega1_s**2 * n * gamma / 8) ** (1 / 3)


def max_fidelity(n: float, gamma: float, omega1_s: float) -> float:
    return 1.0 - max_fidelity_loss(n, gamma, omega1_s)


def max_fidelity_loss(n: float, gamma: float, omega1_s: float) -> float:
    _positive(N=n, omega1_s=omega1_s)
    return 3 * (math.pi * n * gamma / (2 * math.sqrt(2) * omega1_s)) ** (2 / 3)


# --- numerical cross-check --------------------------------------------------


def golden_section_minimize(f: Callable[[float], float], a: float, b: float, tol: float = 1e-10,
                            max_iter: int = 500) -> float:
    """Minimiser of a unimodal ``f`` on [a, b] to absolute width ``tol``."""
    if not b > a:
        raise InvariantError("golden-section bracket must satisfy a < b")
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def golden_section_maximize(f: Callable[[float], float], a: float, b: float, tol: float = 1e-10) -> float:
    return golden_section_minimize(lambda x: -f(x), a, b, tol)


def numerical_optimal_omega2(n: float, gamma: float, omega1_s: float, span: float = 30.0) -> float:
    """Maximise the standing-wave fidelity over Omega2 by golden section.

    The search runs in u = ln(Omega2) over ln(omega1_s) +- span and works with
    the summed losses, which carry full relative precision.
    """
    _positive(N=n, gamma=gamma, omega1_s=omega1_s)
    bg = math.pi * n * gamma / 2

    def loss(u: float) -> float:
        w = math.exp(u)
        return bg / w + 2 * (w / omega1_s) ** 2

    u0 = math.log(omega1_s)
    return math.exp(golden_section_minimize(loss, u0 - span, u0 + span, tol=1e-11))


# --- intensities and limits ------------------------------------------------


def _eta(scenario: Scenario, omega1_s: float, n: float | None = None) -> float:
    n = scenario.n_dots if n is None else n
    mass = scenario.support.linear_density * scenario.support.unit_length * n
    return lamb_dicke_from_mass(scenario.k2_magnitude, mass, omega1_s, scenario.cos_theta)


def required_intensities(scenario: Scenario, omega1_s: float, dipoles: tuple[float, float] | None = None,
                         fc_products: tuple[float, float] | None = None) -> tuple[float, float]:
    """(I1, I2) in W/m^2 that reach the optimum Omega2 with balanced arms.

    ``dipoles`` = (antinodal arm, nodal arm) in metres and ``fc_products`` in
    the same order; both default to the scenario's material.
    """
    mat = scenario.material
    if dipoles is None:
        dipoles = (mat.dipole_1v * mat.dot_radius, mat.dipole_0v * mat.dot_radius)
    if fc_products is None:
        fc_products = (mat.fc_product_1v, mat.fc_product_01)
    m1, m2 = abs(dipoles[0]) * fc_products[0], abs(dipoles[1]) * fc_products[1]
    if m1 == 0 or m2 == 0:
        raise InvariantError("dipole elements and Franck-Condon products must be nonzero")
    _positive(omega1_s=omega1_s)
    eta = _eta(scenario, omega1_s)
    if eta == 0:
        raise InvariantError("cos_theta = 0 leaves the nodal arm uncoupled")
    base = HBAR * mat.delta * optimal_omega2(scenario.n_dots, mat.gamma_rec, omega1_s) / (2 * math.pi * ALPHA)
    return base / m1**2, base / (eta**2 * m2**2)


def nmax_small_continuous(omega1_s: float, epsilon: float, gamma: float) -> float:
    _positive(omega1_s=omega1_s, gamma=gamma)
    if not 0 <= epsilon < 1:
        raise InvariantError("epsilon must lie in [0, 1)")
    return omega1_s * (2 * epsilon / 3) ** 1.5 / (math.pi * gamma)


def nmax_small(omega1_s: float, epsilon: float, gamma: float) -> int:
    return math.floor(nmax_small_continuous(omega1_s, epsilon, gamma))


def big_prefactor(scenario: Scenario) -> float:
    """Constant b in n_big = b * omega1_s^(-5/4)."""
    mat = scenario.material
    d = mat.dipole_0v * mat.dot_radius * mat.fc_product_01 * scenario.cos_theta
    coupling = 2 * math.pi * ALPHA * scenario.k2_magnitude**2 * d**2 / (
        mat.delta * scenario.support.linear_density * scenario.support.unit_length
    )
    return mat.i2_max**0.75 * (8 / (math.pi * mat.gamma_rec)) ** 0.25 * coupling**0.75


def nmax_big_continuous(omega1_s: float, scenario: Scenario) -> float:
    _positive(omega1_s=omega1_s)
    return big_prefactor(scenario) * omega1_s ** (-1.25)


def nmax_big(omega1_s: float, scenario: Scenario) -> int:
    return math.floor(nmax_big_continuous(omega1_s, scenario))


def cusp(scenario: Scenario) -> tuple[float, int]:
    """(omega_c, N_c) from equating the two bounds."""
    a = nmax_small_continuous(1.0, scenario.epsilon, scenario.material.gamma_rec)
    b = big_prefactor(scenario)
    if a == 0 or b == 0:
        return 0.0, 0
    omega_c = (b / a) ** (4 / 9)
    return omega_c, math.floor(a * omega_c)


@dataclass(frozen=True)
class FeasibilitySample:
    omega1_s: float
    n_small: int
    n_big: int

    @property
    def n_max(self) -> int:
        return min(self.n_small, self.n_big)


@dataclass(frozen=True)
class FeasibilityCurve:
    samples: tuple[FeasibilitySample, ...]
    n_c: int
    omega_c: float

    def rows(self) -> list[tuple[float, int, int, int]]:
        return [(s.omega1_s, s.n_small, s.n_big, s.n_max) for s in self.samples]


def feasibility_curve(scenario: Scenario, omega_range: tuple[float, float], samples: int = 200) -> FeasibilityCurve:
    lo, hi = omega_range
    if samples < 1 or not 0 < lo or not lo < hi:
        raise InvariantError("omega range must be positive and increasing with at least one sample")
    omegas = np.geomspace(lo, hi, samples) if samples > 1 else np.array([lo])
    gamma = scenario.material.gamma_rec
    pts = tuple(
        FeasibilitySample(float(w), nmax_small(w, scenario.epsilon, gamma), nmax_big(w, scenario))
        for w in omegas
    )
    omega_c, n_c = cusp(scenario)
    return FeasibilityCurve(pts, n_c, omega_c)


def default_omega_range(scenario: Scenario, decades: float = 2.0) -> tuple[float, float]:
    omega_c, _ = cusp(scenario)
    return omega_c * 10 ** (-decades), omega_c * 10**decades


TABLE1_CELLS: tuple[tuple[int, float], ...] = ((1, 1), (1, 10), (1, 100), (2, 1), (2, 10), (2, 100), (3, 1), (3, 10))
TABLE1_PUBLISHED: dict[str, tuple[int, ...]] = {
    "CdTe": (7, 3, 1, 1, 0, 0, 0, 0),
    "Si": (731, 339, 158, 107, 50, 23, 16, 7),
}


def table1(materials: Sequence[str | Material] = ("CdTe", "Si"),
           cells: Iterable[tuple[int, float]] = TABLE1_CELLS,
           overrides: Callable[[Scenario], Scenario] | None = None) -> list[tuple]:
    """Rows (-log10 eps, lambda/lambda0, N_c per material)."""
    mats = [builtin_material(m) if isinstance(m, str) else m for m in materials]
    rows = []
    for neg_log_eps, lam_ratio in cells:
        row: list = [neg_log_eps, lam_ratio]
        for mat in mats:
            sc = preset_scenario(mat, n_dots=1, epsilon=10.0 ** (-neg_log_eps), lambda_ratio=lam_ratio)
            if overrides is not None:
                sc = overrides(sc)
            row.append(cusp(sc)[1])
        rows.append(tuple(row))
    return rows


@dataclass(frozen=True)
class OperatingPoint:
    gate: GatePoint
    fidelity: FidelityReport
    warnings: tuple[str, ...]


def operating_point(scenario: Scenario, omega1_s: float) -> OperatingPoint:
    """Gate at the fidelity optimum for the scenario's N, with sanity warnings."""
    mat = scenario.material
    n = scenario.n_dots
    om2 = optimal_omega2(n, mat.gamma_rec, omega1_s)
    eta = _eta(scenario, omega1_s)
    I1, I2 = required_intensities(scenario, omega1_s)
    tau_a, tau_c = cphase_time(om2)
    notes = []
    if not omega1_s < mat.delta < mat.omega_d1:
        notes.append("frequency ordering omega1_s < delta < omega_d1 violated")
    if I1 > mat.i1_limit:
        notes.append(f"I1 = {I1:.3e} W/m^2 exceeds the antinodal limit {mat.i1_limit:.3e}")
    if I2 > mat.i2_max:
        notes.append(f"I2 = {I2:.3e} W/m^2 exceeds the nodal limit {mat.i2_max:.3e}")
    if math.sqrt(mat.delta * om2) >= mat.delta:
        notes.append("arm Rabi frequency not below the detuning")
    for msg in notes:
        warnings.warn(msg, RuntimeWarning, stacklevel=2)
    if eta >= 1:
        raise InvariantError(f"eta = {eta:.3g} is outside the Lamb-Dicke regime")
    gate = GatePoint(om2, eta, I1, I2, tau_a, tau_c)
    fid = sideband_fidelity(n, mat.gamma_rec, om2, omega1_s, scenario.wave_config,
                            eta if scenario.wave_config is WaveConfig.TRAVELLING else None)
    return OperatingPoint(gate, fid, tuple(notes))


def with_epsilon(scenario: Scenario, epsilon: float) -> Scenario:
    return dataclasses.replace(scenario, epsilon=epsilon)
