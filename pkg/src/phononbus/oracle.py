"""Time-domain check of the sideband fidelity model.

The dot is coupled to a few support modes through the interaction-picture
Hamiltonian (laser difference frequency tuned to the red sideband of mode 1)

    H(t) = Omega2 sum_m c_m |f><i| (a_m e^{-i(w_m - w_1)t} + a_m^+ e^{i(w_m + w_1)t}) + h.c.

The first term of mode 1 is the resonant sideband; the rest are the
off-resonant and counter-rotating contributions the fidelity model treats
perturbatively.  Recombination is a uniform norm loss at rate N*Gamma.
Time is integrated in units of 1/w_1.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import expm

from .errors import ConvergenceError, InvariantError, TruncationError

TRUNCATION_LIMIT = 1e-4


@dataclass(frozen=True)
class OracleSystem:
    omega2: float
    omega1_s: float
    mode_omegas: tuple[float, ...] | None = None
    truncation: int = 3
    gamma: float = 0.0
    n_dots: int = 1
    dot_levels: int = 2
    transition: tuple[int, int] = (1, 0)
    mode_weights: tuple[float, ...] | None = None
    counter_rotating: bool = True
    rtol: float = 1e-10
    atol: float = 1e-12
    samples: int = 2001

    def __post_init__(self) -> None:
        if self.mode_omegas is None:
            object.__setattr__(self, "mode_omegas", (self.omega1_s, 2 * self.omega1_s))
        object.__setattr__(self, "mode_omegas", tuple(float(w) for w in self.mode_omegas))
        if self.mode_weights is None:
            object.__setattr__(self, "mode_weights", (1.0,) * len(self.mode_omegas))
        if len(self.mode_weights) != len(self.mode_omegas):
            raise InvariantError("one weight per mode is required")
        if not self.omega2 > 0 or not self.omega1_s > 0 or self.gamma < 0:
            raise InvariantError("omega2 and omega1_s must be positive and gamma non-negative")
        if abs(self.mode_omegas[0] - self.omega1_s) > 1e-12 * self.omega1_s:
            raise InvariantError("the first mode must be the resonant bus mode")
        if self.truncation < 2:
            raise InvariantError("phonon truncation must be at least 2")
        if self.dot_levels not in (2, 3):
            raise InvariantError("dot_levels must be 2 or 3")
        f, i = self.transition
        if f == i or not (0 <= f < self.dot_levels and 0 <= i < self.dot_levels):
            raise InvariantError("invalid transition levels")
        if self.samples < 3:
            raise InvariantError("need at least three output samples")

    @property
    def n_modes(self) -> int:
        return len(self.mode_omegas)

    @property
    def dimension(self) -> int:
        return self.dot_levels * (self.truncation + 1) ** self.n_modes

    def index(self, level: int, occupations: Sequence[int]) -> int:
        idx = level
        for n in occupations:
            idx = idx * (self.truncation + 1) + n
        return idx

    def basis_labels(self) -> list[str]:
        occ = list(itertools.product(range(self.truncation + 1), repeat=self.n_modes))
        return [f"{lvl}|{','.join(map(str, o))}" for lvl in range(self.dot_levels) for o in occ]


@dataclass(frozen=True)
class OracleResult:
    times: np.ndarray
    populations: dict[str, np.ndarray]
    achieved_operator_overlap: float
    norm: np.ndarray
    initial_label: str
    target_label: str

    @property
    def final_norm(self) -> float:
        return float(self.norm[-1])

    @property
    def norm_loss(self) -> float:
        return 1.0 - self.final_norm

    @property
    def spectator(self) -> np.ndarray:
        """Population outside the initial and target states."""
        return self.norm - self.populations[self.initial_label] - self.populations[self.target_label]

    @property
    def mean_spectator(self) -> float:
        t = self.times
        return float(np.trapezoid(self.spectator, t) / (t[-1] - t[0]))

    @property
    def target_population(self) -> float:
        return float(self.populations[self.target_label][-1])


def _ladder_ops(system: OracleSystem) -> list[np.ndarray]:
    nt = system.truncation
    a = np.diag(np.sqrt(np.arange(1, nt + 1, dtype=float)), 1)
    eye = np.eye(nt + 1)
    ops = []
    for m in range(system.n_modes):
        op = np.ones((1, 1))
        for j in range(system.n_modes):
            op = np.kron(op, a if j == m else eye)
        ops.append(op)
    return ops


def _terms(system: OracleSystem, rwa: bool) -> list[tuple[np.ndarray, float]]:
    """(operator, angular frequency in units of w1) for H = sum op e^{i f t} + h.c."""
    f, i = system.transition
    sigma = np.zeros((system.dot_levels, system.dot_levels))
    sigma[f, i] = 1.0
    w1 = system.omega1_s
    g = system.omega2 / w1
    out = []
    for m, (a, wm, c) in enumerate(zip(_ladder_ops(system), system.mode_omegas, system.mode_weights)):
        if rwa and m > 0:
            break
        out.append((g * c * np.kron(sigma, a), -(wm - w1) / w1))
        if system.counter_rotating and not rwa:
            out.append((g * c * np.kron(sigma, a.T), (wm + w1) / w1))
    return out


def pulse_duration(system: OracleSystem, pulse_k: int) -> float:
    return pulse_k * math.pi / (2 * system.omega2)


def _initial_target(system: OracleSystem) -> tuple[int, int]:
    f, i = system.transition
    zeros = [0] * system.n_modes
    one = [1] + [0] * (system.n_modes - 1)
    return system.index(f, zeros), system.index(i, one)


def ideal_state(system: OracleSystem, pulse_k: int) -> np.ndarray:
    """Resonant-sideband evolution alone (no decay), exact matrix exponential."""
    H = sum(op + op.conj().T for op, _ in _terms(system, rwa=True))
    start, _ = _initial_target(system)
    psi0 = np.zeros(system.dimension, complex)
    psi0[start] = 1.0
    tau = pulse_duration(system, pulse_k) * system.omega1_s
    return expm(-1j * tau * H) @ psi0


def simulate_sideband(system: OracleSystem, pulse_k: int = 1, rwa: bool = False) -> OracleResult:
    """Integrate a k-fold sideband pulse of length k pi/(2 Omega2) from |f>|0...>."""
    if pulse_k < 1:
        raise InvariantError("pulse_k must be >= 1")
    terms = _terms(system, rwa)
    ops = np.array([op for op, _ in terms], dtype=complex)
    freqs = np.array([w for _, w in terms])
    decay = 0.5 * system.n_dots * system.gamma / system.omega1_s

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        ph = np.exp(1j * freqs * t)
        fwd = np.einsum("k,kij->ij", ph, ops)
        return -1j * (fwd @ y + fwd.conj().T @ y) - decay * y

    start, target = _initial_target(system)
    psi0 = np.zeros(system.dimension, complex)
    psi0[start] = 1.0
    tau = pulse_duration(system, pulse_k) * system.omega1_s
    t_eval = np.linspace(0.0, tau, system.samples)
    sol = solve_ivp(rhs, (0.0, tau), psi0, method="DOP853", t_eval=t_eval,
                    rtol=system.rtol, atol=system.atol)
    if sol.status != 0:
        raise ConvergenceError(f"integrator failed: {sol.message}")
    probs = np.abs(sol.y) ** 2
    labels = system.basis_labels()
    edge = [k for k, lab in enumerate(labels) if str(system.truncation) in lab.split("|")[1].split(",")]
    edge_pop = probs[edge].sum(axis=0).max()
    if edge_pop > TRUNCATION_LIMIT:
        raise TruncationError(f"population {edge_pop:.2e} reaches the phonon truncation {system.truncation}")
    psi_ideal = ideal_state(system, pulse_k)
    overlap = float(abs(np.vdot(psi_ideal, sol.y[:, -1])) ** 2)
    return OracleResult(
        times=sol.t / system.omega1_s,
        populations={lab: probs[k] for k, lab in enumerate(labels)},
        achieved_operator_overlap=overlap,
        norm=probs.sum(axis=0),
        initial_label=labels[start],
        target_label=labels[target],
    )


def offresonant_model(ratio: float) -> float:
    """2 g^2/(4 g^2 + delta^2) with g = Omega2 and delta = omega1_s."""
    return 2 * ratio**2 / (4 * ratio**2 + 1)


def _scan_one(args: tuple[OracleSystem, float]) -> tuple[float, float, float]:
    system, ratio = args
    sys_r = replace(system, omega2=ratio * system.omega1_s)
    return ratio, simulate_sideband(sys_r, 1).mean_spectator, offresonant_model(ratio)


def scan_offresonant(system: OracleSystem, ratios: Sequence[float],
                     workers: int | None = None) -> list[tuple[float, float, float]]:
    """(ratio, time-averaged spectator population, model loss) per Omega2/omega1_s."""
    for r in ratios:
        if not 0 < r < 0.5:
            raise InvariantError(f"ratio {r} outside (0, 0.5)")
    jobs = [(system, float(r)) for r in ratios]
    if workers and workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_scan_one, jobs))
    return [_scan_one(j) for j in jobs]
