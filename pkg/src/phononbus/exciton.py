"""Effective-mass exciton states of a spherical nanocrystal.

Electron: 1S conduction state with spin m_s.  Hole: the 1S_3/2 (S-type,
envelopes R0/R2) and 1P_5/2 (P-type, envelopes R1/R3) multiplets, each
written as a sum of envelope x Y_l^m x valence Bloch function u_mJ.  All
positions are measured in units of the dot radius R, so radial functions
below are R^{3/2} R_l(xR) on x in [0, 1].
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Iterable, Mapping

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq
from scipy.special import spherical_jn

from .angular import ladder, spherical_components, ylm_triple
from .errors import InvariantError, RootNotFoundError
from .materials import Material


class EnvelopeKind(str, Enum):
    S = "S"
    P = "P"


# envelope angular momenta carried by each kind
ENVELOPE_LS = {EnvelopeKind.S: (0, 2), EnvelopeKind.P: (1, 3)}


def _char(kind: EnvelopeKind, beta: float, phi: np.ndarray | float) -> np.ndarray:
    s = math.sqrt(beta)
    j = spherical_jn
    if kind is EnvelopeKind.S:
        return j(0, phi) * j(2, s * phi) + j(2, phi) * j(0, s * phi)
    # vanishing of R3 at the surface once R1 does
    return j(3, phi) * j(1, s * phi) + 2.0 / 3.0 * j(1, phi) * j(3, s * phi)


def characteristic(kind: EnvelopeKind | str, beta: float, phi: float) -> float:
    return float(_char(EnvelopeKind(kind), beta, phi))


def envelope_root(beta: float, kind: EnvelopeKind | str) -> float:
    """First positive root of the surface condition for ``kind``."""
    kind = EnvelopeKind(kind)
    if not 0 < beta < 1:
        raise InvariantError(f"beta must lie in (0, 1), got {beta}")
    grid = np.linspace(1e-3, 4 * math.pi, 8001)
    vals = _char(kind, beta, grid)
    hits = np.nonzero(vals == 0.0)[0]
    changes = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]
    first = min([*hits, *changes], default=None)
    if first is None:
        raise RootNotFoundError(f"no sign change of the {kind.value}-type condition in (0, 4pi] at beta={beta}")
    if vals[first] == 0.0:
        return float(grid[first])
    return brentq(lambda p: float(_char(kind, beta, p)), grid[first], grid[first + 1], xtol=1e-15, rtol=1e-15)


@dataclass(frozen=True)
class RadialEnvelope:
    kind: EnvelopeKind
    beta: float
    root_phi: float
    norm_const: float
    radius: float

    @classmethod
    def build(cls, kind: EnvelopeKind | str, beta: float, radius: float) -> "RadialEnvelope":
        kind = EnvelopeKind(kind)
        phi = envelope_root(beta, kind)
        env = cls(kind, beta, phi, 1.0, radius)
        raw = quad(lambda x: env._sum_sq(x), 0.0, 1.0, epsabs=1e-14, epsrel=1e-13, limit=200)[0]
        return cls(kind, beta, phi, 1.0 / math.sqrt(raw), radius)

    def _sum_sq(self, x: float) -> float:
        la, lb = ENVELOPE_LS[self.kind]
        return (self.scaled(la, x) ** 2 + self.scaled(lb, x) ** 2) * x * x

    def scaled(self, l: int, x: float | np.ndarray) -> np.ndarray:
        """R^{3/2} R_l(x R) for x = r/R."""
        s = math.sqrt(self.beta)
        phi = self.root_phi
        j = spherical_jn
        if self.kind is EnvelopeKind.S:
            c = j(0, phi) / j(0, s * phi)
            if l == 0:
                return self.norm_const * (j(0, phi * x) - c * j(0, s * phi * x))
            if l == 2:
                return self.norm_const * (j(2, phi * x) + c * j(2, s * phi * x))
        else:
            c = j(1, phi) / j(1, s * phi)
            if l == 1:
                return self.norm_const * (j(1, phi * x) - c * j(1, s * phi * x))
            if l == 3:
                return self.norm_const * (j(3, phi * x) + 2.0 / 3.0 * c * j(3, s * phi * x))
        raise ValueError(f"{self.kind.value}-type envelope has no l={l} component")

    def __call__(self, l: int, r: float | np.ndarray) -> np.ndarray:
        """R_l(r) in m^{-3/2}."""
        return self.scaled(l, np.asarray(r) / self.radius) / self.radius**1.5

    def norm(self) -> float:
        return quad(self._sum_sq, 0.0, 1.0, epsabs=1e-14, epsrel=1e-13, limit=200)[0]


@lru_cache(maxsize=64)
def envelope(kind: EnvelopeKind, beta: float) -> RadialEnvelope:
    # radius only rescales; integrals are done at R = 1
    return RadialEnvelope.build(kind, beta, 1.0)


@lru_cache(maxsize=1024)
def radial_integral(kind_a: EnvelopeKind, la: int, kind_b: EnvelopeKind, lb: int, beta: float, power: int) -> float:
    """Integral over [0, 1] of R_la R_lb x^power (scaled envelopes)."""
    ea, eb = envelope(kind_a, beta), envelope(kind_b, beta)
    return quad(lambda x: ea.scaled(la, x) * eb.scaled(lb, x) * x**power, 0.0, 1.0,
                epsabs=1e-14, epsrel=1e-13, limit=200)[0]


# --- states ----------------------------------------------------------------


@dataclass(frozen=True)
class HoleTerm:
    coeff: float
    l: int
    m: int
    mj: float


@dataclass(frozen=True)
class Term:
    coeff: complex
    electron_ms: float
    envelope: EnvelopeKind
    l: int
    m: int
    bloch_mj: float


@dataclass(frozen=True)
class ExcitonState:
    label: str
    F_z: float
    terms: tuple[Term, ...]
    beta: float
    radius: float
    description: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        for t in self.terms:
            if abs(t.m + t.bloch_mj + t.electron_ms - self.F_z) > 1e-12:
                raise InvariantError(f"state {self.label}: term {t} breaks F_z = {self.F_z}")

    @property
    def parity(self) -> int:
        return (-1) ** self.terms[0].l


def hole_s(mk: float) -> tuple[HoleTerm, ...]:
    """1S_3/2 hole with projection mk."""
    sg = 1 if mk > 0 else -1
    if abs(mk) == 1.5:
        return (
            HoleTerm(-1.0, 0, 0, mk),
            HoleTerm(-math.sqrt(2 / 5), 2, 2 * sg, -0.5 * sg),
            HoleTerm(math.sqrt(2 / 5), 2, sg, 0.5 * sg),
            HoleTerm(-math.sqrt(1 / 5), 2, 0, mk),
        )
    if abs(mk) == 0.5:
        return (
            HoleTerm(-1.0, 0, 0, mk),
            HoleTerm(-math.sqrt(2 / 5), 2, 2 * sg, -1.5 * sg),
            HoleTerm(-math.sqrt(2 / 5), 2, -sg, 1.5 * sg),
            HoleTerm(math.sqrt(1 / 5), 2, 0, mk),
        )
    raise ValueError(f"invalid 1S_3/2 projection {mk}")


def hole_p(mk: float) -> tuple[HoleTerm, ...]:
    """1P_5/2 hole with projection mk (only |mk| <= 3/2 are needed)."""
    sg = 1 if mk > 0 else -1
    if abs(mk) == 1.5:
        return (
            HoleTerm(math.sqrt(2 / 5), 1, 0, 1.5 * sg),
            HoleTerm(math.sqrt(3 / 5), 1, sg, 0.5 * sg),
            HoleTerm(3 * math.sqrt(1 / 35), 3, 0, 1.5 * sg),
            HoleTerm(-0.5 * math.sqrt(7 / 5), 3, sg, 0.5 * sg),
            HoleTerm(math.sqrt(1 / 14), 3, 2 * sg, -0.5 * sg),
            HoleTerm(1.5 * math.sqrt(1 / 7), 3, 3 * sg, -1.5 * sg),
        )
    if abs(mk) == 0.5:
        return (
            HoleTerm(math.sqrt(1 / 10), 1, -sg, 1.5 * sg),
            HoleTerm(math.sqrt(3 / 5), 1, 0, 0.5 * sg),
            HoleTerm(math.sqrt(3 / 10), 1, sg, -0.5 * sg),
            HoleTerm(3 * math.sqrt(3 / 70), 3, -sg, 1.5 * sg),
            HoleTerm(-math.sqrt(6 / 35), 3, 0, 0.5 * sg),
            HoleTerm(-math.sqrt(1 / 70), 3, sg, -0.5 * sg),
            HoleTerm(math.sqrt(3 / 7), 3, 2 * sg, -1.5 * sg),
        )
    raise ValueError(f"unsupported 1P_5/2 projection {mk}")


def _product(parts: Iterable[tuple[complex, float, EnvelopeKind, float]]) -> tuple[Term, ...]:
    holes = {EnvelopeKind.S: hole_s, EnvelopeKind.P: hole_p}
    out = []
    for c, ms, kind, mk in parts:
        for h in holes[kind](mk):
            out.append(Term(complex(c * h.coeff), ms, kind, h.l, h.m, h.mj))
    return tuple(out)


def exchange_matrix(basis: list[tuple[float, float]], je: float = 0.5, jh: float = 1.5) -> np.ndarray:
    """S_e . J_h = Sz Jz + (S+ J- + S- J+)/2 on product states (ms, mk)."""
    index = {b: i for i, b in enumerate(basis)}
    H = np.zeros((len(basis), len(basis)))
    for i, (ms, mk) in enumerate(basis):
        H[i, i] += ms * mk
        for de in (1, -1):
            target = (ms + de, mk - de)
            if target in index:
                amp = ladder(je, ms, up=de > 0) * ladder(jh, mk, up=de < 0)
                H[index[target], i] += 0.5 * amp
    return H


def dark_zero_coefficients() -> tuple[float, float]:
    """Amplitudes on (e_-1/2 h_+1/2, e_+1/2 h_-1/2) of the F=2, F_z=0 exciton."""
    basis = [(-0.5, 0.5), (0.5, -0.5)]
    vals, vecs = np.linalg.eigh(exchange_matrix(basis))
    # F = 2 is the upper exchange eigenvalue: [F(F+1) - 3/4 - 15/4]/2 = 3/4
    vec = vecs[:, int(np.argmax(vals))]
    if abs(vals.max() - 0.75) > 1e-12:
        raise InvariantError("unexpected exchange spectrum")
    vec = vec * np.sign(vec[0])
    return float(vec[0]), float(vec[1])


def build_states(material: Material | None = None, beta: float | None = None,
                 radius: float | None = None) -> dict[str, ExcitonState]:
    """Qubit states |0>, |1>, |2> and the virtual states v+1, v-1."""
    b = material.beta if material is not None else beta
    R = material.dot_radius if material is not None else radius
    if b is None or R is None:
        raise InvariantError("need a material or explicit beta and radius")
    if not 0 < b < 1 or not R > 0:
        raise InvariantError("beta must lie in (0, 1) and radius be positive")
    S, P = EnvelopeKind.S, EnvelopeKind.P
    a, c = dark_zero_coefficients()
    r3 = 1 / math.sqrt(3)
    spec = {
        "0": (0, [(a, -0.5, S, 0.5), (c, 0.5, S, -0.5)], "1S_e 1S_3/2, F=2, F_z=0 (dark 0^L)"),
        "1": (-2, [(1.0, -0.5, S, -1.5)], "1S_e 1S_3/2, F_z=-2"),
        "2": (2, [(1.0, 0.5, S, 1.5)], "1S_e 1S_3/2, F_z=+2"),
        "v+1": (1, [(-r3, -0.5, P, 1.5), (-r3 * math.sqrt(2), 0.5, P, 0.5)], "1S_e 1P_5/2, F_z=+1"),
        "v-1": (-1, [(-r3, 0.5, P, -1.5), (-r3 * math.sqrt(2), -0.5, P, -0.5)], "1S_e 1P_5/2, F_z=-1"),
    }
    return {
        label: ExcitonState(label, fz, _product(parts), b, R, desc)
        for label, (fz, parts, desc) in spec.items()
    }


def _check_compatible(a: ExcitonState, b: ExcitonState) -> None:
    if a.beta != b.beta or a.radius != b.radius:
        raise InvariantError(f"states {a.label} and {b.label} were built for different beta or radius")


def overlap(a: ExcitonState, b: ExcitonState) -> complex:
    _check_compatible(a, b)
    total = 0j
    for ta in a.terms:
        for tb in b.terms:
            if (ta.electron_ms, ta.bloch_mj, ta.l, ta.m) != (tb.electron_ms, tb.bloch_mj, tb.l, tb.m):
                continue
            rad = radial_integral(ta.envelope, ta.l, tb.envelope, tb.l, a.beta, 2)
            total += np.conj(ta.coeff) * tb.coeff * rad
    return total


def state_norm(state: ExcitonState) -> float:
    return math.sqrt(overlap(state, state).real)


def _electron_dipole(q: int) -> float:
    # both carriers sit in the 1S electron level: <Y00|Y1q|Y00> = 0
    return ylm_triple(0, 0, 1, q, 0, 0)


def dipole_element_R(a: ExcitonState, b: ExcitonState, polarization: np.ndarray) -> complex:
    """<a| conj(eps) . (r_e - r_h) |b> in units of the dot radius.

    The conjugated polarization is used so that a circular vector names the
    light that drives the transition from |b> up to |a>.  Bloch-function
    matrix elements of position are neglected.
    """
    _check_compatible(a, b)
    eps = np.asarray(polarization, dtype=complex)
    if eps.shape != (3,) or abs(np.linalg.norm(eps) - 1) > 1e-9:
        raise InvariantError("polarization must be a unit 3-vector")
    comps = spherical_components(np.conj(eps))
    pref = math.sqrt(4 * math.pi / 3)
    total = 0j
    for ta in a.terms:
        for tb in b.terms:
            if ta.electron_ms != tb.electron_ms or ta.bloch_mj != tb.bloch_mj:
                continue
            cc = np.conj(ta.coeff) * tb.coeff
            for q, aq in comps.items():
                if aq == 0:
                    continue
                ang = ylm_triple(ta.l, ta.m, 1, q, tb.l, tb.m)
                if ang == 0.0:
                    continue
                rad = radial_integral(ta.envelope, ta.l, tb.envelope, tb.l, a.beta, 3)
                total -= cc * pref * aq * ang * rad
            if (ta.envelope, ta.l, ta.m) == (tb.envelope, tb.l, tb.m):
                # electron displacement with the hole parts overlapping
                hole_ov = radial_integral(ta.envelope, ta.l, tb.envelope, tb.l, a.beta, 2)
                for q, aq in comps.items():
                    total += cc * hole_ov * pref * aq * _electron_dipole(q)
    return complex(total)


def dipole_element(a: ExcitonState, b: ExcitonState, polarization: np.ndarray) -> complex:
    """Dipole matrix element in metres."""
    return dipole_element_R(a, b, polarization) * a.radius


def diagonal_angular_element(state: ExcitonState, l: int, m: int, radial_overlaps: bool = False) -> float:
    """Angular part of <state| Y_l^m(hole) + Y_l^m(electron) |state>.

    Radial overlaps are set to one unless ``radial_overlaps`` is true, in
    which case the envelope overlaps of the contributing components are used.
    """
    if not 0 <= l <= 4 or abs(m) > l:
        raise ValueError(f"need |m| <= l <= 4, got l={l}, m={m}")
    total = 0j
    for ta in state.terms:
        for tb in state.terms:
            if ta.electron_ms != tb.electron_ms or ta.bloch_mj != tb.bloch_mj:
                continue
            ang = ylm_triple(ta.l, ta.m, l, m, tb.l, tb.m)
            if ang == 0.0:
                continue
            rad = radial_integral(ta.envelope, ta.l, tb.envelope, tb.l, state.beta, 2) if radial_overlaps else 1.0
            total += np.conj(ta.coeff) * tb.coeff * ang * rad
    electron = ylm_triple(0, 0, l, m, 0, 0)
    return float(total.real) + electron


POLARIZATIONS: Mapping[str, np.ndarray] = {
    "sigma+": np.array([1, 1j, 0]) / math.sqrt(2),
    "sigma-": np.array([1, -1j, 0]) / math.sqrt(2),
    "x": np.array([1.0, 0, 0]),
    "y": np.array([0, 1.0, 0]),
    "z": np.array([0, 0, 1.0]),
}


def dipole_table(states: Mapping[str, ExcitonState]) -> list[tuple[str, str, str, float, float]]:
    """(bra, ket, polarization, Re, Im) in units of R for all ordered state pairs."""
    rows = []
    for a in states:
        for b in states:
            for pname, eps in POLARIZATIONS.items():
                d = dipole_element_R(states[a], states[b], eps)
                rows.append((a, b, pname, d.real, d.imag))
    return rows
