"""Transverse modes of the linear support.

Three models are provided: the homogeneous string, the clamped-clamped
Euler-Bernoulli rod, and a string whose density is raised locally where dots
sit (solved by finite differences).  Shapes are scaled so that
``integral c_m(x)^2 dx = l``, which makes the string antinode value
sqrt(2l/L) and the zero-point amplitude ``q0 = sqrt(hbar/(2 lambda l omega))``.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.optimize import brentq

from .errors import ConvergenceError, InvariantError
from .materials import SupportKind, SupportSpec
from .units import HBAR

ShapeFn = Callable[[int, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class Mode:
    index: int
    k: float
    omega: float
    q0: float


@dataclass(frozen=True)
class ModeSpectrum:
    kind: str
    modes: tuple[Mode, ...]
    length: float
    total_mass: float
    unit_length: float
    _shape: ShapeFn = field(repr=False, compare=False)

    def __post_init__(self) -> None:
        om = [md.omega for md in self.modes]
        if any(b <= a for a, b in zip(om, om[1:])):
            raise InvariantError("mode frequencies must be strictly increasing")

    def mode(self, m: int) -> Mode:
        if not 1 <= m <= len(self.modes):
            raise IndexError(f"mode {m} outside spectrum 1..{len(self.modes)}")
        return self.modes[m - 1]

    def shape(self, m: int, x: float | np.ndarray) -> np.ndarray:
        """Dimensionless mode shape c_m(x)."""
        self.mode(m)
        xa = np.asarray(x, dtype=float)
        if np.any(xa < 0) or np.any(xa > self.length):
            raise ValueError("position outside the support")
        return self._shape(m, xa)

    @property
    def omegas(self) -> np.ndarray:
        return np.array([md.omega for md in self.modes])

    @property
    def wavenumbers(self) -> np.ndarray:
        return np.array([md.k for md in self.modes])

    def rows(self) -> list[tuple[int, float, float, float]]:
        return [(md.index, md.k, md.omega, md.q0) for md in self.modes]


def zero_point_amplitude(linear_density: float, unit_length: float, omega: float, hbar: float = HBAR) -> float:
    return math.sqrt(hbar / (2.0 * linear_density * unit_length * omega))


def _check_request(spec: SupportSpec, kind: SupportKind, m_max: int) -> None:
    if spec.kind is not kind:
        raise InvariantError(f"expected a {kind.value} support, got {spec.kind.value}")
    if m_max < 1:
        raise InvariantError("m_max must be at least 1")


def with_fundamental(spec: SupportSpec, omega1: float) -> SupportSpec:
    """Copy of ``spec`` whose tension or stiffness puts mode 1 at ``omega1``."""
    if not omega1 > 0:
        raise InvariantError("omega1 must be positive")
    if spec.kind is SupportKind.STRING:
        tension = spec.linear_density * (omega1 * spec.length_L / math.pi) ** 2
        return dataclasses.replace(spec, tension=tension, stiffness=None)
    stiffness = (omega1 * spec.length_L**2 / rod_root(1) ** 2) ** 2
    return dataclasses.replace(spec, stiffness=stiffness, tension=None)


def string_spectrum(spec: SupportSpec, m_max: int) -> ModeSpectrum:
    _check_request(spec, SupportKind.STRING, m_max)
    if spec.tension is None:
        raise InvariantError("string spectrum needs a tension (or omega1) in the support spec")
    L, lam, l = spec.length_L, spec.linear_density, spec.unit_length
    speed = math.sqrt(spec.tension / lam)
    modes = []
    for m in range(1, m_max + 1):
        k = m * math.pi / L
        omega = speed * k
        modes.append(Mode(m, k, omega, zero_point_amplitude(lam, l, omega)))
    amp = math.sqrt(2.0 * l / L)

    def shape(m: int, x: np.ndarray) -> np.ndarray:
        return amp * np.sin(m * math.pi * x / L)

    return ModeSpectrum("string", tuple(modes), L, spec.total_mass, l, shape)


def _rod_char(x: float) -> float:
    # cos x cosh x = 1 divided through by cosh x; sech written to avoid overflow
    e = math.exp(-abs(x))
    return math.cos(x) - 2.0 * e / (1.0 + e * e)


def rod_root(m: int) -> float:
    """m-th positive root of cos(x)cosh(x) = 1 (clamped-clamped rod)."""
    if m < 1:
        raise InvariantError("rod mode index must be >= 1")
    return brentq(_rod_char, m * math.pi, (m + 1) * math.pi, xtol=1e-15, rtol=4 * np.finfo(float).eps)


def clamped_shape(X: float, u: np.ndarray) -> np.ndarray:
    """Unnormalised clamped-clamped shape for root X at u = k x in [0, X].

    cosh u - cos u - sigma (sinh u - sin u), with the growing exponentials
    combined analytically so the evaluation stays finite for large X.
    Its square integrates to X/k, i.e. to the support length.
    """
    u = np.asarray(u, dtype=float)
    eX = math.exp(-X)
    den = 0.5 * (1.0 - eX * eX) - math.sin(X) * eX  # e^{-X}(sinh X - sin X)
    sigma = (0.5 * (1.0 + eX * eX) - math.cos(X) * eX) / den
    # (1 - sigma) e^u, carried as a multiple of e^(u - X)
    grow = 0.5 * (-eX - (math.sin(X) - math.cos(X))) / den * np.exp(u - X)
    decay = 0.5 * (1.0 + sigma) * np.exp(-u)
    return grow + decay - np.cos(u) + sigma * np.sin(u)


def rod_spectrum(spec: SupportSpec, m_max: int) -> ModeSpectrum:
    _check_request(spec, SupportKind.ROD, m_max)
    if spec.stiffness is None:
        raise InvariantError("rod spectrum needs a stiffness (or omega1) in the support spec")
    L, lam, l = spec.length_L, spec.linear_density, spec.unit_length
    roots = [rod_root(m) for m in range(1, m_max + 1)]
    root_s = math.sqrt(spec.stiffness)
    modes = []
    for m, X in enumerate(roots, start=1):
        k = X / L
        omega = k * k * root_s
        modes.append(Mode(m, k, omega, zero_point_amplitude(lam, l, omega)))
    amp = math.sqrt(l / L)

    def shape(m: int, x: np.ndarray) -> np.ndarray:
        X = roots[m - 1]
        return amp * clamped_shape(X, X * x / L)

    return ModeSpectrum("rod", tuple(modes), L, spec.total_mass, l, shape)


def spectrum(spec: SupportSpec, m_max: int) -> ModeSpectrum:
    if spec.kind is SupportKind.STRING:
        return string_spectrum(spec, m_max)
    return rod_spectrum(spec, m_max)


def dot_modal_displacement(spec_or_spectrum: ModeSpectrum, m: int, x: float) -> float:
    """Dot displacement amplitude S = c_m(x) q0_m in metres."""
    sp = spec_or_spectrum
    if not 0 <= x <= sp.length:
        raise ValueError(f"position {x} outside [0, {sp.length}]")
    return float(sp.shape(m, x)) * sp.mode(m).q0


def antinode_displacement(total_mass: float, omega: float, hbar: float = HBAR) -> float:
    """Homogeneous-support estimate S = sqrt(hbar/(M omega))."""
    return math.sqrt(hbar / (total_mass * omega))


# --- mass-loaded string ----------------------------------------------------


@dataclass(frozen=True)
class DensityIncrement:
    center: float
    half_width: float
    added_lambda: float


@dataclass(frozen=True)
class DensityProfile:
    base_lambda: float
    increments: tuple[DensityIncrement, ...] = ()
    grid_points: int = 4000

    def __post_init__(self) -> None:
        object.__setattr__(self, "increments", tuple(self.increments))
        if not self.base_lambda > 0:
            raise InvariantError("base density must be positive")
        if self.grid_points < 1000:
            raise InvariantError("grid_points must be at least 1000")
        for inc in self.increments:
            if not inc.half_width > 0 or inc.added_lambda < 0:
                raise InvariantError("increments need positive width and non-negative added density")
        spans = sorted((i.center - i.half_width, i.center + i.half_width) for i in self.increments)
        for (_, hi), (lo, _) in zip(spans, spans[1:]):
            if lo < hi:
                raise InvariantError("density increments overlap")

    def validate(self, length: float) -> None:
        for inc in self.increments:
            if inc.center - inc.half_width <= 0 or inc.center + inc.half_width >= length:
                raise InvariantError("density increments must lie strictly inside the support")

    def total_mass(self, length: float) -> float:
        return self.base_lambda * length + sum(2 * i.half_width * i.added_lambda for i in self.increments)

    def mean_density(self, length: float) -> float:
        return self.total_mass(length) / length

    def cell_densities(self, edges: np.ndarray) -> np.ndarray:
        """Exact average density over each cell [edges[i], edges[i+1]]."""
        lo, hi = edges[:-1], edges[1:]
        out = np.full(lo.shape, self.base_lambda)
        for inc in self.increments:
            a, b = inc.center - inc.half_width, inc.center + inc.half_width
            overlap = np.clip(np.minimum(hi, b) - np.maximum(lo, a), 0.0, None)
            out += inc.added_lambda * overlap / (hi - lo)
        return out


def _loaded_solve(profile: DensityProfile, L: float, tension: float, n: int, m_max: int):
    h = L / n
    x = np.arange(1, n) * h
    # dual cells: node i owns [x_i - h/2, x_i + h/2]
    dens = profile.cell_densities(np.concatenate([x - h / 2, [x[-1] + h / 2]]))
    diag = 2.0 * tension / (h * h * dens)
    off = -tension / (h * h * np.sqrt(dens[:-1] * dens[1:]))
    w2, vecs = eigh_tridiagonal(diag, off, select="i", select_range=(0, m_max - 1))
    return x, dens, h, np.sqrt(w2), vecs / np.sqrt(dens)[:, None]


def loaded_modes(
    profile: DensityProfile,
    spec: SupportSpec,
    m_max: int = 1,
    check_convergence: bool = True,
    tolerance: float = 1e-3,
) -> ModeSpectrum:
    """Modes of a string with density profile ``profile`` (fixed ends).

    Solves -T u'' = omega^2 lambda(x) u with second-order finite differences
    and cell-averaged densities.  With ``check_convergence`` the fundamental is
    recomputed on a doubled grid and a relative shift above ``tolerance``
    raises.
    """
    _check_request(spec, SupportKind.STRING, m_max)
    if spec.tension is None:
        raise InvariantError("loaded string needs a tension (or omega1) in the support spec")
    L, l, T = spec.length_L, spec.unit_length, spec.tension
    profile.validate(L)
    n = profile.grid_points
    if m_max >= n - 1:
        raise InvariantError("m_max exceeds the number of grid nodes")
    x, dens, h, omegas, u = _loaded_solve(profile, L, T, n, m_max)
    if check_convergence:
        fine = _loaded_solve(profile, L, T, 2 * n, 1)[3][0]
        if abs(fine - omegas[0]) > tolerance * omegas[0]:
            raise ConvergenceError(
                f"fundamental shifts by {abs(fine / omegas[0] - 1):.2e} on grid doubling; "
                "increase grid_points"
            )
    lam_bar = profile.mean_density(L)
    modal_mass = h * np.einsum("i,ij,ij->j", dens, u, u)
    shapes = u * np.sqrt(l * lam_bar / modal_mass)
    for j in range(shapes.shape[1]):
        if shapes[np.argmax(np.abs(shapes[:, j])), j] < 0:
            shapes[:, j] *= -1
    xs = np.concatenate([[0.0], x, [L]])
    padded = np.vstack([np.zeros(m_max), shapes, np.zeros(m_max)])
    modes = tuple(
        Mode(m, math.pi * m / L, float(omegas[m - 1]), zero_point_amplitude(lam_bar, l, float(omegas[m - 1])))
        for m in range(1, m_max + 1)
    )

    def shape(m: int, xq: np.ndarray) -> np.ndarray:
        return np.interp(xq, xs, padded[:, m - 1])

    sp = ModeSpectrum("loaded", modes, L, profile.total_mass(L), l, shape)
    object.__setattr__(sp, "grid", xs)
    object.__setattr__(sp, "densities", dens)
    return sp


# Fig. 2 geometry: 2000 nm string, dots 2 nm half-width at 499 nm and 1501 nm
FIG2_LENGTH = 2000e-9
FIG2_CENTERS = (499e-9, 1501e-9)
FIG2_HALF_WIDTH = 2e-9
FIG2_RATIOS = (2.0, 10.0, 100.0, 1000.0)


@dataclass(frozen=True)
class Fig2Point:
    ratio: float
    exact: float
    averaged: float

    @property
    def disagreement(self) -> float:
        return abs(self.averaged / self.exact - 1.0)


def fig2_point(
    ratio: float,
    base_lambda: float,
    omega1_bare: float = 1e8,
    length: float = FIG2_LENGTH,
    centers: Sequence[float] = FIG2_CENTERS,
    half_width: float = FIG2_HALF_WIDTH,
    grid_points: int = 4000,
) -> Fig2Point:
    """Mode-1 displacement of the first dot, relative to the bare string.

    ``exact`` comes from the loaded eigenproblem; ``averaged`` replaces the
    profile by its mean density.  Both are divided by the bare-string value
    S0 at the same position (the ratio does not depend on the tension).
    """
    if not ratio >= 1:
        raise InvariantError("density ratio must be >= 1")
    bare = SupportSpec(SupportKind.STRING, length, base_lambda, length)
    bare = with_fundamental(bare, omega1_bare)
    added = (ratio - 1.0) * base_lambda
    profile = DensityProfile(
        base_lambda,
        tuple(DensityIncrement(c, half_width, added) for c in centers),
        grid_points,
    )
    x_dot = centers[0]
    s0 = dot_modal_displacement(string_spectrum(bare, 1), 1, x_dot)
    loaded = loaded_modes(profile, bare, 1)
    exact = dot_modal_displacement(loaded, 1, x_dot)
    mean = dataclasses.replace(bare, linear_density=profile.mean_density(length))
    averaged = dot_modal_displacement(string_spectrum(mean, 1), 1, x_dot)
    return Fig2Point(ratio, exact / s0, averaged / s0)


def fig2_curve(ratios: Sequence[float] = FIG2_RATIOS, base_lambda: float | None = None, **kw) -> list[Fig2Point]:
    from .units import LAMBDA0

    lam = LAMBDA0 if base_lambda is None else base_lambda
    return [fig2_point(r, lam, **kw) for r in ratios]
