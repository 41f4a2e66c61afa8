import dataclasses
import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from phononbus.errors import ConvergenceError, InvariantError
from phononbus.materials import SupportKind, SupportSpec
from phononbus.support import (
    DensityIncrement,
    DensityProfile,
    antinode_displacement,
    clamped_shape,
    dot_modal_displacement,
    fig2_curve,
    loaded_modes,
    rod_root,
    rod_spectrum,
    string_spectrum,
    with_fundamental,
    zero_point_amplitude,
)
from phononbus.units import HBAR, LAMBDA0

from oracles import fig2_reference, rod_root_mp

# cos(x)cosh(x) = 1 roots from 200-step bisection at 30 digits
X1 = 4.730040744862704
X2 = 7.853204624095838
X10_OVER_X5_SQ = 3.6446280727415123


def string(L=2000e-9, lam=LAMBDA0, l=None, tension=1e-6):
    return SupportSpec(SupportKind.STRING, L, lam, L if l is None else l, tension=tension)


def rod(L=30e-6, lam=LAMBDA0, l=3e-6, stiffness=1e-10):
    return SupportSpec(SupportKind.ROD, L, lam, l, stiffness=stiffness)


def test_string_wavenumbers():
    sp = string_spectrum(string(), 5)
    assert sp.mode(1).k == pytest.approx(math.pi / 2000e-9, rel=1e-15)
    for md in sp.modes:
        assert md.k == md.index * math.pi / 2000e-9
    ratios = sp.omegas / np.arange(1, 6)
    assert np.ptp(ratios) / ratios[0] < 1e-12


def test_string_tension_scaling():
    a = string_spectrum(string(tension=1e-6), 4).omegas
    b = string_spectrum(string(tension=2e-6), 4).omegas
    np.testing.assert_allclose(b / a, math.sqrt(2), rtol=1e-14)


def test_string_density_ratio():
    a = string_spectrum(string(lam=LAMBDA0), 1).mode(1).omega
    b = string_spectrum(string(lam=10 * LAMBDA0), 1).mode(1).omega
    assert b / a == pytest.approx(0.31622776601683794, rel=1e-14)


def test_string_boundary_and_norm():
    spec = string(L=30e-6, l=3e-6)
    sp = string_spectrum(spec, 3)
    scale = math.sqrt(2 * 3e-6 / 30e-6)
    for m in (1, 2, 3):
        assert abs(sp.shape(m, 0.0)) < 1e-8 * scale
        assert abs(sp.shape(m, 30e-6)) < 1e-8 * scale
        x = np.linspace(0, 30e-6, 20001)
        assert np.trapezoid(sp.shape(m, x) ** 2, x) == pytest.approx(3e-6, rel=1e-8)


def test_string_wrong_kind_and_mmax():
    with pytest.raises(InvariantError):
        string_spectrum(rod(), 2)
    with pytest.raises(InvariantError):
        string_spectrum(string(), 0)
    with pytest.raises(InvariantError):
        string_spectrum(dataclasses.replace(string(), tension=None), 1)


def test_rod_roots_frozen():
    assert rod_root(1) == pytest.approx(X1, rel=1e-12)
    assert rod_root(2) == pytest.approx(X2, rel=1e-12)
    assert (rod_root(2) / rod_root(1)) ** 2 == pytest.approx(2.756538507099961, rel=1e-10)


@pytest.mark.parametrize("m", [1, 2, 3, 7, 15, 40])
def test_rod_roots_match_bisection_oracle(m):
    assert rod_root(m) == pytest.approx(rod_root_mp(m), rel=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5000))
def test_rod_root_residual(m):
    x = rod_root(m)
    # |cos x cosh x - 1| / cosh x, with cosh evaluated in mpmath
    assert abs(mp.cos(x) * mp.cosh(x) - 1) / mp.cosh(x) < 1e-9
    assert m * math.pi < x < (m + 1) * math.pi
    assert rod_root(m + 1) > x


def test_rod_dispersion():
    sp = rod_spectrum(rod(), 12)
    k = sp.wavenumbers
    np.testing.assert_allclose(sp.omegas / k**2, math.sqrt(1e-10), rtol=1e-10)
    assert sp.mode(10).omega / sp.mode(5).omega == pytest.approx(X10_OVER_X5_SQ, rel=0.05)
    sp4 = rod_spectrum(rod(stiffness=4e-10), 12)
    np.testing.assert_allclose(sp4.omegas / sp.omegas, 2.0, rtol=1e-14)


@pytest.mark.parametrize("m", [1, 2, 5, 30, 120, 400])
def test_rod_clamped_boundaries(m):
    spec = rod()
    sp = rod_spectrum(spec, m)
    L = spec.length_L
    amp = math.sqrt(spec.unit_length / L)
    k = sp.mode(m).k
    d = 1e-5 / k
    for edge, inner in ((0.0, d), (L, L - d)):
        assert abs(sp.shape(m, edge)) < 1e-8 * amp
        # vanishing slope: the shape grows only quadratically off the wall
        assert abs(sp.shape(m, inner)) < 1e-8 * amp


@pytest.mark.parametrize("m", [1, 2, 9, 60, 400])
def test_rod_shape_normalisation(m):
    spec = rod()
    sp = rod_spectrum(spec, m)
    x = np.linspace(0, spec.length_L, 400001)
    assert np.trapezoid(sp.shape(m, x) ** 2, x) == pytest.approx(spec.unit_length, rel=1e-7)


def test_clamped_shape_matches_textbook_form_for_small_root():
    X = rod_root(1)
    u = np.linspace(0, X, 50)
    sigma = (math.cosh(X) - math.cos(X)) / (math.sinh(X) - math.sin(X))
    direct = np.cosh(u) - np.cos(u) - sigma * (np.sinh(u) - np.sin(u))
    np.testing.assert_allclose(clamped_shape(X, u), direct, atol=1e-12)


def test_with_fundamental():
    for spec in (string(), rod()):
        sp = string_spectrum if spec.kind is SupportKind.STRING else rod_spectrum
        assert sp(with_fundamental(spec, 3e8), 1).mode(1).omega == pytest.approx(3e8, rel=1e-12)


def test_dot_modal_displacement_identities():
    spec = with_fundamental(SupportSpec(SupportKind.STRING, 150e-6, LAMBDA0, 3e-6), 1e8)
    sp = string_spectrum(spec, 2)
    L = spec.length_L
    s_mid = dot_modal_displacement(sp, 1, L / 2)
    assert s_mid == pytest.approx(antinode_displacement(spec.total_mass, 1e8), rel=1e-14)
    assert abs(dot_modal_displacement(sp, 2, L / 2)) < 1e-12 * s_mid
    assert dot_modal_displacement(sp, 1, L / 4) == pytest.approx(math.sin(math.pi / 4) * s_mid, rel=1e-14)
    with pytest.raises(ValueError):
        dot_modal_displacement(sp, 1, 2 * L)
    with pytest.raises(IndexError):
        dot_modal_displacement(sp, 5, L / 2)


def test_zero_point_amplitude_hbar_scaling():
    a = zero_point_amplitude(LAMBDA0, 3e-6, 1e8, hbar=HBAR)
    b = zero_point_amplitude(LAMBDA0, 3e-6, 1e8, hbar=2 * HBAR)
    assert b / a == pytest.approx(math.sqrt(2), rel=1e-15)


def test_density_profile_invariants():
    with pytest.raises(InvariantError):
        DensityProfile(LAMBDA0, (DensityIncrement(1e-7, 2e-9, 1.0), DensityIncrement(1.02e-7, 3e-9, 1.0)))
    with pytest.raises(InvariantError):
        DensityProfile(LAMBDA0, grid_points=500)
    p = DensityProfile(LAMBDA0, (DensityIncrement(1e-9, 2e-9, LAMBDA0),))
    with pytest.raises(InvariantError):
        p.validate(2000e-9)


@settings(max_examples=30, deadline=None)
@given(
    ratio=st.floats(1, 1e4),
    c=st.floats(10e-9, 900e-9),
    w=st.floats(0.1e-9, 5e-9),
    n=st.integers(1000, 6000),
)
def test_cell_masses_conserve_total(ratio, c, w, n):
    L = 2000e-9
    p = DensityProfile(LAMBDA0, (DensityIncrement(c, w, (ratio - 1) * LAMBDA0),
                                 DensityIncrement(L - c, w, (ratio - 1) * LAMBDA0)), n)
    edges = np.linspace(0, L, n + 1)
    total = np.sum(p.cell_densities(edges) * np.diff(edges))
    assert total == pytest.approx(p.total_mass(L), rel=1e-10)


def test_loaded_uniform_matches_string():
    spec = with_fundamental(SupportSpec(SupportKind.STRING, 2000e-9, LAMBDA0, 2000e-9), 1e8)
    sp = loaded_modes(DensityProfile(LAMBDA0, (), 4000), spec, 3)
    assert sp.mode(1).omega == pytest.approx(1e8, rel=1e-6)
    x = np.linspace(0, spec.length_L, 101)
    np.testing.assert_allclose(sp.shape(1, x), string_spectrum(spec, 1).shape(1, x), atol=1e-6)


def test_loaded_orthogonality():
    spec = with_fundamental(SupportSpec(SupportKind.STRING, 2000e-9, LAMBDA0, 2000e-9), 1e8)
    incs = (DensityIncrement(499e-9, 2e-9, 99 * LAMBDA0), DensityIncrement(1501e-9, 2e-9, 99 * LAMBDA0))
    sp = loaded_modes(DensityProfile(LAMBDA0, incs, 4000), spec, 4)
    x, dens = sp.grid[1:-1], sp.densities
    h = x[1] - x[0]
    lam_bar = DensityProfile(LAMBDA0, incs).mean_density(spec.length_L)
    for i in range(1, 5):
        for j in range(1, 5):
            val = h * np.sum(dens * sp.shape(i, x) * sp.shape(j, x)) / lam_bar
            assert val == pytest.approx(spec.unit_length if i == j else 0.0, abs=1e-8 * spec.unit_length)


def test_loaded_convergence_order():
    spec = with_fundamental(SupportSpec(SupportKind.STRING, 2000e-9, LAMBDA0, 2000e-9), 1e8)
    incs = (DensityIncrement(499e-9, 2e-9, 999 * LAMBDA0), DensityIncrement(1501e-9, 2e-9, 999 * LAMBDA0))
    w = [loaded_modes(DensityProfile(LAMBDA0, incs, n), spec, 1, check_convergence=False).mode(1).omega
         for n in (2000, 4000, 8000)]
    order = math.log2((w[0] - w[1]) / (w[1] - w[2]))
    assert 1.7 < order < 2.3


def test_loaded_convergence_failure_reported():
    spec = with_fundamental(SupportSpec(SupportKind.STRING, 2000e-9, LAMBDA0, 2000e-9), 1e8)
    incs = (DensityIncrement(499e-9, 2e-9, 999 * LAMBDA0),)
    with pytest.raises(ConvergenceError):
        loaded_modes(DensityProfile(LAMBDA0, incs, 1000), spec, 1, tolerance=1e-12)


@pytest.mark.parametrize("ratio", [2, 10, 100, 1000])
def test_fig2_matches_transfer_matrix_oracle(ratio):
    (pt,) = fig2_curve([ratio])
    exact, averaged = fig2_reference(ratio)
    assert pt.exact == pytest.approx(exact, rel=1e-4)
    assert pt.averaged == pytest.approx(averaged, rel=1e-12)
