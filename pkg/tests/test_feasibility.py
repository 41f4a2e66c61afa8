import dataclasses
import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from phononbus.errors import InvariantError
from phononbus.feasibility import (
    TABLE1_PUBLISHED,
    big_prefactor,
    cphase_fidelity,
    cusp,
    default_omega_range,
    feasibility_curve,
    golden_section_maximize,
    max_fidelity,
    max_fidelity_loss,
    nmax_big_continuous,
    nmax_small,
    nmax_small_continuous,
    numerical_optimal_omega2,
    operating_point,
    optimal_omega2,
    required_intensities,
    sideband_fidelity,
    table1,
    with_epsilon,
)
from phononbus.materials import WaveConfig, builtin_material, preset_scenario

# both anchors evaluated with mpmath at 30 digits (Si, N=50, omega1_s=1e8)
OMEGA2_SI_50 = 5812236.757548132
NSMALL_SI = 547.9150613879998


def test_fidelity_examples():
    r = sideband_fidelity(10, 0.0, 0.1, 1.0)
    assert r.fidelity == pytest.approx(0.98, abs=1e-15)
    t = sideband_fidelity(10, 0.0, 0.1, 1.0, WaveConfig.TRAVELLING, eta=0.1)
    assert t.offresonant_loss == pytest.approx(4.0)
    assert not t.feasible and t.clamped == 0.0
    with pytest.raises(InvariantError):
        sideband_fidelity(10, 0.0, 0.1, 1.0, WaveConfig.TRAVELLING)


def test_cphase_fidelity():
    assert cphase_fidelity(10, 0.0, 0.1, 1.0) == pytest.approx(0.96, abs=1e-15)
    r = sideband_fidelity(7, 3.0, 40.0, 1e3)
    assert 1 - cphase_fidelity(7, 3.0, 40.0, 1e3) == pytest.approx(4 * r.background + 2 * r.offresonant_loss)


@settings(max_examples=80)
@given(n=st.integers(1, 10_000), g=st.floats(1, 1e7), om2=st.floats(1, 1e9), w=st.floats(1e3, 1e12))
def test_cphase_never_exceeds_sideband(n, g, om2, w):
    assert cphase_fidelity(n, g, om2, w) <= sideband_fidelity(n, g, om2, w).fidelity


def test_optimum_anchor_and_scaling():
    assert optimal_omega2(50, 1e3, 1e8) == pytest.approx(OMEGA2_SI_50, rel=1e-13)
    assert optimal_omega2(400, 1e3, 1e8) == pytest.approx(2 * OMEGA2_SI_50, rel=1e-13)


@settings(max_examples=60, deadline=None)
@given(n=st.integers(1, 5000), g=st.floats(1, 1e7), w=st.floats(1e4, 1e12))
def test_optimum_properties(n, g, w):
    om2 = optimal_omega2(n, g, w)
    assert sideband_fidelity(n, g, om2, w).fidelity == pytest.approx(max_fidelity(n, g, w), rel=1e-12, abs=1e-12)
    assert numerical_optimal_omega2(n, g, w) == pytest.approx(om2, rel=1e-6)
    for f in (0.9, 1.1):
        assert sideband_fidelity(n, g, f * om2, w).fidelity < max_fidelity(n, g, w) + 1e-15


def test_max_fidelity_limits():
    assert max_fidelity(10, 1e-12, 1e8) == pytest.approx(1.0, abs=1e-12)
    assert max_fidelity_loss(10, 0.0, 1e8) == 0.0


@settings(max_examples=60)
@given(w=st.floats(1e4, 1e12), eps=st.floats(1e-4, 0.5), g=st.floats(1, 1e7))
def test_inversion_reproduces_small_bound(w, eps, g):
    n = nmax_small_continuous(w, eps, g)
    if n > 0:
        assert max_fidelity_loss(n, g, w) == pytest.approx(eps, rel=1e-10)


def test_nmax_small_examples():
    assert nmax_small_continuous(1e8, 0.1, 1e3) == pytest.approx(NSMALL_SI, rel=1e-9)
    assert nmax_small(1e8, 0.1, 1e3) == 547
    assert nmax_small_continuous(3e8, 0.1, 1e3) == pytest.approx(3 * NSMALL_SI, rel=1e-9)
    assert nmax_small(1e8, 0.0, 1e3) == 0
    with pytest.raises(InvariantError):
        nmax_small(1e8, 1.0, 1e3)


def test_nmax_big_power_laws():
    sc = preset_scenario("Si")
    assert nmax_big_continuous(16e8, sc) == pytest.approx(nmax_big_continuous(1e8, sc) / 32, rel=1e-13)
    mat = dataclasses.replace(sc.material, i2_max=16 * sc.material.i2_max)
    sc16 = dataclasses.replace(sc, material=mat)
    assert big_prefactor(sc16) == pytest.approx(8 * big_prefactor(sc), rel=1e-13)


def test_intensity_ratio_is_inverse_eta_squared():
    sc = preset_scenario("Si", n_dots=50)
    d = 0.1 * 2e-9
    I1, I2 = required_intensities(sc, 1e8, dipoles=(d, d), fc_products=(0.9, 0.9))
    from phononbus.feasibility import _eta

    assert I2 / I1 == pytest.approx(1 / _eta(sc, 1e8) ** 2, rel=1e-12)


@settings(max_examples=40)
@given(n=st.integers(1, 3000), w=st.floats(1e5, 1e11))
def test_i2_scales_as_n_four_thirds(n, w):
    a = required_intensities(preset_scenario("Si", n_dots=n), w)[1]
    b = required_intensities(preset_scenario("Si", n_dots=8 * n), w)[1]
    assert b / a == pytest.approx(8 ** (4 / 3), rel=1e-9)


def test_intensity_errors():
    sc = preset_scenario("Si", n_dots=5)
    with pytest.raises(InvariantError):
        required_intensities(sc, 1e8, dipoles=(0.0, 1e-10))
    with pytest.raises(InvariantError):
        required_intensities(dataclasses.replace(sc, cos_theta=0.0), 1e8)


def test_equality_point_hits_intensity_limit():
    sc0 = preset_scenario("Si", epsilon=0.1)
    omega_c, n_c = cusp(sc0)
    sc = preset_scenario("Si", n_dots=n_c, epsilon=0.1)
    I2 = required_intensities(sc, omega_c)[1]
    assert I2 == pytest.approx(sc.material.i2_max, rel=0.01)
    assert nmax_small_continuous(omega_c, 0.1, 1e3) == pytest.approx(nmax_big_continuous(omega_c, sc0), rel=1e-10)


@pytest.mark.parametrize("material", ["CdTe", "Si"])
def test_table1_within_tolerance(material):
    rows = table1([material])
    for row, pub in zip(rows, TABLE1_PUBLISHED[material]):
        assert abs(row[2] - pub) <= max(1, 0.2 * pub)


def test_nc_trends():
    for mat in ("CdTe", "Si"):
        by_eps = [cusp(preset_scenario(mat, epsilon=e))[1] for e in (0.1, 0.01, 0.001)]
        by_lam = [cusp(preset_scenario(mat, lambda_ratio=r))[1] for r in (1, 10, 100)]
        assert by_eps == sorted(by_eps, reverse=True)
        assert by_lam == sorted(by_lam, reverse=True)


def test_curve_shape_is_unimodal():
    sc = preset_scenario("Si")
    curve = feasibility_curve(sc, default_omega_range(sc), 401)
    n = np.array([s.n_max for s in curve.samples])
    peak = int(np.argmax(n))
    assert np.all(np.diff(n[: peak + 1]) >= 0)
    assert np.all(np.diff(n[peak:]) <= 0)
    assert abs(n.max() - curve.n_c) <= 1
    assert curve.rows()[0][0] == pytest.approx(curve.omega_c / 100)


def test_curve_validation():
    sc = preset_scenario("Si")
    with pytest.raises(InvariantError):
        feasibility_curve(sc, (1e8, 1e8), 10)
    with pytest.raises(InvariantError):
        feasibility_curve(sc, (1e8, 1e9), 0)


def test_golden_section():
    assert golden_section_maximize(lambda x: -(x - 1.3) ** 2, 0, 4) == pytest.approx(1.3, abs=1e-8)
    with pytest.raises(InvariantError):
        golden_section_maximize(lambda x: x, 1, 0)


def test_operating_point_warns_when_limits_broken():
    sc = preset_scenario("Si", n_dots=50)
    op = operating_point(sc, 1e8)
    assert op.gate.omega2 == pytest.approx(OMEGA2_SI_50)
    assert op.warnings == ()
    with pytest.warns(RuntimeWarning):
        operating_point(preset_scenario("Si", n_dots=5000), 1e8)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        assert with_epsilon(sc, 0.01).epsilon == 0.01
    assert builtin_material("Si").i1_limit > 0
