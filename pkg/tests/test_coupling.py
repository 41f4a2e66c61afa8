import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from phononbus.coupling import (
    GatePoint,
    RamanChannel,
    cphase_time,
    franck_condon_product,
    gate_point,
    lamb_dicke,
    lamb_dicke_from_mass,
    rabi,
    raman_rabi,
    sideband_strength,
)
from phononbus.errors import InvariantError
from phononbus.feasibility import optimal_omega2, required_intensities
from phononbus.materials import preset_scenario
from phononbus.support import string_spectrum, with_fundamental
from phononbus.units import HBAR, LAMBDA0

# k2 sqrt(hbar/(lambda l N omega)) at Si, N = 50, evaluated at 30 digits
ETA_SI_50 = 1.36642939742788e-05


def si_spectrum(n=50, omega=1e8):
    sc = preset_scenario("Si", n_dots=n)
    return sc, string_spectrum(with_fundamental(sc.support, omega), 1)


def test_eta_anchor():
    sc, sp = si_spectrum()
    assert lamb_dicke(2.1e6, sp) == pytest.approx(ETA_SI_50, rel=1e-12)
    assert lamb_dicke(2.1e6, sp, cos_theta=0.0) == 0.0


@given(m=st.floats(1e-20, 1e-10), w=st.floats(1e5, 1e10), k=st.floats(1e5, 1e7))
def test_eta_inverse_sqrt_mass(m, w, k):
    a = lamb_dicke_from_mass(k, m, w)
    assert lamb_dicke_from_mass(k, 4 * m, w) == pytest.approx(a / 2, rel=1e-14)


def test_eta_inverse_sqrt_n():
    etas = [lamb_dicke(2.1e6, si_spectrum(n)[1]) for n in (10, 40, 160)]
    assert etas[0] / etas[1] == pytest.approx(2.0, rel=1e-12)
    assert etas[1] / etas[2] == pytest.approx(2.0, rel=1e-12)


def test_eta_rejects_bad_angle():
    with pytest.raises(InvariantError):
        lamb_dicke_from_mass(1e6, 1e-15, 1e8, cos_theta=1.5)


def test_rabi_scalings():
    base = rabi(1e14, 2e-10, 0.9)
    assert rabi(4e14, 2e-10, 0.9) == pytest.approx(2 * base, rel=1e-15)
    assert rabi(1e14, 2e-10, 0.0) == 0.0
    assert rabi(1e14, -2e-10, 0.9) == base
    with pytest.raises(InvariantError):
        rabi(-1.0, 1e-10, 1.0)


def test_raman_rabi():
    d = 1e11
    assert raman_rabi(d / 10, d / 10, d) == pytest.approx(d / 100)
    assert raman_rabi(3.0, 7.0, d) == raman_rabi(7.0, 3.0, d)
    assert raman_rabi(3.0, 7.0, d / 2) == pytest.approx(2 * raman_rabi(3.0, 7.0, d))
    with pytest.raises(InvariantError):
        raman_rabi(1.0, 1.0, 0.0)


def test_sideband_and_timing():
    assert sideband_strength(0.0, 5.0) == 0.0
    with pytest.raises(InvariantError):
        sideband_strength(1.0, 5.0)
    tau_a, tau_c = cphase_time(math.pi)
    assert tau_a == pytest.approx(0.5) and tau_c == pytest.approx(4 * tau_a)
    with pytest.raises(InvariantError):
        cphase_time(0.0)


def test_franck_condon_product():
    assert franck_condon_product([]) == 1.0
    assert franck_condon_product([0.3, 0.4]) == pytest.approx(math.exp(-0.125))


def test_gate_point_invariants():
    with pytest.raises(InvariantError):
        GatePoint(1.0, 1.2, 1.0, 1.0, 1.0, 4.0)
    with pytest.raises(InvariantError):
        GatePoint(1.0, 0.1, 1.0, 1.0, 1.0, 3.0)


def test_raman_channel_validation():
    ok = dict(initial="0", virtual="v-1", final="0", detuning_delta=1e11, pol_1=(1, 0, 0), pol_2=(0, 1, 0),
              k1=1e6, k2=2e6, fc_1=0.9, fc_2=0.9)
    RamanChannel(**ok)
    with pytest.raises(InvariantError):
        RamanChannel(**{**ok, "pol_1": (1, 1, 0)})
    with pytest.raises(InvariantError):
        RamanChannel(**{**ok, "detuning_delta": -1.0})


@pytest.mark.parametrize("material,n,omega", [("Si", 50, 1e8), ("CdTe", 5, 3e9), ("Si", 700, 2e7)])
def test_chain_closure(material, n, omega):
    sc = preset_scenario(material, n_dots=n)
    mat = sc.material
    I1, I2 = required_intensities(sc, omega)
    eta = sc.k2_magnitude * math.sqrt(HBAR / (LAMBDA0 * sc.support.unit_length * n * omega))
    gp = gate_point(I1, I2, eta, mat.dipole_1v * mat.dot_radius, mat.dipole_0v * mat.dot_radius,
                    mat.fc_product_1v, mat.fc_product_01, mat.delta)
    assert gp.omega2 == pytest.approx(optimal_omega2(n, mat.gamma_rec, omega), rel=1e-6)
    assert gp.tau_cphase == pytest.approx(4 * gp.tau_A, rel=1e-15)
