"""Unit conversions, derived drive quantities, and config validation."""

import math

import pytest
from scipy.constants import h, c, hbar, k as k_B

from excimech import (
    AdiabaticRegimeWarning,
    ConflictingDrive,
    ConflictingField,
    InvalidConfig,
    MissingField,
    NonPhysicalValue,
    SystemParams,
    build_params,
    paper_config,
    photon_energy_from_wavelength_nm,
    pump_amplitude,
    serialize,
    thermal_occupation,
)


def test_kappa_from_inverse_picoseconds():
    params = build_params(paper_config())
    assert params.kappa == pytest.approx(2.0e11, rel=1e-12)


def test_g_multiply_out():
    params = build_params(paper_config())
    assert params.g == pytest.approx(2.0 * math.pi * 2.4e9, rel=1e-12)
    assert params.g == pytest.approx(1.50796e10, rel=1e-5)


def test_caption_parameter_set():
    params = build_params(paper_config())
    assert params.gamma == pytest.approx(2.0e9, rel=1e-12)
    assert params.gamma_m == pytest.approx(1.0 / 60e-9, rel=1e-12)
    assert params.g0 == pytest.approx(2.0 * math.pi * 220e6, rel=1e-12)
    assert params.omega_m == pytest.approx(2.0 * math.pi * 20e9, rel=1e-12)
    assert params.alpha == pytest.approx(1e-9 * params.g, rel=1e-12)


def test_empty_config_missing_field():
    with pytest.raises(MissingField):
        build_params({})


def test_unknown_key_rejected():
    cfg = paper_config()
    cfg["kapa_inv_ps"] = 5.0
    with pytest.raises(InvalidConfig):
        build_params(cfg)


def test_negative_rate_rejected():
    cfg = paper_config()
    cfg["gamma_inv_ns"] = -1.0
    with pytest.raises(NonPhysicalValue):
        build_params(cfg)


def test_conflicting_drive():
    cfg = paper_config()
    cfg["pump_amplitude"] = 1e12
    with pytest.raises(ConflictingDrive):
        build_params(cfg)


def test_conflicting_thermal():
    cfg = paper_config()
    cfg["temperature_K"] = 10.0
    with pytest.raises(ConflictingField):
        build_params(cfg)


def test_red_detuning_convention():
    params = build_params(paper_config(delta_over_omega_m=1.1))
    assert params.delta_a == pytest.approx(-1.1 * params.omega_m, rel=1e-12)
    assert params.delta_ex == params.delta_a


def test_literal_detuning_keys():
    cfg = paper_config()
    del cfg["delta_over_omega_m"]
    cfg["delta_a_over_omega_m"] = 0.7
    cfg["delta_ex_over_omega_m"] = -0.3
    params = build_params(cfg)
    assert params.delta_a == pytest.approx(0.7 * params.omega_m, rel=1e-12)
    assert params.delta_ex == pytest.approx(-0.3 * params.omega_m, rel=1e-12)


def test_pump_amplitude_zero_power():
    assert pump_amplitude(0.0, 2.5565e-19, 2e11) == 0.0


def test_pump_amplitude_direct_arithmetic():
    # independent arithmetic: eps_p = sqrt(kappa * P / (h*c/lambda))
    e_ph = h * c / 777e-9
    expected = math.sqrt(2e11 * 24e-6 / e_ph)
    got = pump_amplitude(24e-6, photon_energy_from_wavelength_nm(777.0), 2e11)
    assert got == pytest.approx(expected, rel=1e-12)
    assert got == pytest.approx(4.334e12, rel=1e-3)


def test_pump_amplitude_square_root_scaling():
    e_ph = 2.5565e-19
    assert pump_amplitude(4 * 24e-6, e_ph, 2e11) == pytest.approx(
        2.0 * pump_amplitude(24e-6, e_ph, 2e11), rel=1e-12)


def test_pump_amplitude_nonphysical():
    with pytest.raises(NonPhysicalValue):
        pump_amplitude(-1e-6, 2.5565e-19, 2e11)
    with pytest.raises(NonPhysicalValue):
        pump_amplitude(1e-6, -2.5565e-19, 2e11)
    with pytest.raises(NonPhysicalValue):
        pump_amplitude(1e-6, 2.5565e-19, 0.0)


def test_thermal_occupation_ground_state_limit():
    omega_m = 2 * math.pi * 20e9
    assert thermal_occupation(1e-3, omega_m) < 1e-100


def test_thermal_occupation_bose_inversion():
    # independent Bose-Einstein arithmetic at 96.5 K
    omega_m = 2 * math.pi * 20e9
    expected = 1.0 / (math.exp(hbar * omega_m / (k_B * 96.5)) - 1.0)
    got = thermal_occupation(96.5, omega_m)
    assert got == pytest.approx(expected, rel=1e-12)
    assert abs(got - 100.0) < 1.0


def test_thermal_occupation_ln2_case():
    omega_m = 2 * math.pi * 20e9
    T = hbar * omega_m / (k_B * math.log(2.0))
    assert thermal_occupation(T, omega_m) == pytest.approx(1.0, rel=1e-12)


def test_thermal_occupation_increasing_in_T():
    omega_m = 2 * math.pi * 20e9
    values = [thermal_occupation(T, omega_m) for T in (1.0, 10.0, 50.0, 300.0)]
    assert all(a < b for a, b in zip(values, values[1:]))


def test_thermal_occupation_nonphysical():
    with pytest.raises(NonPhysicalValue):
        thermal_occupation(-1.0, 1e11)
    with pytest.raises(NonPhysicalValue):
        thermal_occupation(0.0, 1e11)


def test_temperature_config_key():
    cfg = paper_config()
    del cfg["n_th"]
    cfg["temperature_K"] = 96.5
    params = build_params(cfg)
    assert abs(params.n_th - 100.0) < 1.0


def test_serialize_round_trip():
    params = build_params(paper_config())
    again = build_params(serialize(params))
    for name, value in serialize(params).items():
        assert getattr(again, name) == pytest.approx(value, rel=1e-12)


def test_adiabatic_regime_warning():
    d = serialize(build_params(paper_config()))
    d["g"] = d["kappa"] * 2.0
    with pytest.warns(AdiabaticRegimeWarning):
        p = SystemParams(**d)
    assert not p.adiabatic_regime


def test_negative_red_detuning_magnitude_rejected():
    with pytest.raises(NonPhysicalValue):
        build_params(paper_config(delta_over_omega_m=-0.5))
