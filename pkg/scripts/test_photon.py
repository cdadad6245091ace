"""Photon source: spectrum normalization, generation noise, input mode."""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.integrate import quad

from photon import PhotonSourceSpec, depolarize, input_mode, lorentzian_spectrum
from qcore import ConfigError, mixed_fidelity, projector


def test_from_ghz_reads_bandwidth_as_cycles():
    spec = PhotonSourceSpec.from_GHz(1e15, 1.0)
    assert spec.gamma == pytest.approx(2 * math.pi * 1e9)
    assert spec.lifetime == pytest.approx(1e-9)
    assert spec.epsilon == 0.0


@pytest.mark.parametrize("kwargs", [
    {"gamma": 0.0},
    {"gamma": -1.0},
    {"gamma": 1.0, "fidelity_F": 0.5},
    {"gamma": 1.0, "alpha": 1.0, "beta": 1.0},
])
def test_spec_rejects_invalid_parameters(kwargs):
    with pytest.raises(ConfigError):
        PhotonSourceSpec(omega0=10.0, **kwargs)


def test_intensity_has_unit_area():
    spectrum = lorentzian_spectrum(PhotonSourceSpec(omega0=10.0, gamma=2.0))
    area, _ = quad(spectrum.intensity, -np.inf, np.inf)
    assert area == pytest.approx(1.0, abs=1e-9)


def test_amplitude_squared_is_intensity_for_any_reference():
    spec = PhotonSourceSpec(omega0=3.0, gamma=0.5)
    omega = np.linspace(0.0, 6.0, 41)
    for e0 in (1.0, 1e-3, 7.5):
        spectrum = lorentzian_spectrum(spec, e0=e0)
        assert_allclose(np.abs(spectrum(omega)) ** 2, spectrum.intensity(omega), rtol=1e-12)


def test_peak_value():
    spectrum = lorentzian_spectrum(PhotonSourceSpec(omega0=0.0, gamma=4.0))
    assert spectrum.intensity(0.0) == pytest.approx(spectrum.peak)


@pytest.mark.parametrize("tail", [1e-2, 1e-5, 1e-8])
def test_half_width_window_leaves_requested_tail(tail):
    spectrum = lorentzian_spectrum(PhotonSourceSpec(omega0=0.0, gamma=2.0))
    width = spectrum.half_width_window(tail)
    outside = 1.0 - (2 / math.pi) * math.atan(width / (spectrum.gamma / 2))
    assert outside == pytest.approx(tail, rel=1e-6)


def test_half_width_window_rejects_bad_tail():
    spectrum = lorentzian_spectrum(PhotonSourceSpec(omega0=0.0, gamma=2.0))
    with pytest.raises(ConfigError):
        spectrum.half_width_window(0.0)


def test_zero_reference_amplitude_rejected():
    with pytest.raises(ConfigError):
        lorentzian_spectrum(PhotonSourceSpec(omega0=0.0, gamma=1.0), e0=0.0)


# === GENERATION NOISE ===


def test_depolarize_perfect_source_is_identity():
    rho = projector(np.array([0.6, 0.8j]))
    assert_allclose(depolarize(rho, 1.0), rho, atol=1e-15)


def test_depolarize_mixes_towards_identity():
    rho = np.diag([1.0, 0.0]).astype(complex)
    assert_allclose(depolarize(rho, 0.75), np.diag([0.75, 0.25]), atol=1e-15)


def test_depolarized_pure_state_has_fidelity_f():
    spec = PhotonSourceSpec(omega0=1.0, gamma=1.0, alpha=0.6, beta=0.8j, fidelity_F=0.93)
    assert mixed_fidelity(spec.state(), spec.pure_state()) == pytest.approx(0.93, abs=1e-12)
    assert np.trace(spec.state()).real == pytest.approx(1.0)


@pytest.mark.parametrize("F", [0.5, 1.01])
def test_depolarize_rejects_fidelity_out_of_range(F):
    with pytest.raises(ConfigError):
        depolarize(np.eye(2) / 2, F)


# === INPUT MODE ===


def test_input_mode_starts_at_zero_time():
    spec = PhotonSourceSpec(omega0=5.0, gamma=2.0)
    t = np.array([-1.0, 0.0, 0.5, 1.0])
    mode = input_mode(t, spec, e0=0.1)
    assert mode[0] == 0
    assert mode[1] == pytest.approx(0.1)
    assert_allclose(np.abs(mode[2:]), 0.1 * np.exp(-spec.gamma * t[2:] / 2))


def test_input_mode_in_cavity_frame_drops_carrier():
    spec = PhotonSourceSpec(omega0=5.0, gamma=2.0)
    value = input_mode(0.3, spec, e0=1.0, omega_frame=5.0)
    assert value == pytest.approx(math.exp(-0.3))
