"""Lindblad solver, rotation channels and the microwave and optical gate models."""

import json
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy import constants

from control import (
    LindbladSpec,
    MicrowaveConfig,
    MicrowaveMode,
    OpticalConfig,
    RotationModel,
    apply_propagator,
    approximation_error,
    compose,
    ideal_rotation,
    lindblad_propagate,
    load_optical_model,
    microwave_pi2,
    optical_pi2,
    phenomenological_rotation,
    propagator,
    qubit_frame,
    rotation_channel,
)
from control.optical import DissipatorTerm, rabi_frequency
from memory import read_out_channel
from qcore import (
    R_Y_PI2,
    SIGMA_X,
    SIGMA_Z,
    ConfigError,
    ModelError,
    basis_op,
    dag,
    phase_aligned,
    projector,
)

PLUS = np.array([1, 1], dtype=complex) / math.sqrt(2)


def assert_images_close(actual, expected, atol):
    for pair in ((0, 0), (0, 1), (1, 0), (1, 1)):
        assert_allclose(actual[pair], expected[pair], atol=atol)


# === LINDBLAD ===


def test_zero_generator_is_identity():
    rho = projector(np.array([0.6, 0.8j]))
    spec = LindbladSpec(2, np.zeros((2, 2)), t_final=3.0)
    assert_allclose(lindblad_propagate(spec, rho), rho, atol=1e-12)


def test_resonant_rabi_flip():
    omega = 2.0
    spec = LindbladSpec(2, 0.5 * omega * SIGMA_X, t_final=math.pi / omega)
    out = lindblad_propagate(spec, basis_op(0, 0))
    assert_allclose(out, basis_op(1, 1), atol=1e-8)


def test_time_dependent_pulse_area():
    # area of 2t over [0, sqrt(pi)] is pi
    spec = LindbladSpec(2, lambda t: t * SIGMA_X, t_final=math.sqrt(math.pi))
    out = lindblad_propagate(spec, basis_op(0, 0))
    assert_allclose(out, basis_op(1, 1), atol=1e-8)


def test_pure_dephasing_decay():
    rate, t = 0.3, 1.7
    spec = LindbladSpec(2, np.zeros((2, 2)), [(rate, SIGMA_Z)], t_final=t)
    out = lindblad_propagate(spec, projector(PLUS))
    assert out[0, 1] == pytest.approx(0.5 * math.exp(-2 * rate * t), abs=1e-9)
    assert out[0, 0] == pytest.approx(0.5, abs=1e-12)
    assert np.min(np.linalg.eigvalsh(out)) >= -10 * spec.rtol


def test_propagator_matches_direct_propagation():
    spec = LindbladSpec(2, 0.7 * SIGMA_X + 0.2 * SIGMA_Z, [(0.1, basis_op(0, 1))], t_final=2.0)
    rho = projector(np.array([0.8, 0.6]))
    assert_allclose(apply_propagator(propagator(spec), rho), lindblad_propagate(spec, rho), atol=1e-9)


@pytest.mark.parametrize("kwargs", [
    {"hamiltonian": np.array([[0, 1], [0, 0]], dtype=complex)},
    {"dissipators": [(-1.0, SIGMA_Z)]},
    {"dissipators": [(1.0, np.eye(3))]},
    {"t_final": -1.0},
])
def test_invalid_master_equation_rejected(kwargs):
    values = {"hamiltonian": np.zeros((2, 2)), "t_final": 1.0}
    values.update(kwargs)
    with pytest.raises(ConfigError):
        LindbladSpec(2, **values)


# === ROTATION CHANNELS ===


def test_leakage_free_state_has_zero_error():
    rho = np.zeros((4, 4), dtype=complex)
    rho[:2, :2] = projector(PLUS)
    assert approximation_error(rho) == 0.0


def test_leaked_population_error():
    assert approximation_error(np.diag([0.5, 0.4, 0.1, 0.0])) == pytest.approx(0.1)


def test_leaked_coherence_error():
    rho = np.diag([0.6, 0.4, 0.0, 0.0]).astype(complex)
    rho[0, 2] = rho[2, 0] = 0.05
    assert approximation_error(rho) == pytest.approx(0.05)


def test_ideal_rotation_channel():
    rot = ideal_rotation()
    assert len(rot.kraus) == 1
    assert_allclose(rot.kraus[0], R_Y_PI2)
    assert_allclose(rot.lambda_map, R_Y_PI2 @ basis_op(0, 0) @ dag(R_Y_PI2), atol=1e-15)
    assert rot.leakage == pytest.approx(0.0)
    assert rot.summary()["model"] == "ideal"


def test_phenomenological_rotation_mixes_with_identity():
    rot = phenomenological_rotation(0.99)
    expected = 0.98 * R_Y_PI2 @ basis_op(0, 0) @ dag(R_Y_PI2) + 0.01 * np.eye(2)
    assert_allclose(rot.lambda_map, expected, atol=1e-15)
    assert rot.model_tag is RotationModel.PHENOMENOLOGICAL
    assert rot.kraus.completeness_defect() >= -1e-9
    with pytest.raises(ConfigError):
        phenomenological_rotation(0.4)


def test_composition_is_associative():
    images = phenomenological_rotation(0.97).images
    four = compose(images, 4)
    two_of_two = compose(compose(images, 2), 2)
    assert_images_close(four, two_of_two, atol=1e-10)
    with pytest.raises(ConfigError):
        compose(images, 0)


def test_dispatch_by_name():
    assert rotation_channel("ideal").model_tag is RotationModel.IDEAL
    assert rotation_channel("phenomenological", 0.95).details["gate_fidelity"] == 0.95
    with pytest.raises(ValueError):
        rotation_channel("laser")


# === MICROWAVE ===


def test_microwave_config_validation():
    with pytest.raises(ConfigError):
        MicrowaveConfig(temperature_K=5.0)
    with pytest.raises(ConfigError):
        MicrowaveConfig(phi_dc=0.3)
    with pytest.raises(ConfigError):
        MicrowaveConfig(B_ac_T=-1.0)


def test_zero_field_splitting_is_degenerate():
    with pytest.raises(ModelError):
        qubit_frame(MicrowaveConfig(B_dc_T=0.0))


def test_qubit_frame_fixes_drive_phase():
    frame = qubit_frame(MicrowaveConfig())
    assert frame.drive[1, 0].real == pytest.approx(0.0, abs=1e-12)
    assert frame.drive[1, 0].imag > 0
    assert frame.omega_s > 0


def test_microwave_without_drive_is_identity():
    rot = microwave_pi2(MicrowaveConfig(B_ac_T=0.0, phonon_rate_per_ns=0.0))
    assert rot.gate_time_ns == 0.0
    assert rot.approx_error == 0.0
    assert_allclose(rot.lambda_map, basis_op(0, 0), atol=1e-15)


def test_dissipation_free_rwa_gate_is_ideal():
    rot = microwave_pi2(MicrowaveConfig(phonon_rate_per_ns=0.0, mode=MicrowaveMode.RWA))
    assert_images_close(rot.images, ideal_rotation().images, atol=1e-5)
    assert rot.kraus.significant(rel_tol=1e-6) == 1
    k = rot.kraus[0]
    assert_allclose(dag(k) @ k, np.eye(2), atol=1e-6)
    assert rot.approx_error < 1e-9
    assert rot.omega_s == pytest.approx(qubit_frame(MicrowaveConfig()).omega_s * 1e9)


@pytest.mark.slow
def test_dissipation_free_lab_frame_gate_gives_readout_pattern():
    rot = microwave_pi2(MicrowaveConfig(phonon_rate_per_ns=0.0))
    readout = read_out_channel(rot)
    reference = 0.5 * np.array([[-1, -1], [-1, 1]], dtype=complex)
    assert_allclose(phase_aligned(readout.kraus[0], reference), reference, atol=0.05)
    assert all(w < 0.01 for w in readout.kraus.eigenvalues[1:])
    assert 1e-8 < rot.gate_time_ns < 1e3


@pytest.mark.slow
def test_default_microwave_gate_error_order():
    rot = microwave_pi2(MicrowaveConfig())
    assert rot.model_tag is RotationModel.MICROWAVE
    assert 9.34e-7 < rot.approx_error < 9.34e-5
    assert rot.kraus.completeness_defect() >= -1e-6


# === OPTICAL ===


def test_optical_pulse_timing():
    cfg = OpticalConfig()
    assert cfg.sigma_ns == pytest.approx(0.037511, abs=1e-6)
    assert cfg.gate_time_ns == pytest.approx(1.5004, abs=1e-4)


@pytest.mark.parametrize("kwargs", [
    {"B_dc_T": 2.0},
    {"theta_dc_deg": 0.0},
    {"temperature_K": 0.05},
    {"tau_pi8_ps": 0.0},
    {"E1_V_per_m": -1.0},
])
def test_optical_config_rejects(kwargs):
    with pytest.raises(ConfigError):
        OpticalConfig(**kwargs)


def test_rabi_frequency_units():
    assert rabi_frequency(1e-29, 1e5) == pytest.approx(1e-24 / constants.hbar * 1e-9)


def test_rate_table_interpolates():
    term = DissipatorTerm("phonon", np.eye(2), rate_table=((0.1, 1.0), (4.0, 40.0)))
    assert term.rate_at(0.1) == pytest.approx(1.0)
    assert term.rate_at(2.05) == pytest.approx(20.5)
    assert DissipatorTerm("fixed", np.eye(2), rate=3.0).rate_at(1.0) == 3.0


def test_default_model_loads():
    model = load_optical_model()
    assert model.dim == 8
    assert model.h0.shape == (8, 8)
    assert {d.field for d in model.drives} <= {"E1", "E2"}
    assert all(op.shape == (8, 8) for op in (d.operator for d in model.dissipators))


def test_model_loader_errors(tmp_path):
    bad_json = tmp_path / "bad.json"
    bad_json.write_text("{not json")
    with pytest.raises(ConfigError):
        load_optical_model(bad_json)

    missing_key = tmp_path / "missing.json"
    missing_key.write_text(json.dumps({"dim": 2, "drives": []}))
    with pytest.raises(ConfigError, match="H0"):
        load_optical_model(missing_key)

    wrong_shape = tmp_path / "shape.json"
    wrong_shape.write_text(json.dumps({"dim": 3, "drives": [], "H0": [[[0, 0]]]}))
    with pytest.raises(ConfigError):
        load_optical_model(wrong_shape)

    with pytest.raises(OSError):
        load_optical_model(tmp_path / "absent.json")


@pytest.mark.slow
def test_optical_gate_structure():
    rot = optical_pi2(OpticalConfig())
    assert rot.model_tag is RotationModel.OPTICAL
    assert rot.gate_time_ns == pytest.approx(OpticalConfig().gate_time_ns)
    assert rot.details["pulses"] == 4
    assert 8.53e-6 < rot.approx_error < 8.53e-4
    assert len(rot.kraus) <= 4
    assert rot.kraus.completeness_defect() >= -1e-6
