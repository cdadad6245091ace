"""Operator algebra, fidelities and Choi/Kraus extraction - run with: pytest scripts/test_qcore.py"""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from qcore import (
    BELL,
    R_Y_PI2,
    SIGMA_Z,
    ChannelImages,
    CPViolationError,
    DegenerateBranchError,
    KrausSet,
    StateError,
    apply_kraus,
    basis_op,
    bell_fidelity,
    canonical_phase,
    check_density,
    choi_matrix,
    deserialize_matrix,
    kraus_from_choi,
    kraus_from_images,
    mixed_fidelity,
    normalize,
    one_norm,
    phase_aligned,
    projector,
    ry,
    serialize_matrix,
)


def random_cp_channel(rng, count: int) -> KrausSet:
    ops = [rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)) for _ in range(count)]
    total = sum(k.conj().T @ k for k in ops)
    scale = np.sqrt(np.linalg.eigvalsh(total)[-1])
    return KrausSet(tuple(k / scale for k in ops))


# === OPERATORS ===


def test_ry_quarter_turn_matches_constant():
    assert_allclose(ry(np.pi / 2), R_Y_PI2, atol=1e-15)


def test_one_norm_is_max_column_sum():
    m = np.array([[1, -2], [3, 4]], dtype=complex)
    assert one_norm(m) == pytest.approx(6.0)


def test_normalize_returns_trace():
    rho, tr = normalize(0.25 * np.eye(2))
    assert tr == pytest.approx(0.5)
    assert_allclose(rho, 0.5 * np.eye(2))


def test_normalize_rejects_empty_branch():
    with pytest.raises(DegenerateBranchError):
        normalize(np.zeros((2, 2)))


def test_check_density_rejects_non_hermitian():
    with pytest.raises(StateError):
        check_density(np.array([[0.5, 0.1], [0.3, 0.5]]))


def test_check_density_rejects_negative_eigenvalue():
    with pytest.raises(StateError):
        check_density(np.diag([1.2, -0.2]))


def test_serialized_matrix_reads_back():
    m = np.array([[0.5, 0.25j], [-0.25j, 0.5]])
    assert_allclose(deserialize_matrix(serialize_matrix(m)), m, atol=1e-12)


# === FIDELITIES ===


def test_bell_fidelity_of_bell_state():
    assert bell_fidelity(projector(BELL)) == pytest.approx(1.0)


def test_mixed_fidelity_of_maximally_mixed_state():
    assert mixed_fidelity(np.eye(2) / 2, basis_op(0, 0)) == pytest.approx(0.5)


def test_mixed_fidelity_of_orthogonal_states():
    assert mixed_fidelity(basis_op(0, 0), basis_op(1, 1)) == pytest.approx(0.0, abs=1e-12)


# === CHANNELS ===


def test_unitary_channel_has_single_kraus_operator():
    images = ChannelImages.from_function(lambda rho: R_Y_PI2 @ rho @ R_Y_PI2.conj().T)
    kraus = kraus_from_images(images)
    assert kraus.significant() == 1
    assert_allclose(phase_aligned(kraus[0], R_Y_PI2), R_Y_PI2, atol=1e-9)
    assert kraus.completeness_defect() >= -1e-9


def test_kraus_operators_keep_zero_slots_in_order():
    images = ChannelImages.from_function(lambda rho: SIGMA_Z @ rho @ SIGMA_Z)
    kraus = kraus_from_images(images)
    assert len(kraus) == 4
    assert list(kraus.eigenvalues) == sorted(kraus.eigenvalues, reverse=True)
    for op in kraus.operators[1:]:
        assert_allclose(op, 0, atol=1e-7)


def test_choi_kraus_reconstructs_random_channels(rng):
    for trial in range(100):
        channel = random_cp_channel(rng, 1 + trial % 4)
        images = channel.images()
        recovered = kraus_from_images(images)
        for pair in ((0, 0), (0, 1), (1, 0), (1, 1)):
            assert_allclose(apply_kraus(recovered, basis_op(*pair)), images[pair], atol=1e-9)
        assert recovered.completeness_defect() >= -1e-9


def test_transpose_map_is_not_completely_positive():
    images = ChannelImages.from_function(lambda rho: rho.T)
    with pytest.raises(CPViolationError):
        kraus_from_images(images)
    clamped = kraus_from_choi(choi_matrix(images), strict=False)
    assert clamped.cp_defect == pytest.approx(1.0)


def test_canonical_phase_makes_pivot_real_positive():
    op = np.exp(0.7j) * np.array([[0.1, -0.9], [0.2, 0.3]])
    out = canonical_phase(op)
    assert out[0, 1].real == pytest.approx(0.9)
    assert abs(out[0, 1].imag) < 1e-15


def test_composition_applies_first_channel_first():
    flip = ChannelImages.from_function(lambda rho: R_Y_PI2 @ rho @ R_Y_PI2.conj().T)
    twice = flip.then(flip)
    assert_allclose(twice.apply(basis_op(0, 0)), basis_op(1, 1), atol=1e-12)
