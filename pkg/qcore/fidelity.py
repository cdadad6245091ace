"""State fidelities."""

from __future__ import annotations

import numpy as np

from qcore.errors import StateError
from qcore.operators import check_density

BELL = np.array([1, 1], dtype=complex) / np.sqrt(2)


def _psd_sqrt(rho: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh((rho + rho.conj().T) / 2)
    w = np.sqrt(np.clip(w, 0.0, None))
    return (v * w) @ v.conj().T


def bell_fidelity(rho: np.ndarray) -> float:
    """<Bell| rho |Bell> with |Bell> = (|1> + |2>)/sqrt2."""
    rho = check_density(rho, normalized=True)
    if rho.shape != (2, 2):
        raise StateError(f"bell_fidelity expects a 2x2 state, got {rho.shape}")
    return float(np.clip(np.real(BELL.conj() @ rho @ BELL), 0.0, 1.0))


def mixed_fidelity(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Uhlmann fidelity (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2."""
    rho = check_density(rho, normalized=True, name="rho")
    sigma = check_density(sigma, normalized=True, name="sigma")
    if rho.shape != sigma.shape:
        raise StateError(f"dimension mismatch: {rho.shape} vs {sigma.shape}")
    s = _psd_sqrt(rho)
    inner = s @ sigma @ s
    w = np.linalg.eigvalsh((inner + inner.conj().T) / 2)
    value = float(np.sum(np.sqrt(np.clip(w, 0.0, None))) ** 2)
    return float(np.clip(value, 0.0, 1.0))
