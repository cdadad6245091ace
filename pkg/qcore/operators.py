"""Operator algebra helpers: basis states, rotations, norms and normalization.

Matrices are plain ``numpy`` complex arrays. The qubit basis is indexed
``0 -> |1>`` and ``1 -> |2>`` for spins, ``0 -> |e>`` and ``1 -> |l>`` for
time-bin photons.
"""

from __future__ import annotations

import numpy as np

from config import settings
from qcore.errors import DegenerateBranchError, StateError

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)

# R_y(pi/2) = (1/sqrt2)[[1, -1], [1, 1]]
R_Y_PI2 = np.array([[1, -1], [1, 1]], dtype=complex) / np.sqrt(2)


def dag(m: np.ndarray) -> np.ndarray:
    return np.conjugate(np.transpose(m))


def ket(index: int, dim: int = 2) -> np.ndarray:
    """Column basis vector |index> in a space of dimension ``dim``."""
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def projector(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, np.conjugate(psi))


def basis_op(i: int, j: int, dim: int = 2) -> np.ndarray:
    """Matrix unit |i><j|."""
    m = np.zeros((dim, dim), dtype=complex)
    m[i, j] = 1.0
    return m


def ry(theta: float) -> np.ndarray:
    """Rotation exp(-i theta sigma_y / 2)."""
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def embed(m: np.ndarray, dim: int) -> np.ndarray:
    """Place a 2x2 qubit-block matrix in the top-left corner of a dim x dim matrix."""
    out = np.zeros((dim, dim), dtype=complex)
    out[:2, :2] = m
    return out


def check_square(m: np.ndarray, name: str = "matrix") -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise StateError(f"{name} must be square, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise StateError(f"{name} has non-finite entries")
    return m


def is_hermitian(m: np.ndarray, tol: float | None = None) -> bool:
    tol = settings.tol_herm if tol is None else tol
    return bool(np.max(np.abs(m - dag(m)), initial=0.0) <= tol)


def check_density(rho: np.ndarray, normalized: bool = False, name: str = "rho") -> np.ndarray:
    """Validate a (possibly sub-normalized) density matrix and return it as complex array."""
    rho = check_square(rho, name)
    if not is_hermitian(rho):
        raise StateError(f"{name} is not Hermitian")
    eigs = np.linalg.eigvalsh((rho + dag(rho)) / 2)
    if eigs.size and eigs[0] < -settings.tol_psd:
        raise StateError(f"{name} has negative eigenvalue {eigs[0]:.3e}")
    tr = float(np.real(np.trace(rho)))
    if normalized and abs(tr - 1.0) > 1e-9:
        raise StateError(f"{name} must be normalized (trace {tr:.12f})")
    if tr > 1.0 + 1e-9:
        raise StateError(f"{name} trace {tr:.12f} exceeds 1")
    return rho


def one_norm(m: np.ndarray) -> float:
    """Maximum absolute column sum, max_j sum_i |M_ij|."""
    m = check_square(m)
    return float(np.abs(m).sum(axis=0).max(initial=0.0))


def normalize(rho: np.ndarray) -> tuple[np.ndarray, float]:
    """Return (rho / tr rho, tr rho); the trace is the branch success probability."""
    rho = check_square(rho, "rho")
    tr = float(np.real(np.trace(rho)))
    if tr <= settings.tol_trace:
        raise DegenerateBranchError(f"branch trace {tr:.3e} is below {settings.tol_trace:.0e}")
    return rho / tr, tr
