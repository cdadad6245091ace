"""Channel images, Choi matrices and Kraus extraction for qubit channels.

A channel is described by its images D(|i><j|) on the four matrix units of
the input qubit. The Choi matrix uses the composite ordering output (x) input,
so its eigenvectors reshape row-major into Kraus operators.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from config import settings
from qcore.errors import ChannelError, CPViolationError, StateError
from qcore.operators import basis_op, check_square, dag

logger = logging.getLogger(__name__)

BASIS_PAIRS = ((0, 0), (0, 1), (1, 0), (1, 1))


@dataclass(frozen=True)
class ChannelImages:
    """Images D(|i><j|) of a qubit channel, keyed by (i, j) in {0, 1}^2."""

    images: Mapping[tuple[int, int], np.ndarray]

    def __post_init__(self):
        missing = [p for p in BASIS_PAIRS if p not in self.images]
        if missing:
            raise ChannelError(f"missing basis images for {missing}")
        shapes = {np.shape(self.images[p]) for p in BASIS_PAIRS}
        if len(shapes) != 1:
            raise ChannelError(f"inconsistent image shapes {sorted(shapes)}")

    @classmethod
    def from_function(cls, channel) -> "ChannelImages":
        """Tabulate a linear map given as a callable on 2x2 matrices."""
        return cls({p: np.asarray(channel(basis_op(*p)), dtype=complex) for p in BASIS_PAIRS})

    @property
    def out_dim(self) -> int:
        return int(np.shape(self.images[(0, 0)])[0])

    def __getitem__(self, pair: tuple[int, int]) -> np.ndarray:
        return self.images[pair]

    def apply(self, rho: np.ndarray) -> np.ndarray:
        """Linear extension: sum_ij rho_ij D(|i><j|)."""
        rho = check_square(rho, "rho")
        if rho.shape != (2, 2):
            raise StateError(f"channel input must be 2x2, got {rho.shape}")
        out = np.zeros((self.out_dim, self.out_dim), dtype=complex)
        for i, j in BASIS_PAIRS:
            out += rho[i, j] * self.images[(i, j)]
        return out

    def then(self, after: "ChannelImages") -> "ChannelImages":
        """Composition: apply self first, then ``after``."""
        return ChannelImages({p: after.apply(self.images[p]) for p in BASIS_PAIRS})

    def hermiticity_defect(self) -> float:
        return max(
            float(np.max(np.abs(self.images[(j, i)] - dag(self.images[(i, j)]))))
            for i, j in BASIS_PAIRS
        )


@dataclass(frozen=True)
class KrausSet:
    """Ordered Kraus operators (descending Choi eigenvalue)."""

    operators: tuple[np.ndarray, ...]
    eigenvalues: tuple[float, ...] = ()
    cp_defect: float = 0.0

    def __post_init__(self):
        if len(self.operators) > 4:
            raise ChannelError(f"a qubit channel has at most 4 Kraus operators, got {len(self.operators)}")

    @classmethod
    def single(cls, op: np.ndarray) -> "KrausSet":
        op = np.asarray(op, dtype=complex)
        weight = float(np.real(np.trace(dag(op) @ op)))
        return cls((op,), (weight,))

    def __len__(self) -> int:
        return len(self.operators)

    def __getitem__(self, index: int) -> np.ndarray:
        return self.operators[index]

    def completeness(self) -> np.ndarray:
        """sum_m K_m^dagger K_m."""
        dim = self.operators[0].shape[1]
        total = np.zeros((dim, dim), dtype=complex)
        for k in self.operators:
            total += dag(k) @ k
        return total

    def completeness_defect(self) -> float:
        """Smallest eigenvalue of 1 - sum K^dagger K; must be >= -tol_psd."""
        s = self.completeness()
        d = np.eye(s.shape[0]) - s
        return float(np.linalg.eigvalsh((d + dag(d)) / 2)[0])

    def significant(self, rel_tol: float = 1e-9) -> int:
        """Number of operators whose eigenvalue exceeds rel_tol times the largest."""
        if not self.eigenvalues or self.eigenvalues[0] <= 0:
            return 0
        return sum(1 for w in self.eigenvalues if w > rel_tol * self.eigenvalues[0])

    def images(self) -> ChannelImages:
        return ChannelImages.from_function(lambda rho: apply_kraus(self, rho))


def canonical_phase(op: np.ndarray) -> np.ndarray:
    """Rotate the global phase so the largest-magnitude entry is real and non-negative."""
    op = np.asarray(op, dtype=complex)
    flat = op.ravel()
    mags = np.round(np.abs(flat), 12)
    if mags.max(initial=0.0) == 0.0:
        return op.copy()
    pivot = flat[int(np.argmax(mags))]
    return op * (np.abs(pivot) / pivot)


def phase_aligned(op: np.ndarray, reference: np.ndarray) -> np.ndarray:
    """Global phase of ``op`` chosen to best match ``reference`` (maximizes Re tr(ref^dagger op))."""
    overlap = np.vdot(np.asarray(reference).ravel(), np.asarray(op).ravel())
    if abs(overlap) == 0.0:
        return np.asarray(op, dtype=complex)
    return np.asarray(op, dtype=complex) * (abs(overlap) / overlap)


def choi_matrix(images: ChannelImages) -> np.ndarray:
    """J = sum_ij D(|i><j|) (x) |i><j|, composite ordering (output x input)."""
    dim_out = images.out_dim
    j = np.zeros((2 * dim_out, 2 * dim_out), dtype=complex)
    for i, k in BASIS_PAIRS:
        j += np.kron(images[(i, k)], basis_op(i, k))
    return j


def kraus_from_choi(
    choi: np.ndarray,
    tol_eig: float | None = None,
    strict: bool = True,
) -> KrausSet:
    """Eigendecompose a Choi matrix into Kraus operators.

    Args:
        choi: Hermitian 4x4 Choi matrix with (output x input) ordering
        tol_eig: Clamp tolerance relative to the largest eigenvalue
        strict: Raise on eigenvalues below -tol_eig; otherwise clamp and record
            the violation in ``cp_defect``

    Returns:
        KrausSet sorted by descending eigenvalue, zero operators retained
    """
    choi = check_square(choi, "choi")
    tol_eig = settings.tol_eig if tol_eig is None else tol_eig
    dim_out = choi.shape[0] // 2
    herm = (choi + dag(choi)) / 2
    w, v = np.linalg.eigh(herm)
    order = np.argsort(w)[::-1]
    w, v = w[order], v[:, order]

    scale = max(float(np.max(np.abs(w), initial=0.0)), 1e-300)
    most_negative = float(min(w.min(initial=0.0), 0.0))
    if most_negative < -tol_eig * scale:
        if strict:
            raise CPViolationError(
                f"Choi eigenvalue {most_negative:.3e} below -{tol_eig:.0e} x {scale:.3e}"
            )
        logger.warning("clamping CP violation %.3e (relative %.3e)", most_negative, most_negative / scale)
    elif most_negative < 0:
        logger.debug("clamped negative Choi eigenvalue %.3e", most_negative)

    w = np.clip(w, 0.0, None)
    ops = []
    for m in range(w.size):
        k = np.sqrt(w[m]) * v[:, m].reshape(dim_out, 2)
        ops.append(canonical_phase(k) if w[m] > 0 else np.zeros((dim_out, 2), dtype=complex))
    return KrausSet(tuple(ops), tuple(float(x) for x in w), cp_defect=-most_negative)


def kraus_from_images(images: ChannelImages, strict: bool = True) -> KrausSet:
    return kraus_from_choi(choi_matrix(images), strict=strict)


def apply_kraus(kraus: KrausSet, rho: np.ndarray) -> np.ndarray:
    """sum_m K_m rho K_m^dagger (trace non-increasing)."""
    rho = check_square(rho, "rho")
    if kraus.operators[0].shape[1] != rho.shape[0]:
        raise StateError(
            f"dimension mismatch: Kraus input dim {kraus.operators[0].shape[1]} vs rho {rho.shape[0]}"
        )
    out = np.zeros((kraus.operators[0].shape[0],) * 2, dtype=complex)
    for k in kraus.operators:
        out += k @ rho @ dag(k)
    return out


def serialize_matrix(m: np.ndarray, digits: int = 12) -> list[list[list[float]]]:
    """Nested [re, im] pairs, rounded for byte-stable reports."""
    m = np.asarray(m, dtype=complex)
    return [
        [[round(float(z.real), digits) + 0.0, round(float(z.imag), digits) + 0.0] for z in row]
        for row in m
    ]


def deserialize_matrix(data) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.ndim != 3 or arr.shape[-1] != 2:
        raise StateError(f"expected nested [re, im] pairs, got array of shape {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]
