"""Read-in and read-out channels of the cavity spin memory.

Read-in maps a time-bin photon (|e>, |l>) onto the spin (|1>, |2>) through two
reflections around a spin rotation, keeping the |+> outcome of the photon X
measurement. Read-out maps the spin back onto an auxiliary |+> photon with two
controlled phase gates around a spin rotation, keeping the spin |1> outcome.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from cavity.integrals import ReflectionIntegrals
from control.rotation import RotationChannel, ideal_rotation
from photon.source import PhotonSourceSpec
from qcore.channels import BASIS_PAIRS, ChannelImages, KrausSet, kraus_from_images
from qcore.errors import ChannelError
from qcore.operators import IDENTITY_2, R_Y_PI2, SIGMA_Z, check_density, dag, normalize

logger = logging.getLogger(__name__)

PLUS = np.array([1, 1], dtype=complex) / np.sqrt(2)

# photon (x) spin, ordering e1, e2, l1, l2
U_EARLY = np.diag([-1, 1, 1, 1]).astype(complex)
U_LATE = np.diag([1, 1, -1, 1]).astype(complex)


# === READ-IN ===

@dataclass(frozen=True)
class ReadInChannel:
    """Photon -> spin channel for the |+> measurement branch.

    ``minus_images`` hold the |-> branch after its sigma_z feed-forward; it is
    reported but not part of the Kraus set.
    """

    images: ChannelImages
    kraus: KrausSet
    minus_images: ChannelImages
    branch: str = "plus"

    def minus_probability(self, rho_ph: np.ndarray) -> float:
        return float(np.real(np.trace(self.minus_images.apply(rho_ph))))


def _branch_image(lam: np.ndarray, vec, pair: tuple[int, int], sign: int) -> np.ndarray:
    """Spin matrix (m, k) for the photonic basis element |I><K| before recovery.

    ``vec`` is (I1, I2, I2*, I3); early-early picks I1, early-late I_k,
    late-early I_(2m-1) and late-late I_(2(m-1)+k), one-based.
    """
    early_row, early_col = pair[0] == 0, pair[1] == 0
    out = np.empty((2, 2), dtype=complex)
    for m in (0, 1):
        for k in (0, 1):
            if early_row and early_col:
                term = vec[0]
            elif early_row:
                term = sign * vec[k]
            elif early_col:
                term = sign * vec[2 * m]
            else:
                term = vec[2 * m + k]
            out[m, k] = 0.5 * lam[m, k] * term
    return out


def read_in_channel(
    spec: PhotonSourceSpec | None,
    integrals: ReflectionIntegrals,
    rot: RotationChannel,
) -> ReadInChannel:
    """Assemble the read-in channel from reflection integrals and the rotation map.

    The + branch is brought to the target frame by the ideal R_y(pi/2); the
    - branch additionally by sigma_z.

    Args:
        spec: Photon source, used only to log the - branch weight of its state
        integrals: Frequency- or time-domain reflection integrals
        rot: Spin rotation providing Lambda = D_pi/2(|1><1|)

    Raises:
        ChannelError: Lambda is not a 2x2 matrix or the integrals violate their bounds
    """
    lam = np.asarray(rot.lambda_map, dtype=complex)
    if lam.shape != (2, 2):
        raise ChannelError(f"rotation map must be 2x2, got {lam.shape}")
    violations = integrals.validate()
    if violations:
        raise ChannelError("reflection integrals out of bounds: " + "; ".join(violations))

    vec = integrals.vector()
    plus, minus = {}, {}
    for pair in BASIS_PAIRS:
        plus[pair] = R_Y_PI2 @ _branch_image(lam, vec, pair, +1) @ dag(R_Y_PI2)
        flip = SIGMA_Z @ R_Y_PI2
        minus[pair] = flip @ _branch_image(lam, vec, pair, -1) @ dag(flip)

    images = ChannelImages(plus)
    kraus = kraus_from_images(images, strict=False)
    channel = ReadInChannel(images, kraus, ChannelImages(minus))
    if spec is not None:
        logger.info("read-in: - branch weight %.6f for the source state", channel.minus_probability(spec.state()))
    return channel


# === READ-OUT ===

@dataclass(frozen=True)
class ReadOutChannel:
    """Spin -> photon channel for the spin |1> projection."""

    images: ChannelImages
    kraus: KrausSet


def _read_out_image(rot: RotationChannel, spin_op: np.ndarray) -> np.ndarray:
    rho = np.kron(np.outer(PLUS, PLUS.conj()), spin_op)
    rho = U_EARLY @ rho @ dag(U_EARLY)
    rotated = np.zeros_like(rho)
    for k in rot.kraus.operators:
        lifted = np.kron(IDENTITY_2, k)
        rotated += lifted @ rho @ dag(lifted)
    rho = U_LATE @ rotated @ dag(U_LATE)
    # <1|_spin rho |1>_spin
    return rho[0::2, 0::2]


def read_out_channel(rot: RotationChannel) -> ReadOutChannel:
    """Assemble the read-out channel with a perfect auxiliary |+> photon."""
    images = ChannelImages.from_function(lambda op: _read_out_image(rot, op))
    return ReadOutChannel(images, kraus_from_images(images))


# === STORE / RETRIEVE ===

def store(rho_ph: np.ndarray, ch: ReadInChannel) -> tuple[np.ndarray, float]:
    """Write a photonic qubit into the spin. Returns (rho_sp, success probability)."""
    rho_ph = check_density(rho_ph, normalized=True, name="rho_ph")
    return normalize(ch.images.apply(rho_ph))


def retrieve(rho_sp: np.ndarray, ch: ReadOutChannel) -> tuple[np.ndarray, float]:
    """Read the spin out onto a photon. Returns (rho_ph, success probability)."""
    rho_sp = check_density(rho_sp, normalized=True, name="rho_sp")
    return normalize(ch.images.apply(rho_sp))


def ideal_memory_unitary() -> np.ndarray:
    """Photon -> photon unitary of ideal read-in followed by ideal read-out.

    The ideal round trip succeeds with probability 1/4 and applies
    (1/sqrt2)[[-1, -1], [1, -1]] up to a global phase.
    """
    rot = ideal_rotation()
    k_in = read_in_channel(None, ReflectionIntegrals.ideal(), rot).kraus[0]
    k_out = read_out_channel(rot).kraus[0]
    k = k_out @ k_in
    return k / np.sqrt(np.real(np.trace(dag(k) @ k)) / 2)
