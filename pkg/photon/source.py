"""Time-bin single-photon source: Lorentzian spectrum, generation noise, input mode.

Frequencies and bandwidths are angular (rad/s). The time-domain mode follows
the convention a_in(t) = e0 exp((i w0 - gamma/2) t) for t >= 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from qcore.errors import ConfigError
from qcore.operators import check_density, projector

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class PhotonSourceSpec:
    """Single-photon source emitting alpha|e> + beta|l> with a Lorentzian line."""

    omega0: float
    gamma: float
    alpha: complex = 1 / math.sqrt(2)
    beta: complex = 1 / math.sqrt(2)
    fidelity_F: float = 1.0

    def __post_init__(self):
        if not self.gamma > 0:
            raise ConfigError(f"photon.gamma must be positive, got {self.gamma}")
        if not (0.5 < self.fidelity_F <= 1.0):
            raise ConfigError(f"photon.F must lie in (0.5, 1], got {self.fidelity_F}")
        norm = abs(self.alpha) ** 2 + abs(self.beta) ** 2
        if abs(norm - 1.0) > 1e-12:
            raise ConfigError(f"|alpha|^2 + |beta|^2 = {norm:.15f}, expected 1")

    @classmethod
    def from_GHz(
        cls,
        omega0: float,
        gamma_GHz: float,
        alpha: complex = 1 / math.sqrt(2),
        beta: complex = 1 / math.sqrt(2),
        fidelity_F: float = 1.0,
    ) -> "PhotonSourceSpec":
        """Build a spec from a bandwidth in GHz, read as gamma = 2 pi x gamma_GHz x 1e9 rad/s."""
        return cls(omega0, TWO_PI * gamma_GHz * 1e9, complex(alpha), complex(beta), fidelity_F)

    @property
    def epsilon(self) -> float:
        """Depolarizing strength 2(1 - F)."""
        return 2.0 * (1.0 - self.fidelity_F)

    @property
    def lifetime(self) -> float:
        """Source lifetime T_lt = 2 pi / gamma (s), the inverse bandwidth in cycles per second."""
        return TWO_PI / self.gamma

    def pure_state(self) -> np.ndarray:
        """|psi><psi| for |psi> = alpha|e> + beta|l>."""
        return projector(np.array([self.alpha, self.beta], dtype=complex))

    def state(self) -> np.ndarray:
        """Emitted state after generation noise."""
        return depolarize(self.pure_state(), self.fidelity_F)


@dataclass(frozen=True)
class SpectralAmplitude:
    """Normalized spectral amplitude S(w) = N e0 / (i(w - w0) + gamma/2)."""

    omega0: float
    gamma: float
    normalization: float
    e0: float = 1.0

    def __call__(self, omega) -> np.ndarray:
        delta = np.asarray(omega, dtype=float) - self.omega0
        return self.normalization * self.e0 / (1j * delta + self.gamma / 2)

    def intensity(self, omega) -> np.ndarray:
        """|S(w)|^2, a Lorentzian with FWHM gamma and unit area."""
        delta = np.asarray(omega, dtype=float) - self.omega0
        return (self.gamma / TWO_PI) / (delta**2 + self.gamma**2 / 4)

    @property
    def peak(self) -> float:
        return 2.0 / (math.pi * self.gamma)

    def half_width_window(self, tail_mass: float) -> float:
        """Half-width W such that the intensity outside [w0 - W, w0 + W] is tail_mass."""
        if not 0 < tail_mass < 1:
            raise ConfigError(f"tail mass must lie in (0, 1), got {tail_mass}")
        return 0.5 * self.gamma * math.tan(0.5 * math.pi * (1.0 - tail_mass))


def lorentzian_spectrum(spec: PhotonSourceSpec, e0: float = 1.0) -> SpectralAmplitude:
    """Normalized Lorentzian amplitude of the source; e0 cancels in |S|^2."""
    if not spec.gamma > 0:
        raise ConfigError(f"gamma must be positive, got {spec.gamma}")
    if e0 == 0:
        raise ConfigError("reference amplitude e0 must be nonzero")
    normalization = math.sqrt(spec.gamma / TWO_PI) / e0
    return SpectralAmplitude(spec.omega0, spec.gamma, normalization, e0)


def depolarize(rho: np.ndarray, F: float) -> np.ndarray:
    """Depolarizing channel (1 - eps) rho + eps tr(rho) 1/2 with eps = 2(1 - F).

    Args:
        rho: Normalized 2x2 density matrix
        F: Generation fidelity in (0.5, 1]

    Returns:
        Depolarized 2x2 density matrix with the same trace
    """
    if not (0.5 < F <= 1.0):
        raise ConfigError(f"fidelity F must lie in (0.5, 1], got {F}")
    rho = check_density(rho, normalized=True)
    if rho.shape != (2, 2):
        raise ConfigError(f"depolarize expects a qubit state, got shape {rho.shape}")
    eps = 2.0 * (1.0 - F)
    out = (1.0 - eps) * rho + eps * np.trace(rho) * np.eye(2) / 2
    return (out + out.conj().T) / 2


def input_mode(
    t,
    spec: PhotonSourceSpec,
    e0: float,
    omega_frame: float = 0.0,
) -> np.ndarray | complex:
    """Incoming mode e0 exp((i(w0 - w_frame) - gamma/2) t).

    With the default ``omega_frame = 0`` this is the lab-frame mode; passing the
    cavity frequency gives the rotating-frame drive used by the Langevin solver.
    The mode vanishes for t < 0.
    """
    t_arr = np.asarray(t, dtype=float)
    detuning = spec.omega0 - omega_frame
    value = e0 * np.exp((1j * detuning - spec.gamma / 2) * t_arr)
    value = np.where(t_arr >= 0, value, 0.0)
    if value.ndim == 0:
        return complex(value)
    return value

