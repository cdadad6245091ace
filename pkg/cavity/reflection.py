"""Spin-dependent reflection off the single-sided cavity (cross-talk neglected)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from cavity.model import CavityModel
from qcore.errors import ConfigError


@dataclass(frozen=True)
class ReflectionBranch:
    """Parameters of R_k measured from a reference frequency.

    ``cavity_offset`` and ``emitter_offset`` are w_c and w_kX relative to the
    reference, so detunings are formed without cancellation against optical
    frequencies.
    """

    cavity_offset: float
    emitter_offset: float
    gamma_avg: float
    g_abs2: float
    kappa: float

    def __call__(self, offset) -> np.ndarray:
        x = np.asarray(offset, dtype=float)
        emitter = 1j * (x - self.emitter_offset) + self.gamma_avg
        cavity = 1j * (x - self.cavity_offset) + self.kappa
        return -1.0 + 2.0 * self.kappa * emitter / (cavity * emitter + self.g_abs2)


def reflection_branch(cav: CavityModel, spin_state: int, reference: float) -> ReflectionBranch:
    """R_1 uses (w_1A, gamma_avg_A, g_1A); R_2 uses (w_2B, gamma_avg_B, g_2B)."""
    if spin_state == 1:
        omega_e, gamma_avg, g = cav.levels.omega_1A, cav.levels.gamma_avg_A, cav.g_1A
    elif spin_state == 2:
        omega_e, gamma_avg, g = cav.levels.omega_2B, cav.levels.gamma_avg_B, cav.g_2B
    else:
        raise ConfigError(f"spin_state must be 1 or 2, got {spin_state}")
    return ReflectionBranch(
        cavity_offset=cav.omega_c - reference,
        emitter_offset=omega_e - reference,
        gamma_avg=gamma_avg,
        g_abs2=abs(g) ** 2,
        kappa=cav.kappa,
    )


def reflection_coefficient(omega, cav: CavityModel, spin_state: int) -> np.ndarray | complex:
    """R_k(w) = -1 + 2 kappa (i D_e + g_avg) / ((i D_c + kappa)(i D_e + g_avg) + |g|^2).

    Args:
        omega: Angular frequency or array of frequencies (rad/s)
        cav: Cavity model
        spin_state: 1 or 2

    Returns:
        Complex reflection coefficient with |R| <= 1
    """
    branch = reflection_branch(cav, spin_state, reference=cav.omega_c)
    value = branch(np.asarray(omega, dtype=float) - cav.omega_c)
    if np.ndim(value) == 0:
        return complex(value)
    return value
