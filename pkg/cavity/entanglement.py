"""Spin-photon entanglement through spin-dependent reflection.

The photon alpha|e> + beta|l> is reflected early, the spin is rotated by an
ideal pi/2 pulse, the photon is reflected late and then measured in the X
basis. The two outcomes leave the spin in rho_+ and rho_-, which are brought
to the common target alpha|2> + beta|1> by the feed-forward frame rotation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from cavity.integrals import ReflectionIntegrals
from config import settings
from qcore.errors import ConfigError, DegenerateBranchError
from qcore.fidelity import bell_fidelity
from qcore.operators import R_Y_PI2, SIGMA_Z, dag


@dataclass(frozen=True)
class EntanglementMetrics:
    fidelity: float
    success_probability: float


def measured_spin_states(
    alpha: complex,
    beta: complex,
    integrals: ReflectionIntegrals,
) -> tuple[np.ndarray, np.ndarray]:
    """Sub-normalized spin states (rho_+, rho_-) after the photon X measurement."""
    if abs(abs(alpha) ** 2 + abs(beta) ** 2 - 1.0) > 1e-12:
        raise ConfigError("alpha and beta must be normalized")
    I1, I2, I3 = integrals.I1, complex(integrals.I2), integrals.I3
    a, b = complex(alpha), complex(beta)
    states = []
    for sign in (1, -1):
        s = a + sign * b
        rho = np.empty((2, 2), dtype=complex)
        rho[0, 0] = 0.25 * abs(s) ** 2 * I1
        rho[0, 1] = 0.25 * a.conjugate() * s * I1 + 0.25 * b.conjugate() * s * I2
        rho[1, 0] = rho[0, 1].conjugate()
        rho[1, 1] = (
            0.25 * abs(a) ** 2 * I1
            + sign * 0.25 * a.conjugate() * b * I2.conjugate()
            + sign * 0.25 * a * b.conjugate() * I2
            + 0.25 * abs(b) ** 2 * I3
        )
        states.append(rho)
    return states[0], states[1]


def recovered_spin_state(rho_plus: np.ndarray, rho_minus: np.ndarray) -> np.ndarray:
    """R_y(pi/2) rho_+ R_y^dagger + sigma_z R_y(pi/2) rho_- R_y^dagger sigma_z."""
    plus = R_Y_PI2 @ rho_plus @ dag(R_Y_PI2)
    minus = SIGMA_Z @ R_Y_PI2 @ rho_minus @ dag(R_Y_PI2) @ SIGMA_Z
    return plus + minus


def entanglement_metrics(rho_total: np.ndarray) -> EntanglementMetrics:
    """(F_sp, eta_sp): Bell fidelity of the normalized state and its trace."""
    eta = float(np.real(np.trace(rho_total)))
    if eta <= settings.tol_trace:
        raise DegenerateBranchError(f"spin-photon success probability {eta:.3e} vanishes")
    return EntanglementMetrics(bell_fidelity(rho_total / eta), eta)


def target_state(alpha: complex, beta: complex) -> np.ndarray:
    """|psi><psi| with |psi> = alpha|2> + beta|1>."""
    psi = np.array([beta, alpha], dtype=complex)
    return np.outer(psi, psi.conj())


def spin_photon_metrics(integrals: ReflectionIntegrals) -> EntanglementMetrics:
    """Metrics for the equal superposition alpha = beta = 1/sqrt2."""
    amp = 1 / np.sqrt(2)
    rho_plus, rho_minus = measured_spin_states(amp, amp, integrals)
    return entanglement_metrics(recovered_spin_state(rho_plus, rho_minus))
