"""Microwave pi/2 gate on the ground-state manifold of a group-IV center.

Basis |e+ up>, |e+ down>, |e- up>, |e- down> (orbital x spin). The static
Hamiltonian combines spin-orbit coupling, strain and the spin and orbital
Zeeman terms; the drive couples through the spin magnetic moment. All energies
are in rad/ns and times in ns.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import constants
from scipy.linalg import expm

from control.lindblad import LindbladSpec, propagate_many, propagator
from control.rotation import RotationChannel, RotationModel, channel_from_states
from qcore.channels import BASIS_PAIRS
from qcore.errors import ConfigError, ModelError
from qcore.operators import SIGMA_X, SIGMA_Y, SIGMA_Z, basis_op, dag

logger = logging.getLogger(__name__)

TWO_PI = 2 * math.pi
GAMMA_SPIN = TWO_PI * 28.025  # rad/ns per T
GAMMA_ORBIT = TWO_PI * 13.996  # rad/ns per T
ORBITAL_QUENCHING = 0.15
L_Z = np.diag([1.0, -1.0]).astype(complex)
I2 = np.eye(2, dtype=complex)
MIN_SPLITTING = 1e-6  # rad/ns


class MicrowaveMode(str, Enum):
    FULL = "full"
    RWA = "rwa"


@dataclass(frozen=True)
class MicrowaveConfig:
    B_dc_T: float = 3.0
    B_ac_T: float = 1e-3
    theta_dc: float = 0.0
    theta_ac: float = math.pi / 2
    phi_dc: float = 0.0
    phi_ac: float = -math.pi / 2
    E_x: float = 6.3e-3
    eps_xy: float = 2.5e-3
    temperature_K: float = 0.1
    phonon_rate_per_ns: float = 1.0
    spin_dephasing_per_ns: float = 0.0
    spin_orbit_GHz: float = 850.0
    strain_susceptibility_GHz: float = 11200.0
    mode: MicrowaveMode = MicrowaveMode.FULL
    gate_time_ns: float | None = None

    def __post_init__(self):
        if self.B_dc_T < 0 or self.B_ac_T < 0:
            raise ConfigError("microwave fields must be non-negative")
        if not 0.1 <= self.temperature_K <= 4.0:
            raise ConfigError(f"temperature {self.temperature_K} K outside [0.1, 4] K")
        if self.phi_dc != 0.0 or not math.isclose(self.phi_ac, -math.pi / 2):
            raise ConfigError("azimuthal angles are fixed at phi_dc = 0 and phi_ac = -pi/2")
        if self.phonon_rate_per_ns < 0 or self.spin_dephasing_per_ns < 0:
            raise ConfigError("phonon and dephasing rates must be non-negative")
        if self.gate_time_ns is not None and self.gate_time_ns < 0:
            raise ConfigError("gate_time_ns must be non-negative")
        object.__setattr__(self, "mode", MicrowaveMode(self.mode))


def ground_hamiltonian(cfg: MicrowaveConfig) -> np.ndarray:
    """H_dc in rad/ns."""
    spin_orbit = -(TWO_PI * cfg.spin_orbit_GHz / 2) * np.kron(L_Z, SIGMA_Z)
    chi = TWO_PI * cfg.strain_susceptibility_GHz
    alpha, beta = chi * cfg.E_x, chi * cfg.eps_xy
    strain = np.array([[0, -(alpha - 1j * beta)], [-(alpha + 1j * beta), 0]], dtype=complex)
    b = cfg.B_dc_T
    field_dir = math.sin(cfg.theta_dc) * SIGMA_X + math.cos(cfg.theta_dc) * SIGMA_Z
    spin_zeeman = (GAMMA_SPIN / 2) * b * np.kron(I2, field_dir)
    orbital_zeeman = ORBITAL_QUENCHING * GAMMA_ORBIT * b * math.cos(cfg.theta_dc) * np.kron(L_Z, I2)
    return spin_orbit + np.kron(strain, I2) + spin_zeeman + orbital_zeeman


def drive_operator(cfg: MicrowaveConfig) -> np.ndarray:
    """Amplitude V of the drive V cos(wt), rad/ns."""
    n = (
        math.cos(cfg.phi_ac) * math.sin(cfg.theta_ac),
        math.sin(cfg.phi_ac) * math.sin(cfg.theta_ac),
        math.cos(cfg.theta_ac),
    )
    n_sigma = n[0] * SIGMA_X + n[1] * SIGMA_Y + n[2] * SIGMA_Z
    return (GAMMA_SPIN / 2) * cfg.B_ac_T * np.kron(I2, n_sigma)


@dataclass(frozen=True)
class QubitFrame:
    """Eigenbasis of H_dc with the drive matrix element <2|V|1> fixed to +i|M|."""

    energies: np.ndarray  # relative to the lowest level
    basis: np.ndarray  # columns are eigenvectors
    drive: np.ndarray  # V in the eigenbasis

    @property
    def omega_s(self) -> float:
        return float(self.energies[1] - self.energies[0])

    @property
    def rabi_rate(self) -> float:
        return float(abs(self.drive[1, 0]))

    def to_eigenbasis(self, op: np.ndarray) -> np.ndarray:
        return dag(self.basis) @ op @ self.basis


def qubit_frame(cfg: MicrowaveConfig) -> QubitFrame:
    energies, vecs = np.linalg.eigh(ground_hamiltonian(cfg))
    vecs = vecs.astype(complex)
    drive = dag(vecs) @ drive_operator(cfg) @ vecs
    m10 = drive[1, 0]
    if abs(m10) > 0:
        vecs[:, 1] *= np.exp(1j * (np.angle(m10) - math.pi / 2))
        drive = dag(vecs) @ drive_operator(cfg) @ vecs
    frame = QubitFrame(energies - energies[0], vecs, drive)
    if frame.omega_s < MIN_SPLITTING:
        raise ModelError(f"qubit splitting {frame.omega_s:.3e} rad/ns is degenerate; no resonant drive")
    return frame


def phonon_dissipators(frame: QubitFrame, cfg: MicrowaveConfig) -> list[tuple[float, np.ndarray]]:
    """Orbital relaxation between the lower (0, 1) and upper (2, 3) branches, plus spin dephasing."""
    x_orbit = frame.to_eigenbasis(np.kron(SIGMA_X, I2))
    kT = constants.k * cfg.temperature_K
    out = []
    for i in (0, 1):
        for j in (2, 3):
            weight = abs(x_orbit[i, j]) ** 2
            gap = frame.energies[j] - frame.energies[i]
            ratio = constants.hbar * gap * 1e9 / kT
            n_th = 0.0 if ratio > 700 else 1.0 / math.expm1(ratio)
            out.append((cfg.phonon_rate_per_ns * weight * (1 + n_th), basis_op(i, j, 4)))
            out.append((cfg.phonon_rate_per_ns * weight * n_th, basis_op(j, i, 4)))
    if cfg.spin_dephasing_per_ns > 0:
        out.append((cfg.spin_dephasing_per_ns, np.diag([1, -1, 0, 0]).astype(complex)))
    return out


def _rwa_hamiltonian(frame: QubitFrame) -> np.ndarray:
    h = np.zeros((4, 4), dtype=complex)
    h[1, 0] = frame.drive[1, 0] / 2
    h[0, 1] = np.conj(h[1, 0])
    return h


def _lab_hamiltonian(frame: QubitFrame):
    static = np.diag(frame.energies).astype(complex)
    omega = frame.omega_s

    def h(t: float) -> np.ndarray:
        return static + frame.drive * math.cos(omega * t)

    return h


def _rabi_minimum(frame: QubitFrame, cfg: MicrowaveConfig) -> float:
    """Time of the first minimum of the |1> population with dissipation off."""
    t_pi = math.pi / frame.rabi_rate
    rho0 = basis_op(0, 0, 4)
    if cfg.mode is MicrowaveMode.RWA:
        tau = t_pi / 400
        u = expm(-1j * _rwa_hamiltonian(frame) * tau)
        step = np.kron(u, u.conj())
    else:
        tau = TWO_PI / frame.omega_s
        step = propagator(
            LindbladSpec(4, _lab_hamiltonian(frame), t_final=tau, max_step=tau / 40)
        )
    n_start = int(math.floor(0.9 * t_pi / tau))
    n_stop = int(math.ceil(1.1 * t_pi / tau))
    vec = np.linalg.matrix_power(step, n_start) @ rho0.ravel()
    samples = []
    for _ in range(n_start, n_stop + 1):
        samples.append(float(np.real(vec[0])))
        vec = step @ vec
    k = int(np.argmin(samples))
    if k == 0 or k == len(samples) - 1:
        raise ModelError("no Rabi minimum inside the search window")
    y0, y1, y2 = samples[k - 1], samples[k], samples[k + 1]
    curvature = y0 - 2 * y1 + y2
    offset = 0.5 * (y0 - y2) / curvature if curvature > 0 else 0.0
    return (n_start + k + offset) * tau


def _final_states(frame: QubitFrame, cfg: MicrowaveConfig, dissipators, gate_time: float) -> dict:
    units = [basis_op(i, j, 4) for i, j in BASIS_PAIRS]
    if gate_time == 0:
        return dict(zip(BASIS_PAIRS, units))
    if cfg.mode is MicrowaveMode.RWA:
        spec = LindbladSpec(4, _rwa_hamiltonian(frame), dissipators, t_final=gate_time)
        return dict(zip(BASIS_PAIRS, propagate_many(spec, units)))

    tau = TWO_PI / frame.omega_s
    lab = _lab_hamiltonian(frame)
    periods = int(math.floor(gate_time / tau))
    remainder = gate_time - periods * tau
    period_map = propagator(LindbladSpec(4, lab, dissipators, t_final=tau, max_step=tau / 40))
    power = np.linalg.matrix_power(period_map, periods)
    states = [(power @ u.ravel()).reshape(4, 4) for u in units]
    if remainder > 0:
        spec = LindbladSpec(4, lab, dissipators, t_final=remainder, max_step=tau / 40)
        states = propagate_many(spec, states)
    # interaction picture with respect to the static Hamiltonian
    phase = np.exp(1j * np.subtract.outer(frame.energies, frame.energies) * gate_time)
    return {p: s * phase for p, s in zip(BASIS_PAIRS, states)}


def microwave_pi2(cfg: MicrowaveConfig) -> RotationChannel:
    """Quarter-Rabi-period microwave gate.

    The gate time is half the time of the first |1> population minimum found
    with dissipation off, unless ``gate_time_ns`` is given.
    """
    frame = qubit_frame(cfg)
    t_min = None
    if cfg.gate_time_ns is not None:
        gate_time = cfg.gate_time_ns
    elif frame.rabi_rate == 0:
        logger.warning("microwave drive is off (B_ac = 0); returning the identity channel")
        gate_time = 0.0
    else:
        t_min = _rabi_minimum(frame, cfg)
        gate_time = t_min / 2
    dissipators = phonon_dissipators(frame, cfg)
    finals = _final_states(frame, cfg, dissipators, gate_time)
    logger.info(
        "microwave gate: w_s = %.4f rad/ns, Rabi %.5f rad/ns, T_g = %.4f ns (%s)",
        frame.omega_s, frame.rabi_rate, gate_time, cfg.mode.value,
    )
    details = {"rabi_rate_per_ns": frame.rabi_rate}
    if t_min is not None:
        details["rabi_minimum_ns"] = t_min
    return channel_from_states(
        finals,
        RotationModel.MICROWAVE,
        gate_time_ns=gate_time,
        omega_s=frame.omega_s * 1e9,
        details=details,
    )
