"""Mean-field Heisenberg-Langevin dynamics of the driven cavity and emitter.

The nine expectation values (a, s_1A, s_2A, s_1B, s_2B, p_11, p_22, p_AA, p_BB)
evolve in the frame rotating at the cavity frequency. Operator products are
replaced by products of expectations. Inside the solver time is measured in ns
and every rate in rad/ns.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from cavity.model import CavityModel
from config import settings
from photon.source import PhotonSourceSpec, input_mode
from qcore.errors import ConfigError, SolverError, WeakDriveError

logger = logging.getLogger(__name__)

NS = 1e-9
STATE_LABELS = ("a", "s1A", "s2A", "s1B", "s2B", "p11", "p22", "pAA", "pBB")
TRAJECTORY_COLUMNS = ("t_ns", "abs_a2", "p11", "p22", "pAA", "pBB", "abs_a_in2", "abs_a_out2")


@dataclass(frozen=True)
class LangevinParams:
    """Cavity, drive and solver settings of one Langevin run."""

    cav: CavityModel
    drive: PhotonSourceSpec
    e0: float = field(default_factory=lambda: settings.langevin_e0)
    pulse_multiplier: float = field(default_factory=lambda: settings.langevin_pulse_multiplier)
    rtol: float = field(default_factory=lambda: settings.langevin_rtol)
    atol: float = field(default_factory=lambda: settings.langevin_atol)

    def __post_init__(self):
        if not self.e0 > 0:
            raise ConfigError(f"langevin.e0 must be positive, got {self.e0}")
        if math.exp(-self.pulse_multiplier) > settings.langevin_tail_tol:
            raise ConfigError(
                f"pulse multiplier {self.pulse_multiplier} leaves an input tail "
                f"above {settings.langevin_tail_tol:.0e}"
            )
        if not (self.rtol > 0 and self.atol > 0):
            raise ConfigError("langevin tolerances must be positive")

    @property
    def delta_A(self) -> float:
        """w_1A - w_c (rad/s)."""
        return self.cav.delta_A

    @property
    def delta_B(self) -> float:
        """w_2B - w_c (rad/s)."""
        return self.cav.delta_B

    @property
    def delta_drive(self) -> float:
        """w0 - w_c (rad/s)."""
        return self.drive.omega0 - self.cav.omega_c

    @property
    def omega_s(self) -> float:
        return self.cav.levels.omega_s

    @property
    def gamma_ns(self) -> float:
        return self.drive.gamma * NS

    @property
    def t_final_ns(self) -> float:
        """Base integration window, pulse_multiplier / gamma."""
        return self.pulse_multiplier / self.gamma_ns

    @property
    def dt_ns(self) -> float:
        """Sampling step resolving the fastest frequency in the problem."""
        cav = self.cav
        scales = [
            abs(self.delta_drive), abs(self.delta_A), abs(self.delta_B),
            cav.kappa, self.drive.gamma,
            abs(cav.g_1A), abs(cav.g_2B), abs(cav.g_2A), abs(cav.g_1B),
        ]
        if cav.has_cross_talk:
            scales.append(abs(self.omega_s))
        omega_max = max(scales) * NS
        return 2 * math.pi / (settings.langevin_samples_per_period * omega_max)


@dataclass
class LangevinTrajectory:
    """Sampled solution on a uniform grid (t in ns)."""

    t: np.ndarray
    states: np.ndarray  # shape (9, len(t)), rows in STATE_LABELS order
    a_in: np.ndarray
    a_out: np.ndarray
    initial_spin: int
    e0: float
    rtol: float
    extensions: int = 0

    def component(self, label: str) -> np.ndarray:
        return self.states[STATE_LABELS.index(label)]

    @property
    def a(self) -> np.ndarray:
        return self.component("a")

    @property
    def populations(self) -> np.ndarray:
        return np.real(self.states[5:9])

    @property
    def max_excited_population(self) -> float:
        return float(np.max(self.populations[2] + self.populations[3]))

    @property
    def conservation_defect(self) -> float:
        return float(np.max(np.abs(np.sum(self.states[5:9], axis=0) - 1.0)))

    def validate(self) -> list[str]:
        """Check conservation, population bounds and the weak-drive regime. Returns list of violations."""
        errors = []
        tol = 10 * self.rtol
        if self.conservation_defect > tol:
            errors.append(
                f"population sum drifted by {self.conservation_defect:.3e} (limit {tol:.1e})"
            )
        imag = float(np.max(np.abs(np.imag(self.states[5:9]))))
        if imag > tol:
            errors.append(f"populations acquired an imaginary part {imag:.3e}")
        low, high = float(self.populations.min()), float(self.populations.max())
        if low < -tol or high > 1 + tol:
            errors.append(f"populations left [0, 1]: min {low:.3e}, max {high:.12f}")
        if self.max_excited_population >= settings.weak_drive_population:
            errors.append(
                f"excited population {self.max_excited_population:.3e} exceeds the weak-drive "
                f"limit {settings.weak_drive_population:.0e}"
            )
        return errors

    def rows(self) -> list[tuple[float, ...]]:
        """Plot-ready rows in TRAJECTORY_COLUMNS order."""
        p = self.populations
        abs_a2 = np.abs(self.a) ** 2
        abs_in2 = np.abs(self.a_in) ** 2
        abs_out2 = np.abs(self.a_out) ** 2
        return [
            (float(self.t[k]), float(abs_a2[k]), float(p[0, k]), float(p[1, k]),
             float(p[2, k]), float(p[3, k]), float(abs_in2[k]), float(abs_out2[k]))
            for k in range(self.t.size)
        ]


def _rhs_factory(params: LangevinParams):
    cav = params.cav
    lv = cav.levels
    g1A, g2A, g1B, g2B = (complex(cav.coupling(n)) * NS for n in ("1A", "2A", "1B", "2B"))
    c1A, c2A, c1B, c2B = g1A.conjugate(), g2A.conjugate(), g1B.conjugate(), g2B.conjugate()
    r1A, r2A, r1B, r2B = (lv.rate(n) * NS for n in ("1A", "2A", "1B", "2B"))
    gA, gB = 0.5 * (r1A + r2A), 0.5 * (r1B + r2B)
    dA, dB = params.delta_A * NS, params.delta_B * NS
    ws = params.omega_s * NS
    kappa = cav.kappa * NS
    feed = math.sqrt(2 * kappa)
    drive_rate = 1j * params.delta_drive * NS - params.gamma_ns / 2
    e0 = params.e0

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        a, s1A, s2A, s1B, s2B, p11, p22, pAA, pBB = y
        ep = cmath.exp(1j * ws * t)
        em = ep.conjugate()
        ain = e0 * cmath.exp(drive_rate * t)
        ac = a.conjugate()
        z1A, z2A, z1B, z2B = s1A.conjugate(), s2A.conjugate(), s1B.conjugate(), s2B.conjugate()

        da = -1j * (g1A * s1A + ep * g2A * s2A + em * g1B * s1B + g2B * s2B) - kappa * a + feed * ain
        ds1A = -1j * (
            -dA * s1A + em * c2A * s1A * z2A * a - ep * c1B * z1B * s1A * a + c1A * a * (p11 - pAA)
        ) - gA * s1A
        ds2A = -1j * (
            -dA * s2A + c1A * s2A * z1A * a - c2B * z2B * s2A * a + em * c2A * a * (p22 - pAA)
        ) - gA * s2A
        ds1B = -1j * (
            -dB * s1B + c1A * z1A * s1B * a + c2B * s1B * z2B * a + ep * c1B * a * (p11 - pBB)
        ) - gB * s1B
        ds2B = -1j * (
            -dB * s2B - em * c2A * z2A * s2B * a + ep * s2B * z1B * c1B * a + c2B * a * (p22 - pBB)
        ) - gB * s2B
        dp11 = -1j * (
            g1A * s1A * ac - c1A * z1A * a + em * g1B * s1B * ac - ep * c1B * z1B * a
        ) + r1A * pAA + r1B * pBB
        dp22 = -1j * (
            ep * g2A * s2A * ac - em * c2A * z2A * a + g2B * s2B * ac - c2B * z2B * a
        ) + r2A * pAA + r2B * pBB
        dpAA = -1j * (
            -g1A * s1A * ac + c1A * z1A * a - ep * g2A * s2A * ac + em * c2A * z2A * a
        ) - (r1A + r2A) * pAA
        dpBB = -1j * (
            -em * g1B * s1B * ac + ep * c1B * z1B * a - g2B * s2B * ac + c2B * z2B * a
        ) - (r1B + r2B) * pBB
        return np.array([da, ds1A, ds2A, ds1B, ds2B, dp11, dp22, dpAA, dpBB], dtype=complex)

    return rhs


def _stored_excitation(y: np.ndarray) -> float:
    return float(abs(y[0]) ** 2 + abs(y[7]) + abs(y[8]))


def propagate_langevin(
    params: LangevinParams,
    initial_spin: int,
    min_duration_ns: float = 0.0,
) -> LangevinTrajectory:
    """Integrate the mean-field equations from vacuum and spin |k>.

    The base window pulse_multiplier/gamma is extended chunk by chunk until the
    excitation left in cavity and emitter is negligible.

    Args:
        params: Cavity, drive and tolerances
        initial_spin: 1 or 2
        min_duration_ns: Integrate at least this long (aligns the grids of two runs)

    Returns:
        LangevinTrajectory sampled every params.dt_ns

    Raises:
        SolverError: Step failure or no decay within the allowed extensions
        WeakDriveError: Excited population reached the weak-drive limit
    """
    if initial_spin not in (1, 2):
        raise ConfigError(f"initial_spin must be 1 or 2, got {initial_spin}")
    y = np.zeros(len(STATE_LABELS), dtype=complex)
    y[5 if initial_spin == 1 else 6] = 1.0

    rhs = _rhs_factory(params)
    dt = params.dt_ns
    chunk = params.t_final_ns
    atol = np.full(len(STATE_LABELS), params.atol)
    atol[:5] *= params.e0
    max_step = np.inf
    if params.cav.has_cross_talk:
        max_step = 2 * math.pi / (20 * abs(params.omega_s) * NS)

    times, samples = [], []
    t_start, t_end, step_index = 0.0, chunk, 0
    extensions = 0
    while True:
        sol = solve_ivp(
            rhs, (t_start, t_end), y,
            method="DOP853", rtol=params.rtol, atol=atol,
            max_step=max_step, dense_output=True,
        )
        if not sol.success:
            raise SolverError(f"Langevin integration failed at t = {sol.t[-1]:.4f} ns: {sol.message}")
        last_index = int(math.floor(t_end / dt + 1e-9))
        grid = np.arange(step_index, last_index + 1) * dt
        if grid.size:
            times.append(grid)
            samples.append(sol.sol(grid))
        step_index = last_index + 1
        y = sol.y[:, -1]

        residual = _stored_excitation(y) * params.gamma_ns / params.e0**2
        if t_end >= min_duration_ns and residual < settings.langevin_tail_tol:
            break
        if t_end >= min_duration_ns:
            if extensions >= settings.langevin_max_extensions:
                raise SolverError(
                    f"stored excitation {residual:.3e} did not decay after {extensions} extensions"
                )
            extensions += 1
            logger.warning("extending Langevin run to %.3f ns (residual %.3e)", t_end + chunk, residual)
        t_start, t_end = t_end, t_end + chunk

    t = np.concatenate(times)
    states = np.concatenate(samples, axis=1)
    a_in = np.asarray(input_mode(t * NS, params.drive, params.e0, omega_frame=params.cav.omega_c))
    a_out = math.sqrt(2 * params.cav.kappa * NS) * states[0] - a_in
    traj = LangevinTrajectory(
        t=t, states=states, a_in=a_in, a_out=a_out,
        initial_spin=initial_spin, e0=params.e0, rtol=params.rtol, extensions=extensions,
    )
    if traj.max_excited_population >= settings.weak_drive_population:
        raise WeakDriveError(
            f"excited population {traj.max_excited_population:.3e} reached the weak-drive limit; "
            f"lower e0 (now {params.e0:.1e})"
        )
    for problem in traj.validate():
        logger.warning("Langevin trajectory: %s", problem)
    logger.debug("Langevin run spin %d: %d samples over %.3f ns", initial_spin, t.size, t[-1])
    return traj


@dataclass(frozen=True)
class SampledMode:
    """Complex mode sampled on a uniform grid (t in ns)."""

    t: np.ndarray
    values: np.ndarray


def output_mode(traj: LangevinTrajectory, params: LangevinParams) -> SampledMode:
    """D_k(a_in) = sqrt(2 kappa) a - a_in on the trajectory grid."""
    values = math.sqrt(2 * params.cav.kappa * NS) * traj.a - traj.a_in
    return SampledMode(traj.t, values)
