"""Group-IV color center presets and the optical level structure they imply."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Mapping

from scipy import constants

from cavity.coupling import dipole_from_rate
from qcore.errors import ConfigError

TRANSITIONS = ("1A", "2A", "1B", "2B")


@dataclass(frozen=True)
class EmitterConfig:
    id: str
    name: str
    zpl_nm: float
    lifetime_ns: float
    debye_waller: float
    ground_spin_orbit_GHz: float
    notes: str = ""

    @property
    def omega_zpl(self) -> float:
        """Zero-phonon-line angular frequency (rad/s)."""
        return 2 * math.pi * constants.c / (self.zpl_nm * 1e-9)

    @property
    def zpl_rate(self) -> float:
        """Radiative rate into the zero-phonon line, DW / lifetime (1/s)."""
        return self.debye_waller / (self.lifetime_ns * 1e-9)


SNV = EmitterConfig(
    id="snv",
    name="SnV- (tin vacancy)",
    zpl_nm=619.1,
    lifetime_ns=4.5,
    debye_waller=0.6,
    ground_spin_orbit_GHz=850.0,
    notes="Default memory emitter, large ground-state splitting",
)

SIV = EmitterConfig(
    id="siv",
    name="SiV- (silicon vacancy)",
    zpl_nm=737.1,
    lifetime_ns=1.7,
    debye_waller=0.8,
    ground_spin_orbit_GHz=48.0,
    notes="Needs millikelvin operation, small spin-orbit gap",
)

EMITTERS: dict[str, EmitterConfig] = {
    SNV.id: SNV,
    SIV.id: SIV,
}

DEFAULT_EMITTER = SNV


def get_emitter(emitter_id: str) -> EmitterConfig:
    key = emitter_id.lower()
    if key not in EMITTERS:
        available = ", ".join(EMITTERS.keys())
        raise ConfigError(f"Unknown emitter: {emitter_id}. Available: {available}")
    return EMITTERS[key]


def list_emitters_table() -> str:
    """Return a formatted table of all emitter presets."""
    lines = [
        "| ID | Name | ZPL | Lifetime | DW | Spin-orbit |",
        "|---|---|---|---|---|---|",
    ]
    for e in EMITTERS.values():
        lines.append(
            f"| {e.id} | {e.name} | {e.zpl_nm}nm | {e.lifetime_ns}ns | "
            f"{e.debye_waller} | {e.ground_spin_orbit_GHz}GHz |"
        )
    return "\n".join(lines)


@dataclass(frozen=True)
class LevelStructure:
    """Optical transitions of the four-level spin system.

    Spin-conserving transitions are 1-A and 2-B, separated by the spectral
    contrast ``delta_omega_s``. Cross transitions 2-A and 1-B sit at
    w_1A + w_s and w_2B - w_s. All frequencies and rates in rad/s, dipoles in C m.
    """

    omega_1A: float
    delta_omega_s: float
    omega_s: float
    gamma_1A: float
    gamma_2B: float
    gamma_2A: float = 0.0
    gamma_1B: float = 0.0
    dipoles: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        for name in ("gamma_1A", "gamma_2B", "gamma_2A", "gamma_1B"):
            if getattr(self, name) < 0:
                raise ConfigError(f"levels.{name} must be non-negative")
        if self.omega_1A <= 0:
            raise ConfigError("levels.omega_1A must be positive")

    @property
    def omega_2B(self) -> float:
        return self.omega_1A + self.delta_omega_s

    @property
    def omega_2A(self) -> float:
        return self.omega_1A + self.omega_s

    @property
    def omega_1B(self) -> float:
        return self.omega_2B - self.omega_s

    @property
    def gamma_avg_A(self) -> float:
        return 0.5 * (self.gamma_1A + self.gamma_2A)

    @property
    def gamma_avg_B(self) -> float:
        return 0.5 * (self.gamma_1B + self.gamma_2B)

    def transition_frequency(self, name: str) -> float:
        return getattr(self, f"omega_{name}")

    def rate(self, name: str) -> float:
        return getattr(self, f"gamma_{name}")

    def lints(self) -> list[str]:
        """Soft checks of the expected branching hierarchy."""
        warnings = []
        if self.gamma_2A > 0.1 * self.gamma_1A:
            warnings.append(
                f"gamma_2A = {self.gamma_2A:.3e} is not small against gamma_1A = {self.gamma_1A:.3e}"
            )
        if self.gamma_1B > 0.1 * self.gamma_2B:
            warnings.append(
                f"gamma_1B = {self.gamma_1B:.3e} is not small against gamma_2B = {self.gamma_2B:.3e}"
            )
        return warnings


def level_structure(
    emitter: EmitterConfig,
    delta_omega_s: float,
    omega_s: float,
    cross_fraction: float = 0.01,
    n: float = 2.417,
) -> LevelStructure:
    """Rates and dipoles of an emitter preset.

    Args:
        emitter: Emitter preset
        delta_omega_s: Spectral contrast w_2B - w_1A (rad/s)
        omega_s: Ground-state spin splitting (rad/s)
        cross_fraction: Branching fraction of the cross transitions
        n: Refractive index of the host, used in the Fermi-rule inversion

    Returns:
        LevelStructure with all four dipoles filled in
    """
    if not 0 <= cross_fraction < 1:
        raise ConfigError(f"cross_fraction must lie in [0, 1), got {cross_fraction}")
    gamma = emitter.zpl_rate
    levels = LevelStructure(
        omega_1A=emitter.omega_zpl,
        delta_omega_s=delta_omega_s,
        omega_s=omega_s,
        gamma_1A=gamma,
        gamma_2B=gamma,
        gamma_2A=cross_fraction * gamma,
        gamma_1B=cross_fraction * gamma,
    )
    dipoles = {
        name: dipole_from_rate(levels.transition_frequency(name), levels.rate(name), n)
        for name in TRANSITIONS
    }
    return replace(levels, dipoles=dipoles)
