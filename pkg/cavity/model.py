"""Single-sided cavity model: geometry, couplings and cooperativities."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

from cavity.coupling import coupling_strength
from cavity.emitters import TRANSITIONS, LevelStructure
from qcore.errors import ConfigError

logger = logging.getLogger(__name__)

# Cooperativity ratio of the |g|^2/(2 kappa gamma) convention to 2|g|^2/(kappa gamma)
ALT_COOPERATIVITY_RATIO = 0.25


@dataclass(frozen=True)
class CavityGeometry:
    V_eff: float = 1.8
    n: float = 2.417
    eps_r: float = 5.7

    def __post_init__(self):
        for name in ("V_eff", "n", "eps_r"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"cavity.{name} must be positive")


@dataclass(frozen=True)
class CavityModel:
    """Cavity mode (w_c, kappa HWHM) coupled to the four optical transitions."""

    omega_c: float
    kappa: float
    levels: LevelStructure
    geometry: CavityGeometry
    g_1A: complex = 0j
    g_2A: complex = 0j
    g_1B: complex = 0j
    g_2B: complex = 0j

    def __post_init__(self):
        if not self.kappa > 0:
            raise ConfigError(f"cavity.kappa must be positive, got {self.kappa}")
        if not self.omega_c > 0:
            raise ConfigError(f"cavity.omega_c must be positive, got {self.omega_c}")

    def coupling(self, name: str) -> complex:
        return getattr(self, f"g_{name}")

    @property
    def has_cross_talk(self) -> bool:
        return abs(self.g_2A) > 0 or abs(self.g_1B) > 0

    @property
    def delta_A(self) -> float:
        """w_1A - w_c (rad/s)."""
        return self.levels.omega_1A - self.omega_c

    @property
    def delta_B(self) -> float:
        """w_2B - w_c (rad/s)."""
        return self.levels.omega_2B - self.omega_c

    def coupling_defect(self) -> float:
        """Largest relative mismatch between stored couplings and the closed form."""
        worst = 0.0
        for name in TRANSITIONS:
            dipole = self.levels.dipoles.get(name)
            if dipole is None:
                continue
            expected = coupling_strength(
                self.omega_c, dipole, self.geometry.V_eff, self.geometry.n, self.geometry.eps_r
            )
            scale = max(abs(expected), 1e-300)
            worst = max(worst, abs(self.coupling(name) - expected) / scale)
        return worst


def build_cavity(
    omega_c: float,
    kappa: float,
    levels: LevelStructure,
    geometry: CavityGeometry | None = None,
    include_cross_talk: bool = True,
    photon_gamma: float | None = None,
    lint: bool = True,
) -> CavityModel:
    """Cavity with all couplings computed from the level dipoles."""
    geometry = geometry or CavityGeometry()
    couplings = {}
    for name in TRANSITIONS:
        dipole = levels.dipoles.get(name, 0.0)
        if name in ("2A", "1B") and not include_cross_talk:
            dipole = 0.0
        couplings[f"g_{name}"] = coupling_strength(
            omega_c, dipole, geometry.V_eff, geometry.n, geometry.eps_r
        )
    cav = CavityModel(omega_c=omega_c, kappa=kappa, levels=levels, geometry=geometry, **couplings)
    for warning in cavity_lints(cav, photon_gamma) if lint else ():
        logger.warning("cavity lint: %s", warning)
    return cav


def cavity_lints(cav: CavityModel, photon_gamma: float | None = None) -> list[str]:
    """Soft configuration checks; never fatal.

    A kappa of exactly twice the photon bandwidth is the bandwidth-matched value
    written as a full width, so it is flagged as FWHM-like.
    """
    warnings = list(cav.levels.lints())
    if photon_gamma and math.isclose(cav.kappa, 2 * photon_gamma, rel_tol=1e-9):
        warnings.append(
            f"kappa = {cav.kappa:.4e} rad/s is twice the photon bandwidth; kappa is a half-width (HWHM)"
        )
    return warnings


def cooperativity(g: complex, kappa: float, gamma: float) -> float:
    """C = 2|g|^2 / (kappa gamma)."""
    if not (kappa > 0 and gamma > 0):
        raise ConfigError(f"cooperativity needs positive kappa and gamma, got {kappa}, {gamma}")
    return 2 * abs(g) ** 2 / (kappa * gamma)


def cooperativities(cav: CavityModel) -> dict[str, float | None]:
    """C_kl for every transition, None where the rate vanishes."""
    out: dict[str, float | None] = {}
    for name in TRANSITIONS:
        rate = cav.levels.rate(name)
        out[name] = cooperativity(cav.coupling(name), cav.kappa, rate) if rate > 0 else None
    return out
