"""Emitter-cavity coupling strength and Fermi-rule decay rates (SI units)."""

from __future__ import annotations

import math

from scipy import constants

from qcore.errors import ConfigError


def _require_positive(**values: float) -> None:
    for name, value in values.items():
        if not (value > 0 and math.isfinite(value)):
            raise ConfigError(f"{name} must be positive and finite, got {value}")


def mode_volume(omega_c: float, V_eff: float, n: float) -> float:
    """Physical mode volume V = V_eff lambda^3 / (2 n^3) with lambda = 2 pi c / w_c (m^3)."""
    _require_positive(omega_c=omega_c, V_eff=V_eff, n=n)
    wavelength = 2 * math.pi * constants.c / omega_c
    return V_eff * wavelength**3 / (2 * n**3)


def coupling_strength(
    omega_c: float,
    dipole: complex,
    V_eff: float,
    n: float,
    eps_r: float,
) -> complex:
    """Vacuum coupling g = i sqrt(w_c / (2 hbar eps0 eps_r V)) d (rad/s).

    Args:
        omega_c: Cavity angular frequency (rad/s)
        dipole: Transition dipole matrix element <k|e.d|l> (C m)
        V_eff: Dimensionless effective mode volume
        n: Refractive index
        eps_r: Relative permittivity

    Returns:
        Complex coupling strength
    """
    _require_positive(omega_c=omega_c, V_eff=V_eff, n=n, eps_r=eps_r)
    if not math.isfinite(abs(dipole)):
        raise ConfigError(f"dipole must be finite, got {dipole}")
    volume = mode_volume(omega_c, V_eff, n)
    field = math.sqrt(omega_c / (2 * constants.hbar * constants.epsilon_0 * eps_r * volume))
    return 1j * field * dipole


def natural_decay_rate(omega: float, dipole: complex, n: float = 2.417) -> float:
    """Spontaneous emission rate gamma = 4 alpha w^3 n |d|^2 / (3 c^2 e^2) (1/s)."""
    _require_positive(omega=omega, n=n)
    return (
        4 * constants.alpha * omega**3 * n * abs(dipole) ** 2
        / (3 * constants.c**2 * constants.e**2)
    )


def dipole_from_rate(omega: float, gamma: float, n: float = 2.417) -> float:
    """Inverse of ``natural_decay_rate``: the dipole magnitude giving rate gamma."""
    _require_positive(omega=omega, n=n)
    if gamma < 0:
        raise ConfigError(f"decay rate must be non-negative, got {gamma}")
    return math.sqrt(
        gamma * 3 * constants.c**2 * constants.e**2 / (4 * constants.alpha * omega**3 * n)
    )
