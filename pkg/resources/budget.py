"""Power and processing-time budget of one storage cycle.

All quantities in SI units (W, s, m, V/m, T).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import constants

from qcore.errors import ConfigError

TB_LIFETIMES = 20  # time-bin separation in source lifetimes


# === TIMING ===

@dataclass(frozen=True)
class TimingConfig:
    """Inputs of T_1 = T_read-in + T_read-out + T_s.

    ``gamma_*`` are source bandwidths in 1/s; the source lifetime is 1/gamma.
    """

    gamma_readin: float
    gamma_readout: float
    T_g_readin: float
    T_g_readout: float
    T_m: float = 100e-12
    T_s: float = 0.0
    L_readin: float = 100.0
    L_readout: float = 100.0
    c_fiber: float = 2.0e8

    def __post_init__(self):
        for name in ("gamma_readin", "gamma_readout"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"timing.{name} must be positive")
        for name in ("T_g_readin", "T_g_readout", "T_m", "T_s", "L_readin", "L_readout"):
            value = getattr(self, name)
            if not (value >= 0 and math.isfinite(value)):
                raise ConfigError(f"timing.{name} must be finite and non-negative, got {value}")
        if not 1e8 < self.c_fiber < 3e8:
            raise ConfigError(f"timing.c_fiber = {self.c_fiber:.3e} m/s outside (1e8, 3e8)")


def _stage_terms(stage: str, gamma: float, T_g: float, T_m: float, length: float, c: float) -> dict:
    return {
        f"T_tb_{stage}": TB_LIFETIMES / gamma,
        f"T_g_{stage}": T_g,
        f"T_m_{stage}": T_m,
        f"T_c_{stage}": length / c,
    }


def processing_time(cfg: TimingConfig) -> tuple[float, dict[str, float]]:
    """Total processing time T_1 and its per-term breakdown (s).

    Each stage takes T_k = 20 T_lt,k + T_g + T_m + L_k / c; the total adds
    the storage time T_s. The breakdown sums to the total exactly.
    """
    breakdown = {
        **_stage_terms("readin", cfg.gamma_readin, cfg.T_g_readin, cfg.T_m, cfg.L_readin, cfg.c_fiber),
        **_stage_terms("readout", cfg.gamma_readout, cfg.T_g_readout, cfg.T_m, cfg.L_readout, cfg.c_fiber),
        "T_s": cfg.T_s,
    }
    total = sum(breakdown.values())
    return total, breakdown


# === POWER ===

@dataclass(frozen=True)
class PowerConfig:
    E_1: float = 0.0
    E_2: float = 0.0
    lambda_1: float = 619.1e-9
    lambda_2: float = 619.1e-9
    sigma: float = 37.51e-12
    B_ac: float = 0.0
    lambda_mw: float | None = None
    n: float = 2.417

    def __post_init__(self):
        if self.E_1 < 0 or self.E_2 < 0 or self.B_ac < 0:
            raise ConfigError("field amplitudes must be non-negative")
        for name in ("lambda_1", "lambda_2", "sigma", "n"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"power.{name} must be positive")
        if self.lambda_mw is not None and not self.lambda_mw > 0:
            raise ConfigError("power.lambda_mw must be positive")


def _require_positive(**values: float) -> None:
    for name, value in values.items():
        if not value > 0:
            raise ConfigError(f"{name} must be positive, got {value}")


def laser_power(E: float, wavelength: float, sigma: float, n: float = 2.417) -> float:
    """Average power W / (sigma sqrt(e)) of a Gaussian pulse with pulse energy
    W = (1/2) eps0 E^2 lambda^3 / (2 n^3).
    """
    _require_positive(wavelength=wavelength, sigma=sigma, n=n)
    energy = 0.5 * constants.epsilon_0 * E**2 * wavelength**3 / (2 * n**3)
    return energy / (sigma * math.exp(0.5))


def microwave_wavelength(omega_s: float) -> float:
    """Vacuum wavelength 2 pi c / w_s of the resonant drive (m)."""
    _require_positive(omega_s=omega_s)
    return 2 * math.pi * constants.c / omega_s


def microwave_power(B_ac: float, lambda_mw: float, n: float = 2.417) -> float:
    """B_ac^2 / (2 mu0) times the area (lambda_mw / 2n)^2."""
    _require_positive(lambda_mw=lambda_mw, n=n)
    area = (lambda_mw / (2 * n)) ** 2
    return B_ac**2 / (2 * constants.mu_0) * area


def power_budget(cfg: PowerConfig, omega_s: float | None = None) -> dict[str, float | None]:
    """Laser and microwave powers (W); lambda_mw falls back to the drive wavelength at w_s."""
    lambda_mw = cfg.lambda_mw
    if lambda_mw is None and omega_s:
        lambda_mw = microwave_wavelength(omega_s)
    return {
        "P_laser_1_W": laser_power(cfg.E_1, cfg.lambda_1, cfg.sigma, cfg.n),
        "P_laser_2_W": laser_power(cfg.E_2, cfg.lambda_2, cfg.sigma, cfg.n),
        "P_mw_W": None if lambda_mw is None else microwave_power(cfg.B_ac, lambda_mw, cfg.n),
        "lambda_mw_m": lambda_mw,
    }
