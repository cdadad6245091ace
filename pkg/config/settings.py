"""Centralized configuration for the cavity spin memory simulator.

Numerical constants shared across modules are defined here instead of magic
numbers. Solver tolerances can be overridden via environment variables.
"""

import os
import threading
from contextlib import contextmanager
from dataclasses import dataclass, field


@dataclass
class Settings:
    """Simulator settings with sensible defaults."""

    # Linear algebra
    tol_eig: float = 1e-10  # relative to the largest Choi eigenvalue
    tol_psd: float = 1e-9
    tol_trace: float = 1e-12
    tol_herm: float = 1e-9

    # Spectral quadrature
    quad_epsabs: float = 1e-11
    quad_epsrel: float = 1e-10
    quad_limit: int = 400
    lorentzian_tail_mass: float = 1e-8

    # Heisenberg-Langevin solver
    langevin_rtol: float = 1e-8
    langevin_atol: float = 1e-10
    langevin_e0: float = 1e-3
    langevin_pulse_multiplier: float = 20.0
    langevin_tail_tol: float = 1e-8
    langevin_max_extensions: int = 12
    langevin_samples_per_period: int = 64
    weak_drive_population: float = 1e-4

    # Lindblad solver
    lindblad_rtol: float = 1e-10
    lindblad_atol: float = 1e-12

    # Cavity optimizer
    optimizer_budget: int = 2000
    optimizer_round_samples: int = 32
    optimizer_polish_evals: int = 96
    optimizer_seed: int = 7

    _override_lock: threading.RLock = field(default_factory=threading.RLock, init=False, repr=False, compare=False)

    def __post_init__(self):
        """Load tolerance overrides from environment variables."""
        self.langevin_rtol = float(os.getenv("QMEM_LANGEVIN_RTOL", self.langevin_rtol))
        self.langevin_atol = float(os.getenv("QMEM_LANGEVIN_ATOL", self.langevin_atol))
        self.lindblad_rtol = float(os.getenv("QMEM_LINDBLAD_RTOL", self.lindblad_rtol))
        self.lindblad_atol = float(os.getenv("QMEM_LINDBLAD_ATOL", self.lindblad_atol))
        self.quad_epsabs = float(os.getenv("QMEM_QUAD_EPSABS", self.quad_epsabs))
        self.quad_epsrel = float(os.getenv("QMEM_QUAD_EPSREL", self.quad_epsrel))
        self.tol_eig = float(os.getenv("QMEM_TOL_EIG", self.tol_eig))

    @contextmanager
    def overridden(self, **values):
        """Temporarily replace settings values, e.g. per-scenario solver tolerances.

        The instance is shared by the whole process: overrides from different
        threads are serialized by a lock held until the block exits. Code that
        reads settings outside an ``overridden`` block sees whatever override is
        active at the time.
        """
        unknown = [name for name in values if name.startswith("_") or not hasattr(self, name)]
        if unknown:
            raise AttributeError(f"unknown settings: {unknown}")
        with self._override_lock:
            saved = {name: getattr(self, name) for name in values}
            for name, value in values.items():
                setattr(self, name, value)
            try:
                yield self
            finally:
                for name, value in saved.items():
                    setattr(self, name, value)


# Global settings instance
settings = Settings()
