"""Time-domain reflection integrals from Langevin output modes."""

from __future__ import annotations

import logging
import math

import numpy as np
from scipy.integrate import trapezoid

from cavity.integrals import ReflectionIntegrals
from cavity.model import CavityModel
from config import settings
from langevin.dynamics import (
    LangevinParams,
    LangevinTrajectory,
    SampledMode,
    output_mode,
    propagate_langevin,
)
from photon.source import PhotonSourceSpec
from qcore.errors import SolverError, StateError

logger = logging.getLogger(__name__)


def time_integrals(D1: SampledMode, D2: SampledMode, gamma: float, e0: float) -> ReflectionIntegrals:
    """I1 = N int |D1|^2, I2 = N int D1 D2*, I3 = N int |D2|^2 with N = gamma / e0^2.

    Args:
        D1, D2: Output modes for spin 1 and spin 2 on the same grid
        gamma: Photon bandwidth in the inverse time unit of the grid
        e0: Drive amplitude used for both runs

    Raises:
        StateError: The two grids differ
        SolverError: The grid is too short for the input pulse to have decayed
    """
    if D1.t.shape != D2.t.shape or not np.allclose(D1.t, D2.t, rtol=0, atol=1e-12):
        raise StateError(f"output modes live on different grids ({D1.t.size} vs {D2.t.size} samples)")
    span = float(D1.t[-1] - D1.t[0])
    tail = math.exp(-gamma * span)
    if tail >= settings.langevin_tail_tol:
        raise SolverError(f"input tail {tail:.3e} at the end of the grid; integrate longer")
    norm = gamma / e0**2
    I1 = norm * trapezoid(np.abs(D1.values) ** 2, D1.t)
    I2 = norm * trapezoid(D1.values * np.conj(D2.values), D1.t)
    I3 = norm * trapezoid(np.abs(D2.values) ** 2, D1.t)
    return ReflectionIntegrals(float(I1), complex(I2), float(I3), source="time")


def langevin_integrals(
    cav: CavityModel,
    spec: PhotonSourceSpec,
    e0: float | None = None,
) -> tuple[ReflectionIntegrals, dict[int, LangevinTrajectory]]:
    """Run both spin states on a common grid and integrate their output modes."""
    params = LangevinParams(cav, spec) if e0 is None else LangevinParams(cav, spec, e0=e0)
    runs = {spin: propagate_langevin(params, spin) for spin in (1, 2)}
    longest = max(run.t[-1] for run in runs.values())
    for spin in (1, 2):
        if runs[spin].t[-1] < longest:
            runs[spin] = propagate_langevin(params, spin, min_duration_ns=longest)
    d1, d2 = (output_mode(runs[spin], params) for spin in (1, 2))
    integrals = time_integrals(d1, d2, params.gamma_ns, params.e0)
    logger.info(
        "time-domain integrals I1=%.6f I2=%.6f%+.6fj I3=%.6f",
        integrals.I1, integrals.I2.real, integrals.I2.imag, integrals.I3,
    )
    return integrals, runs
