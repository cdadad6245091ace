"""Mean-field Heisenberg-Langevin propagation and time-domain integrals."""

from langevin.dynamics import (
    STATE_LABELS,
    TRAJECTORY_COLUMNS,
    LangevinParams,
    LangevinTrajectory,
    SampledMode,
    output_mode,
    propagate_langevin,
)
from langevin.integrals import langevin_integrals, time_integrals

__all__ = [
    "LangevinParams",
    "LangevinTrajectory",
    "STATE_LABELS",
    "SampledMode",
    "TRAJECTORY_COLUMNS",
    "langevin_integrals",
    "output_mode",
    "propagate_langevin",
    "time_integrals",
]
