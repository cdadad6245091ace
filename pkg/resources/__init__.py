"""Power and timing budgets."""

from resources.budget import (
    PowerConfig,
    TimingConfig,
    laser_power,
    microwave_power,
    microwave_wavelength,
    power_budget,
    processing_time,
)

__all__ = [
    "PowerConfig",
    "TimingConfig",
    "laser_power",
    "microwave_power",
    "microwave_wavelength",
    "power_budget",
    "processing_time",
]
