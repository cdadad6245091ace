"""Spin rotation gates: Lindblad solver, microwave and optical pi/2 channels."""

from control.lindblad import (
    LindbladSpec,
    apply_propagator,
    lindblad_propagate,
    propagate_many,
    propagator,
)
from control.microwave import MicrowaveConfig, MicrowaveMode, microwave_pi2, qubit_frame
from control.optical import OpticalConfig, OpticalModel, load_optical_model, optical_pi2, pulse_channel
from control.rotation import (
    RotationChannel,
    RotationModel,
    approximation_error,
    channel_from_states,
    compose,
    ideal_rotation,
    phenomenological_rotation,
    rotation_channel,
)

__all__ = [
    "LindbladSpec",
    "MicrowaveConfig",
    "MicrowaveMode",
    "OpticalConfig",
    "OpticalModel",
    "RotationChannel",
    "RotationModel",
    "apply_propagator",
    "approximation_error",
    "channel_from_states",
    "compose",
    "ideal_rotation",
    "lindblad_propagate",
    "load_optical_model",
    "microwave_pi2",
    "optical_pi2",
    "phenomenological_rotation",
    "propagate_many",
    "propagator",
    "pulse_channel",
    "qubit_frame",
    "rotation_channel",
]
