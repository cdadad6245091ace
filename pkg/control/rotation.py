"""Spin pi/2 rotation channels and the leakage approximation error."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping

import numpy as np

from qcore.channels import BASIS_PAIRS, ChannelImages, KrausSet, kraus_from_images
from qcore.errors import ConfigError
from qcore.operators import R_Y_PI2, check_square, dag, embed, one_norm

logger = logging.getLogger(__name__)


class RotationModel(str, Enum):
    IDEAL = "ideal"
    OPTICAL = "optical"
    MICROWAVE = "microwave"
    PHENOMENOLOGICAL = "phenomenological"


@dataclass(frozen=True)
class RotationChannel:
    """Qubit-block channel of a spin pi/2 gate.

    ``images`` are the qubit blocks of the propagated basis matrices |i><j|;
    ``full_state`` is the final full-space state of |1><1| used for the
    approximation error.
    """

    images: ChannelImages
    kraus: KrausSet
    approx_error: float
    model_tag: RotationModel
    gate_time_ns: float = 0.0
    omega_s: float | None = None
    full_state: np.ndarray | None = None
    details: Mapping[str, float] = field(default_factory=dict)

    @property
    def lambda_map(self) -> np.ndarray:
        """Lambda^(mk): image of |1><1| restricted to the qubit block."""
        return self.images[(0, 0)]

    @property
    def leakage(self) -> float:
        return 1.0 - float(np.real(np.trace(self.lambda_map)))

    def summary(self) -> dict:
        return {
            "model": self.model_tag.value,
            "gate_time_ns": self.gate_time_ns,
            "omega_s": self.omega_s,
            "approx_error": self.approx_error,
            "lambda_trace": float(np.real(np.trace(self.lambda_map))),
            "kraus_weights": list(self.kraus.eigenvalues),
            "cp_defect": self.kraus.cp_defect,
            **dict(self.details),
        }


def approximation_error(rho_full: np.ndarray) -> float:
    """|| rho - rho_qubit ||_1 where rho_qubit keeps only the 2x2 qubit block."""
    rho_full = check_square(rho_full, "rho_full")
    truncated = embed(rho_full[:2, :2], rho_full.shape[0])
    return one_norm(rho_full - truncated)


def channel_from_states(
    finals: Mapping[tuple[int, int], np.ndarray],
    model_tag: RotationModel,
    **extra,
) -> RotationChannel:
    """Truncate full-space final states to the qubit block and extract Kraus operators.

    Truncation can leave a small CP violation; it is clamped and recorded in
    ``kraus.cp_defect`` instead of raising.
    """
    images = ChannelImages({p: np.asarray(finals[p])[:2, :2] for p in BASIS_PAIRS})
    kraus = kraus_from_images(images, strict=False)
    if kraus.cp_defect > 0:
        logger.info("%s rotation: truncation CP defect %.3e", model_tag.value, kraus.cp_defect)
    full = np.asarray(finals[(0, 0)])
    return RotationChannel(
        images=images,
        kraus=kraus,
        approx_error=approximation_error(full),
        model_tag=model_tag,
        full_state=full,
        **extra,
    )


def ideal_rotation() -> RotationChannel:
    images = ChannelImages.from_function(lambda rho: R_Y_PI2 @ rho @ dag(R_Y_PI2))
    return RotationChannel(
        images=images,
        kraus=KrausSet.single(R_Y_PI2),
        approx_error=0.0,
        model_tag=RotationModel.IDEAL,
    )


def phenomenological_rotation(gate_fidelity: float) -> RotationChannel:
    """Ideal rotation followed by depolarization with eps = 2(1 - F_g)."""
    if not (0.5 < gate_fidelity <= 1.0):
        raise ConfigError(f"gate fidelity must lie in (0.5, 1], got {gate_fidelity}")
    eps = 2.0 * (1.0 - gate_fidelity)

    def channel(rho: np.ndarray) -> np.ndarray:
        rotated = R_Y_PI2 @ rho @ dag(R_Y_PI2)
        return (1.0 - eps) * rotated + eps * np.trace(rho) * np.eye(2) / 2

    images = ChannelImages.from_function(channel)
    return RotationChannel(
        images=images,
        kraus=kraus_from_images(images),
        approx_error=0.0,
        model_tag=RotationModel.PHENOMENOLOGICAL,
        details={"gate_fidelity": gate_fidelity},
    )


def compose(channel: ChannelImages, times: int) -> ChannelImages:
    """Apply ``channel`` ``times`` times in sequence."""
    if times < 1:
        raise ConfigError(f"composition count must be positive, got {times}")
    out = channel
    for _ in range(times - 1):
        out = out.then(channel)
    return out


def rotation_channel(model: RotationModel | str, config=None) -> RotationChannel:
    """Dispatch to the rotation model named by ``model``.

    ``config`` is a MicrowaveConfig, an OpticalConfig or, for the
    phenomenological model, the gate fidelity.
    """
    from control.microwave import MicrowaveConfig, microwave_pi2
    from control.optical import OpticalConfig, optical_pi2

    model = RotationModel(model)
    if model is RotationModel.IDEAL:
        return ideal_rotation()
    if model is RotationModel.PHENOMENOLOGICAL:
        return phenomenological_rotation(1.0 if config is None else float(config))
    if model is RotationModel.MICROWAVE:
        return microwave_pi2(config if config is not None else MicrowaveConfig())
    return optical_pi2(config if config is not None else OpticalConfig())
