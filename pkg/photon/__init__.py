"""Time-bin photonic qubit source model."""

from photon.source import (
    PhotonSourceSpec,
    SpectralAmplitude,
    depolarize,
    input_mode,
    lorentzian_spectrum,
)

__all__ = [
    "PhotonSourceSpec",
    "SpectralAmplitude",
    "depolarize",
    "input_mode",
    "lorentzian_spectrum",
]
