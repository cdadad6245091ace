"""Reflection integrals I1, I2, I3 weighted by the normalized photon spectrum.

The substitution w = w0 + (gamma/2) tan(theta) maps the Lorentzian intensity
onto the uniform density 1/pi on (-pi/2, pi/2), so the truncation to a tail
mass is a symmetric cut in theta.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np
from scipy.integrate import quad_vec

from cavity.model import CavityModel
from cavity.reflection import reflection_branch
from config import settings
from photon.source import SpectralAmplitude
from qcore.errors import QuadratureError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ReflectionIntegrals:
    I1: float
    I2: complex
    I3: float
    source: str = "frequency"

    @classmethod
    def ideal(cls) -> "ReflectionIntegrals":
        """Perfect spin contrast: R_1 = -1, R_2 = +1 over the whole photon."""
        return cls(1.0, -1.0 + 0j, 1.0, source="ideal")

    def vector(self) -> tuple[complex, complex, complex, complex]:
        """(I1, I2, I2*, I3), the index order used by the read-in formula."""
        return (complex(self.I1), complex(self.I2), complex(np.conj(self.I2)), complex(self.I3))

    def validate(self, tol: float = 1e-9) -> list[str]:
        """Check the integral bounds. Returns list of violations."""
        errors = []
        for name, value in (("I1", self.I1), ("I3", self.I3)):
            if value < -tol or value > 1 + tol:
                errors.append(f"{name} = {value:.12f} outside [0, 1]")
        if abs(self.I2) ** 2 > self.I1 * self.I3 + tol:
            errors.append(
                f"|I2|^2 = {abs(self.I2) ** 2:.12f} exceeds I1*I3 = {self.I1 * self.I3:.12f}"
            )
        return errors

    def to_dict(self) -> dict:
        return {
            "I1": self.I1,
            "I2": [float(np.real(self.I2)), float(np.imag(self.I2))],
            "I3": self.I3,
            "source": self.source,
        }


def lorentzian_integrals(
    spectrum: SpectralAmplitude,
    r1: Callable,
    r2: Callable,
    resonances: Iterable[float] = (),
    tail_mass: float | None = None,
) -> ReflectionIntegrals:
    """Integrate |R1|^2, R1 R2* and |R2|^2 against the photon intensity.

    Args:
        spectrum: Normalized Lorentzian of the photon
        r1, r2: Reflection coefficients as functions of the offset w - w0
        resonances: Offsets (from w0) of sharp features, used as breakpoints
        tail_mass: Lorentzian mass left outside the integration window

    Returns:
        ReflectionIntegrals with source "frequency"
    """
    tail_mass = settings.lorentzian_tail_mass if tail_mass is None else tail_mass
    half = spectrum.gamma / 2
    theta_max = 0.5 * math.pi * (1.0 - tail_mass)

    def integrand(theta: float) -> np.ndarray:
        x = half * math.tan(theta)
        a = complex(r1(x))
        b = complex(r2(x))
        cross = a * b.conjugate()
        return np.array([abs(a) ** 2, cross.real, cross.imag, abs(b) ** 2]) / math.pi

    points = sorted(
        {float(np.arctan(r / half)) for r in resonances if abs(np.arctan(r / half)) < theta_max}
    )
    result, error, info = quad_vec(
        integrand,
        -theta_max,
        theta_max,
        epsabs=settings.quad_epsabs,
        epsrel=settings.quad_epsrel,
        limit=settings.quad_limit,
        points=points or None,
        full_output=True,
    )
    if info.status != 0:
        raise QuadratureError(
            f"spectral quadrature did not converge (status {info.status}, "
            f"error estimate {error:.3e}, {info.intervals.shape[0]} intervals)"
        )
    logger.debug("spectral integrals %s with error %.2e", result, error)
    return ReflectionIntegrals(
        I1=float(result[0]),
        I2=complex(result[1], result[2]),
        I3=float(result[3]),
        source="frequency",
    )


def spectral_integrals(spectrum: SpectralAmplitude, cav: CavityModel) -> ReflectionIntegrals:
    """Frequency-domain integrals for the cross-talk-free reflection coefficients."""
    r1 = reflection_branch(cav, 1, reference=spectrum.omega0)
    r2 = reflection_branch(cav, 2, reference=spectrum.omega0)
    resonances = [r1.cavity_offset]
    for branch in (r1, r2):
        g = math.sqrt(branch.g_abs2)
        resonances += [branch.emitter_offset, branch.emitter_offset - g, branch.emitter_offset + g]
    return lorentzian_integrals(spectrum, r1, r2, resonances)
