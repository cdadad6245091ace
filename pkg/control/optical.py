"""Optical Raman pi/2 gate built from four pi/8 pulses.

The level structure, dipole couplings and dissipators come from a model file
(``control/models/snv_raman.json`` by default). Operators are stored as nested
[re, im] arrays; temperature-dependent rates as (K, 1/ns) tables.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy import constants

from control.lindblad import LindbladSpec, propagate_many
from control.rotation import RotationChannel, RotationModel, channel_from_states, compose
from qcore.channels import BASIS_PAIRS, deserialize_matrix, kraus_from_images
from qcore.errors import ConfigError, StateError
from qcore.operators import basis_op, embed

logger = logging.getLogger(__name__)

MODELS_DIR = Path(__file__).parent / "models"
DEFAULT_MODEL = MODELS_DIR / "snv_raman.json"
FWHM_PER_SIGMA = 2 * math.sqrt(2 * math.log(2))
PULSES_PER_GATE = 4

LOCKED_B_DC_T = 3.0
LOCKED_THETA_DC_DEG = 43.11


@dataclass(frozen=True)
class DriveTerm:
    name: str
    field: str
    dipole: float
    operator: np.ndarray


@dataclass(frozen=True)
class DissipatorTerm:
    name: str
    operator: np.ndarray
    rate: float | None = None
    rate_table: tuple[tuple[float, float], ...] = ()

    def rate_at(self, temperature_K: float) -> float:
        if self.rate is not None:
            return self.rate
        temps, rates = zip(*self.rate_table)
        return float(np.interp(temperature_K, temps, rates))


@dataclass(frozen=True)
class OpticalModel:
    name: str
    dim: int
    levels: tuple[str, ...]
    h0: np.ndarray
    drives: tuple[DriveTerm, ...]
    dissipators: tuple[DissipatorTerm, ...]
    window_sigma: float = 10.0
    center_sigma: float = 5.0
    description: str = ""


def _operator(data, dim: int, where: str) -> np.ndarray:
    try:
        op = deserialize_matrix(data)
    except StateError as exc:
        raise ConfigError(f"{where}: {exc}") from exc
    if op.shape != (dim, dim):
        raise ConfigError(f"{where}: shape {op.shape}, expected ({dim}, {dim})")
    return op


def load_optical_model(path: str | Path | None = None) -> OpticalModel:
    """Parse and validate a model file; a missing file raises OSError."""
    path = Path(path) if path else DEFAULT_MODEL
    with open(path) as f:
        try:
            raw = json.load(f)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
    try:
        dim = int(raw["dim"])
        if raw.get("qubit_levels", [0, 1]) != [0, 1]:
            raise ConfigError(f"{path}: the qubit must occupy levels 0 and 1")
        drives = tuple(
            DriveTerm(d["name"], d["field"], float(d["dipole_Cm"]),
                      _operator(d["operator"], dim, f"{path}: drive {d['name']}"))
            for d in raw["drives"]
        )
        dissipators = []
        for d in raw.get("dissipators", []):
            table = tuple(tuple(map(float, row)) for row in d.get("rate_table", ()))
            rate = d.get("rate_per_ns")
            if (rate is None) == (not table):
                raise ConfigError(f"{path}: dissipator {d['name']} needs exactly one of rate_per_ns, rate_table")
            if (rate is not None and rate < 0) or any(r < 0 for _, r in table):
                raise ConfigError(f"{path}: dissipator {d['name']} has a negative rate")
            dissipators.append(DissipatorTerm(
                d["name"], _operator(d["operator"], dim, f"{path}: dissipator {d['name']}"),
                None if rate is None else float(rate), table,
            ))
        envelope = raw.get("envelope", {})
        return OpticalModel(
            name=raw.get("name", path.stem),
            dim=dim,
            levels=tuple(raw.get("levels", [str(k) for k in range(dim)])),
            h0=_operator(raw["H0"], dim, f"{path}: H0"),
            drives=drives,
            dissipators=tuple(dissipators),
            window_sigma=float(envelope.get("window_sigma", 10.0)),
            center_sigma=float(envelope.get("center_sigma", 5.0)),
            description=raw.get("description", ""),
        )
    except KeyError as exc:
        raise ConfigError(f"{path}: missing key {exc}") from exc


@dataclass(frozen=True)
class OpticalConfig:
    """Raman control settings; the static field and its orientation are fixed."""

    B_dc_T: float = LOCKED_B_DC_T
    theta_dc_deg: float = LOCKED_THETA_DC_DEG
    tau_pi8_ps: float = 88.33
    E1_V_per_m: float = 4.07740e5
    E2_V_per_m: float = 4.27642e5
    lambda1_nm: float = 619.1
    lambda2_nm: float = 619.1
    temperature_K: float = 0.1
    model_path: str | None = None

    def __post_init__(self):
        if self.B_dc_T != LOCKED_B_DC_T or self.theta_dc_deg != LOCKED_THETA_DC_DEG:
            raise ConfigError(
                f"optical control is defined for B_dc = {LOCKED_B_DC_T} T at "
                f"{LOCKED_THETA_DC_DEG} deg only"
            )
        if not 0.1 <= self.temperature_K <= 4.0:
            raise ConfigError(f"temperature {self.temperature_K} K outside [0.1, 4] K")
        for name in ("tau_pi8_ps", "lambda1_nm", "lambda2_nm"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"optical.{name} must be positive")
        if self.E1_V_per_m < 0 or self.E2_V_per_m < 0:
            raise ConfigError("laser field amplitudes must be non-negative")

    @property
    def sigma_ns(self) -> float:
        """Gaussian width from the pulse FWHM, tau / (2 sqrt(2 ln 2))."""
        return self.tau_pi8_ps * 1e-3 / FWHM_PER_SIGMA

    @property
    def gate_time_ns(self) -> float:
        return 40 * self.sigma_ns

    def field(self, name: str) -> float:
        return {"E1": self.E1_V_per_m, "E2": self.E2_V_per_m}[name]


def rabi_frequency(dipole: float, field: float) -> float:
    """d E / hbar in rad/ns."""
    return dipole * field / constants.hbar * 1e-9


def pulse_channel(cfg: OpticalConfig, model: OpticalModel | None = None) -> RotationChannel:
    """Channel of a single pi/8 pulse over its window."""
    model = model or load_optical_model(cfg.model_path)
    sigma = cfg.sigma_ns
    window = model.window_sigma * sigma
    center = model.center_sigma * sigma
    terms = []
    for drive in model.drives:
        try:
            amplitude = rabi_frequency(drive.dipole, cfg.field(drive.field))
        except KeyError as exc:
            raise ConfigError(f"model drive {drive.name} refers to unknown field {drive.field}") from exc
        terms.append((amplitude, drive.operator))

    def hamiltonian(t: float) -> np.ndarray:
        envelope = math.exp(-((t - center) ** 2) / (2 * sigma**2))
        h = model.h0.copy()
        for amplitude, op in terms:
            h = h + amplitude * envelope * op
        return h

    dissipators = [(d.rate_at(cfg.temperature_K), d.operator) for d in model.dissipators]
    spec = LindbladSpec(model.dim, hamiltonian, dissipators, t_final=window, max_step=sigma / 4)
    units = [embed(basis_op(i, j), model.dim) for i, j in BASIS_PAIRS]
    finals = dict(zip(BASIS_PAIRS, propagate_many(spec, units)))
    return channel_from_states(
        finals,
        RotationModel.OPTICAL,
        gate_time_ns=window,
        details={f"rabi_{name}_per_ns": amp for name, (amp, _) in zip((d.field for d in model.drives), terms)},
    )


def optical_pi2(cfg: OpticalConfig, model: OpticalModel | None = None) -> RotationChannel:
    """Four pi/8 pulses in sequence; the approximation error is that of one pulse on |1><1|."""
    model = model or load_optical_model(cfg.model_path)
    single = pulse_channel(cfg, model)
    images = compose(single.images, PULSES_PER_GATE)
    kraus = kraus_from_images(images, strict=False)
    logger.info(
        "optical gate: sigma = %.5f ns, T_g = %.4f ns, e = %.3e",
        cfg.sigma_ns, PULSES_PER_GATE * single.gate_time_ns, single.approx_error,
    )
    return RotationChannel(
        images=images,
        kraus=kraus,
        approx_error=single.approx_error,
        model_tag=RotationModel.OPTICAL,
        gate_time_ns=PULSES_PER_GATE * single.gate_time_ns,
        full_state=single.full_state,
        details={**dict(single.details), "sigma_ns": cfg.sigma_ns, "pulses": PULSES_PER_GATE},
    )
