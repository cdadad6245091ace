"""Scenario documents: schema, loading and provenance hash.

A scenario is a YAML (or JSON) document with unit-suffixed keys. Unknown keys
are rejected; validation errors are reported with their dotted field path.
"""

from __future__ import annotations

import hashlib
import json
import math
from enum import Enum
from pathlib import Path
from typing import Optional

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from cavity.emitters import get_emitter
from cavity.model import CavityGeometry
from cavity.optimizer import CavityBounds
from control.microwave import MicrowaveConfig, MicrowaveMode
from control.optical import OpticalConfig
from photon.source import PhotonSourceSpec
from qcore.errors import ConfigError

INV_SQRT2 = 1 / math.sqrt(2)


# === ENUMS ===


class ControlKind(str, Enum):
    IDEAL = "ideal"
    OPTICAL = "optical"
    MICROWAVE = "microwave"
    PHENOMENOLOGICAL = "phenomenological"


class IntegralSource(str, Enum):
    """Where the reflection integrals come from."""

    AUTO = "auto"  # time domain when cross-talk is on, else frequency domain
    FREQUENCY = "frequency"
    TIME = "time"
    IDEAL = "ideal"


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


# === PHOTON ===


class PhotonBlock(StrictModel):
    F: float = Field(1.0, gt=0.5, le=1.0)
    gamma_GHz: float = Field(1.0, gt=0)
    alpha: float = INV_SQRT2
    beta: float = INV_SQRT2
    beta_phase_rad: float = 0.0

    @model_validator(mode="after")
    def _normalized(self):
        norm = self.alpha**2 + self.beta**2
        if abs(norm - 1.0) > 1e-9:
            raise ValueError(f"alpha^2 + beta^2 = {norm:.12f}, expected 1")
        return self

    def to_spec(self, omega0: float) -> PhotonSourceSpec:
        norm = math.hypot(self.alpha, self.beta)
        beta = complex(self.beta / norm) * complex(math.cos(self.beta_phase_rad), math.sin(self.beta_phase_rad))
        return PhotonSourceSpec.from_GHz(omega0, self.gamma_GHz, self.alpha / norm, beta, self.F)


# === CAVITY ===


class TripleBlock(StrictModel):
    """Fixed (w0, w_c, kappa); frequencies as offsets from w_1A."""

    omega0_offset_GHz: float = 0.0
    omega_c_offset_GHz: float = 0.0
    kappa_GHz: float = Field(gt=0)


class BoundsBlock(StrictModel):
    omega0_offset_GHz: tuple[float, float] = (-20.0, 20.0)
    omega_c_offset_GHz: tuple[float, float] = (-20.0, 20.0)
    kappa_GHz: tuple[float, float] = (0.1, 100.0)

    @model_validator(mode="after")
    def _box(self):
        self.to_bounds()
        return self

    def to_bounds(self) -> CavityBounds:
        return CavityBounds(self.omega0_offset_GHz, self.omega_c_offset_GHz, self.kappa_GHz)


class CavityBlock(StrictModel):
    emitter: str = "snv"
    omega_s_GHz: float = Field(96.0, gt=0)
    delta_omega_s_GHz: float = 100.0
    cross_fraction: float = Field(0.01, ge=0, lt=1)
    include_cross_talk: bool = True
    V_eff: float = Field(1.8, gt=0)
    n: float = Field(2.417, gt=0)
    eps_r: float = Field(5.7, gt=0)
    optimize: bool = True
    bounds: BoundsBlock = Field(default_factory=BoundsBlock)
    fixed: Optional[TripleBlock] = None
    integrals: IntegralSource = IntegralSource.AUTO

    @field_validator("emitter")
    @classmethod
    def _known_emitter(cls, value: str) -> str:
        return get_emitter(value).id

    @model_validator(mode="after")
    def _triple_given(self):
        if not self.optimize and self.fixed is None:
            raise ValueError("cavity.fixed is required when cavity.optimize is false")
        return self

    def geometry(self) -> CavityGeometry:
        return CavityGeometry(self.V_eff, self.n, self.eps_r)


# === CONTROL ===


class MicrowaveBlock(StrictModel):
    B_dc_T: float = Field(3.0, ge=0)
    B_ac_T: float = Field(1e-3, ge=0)
    theta_dc_rad: float = 0.0
    theta_ac_rad: float = math.pi / 2
    E_x: float = 6.3e-3
    eps_xy: float = 2.5e-3
    phonon_rate_per_ns: float = Field(1.0, ge=0)
    spin_dephasing_per_ns: float = Field(0.0, ge=0)
    spin_orbit_GHz: float = Field(850.0, gt=0)
    strain_susceptibility_GHz: float = 11200.0
    mode: MicrowaveMode = MicrowaveMode.FULL
    gate_time_ns: Optional[float] = Field(None, ge=0)

    def to_config(self, temperature_K: float) -> MicrowaveConfig:
        return MicrowaveConfig(
            B_dc_T=self.B_dc_T,
            B_ac_T=self.B_ac_T,
            theta_dc=self.theta_dc_rad,
            theta_ac=self.theta_ac_rad,
            E_x=self.E_x,
            eps_xy=self.eps_xy,
            temperature_K=temperature_K,
            phonon_rate_per_ns=self.phonon_rate_per_ns,
            spin_dephasing_per_ns=self.spin_dephasing_per_ns,
            spin_orbit_GHz=self.spin_orbit_GHz,
            strain_susceptibility_GHz=self.strain_susceptibility_GHz,
            mode=self.mode,
            gate_time_ns=self.gate_time_ns,
        )


class OpticalBlock(StrictModel):
    B_dc_T: float = 3.0
    theta_dc_deg: float = 43.11
    tau_pi8_ps: float = Field(88.33, gt=0)
    E1_V_per_m: float = Field(4.07740e5, ge=0)
    E2_V_per_m: float = Field(4.27642e5, ge=0)
    lambda1_nm: float = Field(619.1, gt=0)
    lambda2_nm: float = Field(619.1, gt=0)
    model_path: Optional[str] = None

    @model_validator(mode="after")
    def _locked_field(self):
        self.to_config(0.1)
        return self

    def to_config(self, temperature_K: float) -> OpticalConfig:
        return OpticalConfig(
            B_dc_T=self.B_dc_T,
            theta_dc_deg=self.theta_dc_deg,
            tau_pi8_ps=self.tau_pi8_ps,
            E1_V_per_m=self.E1_V_per_m,
            E2_V_per_m=self.E2_V_per_m,
            lambda1_nm=self.lambda1_nm,
            lambda2_nm=self.lambda2_nm,
            temperature_K=temperature_K,
            model_path=self.model_path,
        )


class ControlBlock(StrictModel):
    model: ControlKind = ControlKind.IDEAL
    temperature_K: float = Field(0.1, ge=0.1, le=4.0)
    gate_fidelity: float = Field(0.99, gt=0.5, le=1.0)
    microwave: MicrowaveBlock = Field(default_factory=MicrowaveBlock)
    optical: OpticalBlock = Field(default_factory=OpticalBlock)


# === RESOURCES AND SOLVER ===


class ResourcesBlock(StrictModel):
    L_readin_m: float = Field(100.0, ge=0)
    L_readout_m: float = Field(100.0, ge=0)
    c_fiber_m_per_s: float = Field(2.0e8, gt=1e8, lt=3e8)
    T_s_s: float = Field(0.0, ge=0)
    T_m_ps: float = Field(100.0, ge=0)
    lambda_mw_m: Optional[float] = Field(None, gt=0)


class SolverBlock(StrictModel):
    """Unset values fall back to the process settings."""

    langevin_rtol: Optional[float] = Field(None, gt=0)
    langevin_atol: Optional[float] = Field(None, gt=0)
    langevin_e0: Optional[float] = Field(None, gt=0)
    lindblad_rtol: Optional[float] = Field(None, gt=0)
    lindblad_atol: Optional[float] = Field(None, gt=0)
    optimizer_budget: Optional[int] = Field(None, gt=0)
    seed: Optional[int] = None

    def settings_overrides(self) -> dict:
        names = ("langevin_rtol", "langevin_atol", "langevin_e0", "lindblad_rtol", "lindblad_atol", "optimizer_budget")
        return {name: getattr(self, name) for name in names if getattr(self, name) is not None}


class ScenarioConfig(StrictModel):
    name: str = "scenario"
    photon: PhotonBlock = Field(default_factory=PhotonBlock)
    cavity: CavityBlock = Field(default_factory=CavityBlock)
    control: ControlBlock = Field(default_factory=ControlBlock)
    resources: ResourcesBlock = Field(default_factory=ResourcesBlock)
    solver: SolverBlock = Field(default_factory=SolverBlock)


# === LOADING ===


def format_validation_error(exc: ValidationError) -> str:
    lines = []
    for err in exc.errors():
        path = ".".join(str(part) for part in err["loc"]) or "<root>"
        lines.append(f"{path}: {err['msg']}")
    return "; ".join(lines)


def parse_scenario(data: dict | None) -> ScenarioConfig:
    try:
        return ScenarioConfig.model_validate(data or {})
    except ValidationError as exc:
        raise ConfigError(format_validation_error(exc)) from exc


def load_scenario(path: str | Path) -> ScenarioConfig:
    """Read and validate a scenario file; OSError propagates for I/O failures."""
    text = Path(path).read_text()
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: not a valid YAML/JSON document ({exc})") from exc
    if data is not None and not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be a mapping")
    return parse_scenario(data)


def config_hash(cfg: ScenarioConfig) -> str:
    canonical = json.dumps(cfg.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()
