"""Report documents written by the command-line runner.

Matrices are nested [re, im] pairs; every number must be finite.
"""

from __future__ import annotations

from datetime import datetime, timezone
from importlib import metadata
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from cavity.model import ALT_COOPERATIVITY_RATIO, cooperativities
from cavity.optimizer import GHZ
from config.scenario import config_hash
from memory.orchestrator import RoundTripResult
from qcore.channels import KrausSet, serialize_matrix

REPORT_VERSION = "1"

# Published values for the two example scenarios, for comparison only.
REFERENCE_VALUES = {
    "optical_round_trip_fidelity": 0.9840,
    "optical_approx_error": 8.53e-5,
    "optical_laser_power_W": [0.10e-9, 0.11e-9],
    "optical_T1_s": 1.04e-6,
    "microwave_round_trip_fidelity": 0.8321,
    "microwave_approx_error": 9.34e-6,
    "microwave_power_W": 0.31e-6,
    "microwave_T1_s": 1.24e-6,
}


class ReportModel(BaseModel):
    model_config = ConfigDict(extra="forbid", allow_inf_nan=False)


# === BLOCKS ===


class KrausReport(ReportModel):
    operators: list[list[list[list[float]]]]
    eigenvalues: list[float]
    significant: int
    cp_defect: float
    completeness_defect: float

    @classmethod
    def from_set(cls, kraus: KrausSet) -> "KrausReport":
        return cls(
            operators=[serialize_matrix(k) for k in kraus.operators],
            eigenvalues=[round(w, 15) + 0.0 for w in kraus.eigenvalues],
            significant=kraus.significant(),
            cp_defect=kraus.cp_defect,
            completeness_defect=kraus.completeness_defect(),
        )


class Provenance(ReportModel):
    config_hash: str
    seed: Optional[int] = None
    fast: bool = False
    versions: dict[str, str] = Field(default_factory=dict)


class CavityReport(ReportModel):
    omega0_offset_GHz: float
    omega_c_offset_GHz: float
    kappa_GHz: float
    omega_s_GHz: float
    delta_A_GHz: float
    delta_B_GHz: float
    cross_talk: bool
    cooperativities: dict[str, Optional[float]]
    alt_cooperativity_ratio: float = ALT_COOPERATIVITY_RATIO
    optimized: bool = False
    start_fidelity: Optional[float] = None
    evaluations: Optional[int] = None
    integrals: dict = Field(default_factory=dict)


class Fidelities(ReportModel):
    spin_photon: Optional[float] = None
    store: Optional[float] = None
    round_trip: Optional[float] = None
    readout: Optional[float] = None


class Probabilities(ReportModel):
    spin_photon: Optional[float] = None
    store: Optional[float] = None
    retrieve: Optional[float] = None
    combined: Optional[float] = None
    read_in_minus_branch: Optional[float] = None


class ResourcesReport(ReportModel):
    T1_s: float
    timing_s: dict[str, float]
    power: dict[str, Optional[float]]


class Report(ReportModel):
    report_version: str = REPORT_VERSION
    timestamp: str
    status: str
    failed_stage: Optional[str] = None
    error: Optional[str] = None
    scenario: dict
    provenance: Provenance
    rotation: Optional[dict] = None
    cavity: Optional[CavityReport] = None
    kraus_readin: Optional[KrausReport] = None
    kraus_readout: Optional[KrausReport] = None
    fidelities: Fidelities = Field(default_factory=Fidelities)
    success_probabilities: Probabilities = Field(default_factory=Probabilities)
    resources: Optional[ResourcesReport] = None
    warnings: list[str] = Field(default_factory=list)
    references: dict = Field(default_factory=lambda: dict(REFERENCE_VALUES))


# === BUILDERS ===


def package_versions() -> dict[str, str]:
    out = {}
    for name in ("numpy", "scipy", "pydantic"):
        try:
            out[name] = metadata.version(name)
        except metadata.PackageNotFoundError:
            out[name] = "unknown"
    return out


def _cavity_report(result: RoundTripResult) -> Optional[CavityReport]:
    cav = result.cavity
    if cav is None:
        return None
    omega_1A = cav.levels.omega_1A
    opt = result.optimization
    coop = {k: (None if v is None else float(v)) for k, v in cooperativities(cav).items()}
    return CavityReport(
        omega0_offset_GHz=(result.photon.omega0 - omega_1A) / GHZ,
        omega_c_offset_GHz=(cav.omega_c - omega_1A) / GHZ,
        kappa_GHz=cav.kappa / GHZ,
        omega_s_GHz=cav.levels.omega_s / GHZ,
        delta_A_GHz=cav.delta_A / GHZ,
        delta_B_GHz=cav.delta_B / GHZ,
        cross_talk=cav.has_cross_talk,
        cooperativities=coop,
        optimized=opt is not None,
        start_fidelity=None if opt is None else opt.start_fidelity,
        evaluations=None if opt is None else opt.evaluations,
        integrals={} if result.integrals is None else result.integrals.to_dict(),
    )


def _rotation_report(result: RoundTripResult) -> Optional[dict]:
    rot = result.rotation
    if rot is None:
        return None
    summary = rot.summary()
    summary["kraus_weights"] = [float(w) for w in summary["kraus_weights"]]
    return {k: (float(v) if isinstance(v, (np.floating, np.integer)) else v) for k, v in summary.items()}


def build_report(result: RoundTripResult, timestamp: str | None = None) -> Report:
    """Assemble the report from whatever stages completed."""
    sp = result.spin_photon
    failure = result.failure
    resources = None
    if result.processing_time is not None:
        resources = ResourcesReport(T1_s=result.processing_time, timing_s=result.timing, power=result.power)
    return Report(
        timestamp=timestamp or datetime.now(timezone.utc).isoformat(timespec="seconds"),
        status="success" if result.success else "failed",
        failed_stage=None if failure is None else failure.stage,
        error=None if failure is None else str(failure),
        scenario=result.scenario.model_dump(mode="json"),
        provenance=Provenance(
            config_hash=config_hash(result.scenario),
            seed=result.seed,
            fast=result.fast,
            versions=package_versions(),
        ),
        rotation=_rotation_report(result),
        cavity=_cavity_report(result),
        kraus_readin=None if result.read_in is None else KrausReport.from_set(result.read_in.kraus),
        kraus_readout=None if result.read_out is None else KrausReport.from_set(result.read_out.kraus),
        fidelities=Fidelities(
            spin_photon=None if sp is None else sp.fidelity,
            store=result.store_fidelity,
            round_trip=result.round_trip_fidelity,
            readout=result.readout_fidelity,
        ),
        success_probabilities=Probabilities(
            spin_photon=None if sp is None else sp.success_probability,
            store=result.store_probability,
            retrieve=result.retrieve_probability,
            combined=result.success_probability,
            read_in_minus_branch=result.minus_branch_probability,
        ),
        resources=resources,
        warnings=list(result.warnings),
    )
