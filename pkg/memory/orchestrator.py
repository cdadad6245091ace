"""Round-trip pipeline: rotation, cavity, integrals, both channels, store and retrieve.

Each stage runs under its name; a failure is wrapped in ``StageError`` and
recorded on the result instead of propagating, so partial results stay
available for the report.
"""

from __future__ import annotations

import logging
from contextlib import contextmanager
from dataclasses import dataclass, field

import numpy as np

from cavity.emitters import LevelStructure, get_emitter, level_structure
from cavity.entanglement import EntanglementMetrics, spin_photon_metrics, target_state
from cavity.integrals import ReflectionIntegrals, spectral_integrals
from cavity.model import CavityModel, build_cavity, cavity_lints
from cavity.optimizer import GHZ, OptimizationResult, optimize_cavity
from config import settings
from config.scenario import ControlKind, IntegralSource, ScenarioConfig
from control.rotation import (
    RotationChannel,
    ideal_rotation,
    phenomenological_rotation,
    rotation_channel,
)
from langevin.integrals import langevin_integrals
from memory.channels import (
    PLUS,
    ReadInChannel,
    ReadOutChannel,
    ideal_memory_unitary,
    read_in_channel,
    read_out_channel,
    retrieve,
    store,
)
from photon.source import PhotonSourceSpec, lorentzian_spectrum
from qcore.errors import QMemError
from qcore.fidelity import mixed_fidelity
from qcore.operators import basis_op, dag
from resources.budget import PowerConfig, TimingConfig, power_budget, processing_time

logger = logging.getLogger(__name__)

STAGES = ("rotation", "levels", "cavity", "integrals", "read_in", "read_out", "store", "retrieve", "resources")


class StageError(QMemError):
    """A pipeline stage failed; ``cause`` is the original exception."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"[{stage}] {type(cause).__name__}: {cause}")
        self.stage = stage
        self.cause = cause


@dataclass
class RoundTripResult:
    scenario: ScenarioConfig
    fast: bool = False
    seed: int | None = None
    completed: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    failure: StageError | None = None

    rotation: RotationChannel | None = None
    levels: LevelStructure | None = None
    optimization: OptimizationResult | None = None
    cavity: CavityModel | None = None
    photon: PhotonSourceSpec | None = None
    integrals: ReflectionIntegrals | None = None
    spin_photon: EntanglementMetrics | None = None
    read_in: ReadInChannel | None = None
    read_out: ReadOutChannel | None = None

    stored_state: np.ndarray | None = None
    store_probability: float | None = None
    store_fidelity: float | None = None
    minus_branch_probability: float | None = None
    output_state: np.ndarray | None = None
    retrieve_probability: float | None = None
    round_trip_fidelity: float | None = None
    readout_fidelity: float | None = None

    processing_time: float | None = None
    timing: dict[str, float] = field(default_factory=dict)
    power: dict[str, float | None] = field(default_factory=dict)

    @property
    def success(self) -> bool:
        return self.failure is None

    @property
    def success_probability(self) -> float | None:
        if self.store_probability is None or self.retrieve_probability is None:
            return None
        return self.store_probability * self.retrieve_probability

    def get_error_context(self) -> str:
        """Human-readable summary of what failed and what had completed."""
        errors = []
        if self.failure is not None:
            errors.append(f"STAGE FAILED: {self.failure.stage}\n  {self.failure}")
        if self.completed:
            errors.append("COMPLETED STAGES: " + ", ".join(self.completed))
        if self.warnings:
            errors.append("WARNINGS:\n" + "\n".join(f"  - {w}" for w in self.warnings))
        return "\n\n".join(errors)

    def raise_for_failure(self) -> None:
        if self.failure is not None:
            raise self.failure


class RoundTrip:
    """Runs the stages of one scenario in order."""

    def __init__(self, scenario: ScenarioConfig, fast: bool = False, seed: int | None = None):
        self.cfg = scenario
        self.fast = fast
        if seed is None:
            seed = scenario.solver.seed if scenario.solver.seed is not None else settings.optimizer_seed
        self.result = RoundTripResult(scenario, fast=fast, seed=seed)

    @contextmanager
    def _stage(self, name: str):
        logger.info("stage %s", name)
        try:
            yield
        except QMemError as exc:
            raise StageError(name, exc) from exc
        except (ValueError, ArithmeticError, OSError, np.linalg.LinAlgError) as exc:
            raise StageError(name, exc) from exc
        self.result.completed.append(name)

    def run(self, stages: tuple[str, ...] = STAGES) -> RoundTripResult:
        unknown = [s for s in stages if s not in STAGES]
        if unknown:
            raise ValueError(f"unknown stages {unknown}")
        with settings.overridden(**self.cfg.solver.settings_overrides()):
            try:
                for name in STAGES:
                    if name in stages:
                        with self._stage(name):
                            getattr(self, f"_{name}")()
            except StageError as exc:
                logger.error("%s", exc)
                self.result.failure = exc
        return self.result

    # === STAGES ===

    def _rotation(self) -> None:
        control = self.cfg.control
        if self.fast:
            rot = phenomenological_rotation(control.gate_fidelity)
        elif control.model is ControlKind.IDEAL:
            rot = ideal_rotation()
        elif control.model is ControlKind.PHENOMENOLOGICAL:
            rot = phenomenological_rotation(control.gate_fidelity)
        elif control.model is ControlKind.MICROWAVE:
            rot = rotation_channel("microwave", control.microwave.to_config(control.temperature_K))
        else:
            rot = rotation_channel("optical", control.optical.to_config(control.temperature_K))
        self.result.rotation = rot

    def _levels(self) -> None:
        cav_cfg = self.cfg.cavity
        rot = self.result.rotation
        omega_s = rot.omega_s if rot is not None and rot.omega_s else cav_cfg.omega_s_GHz * GHZ
        levels = level_structure(
            get_emitter(cav_cfg.emitter),
            cav_cfg.delta_omega_s_GHz * GHZ,
            omega_s,
            cav_cfg.cross_fraction,
            cav_cfg.n,
        )
        self.result.levels = levels

    def _cavity(self) -> None:
        cav_cfg = self.cfg.cavity
        levels = self.result.levels
        geometry = cav_cfg.geometry()
        template = self.cfg.photon.to_spec(levels.omega_1A)
        if cav_cfg.optimize:
            opt = optimize_cavity(
                cav_cfg.bounds.to_bounds(), template, levels, geometry,
                budget=settings.optimizer_budget, seed=self.result.seed,
            )
            self.result.optimization = opt
            omega0, omega_c, kappa = opt.triple
        else:
            fixed = cav_cfg.fixed
            omega0 = levels.omega_1A + fixed.omega0_offset_GHz * GHZ
            omega_c = levels.omega_1A + fixed.omega_c_offset_GHz * GHZ
            kappa = fixed.kappa_GHz * GHZ
        photon = self.cfg.photon.to_spec(omega0)
        cav = build_cavity(
            omega_c, kappa, levels, geometry,
            include_cross_talk=cav_cfg.include_cross_talk,
            photon_gamma=photon.gamma, lint=False,
        )
        self.result.warnings.extend(cavity_lints(cav, photon.gamma))
        for warning in self.result.warnings:
            logger.warning("cavity lint: %s", warning)
        self.result.cavity = cav
        self.result.photon = photon

    def _integrals(self) -> None:
        cav, photon = self.result.cavity, self.result.photon
        source = self.cfg.cavity.integrals
        if source is IntegralSource.AUTO:
            source = IntegralSource.TIME if cav.has_cross_talk else IntegralSource.FREQUENCY
        if self.fast and source is IntegralSource.TIME:
            source = IntegralSource.FREQUENCY
        if source is IntegralSource.IDEAL:
            integrals = ReflectionIntegrals.ideal()
        elif source is IntegralSource.FREQUENCY:
            integrals = spectral_integrals(lorentzian_spectrum(photon), cav)
        else:
            integrals, _ = langevin_integrals(cav, photon)
        self.result.integrals = integrals
        self.result.spin_photon = spin_photon_metrics(integrals)

    def _read_in(self) -> None:
        self.result.read_in = read_in_channel(self.result.photon, self.result.integrals, self.result.rotation)

    def _read_out(self) -> None:
        self.result.read_out = read_out_channel(self.result.rotation)

    def _store(self) -> None:
        r = self.result
        rho_ph = r.photon.state()
        r.stored_state, r.store_probability = store(rho_ph, r.read_in)
        r.store_fidelity = mixed_fidelity(r.stored_state, target_state(r.photon.alpha, r.photon.beta))
        r.minus_branch_probability = r.read_in.minus_probability(rho_ph)

    def _retrieve(self) -> None:
        r = self.result
        r.output_state, r.retrieve_probability = retrieve(r.stored_state, r.read_out)
        u = ideal_memory_unitary()
        target = u @ r.photon.pure_state() @ dag(u)
        r.round_trip_fidelity = mixed_fidelity(r.output_state, target)
        spin_one, _ = retrieve(basis_op(0, 0), r.read_out)
        r.readout_fidelity = mixed_fidelity(spin_one, np.outer(PLUS, PLUS.conj()))

    def _resources(self) -> None:
        r = self.result
        res = self.cfg.resources
        rot = r.rotation
        gate_time = rot.gate_time_ns * 1e-9
        gamma = 1.0 / r.photon.lifetime
        timing = TimingConfig(
            gamma_readin=gamma,
            gamma_readout=gamma,
            T_g_readin=gate_time,
            T_g_readout=gate_time,
            T_m=res.T_m_ps * 1e-12,
            T_s=res.T_s_s,
            L_readin=res.L_readin_m,
            L_readout=res.L_readout_m,
            c_fiber=res.c_fiber_m_per_s,
        )
        r.processing_time, r.timing = processing_time(timing)

        control = self.cfg.control
        optical = control.optical.to_config(control.temperature_K)
        uses_lasers = rot.model_tag.value == "optical"
        uses_microwave = rot.model_tag.value == "microwave"
        power_cfg = PowerConfig(
            E_1=optical.E1_V_per_m if uses_lasers else 0.0,
            E_2=optical.E2_V_per_m if uses_lasers else 0.0,
            lambda_1=optical.lambda1_nm * 1e-9,
            lambda_2=optical.lambda2_nm * 1e-9,
            sigma=optical.sigma_ns * 1e-9,
            B_ac=control.microwave.B_ac_T if uses_microwave else 0.0,
            lambda_mw=res.lambda_mw_m,
            n=self.cfg.cavity.n,
        )
        omega_s = rot.omega_s if rot.omega_s else r.levels.omega_s
        r.power = power_budget(power_cfg, omega_s)
        logger.info(
            "T_1 = %.4f us, P_laser = %.3e/%.3e W",
            r.processing_time * 1e6, r.power["P_laser_1_W"], r.power["P_laser_2_W"],
        )


def round_trip(scenario: ScenarioConfig, fast: bool = False, seed: int | None = None) -> RoundTripResult:
    """Run every stage; inspect ``success`` or call ``raise_for_failure``."""
    return RoundTrip(scenario, fast=fast, seed=seed).run()


def build_channels(scenario: ScenarioConfig, fast: bool = False, seed: int | None = None) -> RoundTripResult:
    """Stages up to both channels, without store/retrieve or resources."""
    return RoundTrip(scenario, fast=fast, seed=seed).run(STAGES[:6])


def optimize_only(scenario: ScenarioConfig, seed: int | None = None) -> RoundTripResult:
    """Level structure and cavity search only; w_s comes from the scenario."""
    return RoundTrip(scenario, seed=seed).run(("levels", "cavity"))
