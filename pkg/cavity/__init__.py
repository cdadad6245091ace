"""Cavity reflection model, spin-photon entanglement and cavity optimization."""

from cavity.coupling import coupling_strength, dipole_from_rate, mode_volume, natural_decay_rate
from cavity.emitters import (
    DEFAULT_EMITTER,
    EMITTERS,
    TRANSITIONS,
    EmitterConfig,
    LevelStructure,
    get_emitter,
    level_structure,
    list_emitters_table,
)
from cavity.entanglement import (
    EntanglementMetrics,
    entanglement_metrics,
    measured_spin_states,
    recovered_spin_state,
    spin_photon_metrics,
    target_state,
)
from cavity.integrals import ReflectionIntegrals, lorentzian_integrals, spectral_integrals
from cavity.model import (
    ALT_COOPERATIVITY_RATIO,
    CavityGeometry,
    CavityModel,
    build_cavity,
    cavity_lints,
    cooperativities,
    cooperativity,
)
from cavity.optimizer import (
    CavityBounds,
    OptimizationResult,
    SearchResult,
    evaluate_triple,
    heuristic_start,
    maximize_in_box,
    optimize_cavity,
    synthetic_objective,
)
from cavity.reflection import ReflectionBranch, reflection_branch, reflection_coefficient

__all__ = [
    "ALT_COOPERATIVITY_RATIO",
    "CavityBounds",
    "CavityGeometry",
    "CavityModel",
    "DEFAULT_EMITTER",
    "EMITTERS",
    "EmitterConfig",
    "EntanglementMetrics",
    "LevelStructure",
    "OptimizationResult",
    "ReflectionBranch",
    "ReflectionIntegrals",
    "SearchResult",
    "TRANSITIONS",
    "build_cavity",
    "cavity_lints",
    "cooperativities",
    "cooperativity",
    "coupling_strength",
    "dipole_from_rate",
    "entanglement_metrics",
    "evaluate_triple",
    "get_emitter",
    "heuristic_start",
    "level_structure",
    "list_emitters_table",
    "lorentzian_integrals",
    "maximize_in_box",
    "measured_spin_states",
    "mode_volume",
    "natural_decay_rate",
    "optimize_cavity",
    "recovered_spin_state",
    "reflection_branch",
    "reflection_coefficient",
    "spectral_integrals",
    "spin_photon_metrics",
    "synthetic_objective",
    "target_state",
]
