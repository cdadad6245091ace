"""Global search over the cavity triple (w0, w_c, kappa).

The search runs in the unit cube (kappa mapped logarithmically). It evaluates
the heuristic start point, then alternates rounds of scrambled Sobol points
with a bounded Nelder-Mead polish of the incumbent. The evaluation sequence is
fixed by the seed alone; the budget only truncates it, so the best value found
never decreases when the budget grows.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize
from scipy.stats import qmc

from cavity.emitters import LevelStructure
from cavity.entanglement import spin_photon_metrics
from cavity.integrals import ReflectionIntegrals, spectral_integrals
from cavity.model import CavityGeometry, CavityModel, build_cavity
from config import settings
from photon.source import PhotonSourceSpec, lorentzian_spectrum
from qcore.errors import ConfigError, NumericalError

logger = logging.getLogger(__name__)

GHZ = 2 * math.pi * 1e9


class BudgetExhausted(Exception):
    """Internal signal: the evaluation budget is used up."""


@dataclass(frozen=True)
class CavityBounds:
    """Search box; frequencies as offsets from w_1A and kappa as HWHM, all in GHz."""

    omega0_offset_GHz: tuple[float, float] = (-20.0, 20.0)
    omega_c_offset_GHz: tuple[float, float] = (-20.0, 20.0)
    kappa_GHz: tuple[float, float] = (0.1, 100.0)

    def __post_init__(self):
        for name in ("omega0_offset_GHz", "omega_c_offset_GHz", "kappa_GHz"):
            lo, hi = getattr(self, name)
            if not (math.isfinite(lo) and math.isfinite(hi)) or not lo < hi:
                raise ConfigError(f"bounds.{name} = ({lo}, {hi}) is degenerate")
        if self.kappa_GHz[0] <= 0:
            raise ConfigError("bounds.kappa_GHz must be positive")

    def box(self, reference: float) -> tuple[np.ndarray, np.ndarray]:
        """Physical (lower, upper) for (w0, w_c, kappa) in rad/s."""
        lower = np.array([
            reference + self.omega0_offset_GHz[0] * GHZ,
            reference + self.omega_c_offset_GHz[0] * GHZ,
            self.kappa_GHz[0] * GHZ,
        ])
        upper = np.array([
            reference + self.omega0_offset_GHz[1] * GHZ,
            reference + self.omega_c_offset_GHz[1] * GHZ,
            self.kappa_GHz[1] * GHZ,
        ])
        return lower, upper


@dataclass
class SearchResult:
    x: np.ndarray
    value: float
    start_value: float
    evaluations: int
    trace: list[float]

    @property
    def improvement(self) -> float:
        return self.value - self.start_value


class _UnitCube:
    """Affine (or log-affine) map between [0, 1]^d and the physical box."""

    def __init__(self, lower: np.ndarray, upper: np.ndarray, log_axes: Sequence[int] = ()):
        self.lower = np.asarray(lower, dtype=float)
        self.upper = np.asarray(upper, dtype=float)
        self.log_axes = tuple(log_axes)
        if np.any(self.upper <= self.lower):
            raise ConfigError("search box is degenerate")
        if any(self.lower[i] <= 0 for i in self.log_axes):
            raise ConfigError("log-scaled axes need positive bounds")

    def to_physical(self, u: np.ndarray) -> np.ndarray:
        u = np.clip(np.asarray(u, dtype=float), 0.0, 1.0)
        # offsets are added to the lower edge so large references keep their precision
        x = self.lower + u * (self.upper - self.lower)
        for i in self.log_axes:
            x[i] = math.exp(math.log(self.lower[i]) + u[i] * math.log(self.upper[i] / self.lower[i]))
        return x

    def to_unit(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        u = (x - self.lower) / (self.upper - self.lower)
        for i in self.log_axes:
            u[i] = math.log(x[i] / self.lower[i]) / math.log(self.upper[i] / self.lower[i])
        return np.clip(u, 0.0, 1.0)


class _CountedObjective:
    def __init__(self, objective: Callable[[np.ndarray], float], cube: _UnitCube, budget: int):
        self.objective = objective
        self.cube = cube
        self.budget = budget
        self.calls = 0
        self.best_u: np.ndarray | None = None
        self.best_value = -math.inf
        self.non_finite = 0
        self.trace: list[float] = []

    def __call__(self, u: np.ndarray) -> float:
        if self.calls >= self.budget:
            raise BudgetExhausted
        self.calls += 1
        u = np.clip(np.asarray(u, dtype=float), 0.0, 1.0)
        value = float(self.objective(self.cube.to_physical(u)))
        if not math.isfinite(value):
            self.non_finite += 1
            value = -math.inf
        if value > self.best_value:
            self.best_value = value
            self.best_u = u.copy()
        self.trace.append(self.best_value)
        return value


def maximize_in_box(
    objective: Callable[[np.ndarray], float],
    lower: np.ndarray,
    upper: np.ndarray,
    start: np.ndarray,
    log_axes: Sequence[int] = (),
    budget: int | None = None,
    seed: int | None = None,
) -> SearchResult:
    """Deterministic global maximization of ``objective`` over a box.

    Args:
        objective: Function of the physical point
        lower, upper: Box corners
        start: Heuristic start point, evaluated first (clipped into the box)
        log_axes: Axes searched on a logarithmic scale
        budget: Maximum number of objective evaluations
        seed: Seed of the scrambled Sobol sequence

    Returns:
        SearchResult with the best point ever evaluated
    """
    budget = settings.optimizer_budget if budget is None else budget
    seed = settings.optimizer_seed if seed is None else seed
    if budget < 1:
        raise ConfigError(f"optimizer budget must be at least 1, got {budget}")
    cube = _UnitCube(lower, upper, log_axes)
    counted = _CountedObjective(objective, cube, budget)
    sampler = qmc.Sobol(d=len(cube.lower), scramble=True, seed=np.random.default_rng(seed))

    start_u = cube.to_unit(np.clip(start, cube.lower, cube.upper))
    start_value = -math.inf
    try:
        start_value = counted(start_u)
        while True:
            for u in sampler.random(settings.optimizer_round_samples):
                counted(u)
            minimize(
                lambda u: -counted(u),
                start_u if counted.best_u is None else counted.best_u,
                method="Nelder-Mead",
                bounds=[(0.0, 1.0)] * len(cube.lower),
                options={
                    "maxfev": settings.optimizer_polish_evals,
                    "xatol": 1e-10,
                    "fatol": 1e-13,
                },
            )
    except BudgetExhausted:
        pass

    if counted.non_finite:
        logger.warning("search: %d of %d evaluations were not finite", counted.non_finite, counted.calls)
    if counted.best_u is None:
        raise NumericalError(f"objective was not finite at any of {counted.calls} evaluated points")
    logger.info(
        "search finished after %d evaluations: best %.10f (start %.10f)",
        counted.calls, counted.best_value, start_value,
    )
    return SearchResult(
        x=cube.to_physical(counted.best_u),
        value=counted.best_value,
        start_value=start_value,
        evaluations=counted.calls,
        trace=counted.trace,
    )


def synthetic_objective(optimum: np.ndarray, lower: np.ndarray, upper: np.ndarray) -> Callable:
    """Separable quadratic landscape with maximum 1 at ``optimum``."""
    optimum = np.asarray(optimum, dtype=float)
    scale = np.asarray(upper, dtype=float) - np.asarray(lower, dtype=float)

    def objective(x: np.ndarray) -> float:
        return 1.0 - float(np.sum(((np.asarray(x) - optimum) / scale) ** 2))

    return objective


@dataclass(frozen=True)
class OptimizationResult:
    omega0: float
    cavity: CavityModel
    fidelity: float
    success_probability: float
    start_fidelity: float
    evaluations: int
    integrals: ReflectionIntegrals

    @property
    def triple(self) -> tuple[float, float, float]:
        return (self.omega0, self.cavity.omega_c, self.cavity.kappa)


def heuristic_start(levels: LevelStructure, spec: PhotonSourceSpec) -> np.ndarray:
    """w0 = w_c = w_1A with a bandwidth-matched kappa = gamma."""
    return np.array([levels.omega_1A, levels.omega_1A, spec.gamma])


def evaluate_triple(
    triple: Sequence[float],
    spec: PhotonSourceSpec,
    levels: LevelStructure,
    geometry: CavityGeometry | None = None,
) -> tuple[CavityModel, ReflectionIntegrals, float, float]:
    """Cavity, integrals and (F_sp, eta_sp) at one (w0, w_c, kappa) point, cross-talk neglected."""
    omega0, omega_c, kappa = (float(v) for v in triple)
    cav = build_cavity(omega_c, kappa, levels, geometry, include_cross_talk=False, lint=False)
    source = PhotonSourceSpec(omega0, spec.gamma, spec.alpha, spec.beta, spec.fidelity_F)
    integrals = spectral_integrals(lorentzian_spectrum(source), cav)
    metrics = spin_photon_metrics(integrals)
    return cav, integrals, metrics.fidelity, metrics.success_probability


def optimize_cavity(
    bounds: CavityBounds,
    spec: PhotonSourceSpec,
    levels: LevelStructure,
    geometry: CavityGeometry | None = None,
    budget: int | None = None,
    seed: int | None = None,
) -> OptimizationResult:
    """Maximize the spin-photon Bell fidelity F_sp over (w0, w_c, kappa)."""
    lower, upper = bounds.box(levels.omega_1A)

    def objective(x: np.ndarray) -> float:
        return evaluate_triple(x, spec, levels, geometry)[2]

    start = heuristic_start(levels, spec)
    search = maximize_in_box(objective, lower, upper, start, log_axes=(2,), budget=budget, seed=seed)
    cav, integrals, fidelity, eta = evaluate_triple(search.x, spec, levels, geometry)
    return OptimizationResult(
        omega0=float(search.x[0]),
        cavity=cav,
        fidelity=fidelity,
        success_probability=eta,
        start_fidelity=search.start_value,
        evaluations=search.evaluations,
        integrals=integrals,
    )
