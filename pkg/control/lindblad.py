"""Time-dependent Lindblad master equation solver.

Time and rates share one unit system chosen by the caller (the control models
use ns and rad/ns). Several initial states are integrated as one stacked ODE.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import numpy as np
from scipy.integrate import solve_ivp

from config import settings
from qcore.errors import ConfigError, SolverError, StateError
from qcore.operators import check_square, dag

logger = logging.getLogger(__name__)

Hamiltonian = Union[np.ndarray, Callable[[float], np.ndarray]]


@dataclass(frozen=True)
class LindbladSpec:
    """drho/dt = -i[H(t), rho] + sum_k rate_k (L rho L^dag - {L^dag L, rho}/2)."""

    dim: int
    hamiltonian: Hamiltonian
    dissipators: Sequence[tuple[float, np.ndarray]] = ()
    t_final: float = 0.0
    t_start: float = 0.0
    rtol: float = field(default_factory=lambda: settings.lindblad_rtol)
    atol: float = field(default_factory=lambda: settings.lindblad_atol)
    max_step: float = np.inf

    def __post_init__(self):
        if self.t_final < self.t_start:
            raise ConfigError(f"t_final {self.t_final} precedes t_start {self.t_start}")
        for rate, op in self.dissipators:
            if rate < 0:
                raise ConfigError(f"dissipator rate must be non-negative, got {rate}")
            if np.shape(op) != (self.dim, self.dim):
                raise ConfigError(f"dissipator shape {np.shape(op)} does not match dim {self.dim}")
        for t in {self.t_start, 0.5 * (self.t_start + self.t_final), self.t_final}:
            h = self.hamiltonian_at(t)
            scale = max(float(np.max(np.abs(h), initial=0.0)), 1e-300)
            if np.max(np.abs(h - dag(h)), initial=0.0) > 1e-10 * scale:
                raise ConfigError(f"Hamiltonian is not Hermitian at t = {t}")

    @property
    def is_static(self) -> bool:
        return not callable(self.hamiltonian)

    def hamiltonian_at(self, t: float) -> np.ndarray:
        h = self.hamiltonian(t) if callable(self.hamiltonian) else self.hamiltonian
        h = np.asarray(h, dtype=complex)
        if h.shape != (self.dim, self.dim):
            raise ConfigError(f"Hamiltonian shape {h.shape} does not match dim {self.dim}")
        return h

    def active_dissipators(self) -> list[tuple[float, np.ndarray]]:
        return [(float(r), np.asarray(op, dtype=complex)) for r, op in self.dissipators if r > 0]


def _rhs_factory(spec: LindbladSpec, count: int):
    d = spec.dim
    jumps = [(rate, op, dag(op), dag(op) @ op) for rate, op in spec.active_dissipators()]
    static = spec.hamiltonian_at(spec.t_start) if spec.is_static else None

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        rho = y.reshape(count, d, d)
        h = static if static is not None else spec.hamiltonian_at(t)
        out = -1j * (h @ rho - rho @ h)
        for rate, op, op_dag, op_sq in jumps:
            out += rate * (op @ rho @ op_dag - 0.5 * (op_sq @ rho + rho @ op_sq))
        return out.ravel()

    return rhs


def propagate_many(spec: LindbladSpec, states: Sequence[np.ndarray]) -> list[np.ndarray]:
    """Propagate several (not necessarily Hermitian) operators to t_final.

    Args:
        spec: Master equation and integration window
        states: Initial operators of shape (dim, dim)

    Returns:
        Final operators in the input order
    """
    stack = np.array([check_square(s, "rho0") for s in states], dtype=complex)
    if stack.shape[1:] != (spec.dim, spec.dim):
        raise StateError(f"initial states have shape {stack.shape[1:]}, expected dim {spec.dim}")
    if spec.t_final == spec.t_start:
        return [s.copy() for s in stack]

    sol = solve_ivp(
        _rhs_factory(spec, len(stack)),
        (spec.t_start, spec.t_final),
        stack.ravel(),
        method="DOP853",
        rtol=spec.rtol,
        atol=spec.atol,
        max_step=spec.max_step,
    )
    if not sol.success:
        raise SolverError(f"Lindblad integration failed: {sol.message}")
    final = sol.y[:, -1].reshape(stack.shape)

    out = []
    for initial, rho in zip(stack, final):
        tr0, tr1 = np.trace(initial), np.trace(rho)
        if abs(tr1 - tr0) > 10 * spec.rtol * max(1.0, abs(tr0)):
            logger.warning("Lindblad trace drift %.3e", abs(tr1 - tr0))
        if np.max(np.abs(initial - dag(initial))) <= settings.tol_herm:
            drift = float(np.max(np.abs(rho - dag(rho))))
            if drift > 1e-6:
                raise SolverError(f"Hermiticity drifted by {drift:.3e}")
            rho = (rho + dag(rho)) / 2
        out.append(rho)
    return out


def lindblad_propagate(spec: LindbladSpec, rho0: np.ndarray) -> np.ndarray:
    """rho(t_final) for a single initial state."""
    rho0 = check_square(rho0, "rho0")
    if np.max(np.abs(rho0 - dag(rho0))) <= settings.tol_herm:
        rho0 = (rho0 + dag(rho0)) / 2
    return propagate_many(spec, [rho0])[0]


def propagator(spec: LindbladSpec) -> np.ndarray:
    """Superoperator P with vec(rho(t_final)) = P vec(rho0), row-major vec."""
    d = spec.dim
    units = []
    for k in range(d * d):
        unit = np.zeros(d * d, dtype=complex)
        unit[k] = 1.0
        units.append(unit.reshape(d, d))
    finals = propagate_many(spec, units)
    return np.stack([f.ravel() for f in finals], axis=1)


def apply_propagator(prop: np.ndarray, rho: np.ndarray) -> np.ndarray:
    d = int(round(np.sqrt(prop.shape[0])))
    return (prop @ np.asarray(rho, dtype=complex).ravel()).reshape(d, d)
