"""Variational Hamiltonian ansatz: objective, start parameters, optimisation."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.optimize import minimize

from .circuit import Circuit, compile_vha
from .engine import SectorEngine
from .hamiltonian import GroundTruth, ground_truth, hubbard_hamiltonian, sector_basis
from .lattice import LatticeSpec
from .noise import NoiseTable
from .statevector import expectation, run_circuit

log = logging.getLogger(__name__)

FAMILIES = ("baseline", "improved")
EVALS_PER_PARAMETER = 400
ENERGY_TOL = 1e-8


@lru_cache(maxsize=16)
def cached_ground_truth(lattice: LatticeSpec) -> GroundTruth:
    return ground_truth(lattice)


def objective(theta, lattice: LatticeSpec, noise_table, psi0: np.ndarray, H) -> float:
    """Energy of the noisy VHA state, evaluated on the full Fock space.

    Slow reference path; :class:`VhaProblem` computes the same number on the
    particle-number sector.
    """
    circuit = compile_vha(lattice, theta)
    return expectation(run_circuit(psi0, circuit, noise_table), H)


class VhaProblem:
    """Everything needed to evaluate the ansatz with ``n_steps`` steps on one lattice."""

    def __init__(self, lattice: LatticeSpec, n_steps: int, truth: GroundTruth | None = None):
        self.lattice = lattice
        self.n_steps = n_steps
        self.truth = cached_ground_truth(lattice) if truth is None else truth
        self.circuit = Circuit(lattice, n_steps)
        self.basis = sector_basis(lattice.M, *self.truth.sector)
        self.engine = SectorEngine(self.circuit, self.basis)
        self.H = hubbard_hamiltonian(lattice, basis=self.basis)
        self.psi0 = np.ascontiguousarray(self.truth.psi0[self.basis])
        self.psig = np.ascontiguousarray(self.truth.psig[self.basis])

    @property
    def n_params(self) -> int:
        return 5 * self.n_steps

    def _deltas(self, noise):
        if noise is None:
            return None
        deltas = np.asarray(getattr(noise, "deltas", noise))
        if deltas.shape != (len(self.circuit),):
            raise ValueError(f"noise table has {deltas.size} entries for {len(self.circuit)} gates")
        return deltas

    def final_state(self, theta, noise=None) -> np.ndarray:
        theta = np.asarray(theta, dtype=float).reshape(self.n_steps, 5)
        return self.engine.run_theta(self.psi0, theta, self._deltas(noise))

    def energy_of(self, psi: np.ndarray) -> float:
        return float(np.vdot(psi, self.H @ psi).real)

    def fidelity_of(self, psi: np.ndarray) -> float:
        return float(min(1.0, abs(np.vdot(self.psig, psi))))

    def energy(self, theta, noise=None) -> float:
        return self.energy_of(self.final_state(theta, noise))

    def fidelity(self, theta, noise=None) -> float:
        return self.fidelity_of(self.final_state(theta, noise))


@lru_cache(maxsize=32)
def cached_problem(lattice: LatticeSpec, n_steps: int) -> VhaProblem:
    return VhaProblem(lattice, n_steps)


@dataclass(frozen=True)
class ParameterSet:
    label: str
    theta: np.ndarray = field(repr=False)


def start_parameter_sets(n: int, family: str = "baseline", t: float = 1.0) -> list[ParameterSet]:
    """Starting points for the optimiser.

    ``baseline``: adiabatic-like (hops ``1/t``, interaction ramped ``k/n``),
    everything ramped, and uniform ``1/(n t)``. ``improved`` adds the
    adiabatic-like set for total time ``1/t`` and uniform ``r/t`` for
    ``r = 0.1 ... 1.0``.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if family not in FAMILIES:
        raise ValueError(f"unknown start family {family!r}; choose from {FAMILIES}")
    ramp = np.arange(1, n + 1)[:, None] / n
    adiabatic = np.ones((n, 5)) / t
    adiabatic[:, 4] = ramp[:, 0] / t
    sets = [
        ParameterSet("adiabatic", adiabatic),
        ParameterSet("ramp", np.repeat(ramp, 5, axis=1) / t),
        ParameterSet("uniform", np.full((n, 5), 1.0 / (n * t))),
    ]
    if family == "improved":
        sets.append(ParameterSet("adiabatic-short", adiabatic / n))
        for r in np.round(np.arange(1, 11) / 10, 1):
            sets.append(ParameterSet(f"uniform-r{r:.1f}", np.full((n, 5), r / t)))
    return sets


def minimize_restarted(fun, x0, max_evals: int, ftol: float = ENERGY_TOL, step: float = 0.1):
    """Nelder-Mead restarted from its own best point until a restart gains less than ``ftol``.

    Returns ``(x, f, evaluations, converged)``.
    """
    x = np.asarray(x0, dtype=float).copy()
    dim = x.size
    evals = 0
    fx = fun(x)
    evals += 1
    converged = False
    while evals < max_evals:
        simplex = np.vstack([x, x + step * np.eye(dim)])
        res = minimize(fun, x, method="Nelder-Mead",
                       options=dict(initial_simplex=simplex, maxfev=max_evals - evals,
                                    fatol=ftol, xatol=1e-6, adaptive=dim > 10))
        evals += res.nfev
        gain = fx - res.fun
        if res.fun < fx:
            x, fx = res.x, float(res.fun)
        if gain < ftol:
            converged = True
            break
        step = max(step * 0.5, 1e-3)
    return x, fx, evals, converged


@dataclass
class StartResult:
    label: str
    theta: np.ndarray = field(repr=False)
    energy: float
    fidelity: float
    evaluations: int
    converged: bool


@dataclass
class VhaResult:
    best_theta: np.ndarray = field(repr=False)
    final_energy: float
    final_fidelity: float
    evaluations: int
    start_set_id: str
    converged: bool
    starts: list[StartResult] = field(default_factory=list, repr=False)


def optimize(problem: VhaProblem, noise: NoiseTable | None = None, family: str = "baseline",
             max_evals: int | None = None, ftol: float = ENERGY_TOL) -> VhaResult:
    """Minimise the energy from every start set and keep the lowest-energy outcome."""
    budget = EVALS_PER_PARAMETER * problem.n_params if max_evals is None else max_evals
    t = problem.lattice.t
    deltas = problem._deltas(noise)
    engine, psi0, H, shape = problem.engine, problem.psi0, problem.H, (problem.n_steps, 5)
    angles_for = problem.circuit.angles_for

    def energy(x):
        angles = angles_for(x.reshape(shape))
        if deltas is not None:
            angles = angles + deltas
        psi = engine.run(psi0, angles)
        return float(np.vdot(psi, H @ psi).real)

    starts = []
    for pset in start_parameter_sets(problem.n_steps, family, t):
        x, fx, evals, converged = minimize_restarted(energy, pset.theta.ravel(), budget, ftol)
        theta = x.reshape(shape)
        fid = problem.fidelity(theta, deltas)
        if not converged:
            log.info("start %s hit the %d-evaluation cap (E=%.8f)", pset.label, budget, fx)
        starts.append(StartResult(pset.label, theta, fx, fid, evals, converged))
    best = min(starts, key=lambda s: s.energy)
    return VhaResult(best.theta, best.energy, best.fidelity, sum(s.evaluations for s in starts),
                     best.label, best.converged, starts)


def frozen_parameter_transfer(problem: VhaProblem, theta_star, noise: NoiseTable | None) -> float:
    """Fidelity of the noisy circuit run at parameters optimised without noise."""
    return problem.fidelity(theta_star, noise)
