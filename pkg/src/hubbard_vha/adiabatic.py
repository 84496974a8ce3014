"""Trotterised adiabatic baseline on the same gate sequence as the VHA."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .noise import NoiseTable
from .vha import VhaProblem

TAU_MIN = 0.25
TAU_MAX = 10.0
TAU_POINTS = 40


def adiabatic_parameters(n: int, tau: float, t: float = 1.0) -> np.ndarray:
    """``n x 5`` angles reproducing ``prod_k exp(-i tau/n H0) exp(-i tau/n k/n V)``.

    ``tau`` is in units of ``1/t``; the hopping groups get ``-tau/n`` and the
    interaction ``-(tau/n)(k/n)``. No finer splitting of the hopping part.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if tau < 0:
        raise ValueError("tau must be non-negative")
    dt = tau / (n * t)
    theta = np.full((n, 5), -dt)
    theta[:, 4] = -dt * np.arange(1, n + 1) / n
    return theta


def tau_grid(tau_min: float = TAU_MIN, tau_max: float = TAU_MAX, points: int = TAU_POINTS,
             include_zero: bool = True) -> np.ndarray:
    """Evenly spaced evolution times, optionally preceded by ``tau = 0``.

    ``tau = 0`` (no evolution) keeps the initial overlap available as a floor,
    which is the best the short evolutions can do for very small ``n``.
    """
    if points < 1 or tau_min <= 0 or tau_max < tau_min:
        raise ValueError("tau grid needs points >= 1 and 0 < tau_min <= tau_max")
    grid = np.linspace(tau_min, tau_max, points)
    return np.concatenate([[0.0], grid]) if include_zero else grid


@dataclass(frozen=True)
class TauScan:
    tau: float
    fidelity: float
    energy: float
    fidelities: np.ndarray


def optimize_tau(problem: VhaProblem, noise: NoiseTable | None = None, grid=None) -> TauScan:
    """Grid search over the evolution time, maximising the final-state fidelity."""
    grid = tau_grid() if grid is None else np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise ValueError("empty tau grid")
    t = problem.lattice.t
    fids = np.empty(grid.size)
    energies = np.empty(grid.size)
    for i, tau in enumerate(grid):
        psi = problem.final_state(adiabatic_parameters(problem.n_steps, tau, t), noise)
        fids[i] = problem.fidelity_of(psi)
        energies[i] = problem.energy_of(psi)
    best = int(np.argmax(fids))
    return TauScan(float(grid[best]), float(fids[best]), float(energies[best]), fids)
