"""Quasi-static over-rotation noise.

Each gate instance gets one Gaussian over-rotation, drawn once per run and
then held fixed while the parameters are optimised. The width follows from
the target averaged minimal gate fidelity through
``E[cos(dphi)] ~= 1 - Var(dphi) / 2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


def fidelity_to_sigma(fbar_min: float) -> float:
    if not 0.0 < fbar_min <= 1.0:
        raise ValueError(f"averaged minimal gate fidelity must lie in (0, 1], got {fbar_min}")
    return math.sqrt(2.0 * (1.0 - fbar_min))


@dataclass(frozen=True)
class FidelitySpec:
    fbar_min: float = 1.0

    @property
    def sigma(self) -> float:
        return fidelity_to_sigma(self.fbar_min)


@dataclass(frozen=True)
class NoiseTable:
    deltas: np.ndarray = field(repr=False)
    seed: int | None = None
    sigma: float = 0.0
    realization: int = 0

    def __post_init__(self):
        self.deltas.setflags(write=False)

    def __len__(self) -> int:
        return self.deltas.size

    @classmethod
    def zeros(cls, length: int) -> "NoiseTable":
        return cls(np.zeros(length))


def sample_noise(circuit, fidelity: FidelitySpec | float, seed: int, realization: int = 0) -> NoiseTable:
    """Draw one over-rotation per gate of ``circuit`` (or per gate count, if an int).

    ``fidelity`` is either a :class:`FidelitySpec` or an averaged minimal
    gate fidelity. The table depends only on the gate count, the width and
    ``seed``.
    """
    length = circuit if isinstance(circuit, (int, np.integer)) else len(circuit)
    spec = fidelity if isinstance(fidelity, FidelitySpec) else FidelitySpec(float(fidelity))
    sigma = spec.sigma
    if sigma == 0.0:
        deltas = np.zeros(length)
    else:
        deltas = np.random.default_rng(seed).normal(0.0, sigma, size=length)
    return NoiseTable(deltas, seed, sigma, realization)


def realization_seeds(base_seed: int, runs: int) -> list[int]:
    return [base_seed + r for r in range(runs)]
