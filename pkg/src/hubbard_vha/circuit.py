"""Gate-level compilation of the Hubbard term-group exponentials.

Every exponential ``exp(i theta H_alpha)`` becomes a sequence of two-qubit
gates of three kinds:

``T``       ``exp(-i phi (s+_a s-_b + s+_b s-_a))``, ``phi = theta * t``
``ONSITE``  ``exp(i phi n_a n_b)``, ``phi = theta * U``
``CZ``      ``exp(i phi n_a (1 - n_b))``, ``phi = pi``

Jordan-Wigner strings are produced by sandwiching a ``T`` gate between CZ
gates that tie each intermediate qubit to the lower hop endpoint. Qubits are
0-based bit positions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum
from typing import IO, Iterable, Sequence

import numpy as np
import scipy.linalg

from .hamiltonian import build_sub_hamiltonian, group_terms
from .lattice import LatticeSpec, term_groups

__all__ = [
    "Circuit",
    "GateKind",
    "GateOp",
    "compile_group",
    "compile_vha",
    "dump_circuit",
    "gates_per_step",
    "oracle_check",
    "circuit_unitary",
]


class GateKind(IntEnum):
    T = 0
    ONSITE = 1
    CZ = 2


@dataclass(frozen=True)
class GateOp:
    kind: GateKind
    qubits: tuple[int, int]
    angle: float


def _group_structure(lattice: LatticeSpec, alpha: int):
    """Yield ``(kind, a, b, scale, offset)`` so that ``angle = theta * scale + offset``."""
    if not 1 <= alpha <= 5:
        raise ValueError(f"group index must be in 1..5, got {alpha}")
    group = term_groups(lattice)[alpha - 1]
    hops, onsite = group_terms(lattice, group)
    for a, b in onsite:
        yield GateKind.ONSITE, a, b, lattice.U, 0.0
    for a, b in hops:
        string = range(a + 1, b)
        for l in string:
            yield GateKind.CZ, l, a, 0.0, math.pi
        yield GateKind.T, a, b, lattice.t, 0.0
        for l in reversed(string):
            yield GateKind.CZ, l, a, 0.0, math.pi


def compile_group(lattice: LatticeSpec, alpha: int, theta: float) -> list[GateOp]:
    """Gates realising ``exp(i * theta * H_alpha)`` exactly (the terms commute)."""
    return [GateOp(kind, (a, b), theta * scale + offset)
            for kind, a, b, scale, offset in _group_structure(lattice, alpha)]


def gates_per_step(lattice: LatticeSpec) -> int:
    return sum(1 for alpha in range(1, 6) for _ in _group_structure(lattice, alpha))


class Circuit:
    """Ordered gate list for ``n`` VHA steps.

    The structure (gate kinds and qubits) depends only on the lattice and
    ``n``; the angles are an affine function of the ``n x 5`` parameter
    matrix, so :meth:`angles_for` re-evaluates them without recompiling.
    Step ``k = 1`` is applied to the state first.
    """

    def __init__(self, lattice: LatticeSpec, n_steps: int, theta: np.ndarray | None = None):
        if n_steps < 1:
            raise ValueError("need at least one step")
        self.lattice = lattice
        self.n_steps = n_steps
        kinds, qa, qb, param, scale, offset = [], [], [], [], [], []
        self.layout: list[tuple[int, int, slice]] = []
        for k in range(n_steps):
            for alpha in range(1, 6):
                start = len(kinds)
                for kind, a, b, sc, off in _group_structure(lattice, alpha):
                    kinds.append(kind)
                    qa.append(a)
                    qb.append(b)
                    param.append(5 * k + alpha - 1)
                    scale.append(sc)
                    offset.append(off)
                self.layout.append((k + 1, alpha, slice(start, len(kinds))))
        self.kinds = np.array(kinds, dtype=np.int8)
        self.qubits = np.array([qa, qb], dtype=np.int64).T.reshape(-1, 2)
        self._param = np.array(param, dtype=np.int64)
        self._scale = np.array(scale, dtype=float)
        self._offset = np.array(offset, dtype=float)
        self.theta = np.zeros((n_steps, 5)) if theta is None else self._check_theta(theta)
        for arr in (self.kinds, self.qubits, self._param, self._scale, self._offset):
            arr.setflags(write=False)

    def _check_theta(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        if theta.shape != (self.n_steps, 5):
            raise ValueError(f"theta must have shape ({self.n_steps}, 5), got {theta.shape}")
        return theta

    def angles_for(self, theta) -> np.ndarray:
        theta = self._check_theta(theta)
        return theta.ravel()[self._param] * self._scale + self._offset

    @property
    def angles(self) -> np.ndarray:
        return self.angles_for(self.theta)

    def __len__(self) -> int:
        return self.kinds.size

    @property
    def gates(self) -> list[GateOp]:
        return [GateOp(GateKind(k), (int(a), int(b)), float(phi))
                for k, (a, b), phi in zip(self.kinds, self.qubits, self.angles)]

    def counts(self) -> dict[str, int]:
        return {kind.name: int(np.sum(self.kinds == kind)) for kind in GateKind}

    def with_theta(self, theta) -> "Circuit":
        out = object.__new__(Circuit)
        out.__dict__.update(self.__dict__)
        out.theta = self._check_theta(theta)
        return out


def compile_vha(lattice: LatticeSpec, theta) -> Circuit:
    theta = np.asarray(theta, dtype=float)
    if theta.ndim != 2 or theta.shape[1] != 5 or theta.shape[0] < 1:
        raise ValueError(f"theta must have shape (n, 5) with n >= 1, got {theta.shape}")
    return Circuit(lattice, theta.shape[0], theta)


def circuit_unitary(gates: Iterable[GateOp], n_qubits: int, deltas: Sequence[float] | None = None) -> np.ndarray:
    """Dense matrix of a gate sequence (small systems only)."""
    from .statevector import apply_gate

    mat = np.eye(1 << n_qubits, dtype=np.complex128)
    gates = list(gates)
    deltas = np.zeros(len(gates)) if deltas is None else deltas
    for gate, delta in zip(gates, deltas):
        apply_gate(mat, gate, delta)
    return mat


def oracle_check(lattice: LatticeSpec, alpha: int, theta: float, max_qubits: int = 12) -> float:
    """Max-norm distance between the compiled group and ``expm(i theta H_alpha)``."""
    if lattice.n_qubits > max_qubits:
        raise ValueError(f"dense oracle refused for {lattice.n_qubits} qubits (limit {max_qubits})")
    compiled = circuit_unitary(compile_group(lattice, alpha, theta), lattice.n_qubits)
    H = build_sub_hamiltonian(lattice, alpha).toarray()
    exact = scipy.linalg.expm(1j * theta * H)
    return float(np.max(np.abs(compiled - exact)))


def dump_circuit(circuit: Circuit, fh: IO[str], deltas: Sequence[float] | None = None) -> None:
    """Write one gate per line: ``kind a b angle over_rotation``."""
    deltas = np.zeros(len(circuit)) if deltas is None else np.asarray(deltas)
    if deltas.size != len(circuit):
        raise ValueError("over-rotation table does not match the circuit length")
    for gate, delta in zip(circuit.gates, deltas):
        fh.write(f"{gate.kind.name} {gate.qubits[0]} {gate.qubits[1]} {gate.angle:.17g} {delta:.17g}\n")
