"""Particle-number-sector simulator used inside the optimisation loops.

All gates conserve the number of particles in each spin block, so a state
starting in sector ``(n_up, n_dn)`` never leaves it. :class:`SectorEngine`
precomputes, for a fixed circuit structure, the sector positions each gate
touches and then runs whole circuits in one compiled loop. Results agree with
:func:`hubbard_vha.statevector.run_circuit` restricted to the sector.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .circuit import Circuit, GateKind


@njit(cache=True, nogil=True)
def _run(psi, kinds, ptr, first, second, angles):
    for g in range(kinds.size):
        phi = angles[g]
        lo = ptr[g]
        hi = ptr[g + 1]
        if kinds[g] == 0:
            c = np.cos(phi)
            s = -1j * np.sin(phi)
            for k in range(lo, hi):
                p = first[k]
                q = second[k]
                x = psi[p]
                y = psi[q]
                psi[p] = c * x + s * y
                psi[q] = c * y + s * x
        else:
            ph = np.exp(1j * phi)
            for k in range(lo, hi):
                psi[first[k]] *= ph
    return psi


class SectorEngine:
    """Compiled gate plan for one circuit structure on one sector basis."""

    def __init__(self, circuit: Circuit, basis: np.ndarray):
        self.circuit = circuit
        self.basis = np.asarray(basis, dtype=np.int64)
        first, second, ptr = [], [], [0]
        cache: dict[tuple, tuple[np.ndarray, np.ndarray]] = {}
        for kind, (a, b) in zip(circuit.kinds, circuit.qubits):
            key = (int(kind), int(a), int(b))
            if key not in cache:
                cache[key] = self._positions(*key)
            f, s = cache[key]
            first.append(f)
            second.append(s)
            ptr.append(ptr[-1] + f.size)
        self._kinds = np.ascontiguousarray(circuit.kinds, dtype=np.int64)
        self._ptr = np.array(ptr, dtype=np.int64)
        # second[k] is only read for T gates; phase gates repeat their positions
        self._first = np.concatenate(first or [np.zeros(0)]).astype(np.int64)
        self._second = np.concatenate(second or [np.zeros(0)]).astype(np.int64)

    def _positions(self, kind: int, a: int, b: int):
        basis = self.basis
        bit_a = (basis >> a) & 1
        bit_b = (basis >> b) & 1
        if kind == GateKind.ONSITE:
            p = np.nonzero((bit_a == 1) & (bit_b == 1))[0]
            return p, p
        p = np.nonzero((bit_a == 1) & (bit_b == 0))[0]
        if kind == GateKind.CZ:
            return p, p
        q = np.searchsorted(basis, basis[p] ^ ((1 << a) | (1 << b)))
        return p, q

    @property
    def dim(self) -> int:
        return self.basis.size

    def run(self, psi: np.ndarray, angles: np.ndarray) -> np.ndarray:
        """Apply the circuit with explicit per-gate angles to a copy of ``psi``."""
        out = np.array(psi, dtype=np.complex128, copy=True)
        angles = np.ascontiguousarray(angles, dtype=np.float64)
        if angles.shape != (self._kinds.size,):
            raise ValueError(f"expected {self._kinds.size} angles, got {angles.shape}")
        return _run(out, self._kinds, self._ptr, self._first, self._second, angles)

    def run_theta(self, psi: np.ndarray, theta, deltas=None) -> np.ndarray:
        angles = self.circuit.angles_for(theta)
        if deltas is not None:
            angles = angles + deltas
        return self.run(psi, angles)
