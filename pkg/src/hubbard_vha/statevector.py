"""Full Fock-space gate kernels.

States are complex arrays whose axis 0 runs over the ``2**n_qubits``
occupation basis states (bit ``b`` of the index = qubit ``b``). Extra
trailing axes are carried along, which lets the same kernels build dense
unitaries column-wise. Kernels act in place and also return the array.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .circuit import Circuit, GateKind, GateOp

BOTH_OCCUPIED = "both_occupied"
FIRST_OCCUPIED_SECOND_EMPTY = "first_occupied_second_empty"


def _n_qubits(state: np.ndarray) -> int:
    dim = state.shape[0]
    n = dim.bit_length() - 1
    if dim != 1 << n:
        raise ValueError(f"state dimension {dim} is not a power of two")
    return n


@lru_cache(maxsize=512)
def _masked_indices(n_qubits: int, a: int, b: int, bit_a: int, bit_b: int) -> np.ndarray:
    if a == b or not (0 <= a < n_qubits and 0 <= b < n_qubits):
        raise ValueError(f"invalid qubit pair ({a}, {b}) for {n_qubits} qubits")
    idx = np.arange(1 << n_qubits, dtype=np.int64)
    sel = idx[(((idx >> a) & 1) == bit_a) & (((idx >> b) & 1) == bit_b)]
    sel.setflags(write=False)
    return sel


def apply_t_gate(state: np.ndarray, a: int, b: int, phi: float) -> np.ndarray:
    """Rotate every ``(1_a 0_b, 0_a 1_b)`` amplitude pair by ``exp(-i phi X)``."""
    n = _n_qubits(state)
    i10 = _masked_indices(n, a, b, 1, 0)
    i01 = i10 ^ ((1 << a) | (1 << b))
    c, s = np.cos(phi), np.sin(phi)
    x = state[i10]
    y = state[i01]
    state[i10] = c * x - 1j * s * y
    state[i01] = c * y - 1j * s * x
    return state


def apply_phase_pair_gate(state: np.ndarray, a: int, b: int, phi: float, mode: str) -> np.ndarray:
    n = _n_qubits(state)
    if mode == BOTH_OCCUPIED:
        sel = _masked_indices(n, a, b, 1, 1)
    elif mode == FIRST_OCCUPIED_SECOND_EMPTY:
        sel = _masked_indices(n, a, b, 1, 0)
    else:
        raise ValueError(f"unknown phase mode {mode!r}")
    state[sel] *= np.exp(1j * phi)
    return state


def apply_gate(state: np.ndarray, gate: GateOp, delta: float = 0.0) -> np.ndarray:
    a, b = gate.qubits
    phi = gate.angle + delta
    if gate.kind == GateKind.T:
        return apply_t_gate(state, a, b, phi)
    if gate.kind == GateKind.ONSITE:
        return apply_phase_pair_gate(state, a, b, phi, BOTH_OCCUPIED)
    return apply_phase_pair_gate(state, a, b, phi, FIRST_OCCUPIED_SECOND_EMPTY)


def run_circuit(state: np.ndarray, circuit: Circuit, noise_table=None) -> np.ndarray:
    """Apply ``circuit`` to a copy of ``state`` with each angle shifted by its over-rotation."""
    deltas = np.zeros(len(circuit)) if noise_table is None else np.asarray(getattr(noise_table, "deltas", noise_table))
    if deltas.shape != (len(circuit),):
        raise ValueError(f"noise table has {deltas.size} entries for {len(circuit)} gates")
    out = np.array(state, dtype=np.complex128, copy=True)
    for gate, delta in zip(circuit.gates, deltas):
        apply_gate(out, gate, float(delta))
    return out


def expectation(state: np.ndarray, H) -> float:
    value = np.vdot(state, H @ state)
    if abs(value.imag) > 1e-10 * max(1.0, abs(value.real)):
        raise ValueError(f"expectation value has imaginary part {value.imag:.3e}; operator not Hermitian?")
    return float(value.real)


def state_fidelity(a: np.ndarray, b: np.ndarray) -> float:
    """Unsquared overlap ``|<a|b>|``."""
    return float(min(1.0, abs(np.vdot(a, b))))
