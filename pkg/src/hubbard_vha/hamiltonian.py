"""Jordan-Wigner Hubbard operators and exact ground-state data.

Basis convention: bit ``b`` of a basis index is the occupation of qubit
``b + 1``; spin-up orbitals occupy the low ``M`` bits, spin-down the high
``M`` bits. Operators are ``scipy.sparse`` CSR matrices, either on the full
Fock space or on a sorted subset of basis indices (a particle-number
sector) passed as ``basis``.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.linalg
import scipy.sparse as sp
import scipy.sparse.linalg as sla

from .lattice import LatticeSpec, TermGroup, enumerate_edges, term_groups

log = logging.getLogger(__name__)

MAX_QUBITS = 20
DENSE_CUTOFF = 4096
#: Finite on-site perturbation (units of t) used to refine the reference state.
REFERENCE_PERTURBATION = 0.02


class ConvergenceError(RuntimeError):
    pass


def _check_size(n_qubits: int, max_qubits: int) -> None:
    if n_qubits > max_qubits:
        raise ValueError(f"{n_qubits} qubits exceeds the configured cap of {max_qubits}")


def full_basis(n_qubits: int) -> np.ndarray:
    return np.arange(1 << n_qubits, dtype=np.int64)


@lru_cache(maxsize=32)
def _sector_basis_cached(M: int, n_up: int, n_dn: int) -> np.ndarray:
    def configs(n):
        return np.array([sum(1 << b for b in c) for c in itertools.combinations(range(M), n)], dtype=np.int64)

    up, dn = configs(n_up), configs(n_dn)
    basis = (up[None, :] + (dn[:, None] << M)).ravel()
    basis.sort()
    basis.setflags(write=False)
    return basis


def sector_basis(M: int, n_up: int, n_dn: int) -> np.ndarray:
    """Sorted full-space indices with ``n_up`` spin-up and ``n_dn`` spin-down particles."""
    if not (0 <= n_up <= M and 0 <= n_dn <= M):
        raise ValueError(f"invalid sector ({n_up}, {n_dn}) for M={M}")
    return _sector_basis_cached(M, n_up, n_dn)


def spin_counts(index: np.ndarray | int, M: int) -> tuple:
    index = np.asarray(index, dtype=np.int64)
    mask = np.int64((1 << M) - 1)
    return np.bitwise_count(index & mask), np.bitwise_count(index >> M)


def _hop_entries(basis: np.ndarray, a: int, b: int, coeff: float):
    """Entries of ``coeff * (c_a^dag c_b + h.c.)`` for 0-based qubits ``a < b``."""
    if a > b:
        a, b = b, a
    occ_a = (basis >> a) & 1
    occ_b = (basis >> b) & 1
    cols = np.nonzero((occ_a == 0) & (occ_b == 1))[0]
    src = basis[cols]
    dst = src ^ ((1 << a) | (1 << b))
    rows = np.searchsorted(basis, dst)
    if rows.size and (rows.max() >= basis.size or np.any(basis[rows] != dst)):
        raise ValueError("basis is not closed under the hopping term")
    between = ((1 << b) - 1) & ~((1 << (a + 1)) - 1)
    sign = 1.0 - 2.0 * (np.bitwise_count(src & between) & 1)
    vals = coeff * sign
    return np.concatenate([rows, cols]), np.concatenate([cols, rows]), np.concatenate([vals, vals])


def _assemble(basis: np.ndarray, hops, onsite, t: float, U: float) -> sp.csr_matrix:
    dim = basis.size
    rows, cols, vals = [], [], []
    for a, b in hops:
        r, c, v = _hop_entries(basis, a, b, -t)
        rows.append(r)
        cols.append(c)
        vals.append(v)
    diag = np.zeros(dim)
    for a, b in onsite:
        diag += U * (((basis >> a) & 1) * ((basis >> b) & 1))
    if rows:
        off = sp.coo_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                            shape=(dim, dim))
    else:
        off = sp.coo_matrix((dim, dim))
    return (off + sp.diags(diag)).tocsr()


def group_terms(lattice: LatticeSpec, group: TermGroup):
    """0-based qubit pairs of the hopping and on-site terms in ``group``."""
    M = lattice.M
    if group.is_onsite:
        return [], [(j - 1, j - 1 + M) for j in group.sites]
    hops = [(e.j - 1 + off, e.jprime - 1 + off) for off in (0, M) for e in group.edges]
    return sorted(hops), []


def build_sub_hamiltonian(lattice: LatticeSpec, group: TermGroup | int, basis: np.ndarray | None = None,
                          max_qubits: int = MAX_QUBITS) -> sp.csr_matrix:
    """Jordan-Wigner image of one term group, including its coupling constants."""
    _check_size(lattice.n_qubits, max_qubits)
    if isinstance(group, (int, np.integer)):
        if not 1 <= group <= 5:
            raise ValueError(f"group index must be in 1..5, got {group}")
        group = term_groups(lattice)[group - 1]
    if basis is None:
        basis = full_basis(lattice.n_qubits)
    hops, onsite = group_terms(lattice, group)
    return _assemble(basis, hops, onsite, lattice.t, lattice.U)


def hubbard_hamiltonian(lattice: LatticeSpec, basis: np.ndarray | None = None, U: float | None = None,
                        max_qubits: int = MAX_QUBITS) -> sp.csr_matrix:
    """Full Hubbard Hamiltonian built straight from the edge list."""
    _check_size(lattice.n_qubits, max_qubits)
    if basis is None:
        basis = full_basis(lattice.n_qubits)
    M = lattice.M
    hops = [(e.j - 1 + off, e.jprime - 1 + off) for off in (0, M) for e in enumerate_edges(lattice)]
    onsite = [(j, j + M) for j in range(M)]
    return _assemble(basis, hops, onsite, lattice.t, lattice.U if U is None else U)


def double_occupancy(lattice: LatticeSpec, basis: np.ndarray | None = None) -> np.ndarray:
    """Diagonal of ``sum_j n_{j,up} n_{j,down}``."""
    if basis is None:
        basis = full_basis(lattice.n_qubits)
    M = lattice.M
    return np.bitwise_count(basis & (basis >> M) & ((1 << M) - 1)).astype(float)


def fix_phase(vec: np.ndarray) -> np.ndarray:
    """Rotate the global phase so the first largest-magnitude amplitude is real positive."""
    k = int(np.argmax(np.abs(vec)))
    return vec * (abs(vec[k]) / vec[k])


def ground_state(H, dense_cutoff: int = DENSE_CUTOFF, tol: float = 1e-9, maxiter: int | None = None):
    """Lowest eigenpair of a Hermitian operator.

    Dense ``eigh`` up to ``dense_cutoff``, Lanczos (ARPACK) above. The
    returned vector is normalised with the phase fixed by :func:`fix_phase`.

    Raises
    ------
    ConvergenceError
        If the residual ``|H psi - E psi|`` exceeds ``tol`` times the operator scale.
    """
    dim = H.shape[0]
    if dim <= dense_cutoff:
        dense = H.toarray() if sp.issparse(H) else np.asarray(H)
        w, v = scipy.linalg.eigh(dense, subset_by_index=[0, 0])
        energy, vec = float(w[0]), v[:, 0]
    else:
        v0 = np.random.default_rng(0).standard_normal(dim).astype(H.dtype)
        try:
            w, v = sla.eigsh(H, k=1, which="SA", v0=v0, tol=1e-13, maxiter=maxiter)
        except sla.ArpackNoConvergence as exc:
            raise ConvergenceError(f"Lanczos did not converge: {exc}") from exc
        energy, vec = float(w[0]), v[:, 0]
    vec = fix_phase(vec / np.linalg.norm(vec))
    scale = max(1.0, float(abs(H).sum(axis=1).max()))
    residual = float(np.linalg.norm(H @ vec - energy * vec))
    if residual > tol * scale:
        raise ConvergenceError(f"ground state residual {residual:.3e} above {tol * scale:.3e}")
    return energy, vec


def embed(vec: np.ndarray, basis: np.ndarray, n_qubits: int) -> np.ndarray:
    out = np.zeros(1 << n_qubits, dtype=np.complex128)
    out[basis] = vec
    return out


def _single_spin_levels(lattice: LatticeSpec):
    """Eigenpairs of the one-spin hopping problem, resolved by particle number."""
    M = lattice.M
    energies, vectors, counts = [], [], []
    for n in range(M + 1):
        basis = sector_basis(M, n, 0)
        h = hubbard_hamiltonian(lattice, basis=basis, U=0.0).toarray().real
        w, v = np.linalg.eigh(h)
        for k in range(w.size):
            vec = np.zeros(1 << M)
            vec[basis] = v[:, k]
            energies.append(w[k])
            vectors.append(vec)
            counts.append(n)
    return np.array(energies), np.array(vectors).T, np.array(counts)


@dataclass(frozen=True)
class ReferenceState:
    psi: np.ndarray
    sector: tuple[int, int]
    degeneracy: int
    first_order_shift: float


def noninteracting_reference_state(lattice: LatticeSpec, perturbation: float = REFERENCE_PERTURBATION,
                                   degeneracy_tol: float = 1e-9, max_degeneracy: int = 64) -> ReferenceState:
    """Pick the non-interacting ground state that connects to the interacting one.

    The ``U = 0`` ground space is degenerate. The on-site operator is
    projected into it and its lowest eigenvector chosen (first-order
    degenerate perturbation theory); this fixes the particle-number sector.
    With ``perturbation > 0`` the state is then replaced by the ground state
    of ``H(U = perturbation * t)`` inside that sector.
    """
    _check_size(lattice.n_qubits, MAX_QUBITS)
    M = lattice.M
    energies, vectors, counts = _single_spin_levels(lattice)
    tol = degeneracy_tol * lattice.t
    low = np.nonzero(energies <= energies.min() + tol)[0]
    g = low.size * low.size
    if g > max_degeneracy:
        raise ValueError(f"non-interacting ground space has dimension {g} > {max_degeneracy}")
    G = vectors[:, low]
    occ = [((np.arange(1 << M) >> j) & 1).astype(float) for j in range(M)]
    A = [G.T @ (o[:, None] * G) for o in occ]
    # subspace vector (d, u) is kron(G[:, d], G[:, u]); index = u + (d << M)
    P = sum(np.kron(a, a) for a in A)
    pw, pv = np.linalg.eigh(P)
    shift = float(pw[0])
    lowest = np.nonzero(pw <= pw[0] + tol)[0]
    pair_counts = [(counts[low][u], counts[low][d]) for d in range(low.size) for u in range(low.size)]
    coeff = pv[:, 0]
    if lowest.size > 1:
        # tie: keep the lexicographically first (n_up, n_dn) sector among the lowest states
        weight = np.sum(np.abs(pv[:, lowest]) ** 2, axis=1)
        sector = min(c for c, w in zip(pair_counts, weight) if w > 1e-8)
        mask = np.array([c == sector for c in pair_counts])
        _, v_s = np.linalg.eigh(P[np.ix_(mask, mask)])
        coeff = np.zeros(P.shape[0])
        coeff[mask] = v_s[:, 0]
    psi = np.kron(G, G) @ coeff
    psi = psi / np.linalg.norm(psi)
    n_up, n_dn = spin_counts(np.nonzero(np.abs(psi) > 1e-10)[0], M)
    if np.ptp(n_up) or np.ptp(n_dn):
        raise ValueError("reference state does not have a definite particle number")
    sector = (int(n_up[0]), int(n_dn[0]))
    psi = psi.astype(np.complex128)
    if perturbation > 0:
        basis = sector_basis(M, *sector)
        H_eps = hubbard_hamiltonian(lattice, basis=basis, U=perturbation * lattice.t)
        _, vec = ground_state(H_eps)
        refined = embed(vec, basis, lattice.n_qubits)
        if abs(np.vdot(refined, psi)) < 0.5:
            raise ValueError("finite perturbation left the selected non-interacting state")
        psi = refined
    return ReferenceState(fix_phase(psi), sector, g, shift)


@dataclass(frozen=True)
class GroundTruth:
    """Exact reference data for one lattice.

    ``psig`` is the ground state inside the particle-number sector of
    ``psi0``; ``Eg_fock`` (when computed) is the minimum over all sectors.
    """

    lattice: LatticeSpec
    psi0: np.ndarray
    psig: np.ndarray
    Eg: float
    E0_expectation: float
    sector: tuple[int, int]
    Eg_fock: float | None = None

    @property
    def initial_overlap(self) -> float:
        return float(abs(np.vdot(self.psig, self.psi0)))


def ground_truth(lattice: LatticeSpec, perturbation: float = REFERENCE_PERTURBATION,
                 fock_ground: bool = False) -> GroundTruth:
    ref = noninteracting_reference_state(lattice, perturbation=perturbation)
    basis = sector_basis(lattice.M, *ref.sector)
    H = hubbard_hamiltonian(lattice, basis=basis)
    Eg, vec = ground_state(H)
    psig = embed(vec, basis, lattice.n_qubits)
    psi0_s = ref.psi[basis]
    E0 = float(np.vdot(psi0_s, H @ psi0_s).real)
    Eg_fock = None
    if fock_ground:
        Eg_fock, _ = ground_state(hubbard_hamiltonian(lattice))
        if Eg_fock < Eg - 1e-9 * lattice.t:
            log.warning("Fock-space ground energy %.6f lies outside the reference sector %s (%.6f)",
                        Eg_fock, ref.sector, Eg)
    return GroundTruth(lattice, ref.psi, psig, Eg, E0, ref.sector, Eg_fock)
