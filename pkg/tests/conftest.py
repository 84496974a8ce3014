import numpy as np
import pytest

from hubbard_vha.lattice import LatticeSpec


@pytest.fixture(scope="session")
def lat22():
    return LatticeSpec(2, 2)


@pytest.fixture(scope="session")
def lat32():
    return LatticeSpec(3, 2)


@pytest.fixture(scope="session")
def lat33():
    return LatticeSpec(3, 3)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def jw_annihilators(n_qubits: int) -> list[np.ndarray]:
    """Dense fermionic annihilation operators built from scratch.

    Mode ``q`` is bit ``q`` of the basis index. ``c_q`` removes a particle
    from bit ``q`` with sign ``(-1)^(number of occupied bits below q)``.
    """
    dim = 1 << n_qubits
    idx = np.arange(dim)
    ops = []
    for q in range(n_qubits):
        c = np.zeros((dim, dim))
        occupied = idx[(idx >> q) & 1 == 1]
        for state in occupied:
            below = bin(state & ((1 << q) - 1)).count("1")
            c[state ^ (1 << q), state] = (-1) ** below
        ops.append(c)
    return ops


def second_quantized_hubbard(lattice: LatticeSpec) -> np.ndarray:
    """Hubbard Hamiltonian from explicit fermion operators, independent of the package."""
    M = lattice.M
    c = jw_annihilators(2 * M)
    n = [ci.T @ ci for ci in c]
    H = np.zeros_like(c[0])
    for row in range(lattice.nrows):
        for col in range(lattice.ncols):
            j = row * lattice.ncols + col
            nbrs = []
            if col + 1 < lattice.ncols:
                nbrs.append(j + 1)
            if row + 1 < lattice.nrows:
                nbrs.append(j + lattice.ncols)
            for k in nbrs:
                for off in (0, M):
                    hop = c[j + off].T @ c[k + off]
                    H -= lattice.t * (hop + hop.T)
            H += lattice.U * n[j] @ n[j + M]
    return H


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
