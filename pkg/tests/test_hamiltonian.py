import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings, strategies as st

from conftest import jw_annihilators, second_quantized_hubbard
from hubbard_vha.hamiltonian import (
    build_sub_hamiltonian,
    double_occupancy,
    full_basis,
    ground_state,
    ground_truth,
    hubbard_hamiltonian,
    noninteracting_reference_state,
    sector_basis,
    spin_counts,
)
from hubbard_vha.lattice import LatticeSpec


def test_jw_operators_anticommute():
    c = jw_annihilators(4)
    eye = np.eye(16)
    for a in range(4):
        for b in range(4):
            assert np.allclose(c[a] @ c[b].T + c[b].T @ c[a], eye * (a == b))
            assert np.allclose(c[a] @ c[b] + c[b] @ c[a], 0)


@pytest.mark.parametrize("shape", [(2, 2), (3, 1), (1, 3), (2, 1)])
def test_matches_second_quantized_oracle(shape):
    lat = LatticeSpec(*shape, t=1.0, U=2.0)
    H = hubbard_hamiltonian(lat).toarray()
    assert np.allclose(H, second_quantized_hubbard(lat), atol=1e-14)


def test_groups_sum_to_full_hamiltonian(lat22):
    total = sum(build_sub_hamiltonian(lat22, a) for a in range(1, 6))
    assert abs(total - hubbard_hamiltonian(lat22)).max() < 1e-14


def test_group_terms_commute(lat22):
    for alpha in (1, 3):
        H = build_sub_hamiltonian(lat22, alpha).toarray()
        assert np.allclose(H, H.T)
    lat = LatticeSpec(3, 2)
    H5 = build_sub_hamiltonian(lat, 5)
    assert sp.issparse(H5) and abs(H5 - sp.diags(H5.diagonal())).max() == 0


def test_number_conservation(lat22):
    H = hubbard_hamiltonian(lat22).toarray()
    n_up, n_dn = spin_counts(full_basis(lat22.n_qubits), lat22.M)
    for n in (n_up, n_dn):
        N = np.diag(n.astype(float))
        assert np.abs(H @ N - N @ H).max() == 0


def test_sector_restriction_matches_full(lat22):
    basis = sector_basis(lat22.M, 1, 1)
    full = hubbard_hamiltonian(lat22).toarray()
    assert np.allclose(hubbard_hamiltonian(lat22, basis=basis).toarray(), full[np.ix_(basis, basis)])


def test_double_occupancy_diagonal(lat22):
    d = double_occupancy(lat22)
    H0 = hubbard_hamiltonian(lat22, U=0.0)
    H = hubbard_hamiltonian(lat22)
    assert np.allclose((H - H0).diagonal(), lat22.U * d)


def test_noninteracting_spectrum(lat22):
    # 2x2 open square is a 4-ring: single-particle levels -2t, 0, 0, 2t
    E, _ = ground_state(hubbard_hamiltonian(lat22, U=0.0))
    assert E == pytest.approx(-4.0, abs=1e-10)


def test_ground_state_tolerance_stable(lat32):
    basis = sector_basis(lat32.M, 3, 3)
    H = hubbard_hamiltonian(lat32, basis=basis)
    e1, v1 = ground_state(H, dense_cutoff=0, tol=1e-9)
    e2, v2 = ground_state(H, dense_cutoff=0, tol=1e-10)
    e3, v3 = ground_state(H)
    assert abs(e1 - e2) < 1e-9 and abs(e1 - e3) < 1e-9
    assert abs(abs(np.vdot(v1, v3)) - 1) < 1e-8


def test_reference_state_2x2(lat22):
    ref = noninteracting_reference_state(lat22)
    assert ref.sector == (1, 1)
    assert np.linalg.norm(ref.psi) == pytest.approx(1.0)
    H0 = hubbard_hamiltonian(lat22, U=0.0)
    psi = ref.psi
    assert np.vdot(psi, H0 @ psi).real == pytest.approx(-4.0, abs=1e-3)


def test_ground_truth_2x2(lat22):
    gt = ground_truth(lat22)
    H = hubbard_hamiltonian(lat22)
    assert np.vdot(gt.psig, H @ gt.psig).real == pytest.approx(gt.Eg, abs=1e-10)
    assert gt.Eg <= gt.E0_expectation
    assert gt.initial_overlap == pytest.approx(0.9887, abs=5e-4)


def test_fock_ground_matches_sector_2x2(lat22):
    gt = ground_truth(lat22, fock_ground=True)
    assert gt.Eg_fock == pytest.approx(gt.Eg, abs=1e-9)


def test_refuses_oversized_lattice():
    with pytest.raises(ValueError):
        hubbard_hamiltonian(LatticeSpec(4, 3))


@settings(max_examples=20, deadline=None)
@given(st.lists(st.floats(-1, 1), min_size=16, max_size=16).filter(lambda v: np.linalg.norm(v) > 1e-3))
def test_variational_bound_in_sector(coeffs):
    lat = LatticeSpec(2, 2)
    basis = sector_basis(lat.M, 2, 2)
    H = hubbard_hamiltonian(lat, basis=basis)
    # (2, 2) has dimension 36; pad the random coefficients into it
    v = np.zeros(basis.size)
    v[:16] = coeffs
    v /= np.linalg.norm(v)
    Eg, _ = ground_state(H)
    assert v @ (H @ v) >= Eg - 1e-12
