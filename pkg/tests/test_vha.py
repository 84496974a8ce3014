import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings, strategies as st

from hubbard_vha.hamiltonian import build_sub_hamiltonian, hubbard_hamiltonian
from hubbard_vha.lattice import LatticeSpec
from hubbard_vha.noise import sample_noise
from hubbard_vha.vha import (
    VhaProblem,
    cached_problem,
    frozen_parameter_transfer,
    minimize_restarted,
    objective,
    optimize,
    start_parameter_sets,
)


@pytest.fixture(scope="module")
def prob22(lat22):
    return cached_problem(lat22, 2)


def test_baseline_start_sets():
    sets = {p.label: p.theta for p in start_parameter_sets(4, t=0.5)}
    assert list(sets) == ["adiabatic", "ramp", "uniform"]
    assert np.allclose(sets["adiabatic"][:, :4], 2.0)
    assert np.allclose(sets["adiabatic"][:, 4], [0.5, 1.0, 1.5, 2.0])
    assert np.allclose(sets["ramp"], np.repeat([[0.5], [1.0], [1.5], [2.0]], 5, axis=1))
    assert np.allclose(sets["uniform"], 0.5)


def test_improved_start_sets():
    sets = start_parameter_sets(5, "improved")
    assert len(sets) == 14
    labels = [p.label for p in sets]
    assert labels[3] == "adiabatic-short"
    assert labels[-1] == "uniform-r1.0"
    short = sets[3].theta
    assert np.allclose(short[:, 0], 0.2) and np.allclose(short[:, 4], np.arange(1, 6) / 25)
    assert np.allclose(sets[4].theta, 0.1)
    with pytest.raises(ValueError):
        start_parameter_sets(3, "fancy")


def test_identity_at_zero_parameters(prob22):
    truth = prob22.truth
    assert prob22.energy(np.zeros((2, 5))) == pytest.approx(truth.E0_expectation, abs=1e-12)
    assert prob22.fidelity(np.zeros((2, 5))) == pytest.approx(truth.initial_overlap, abs=1e-12)


def test_full_space_objective_agrees(prob22, lat22, rng):
    theta = rng.uniform(-1, 1, (2, 5))
    noise = sample_noise(prob22.circuit, 0.99, seed=3)
    H = hubbard_hamiltonian(lat22)
    slow = objective(theta, lat22, noise, prob22.truth.psi0, H)
    assert slow == pytest.approx(prob22.energy(theta, noise), abs=1e-12)


def test_objective_matches_dense_exponentials(prob22, lat22, rng):
    theta = rng.uniform(-1, 1, (2, 5))
    psi = prob22.truth.psi0.copy()
    for k in range(2):
        for alpha in range(1, 6):
            H_a = build_sub_hamiltonian(lat22, alpha).toarray()
            psi = scipy.linalg.expm(1j * theta[k, alpha - 1] * H_a) @ psi
    H = hubbard_hamiltonian(lat22)
    assert np.vdot(psi, H @ psi).real == pytest.approx(prob22.energy(theta), abs=1e-10)
    assert abs(np.vdot(prob22.truth.psig, psi)) == pytest.approx(prob22.fidelity(theta), abs=1e-10)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.floats(-3, 3), min_size=10, max_size=10), st.integers(0, 10_000))
def test_variational_bound(values, seed):
    prob = cached_problem(LatticeSpec(2, 2), 2)
    theta = np.array(values).reshape(2, 5)
    Eg = prob.truth.Eg
    assert prob.energy(theta) >= Eg - 1e-10
    assert prob.energy(theta, sample_noise(prob.circuit, 0.99, seed)) >= Eg - 1e-10


def test_minimize_restarted_quadratic():
    target = np.array([0.3, -1.2, 2.0])
    x, f, evals, converged = minimize_restarted(lambda x: float(np.sum((x - target) ** 2)), np.zeros(3), 5000)
    assert converged and evals <= 5000
    assert np.allclose(x, target, atol=1e-3) and f < 1e-6


def test_minimize_restarted_respects_cap():
    rosen = lambda x: float(np.sum(100 * (x[1:] - x[:-1] ** 2) ** 2 + (1 - x[:-1]) ** 2))
    _, _, evals, converged = minimize_restarted(rosen, np.zeros(12), 300)
    assert not converged
    assert evals <= 301


def test_optimize_picks_lowest_energy(prob22):
    res = optimize(prob22, max_evals=1500)
    assert len(res.starts) == 3
    assert res.final_energy == min(s.energy for s in res.starts)
    assert res.start_set_id in {"adiabatic", "ramp", "uniform"}
    assert res.evaluations == sum(s.evaluations for s in res.starts)
    assert res.final_energy >= prob22.truth.Eg - 1e-10
    assert res.final_fidelity == pytest.approx(prob22.fidelity(res.best_theta))


def test_optimize_deterministic(prob22):
    noise = sample_noise(prob22.circuit, 0.999, seed=5)
    a = optimize(prob22, noise, max_evals=800)
    b = optimize(prob22, noise, max_evals=800)
    assert a.final_energy == b.final_energy
    assert np.array_equal(a.best_theta, b.best_theta)


def test_frozen_transfer_at_zero_noise(prob22):
    theta = np.full((2, 5), 0.2)
    assert frozen_parameter_transfer(prob22, theta, None) == pytest.approx(prob22.fidelity(theta))
    noise = sample_noise(prob22.circuit, 0.999, seed=1)
    assert frozen_parameter_transfer(prob22, theta, noise) == pytest.approx(prob22.fidelity(theta, noise))


def test_problem_rejects_bad_noise(prob22):
    with pytest.raises(ValueError):
        prob22.energy(np.zeros((2, 5)), np.zeros(7))
