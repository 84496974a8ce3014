"""Statevector simulation of variational and adiabatic ground-state preparation
for the 2D Fermi-Hubbard model under quasi-static over-rotation gate errors."""

from .adiabatic import TauScan, adiabatic_parameters, optimize_tau, tau_grid
from .circuit import Circuit, GateKind, GateOp, compile_group, compile_vha, dump_circuit, gates_per_step
from .experiments import ExperimentConfig, TableResult, ground_truth_report, run_table
from .hamiltonian import (
    ConvergenceError,
    GroundTruth,
    build_sub_hamiltonian,
    ground_state,
    ground_truth,
    hubbard_hamiltonian,
    noninteracting_reference_state,
)
from .lattice import Direction, Edge, LatticeSpec, Spin, TermGroup, enumerate_edges, site_index, term_groups
from .noise import FidelitySpec, NoiseTable, fidelity_to_sigma, sample_noise
from .statevector import apply_gate, expectation, run_circuit, state_fidelity
from .vha import VhaProblem, VhaResult, frozen_parameter_transfer, objective, optimize, start_parameter_sets

__version__ = "0.1.0"

__all__ = [
    "Circuit", "ConvergenceError", "Direction", "Edge", "ExperimentConfig", "FidelitySpec", "GateKind",
    "GateOp", "GroundTruth", "LatticeSpec", "NoiseTable", "Spin", "TableResult", "TauScan", "TermGroup",
    "VhaProblem", "VhaResult", "adiabatic_parameters", "apply_gate", "build_sub_hamiltonian",
    "compile_group", "compile_vha", "dump_circuit", "enumerate_edges", "expectation", "fidelity_to_sigma",
    "frozen_parameter_transfer", "gates_per_step", "ground_state", "ground_truth", "ground_truth_report",
    "hubbard_hamiltonian", "noninteracting_reference_state", "objective", "optimize", "optimize_tau",
    "run_circuit", "run_table", "sample_noise", "site_index", "start_parameter_sets", "state_fidelity",
    "tau_grid", "term_groups",
]
