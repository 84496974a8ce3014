"""Config-driven experiment grids over step counts and gate fidelities."""

from __future__ import annotations

import configparser
import csv
import io
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import adiabatic as adia
from .circuit import gates_per_step
from .hamiltonian import MAX_QUBITS, ground_truth
from .lattice import LatticeSpec
from .noise import sample_noise
from .vha import VhaProblem, cached_ground_truth, cached_problem, optimize

log = logging.getLogger(__name__)

METHODS = ("vha", "adiabatic", "frozen_transfer")
DEFAULT_RUNS = {"vha": 100, "adiabatic": 10_000, "frozen_transfer": 100}


@dataclass
class ExperimentConfig:
    lattice: str = "2x2"
    t: float = 1.0
    U: float = 2.0
    method: tuple[str, ...] = ("vha",)
    n: tuple[int, ...] = (2, 3, 4, 5)
    fidelity: tuple[float, ...] = (1.0,)
    runs: int | None = None
    seed: int = 0
    starts: str = "baseline"
    tau_min: float = adia.TAU_MIN
    tau_max: float = adia.TAU_MAX
    tau_points: int = adia.TAU_POINTS
    out: str | None = None
    workers: int = 1
    max_evals: int | None = None

    def __post_init__(self):
        self.method = tuple(m.replace("-", "_") for m in _as_tuple(self.method, str))
        self.n = _as_tuple(self.n, int)
        self.fidelity = _as_tuple(self.fidelity, float)
        bad = [m for m in self.method if m not in METHODS]
        if bad:
            raise ValueError(f"unknown method(s) {bad}; choose from {METHODS}")
        if self.runs is not None and self.runs < 1:
            raise ValueError("runs must be at least 1")
        if any(k < 1 for k in self.n):
            raise ValueError("step counts must be positive")
        if self.starts not in ("baseline", "improved"):
            raise ValueError(f"unknown start family {self.starts!r}")

    @property
    def lattice_spec(self) -> LatticeSpec:
        return LatticeSpec.parse(self.lattice, self.t, self.U)

    @property
    def tau_grid(self) -> np.ndarray:
        return adia.tau_grid(self.tau_min, self.tau_max, self.tau_points, include_zero=True)

    def runs_for(self, method: str, fbar: float) -> int:
        if fbar == 1.0:
            return 1
        return self.runs if self.runs is not None else DEFAULT_RUNS[method]

    @classmethod
    def from_file(cls, path: str | Path, **overrides) -> "ExperimentConfig":
        """Read flat ``key = value`` lines; ``overrides`` that are not None win."""
        parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
        parser.read_string("[experiment]\n" + Path(path).read_text())
        values = {k.replace("-", "_"): v for k, v in parser["experiment"].items()}
        known = {f.name for f in fields(cls)}
        unknown = set(values) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**_coerce(values))


def _as_tuple(value, typ) -> tuple:
    if isinstance(value, str):
        return tuple(typ(v) for v in value.replace(" ", "").split(",") if v)
    if isinstance(value, Iterable):
        return tuple(typ(v) for v in value)
    return (typ(value),)


def _coerce(values: dict) -> dict:
    out = {}
    for f in fields(ExperimentConfig):
        if f.name not in values:
            continue
        v = values[f.name]
        if isinstance(v, str):
            if f.name in ("t", "U", "tau_min", "tau_max"):
                v = float(v)
            elif f.name in ("seed", "tau_points", "workers"):
                v = int(v)
            elif f.name in ("runs", "max_evals"):
                v = None if v.lower() in ("", "none", "default") else int(v)
        out[f.name] = v
    return out


CSV_FIELDS = ("method", "lattice", "n", "fbar_min", "seed", "start_set", "energy", "fidelity",
              "evaluations", "converged")


@dataclass
class CellSummary:
    method: str
    n: int
    fbar_min: float
    runs: int
    mean_fidelity: float
    std_fidelity: float
    mean_energy: float

    @property
    def percent(self) -> str:
        return f"{100 * self.mean_fidelity:.2f}"


@dataclass
class TableResult:
    config: ExperimentConfig
    rows: list[dict] = field(default_factory=list)
    cells: list[CellSummary] = field(default_factory=list)

    def cell(self, method: str, n: int, fbar: float) -> CellSummary:
        for c in self.cells:
            if c.method == method and c.n == n and c.fbar_min == fbar:
                return c
        raise KeyError((method, n, fbar))

    def to_csv(self) -> str:
        buf = io.StringIO()
        adiabatic_only = set(self.config.method) == {"adiabatic"}
        header = [("tau" if (h == "start_set" and adiabatic_only) else h) for h in CSV_FIELDS]
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for row in self.rows:
            writer.writerow([_fmt(row[h]) for h in CSV_FIELDS])
        return buf.getvalue()

    def format_table(self) -> str:
        lines = []
        fbars = list(self.config.fidelity)
        for method in self.config.method:
            lines.append(f"{method}  {self.config.lattice}  final state fidelity [%] (runs)")
            rows = []
            for n in self.config.n:
                cells = [self.cell(method, n, f) for f in fbars]
                rows.append((n, [f"{c.percent} ± {100 * c.std_fidelity:.2f} ({c.runs})" for c in cells]))
            width = max([len(text) for _, texts in rows for text in texts] + [9])
            lines.append("   n | " + " | ".join(f"F={100 * f:.2f}".rjust(width) for f in fbars))
            for n, texts in rows:
                lines.append(f"{n:>4} | " + " | ".join(text.rjust(width) for text in texts))
            lines.append("")
        return "\n".join(lines)


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _check_feasible(lattice: LatticeSpec) -> None:
    if lattice.n_qubits > MAX_QUBITS:
        raise ValueError(f"lattice {lattice.label} needs {lattice.n_qubits} qubits; the cap is {MAX_QUBITS}")


def _realization(task) -> dict:
    method, lattice, n, fbar, seed, cfg, theta_star = task
    problem = cached_problem(lattice, n)
    noise = sample_noise(problem.circuit, fbar, seed)
    row = dict(method=method, lattice=lattice.label, n=n, fbar_min=fbar, seed=seed)
    if method == "vha":
        res = optimize(problem, noise, cfg.starts, max_evals=cfg.max_evals)
        row.update(start_set=res.start_set_id, energy=res.final_energy, fidelity=res.final_fidelity,
                   evaluations=res.evaluations, converged=res.converged)
    elif method == "adiabatic":
        scan = adia.optimize_tau(problem, noise, cfg.tau_grid)
        row.update(start_set=repr(scan.tau), energy=scan.energy, fidelity=scan.fidelity,
                   evaluations=len(cfg.tau_grid), converged=True)
    else:
        label, theta, converged = theta_star
        psi = problem.final_state(theta, noise)
        row.update(start_set=label, energy=problem.energy_of(psi), fidelity=problem.fidelity_of(psi),
                   evaluations=1, converged=converged)
    return row


def run_table(config: ExperimentConfig) -> TableResult:
    """Run every (method, n, fidelity) cell and aggregate over noise realizations.

    Realization ``r`` of every cell uses seed ``config.seed + r``, so methods
    compared at the same ``(n, fidelity)`` see identical over-rotations.
    """
    lattice = config.lattice_spec
    _check_feasible(lattice)
    result = TableResult(config)
    tasks = []
    for method in config.method:
        for n in config.n:
            theta_star = None
            if method == "frozen_transfer":
                ref = optimize(cached_problem(lattice, n), None, config.starts, max_evals=config.max_evals)
                theta_star = (ref.start_set_id, ref.best_theta, ref.converged)
            for fbar in config.fidelity:
                for r in range(config.runs_for(method, fbar)):
                    tasks.append((method, lattice, n, fbar, config.seed + r, config, theta_star))
    if config.workers > 1:
        with ProcessPoolExecutor(config.workers) as pool:
            rows = list(pool.map(_realization, tasks, chunksize=max(1, len(tasks) // (8 * config.workers))))
    else:
        rows = [_realization(task) for task in tasks]
    result.rows = rows
    for method in config.method:
        for n in config.n:
            for fbar in config.fidelity:
                cell = [r for r in rows if r["method"] == method and r["n"] == n and r["fbar_min"] == fbar]
                fid = np.array([r["fidelity"] for r in cell])
                en = np.array([r["energy"] for r in cell])
                std = float(fid.std(ddof=1)) if fid.size > 1 else 0.0
                result.cells.append(CellSummary(method, n, fbar, fid.size, float(fid.mean()), std, float(en.mean())))
    if config.out:
        Path(config.out).write_text(result.to_csv())
    return result


@dataclass(frozen=True)
class GroundTruthSummary:
    lattice: str
    t: float
    U: float
    Eg: float
    E0: float
    overlap: float
    sector: tuple[int, int]
    hilbert_dim: int
    sector_dim: int
    gates_per_step: int
    Eg_fock: float | None = None

    def format(self) -> str:
        t = self.t
        lines = [
            f"lattice            {self.lattice}  (t={self.t:g}, U={self.U:g})",
            f"E_g                {self.Eg / t:.4f} t",
            f"<psi0|H|psi0>      {self.E0 / t:.4f} t",
            f"|<psi_g|psi0>|     {100 * self.overlap:.2f} %",
            f"sector (up, down)  {self.sector}",
            f"Hilbert dimension  {self.hilbert_dim} (sector {self.sector_dim})",
            f"gates per step     {self.gates_per_step}",
        ]
        if self.Eg_fock is not None:
            lines.insert(2, f"E_g (all sectors)  {self.Eg_fock / t:.4f} t")
        return "\n".join(lines)


def ground_truth_report(lattice: LatticeSpec, fock_ground: bool = False) -> GroundTruthSummary:
    _check_feasible(lattice)
    gt = ground_truth(lattice, fock_ground=fock_ground) if fock_ground else cached_ground_truth(lattice)
    sector_dim = math.comb(lattice.M, gt.sector[0]) * math.comb(lattice.M, gt.sector[1])
    return GroundTruthSummary(lattice.label, lattice.t, lattice.U, gt.Eg, gt.E0_expectation, gt.initial_overlap,
                              gt.sector, 1 << lattice.n_qubits, sector_dim, gates_per_step(lattice), gt.Eg_fock)
