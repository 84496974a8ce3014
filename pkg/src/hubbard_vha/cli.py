"""Command-line entry point: ``hubbard-vha <subcommand> [options]``."""

from __future__ import annotations

import argparse
import logging
import sys

from .experiments import ExperimentConfig, ground_truth_report, run_table
from .lattice import LatticeSpec

SUBCOMMAND_METHOD = {"vha": "vha", "adiabatic": "adiabatic", "frozen-transfer": "frozen_transfer"}


def _experiment_flags(p: argparse.ArgumentParser) -> None:
    # defaults are None so config-file values survive unless a flag is given
    p.add_argument("--config", help="flat key = value experiment file")
    p.add_argument("--n", help="comma-separated step counts, e.g. 2,3,4,5")
    p.add_argument("--fidelity", help="comma-separated averaged minimal gate fidelities, e.g. 1.0,0.999")
    p.add_argument("--runs", type=int, help="noise realizations per noisy cell")
    p.add_argument("--seed", type=int, help="base seed; realization r uses seed + r")
    p.add_argument("--starts", choices=("baseline", "improved"))
    p.add_argument("--tau-min", type=float)
    p.add_argument("--tau-max", type=float)
    p.add_argument("--tau-points", type=int)
    p.add_argument("--out", help="CSV file for the per-realization rows")
    p.add_argument("--workers", type=int)
    p.add_argument("--max-evals", type=int, help="evaluation cap per start (default 400 per parameter)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hubbard-vha", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    gt = sub.add_parser("ground-truth", help="exact energies and overlaps for one lattice")
    gt.add_argument("--lattice", default="2x2")
    gt.add_argument("--t", type=float, default=1.0)
    gt.add_argument("--U", type=float, default=2.0)
    gt.add_argument("--fock", action="store_true", help="also diagonalise over all particle numbers")

    for name in ("vha", "adiabatic", "frozen-transfer", "table"):
        p = sub.add_parser(name, help="run a fidelity table" if name == "table" else f"run the {name} method")
        p.add_argument("--lattice")
        p.add_argument("--t", type=float)
        p.add_argument("--U", type=float)
        if name == "table":
            p.add_argument("--method", help="comma-separated: vha,adiabatic,frozen_transfer")
        _experiment_flags(p)
    return parser


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    keys = ("lattice", "t", "U", "n", "fidelity", "runs", "seed", "starts", "tau_min", "tau_max",
            "tau_points", "out", "workers", "max_evals")
    overrides = {k: getattr(args, k) for k in keys}
    if args.command in SUBCOMMAND_METHOD:
        overrides["method"] = SUBCOMMAND_METHOD[args.command]
    else:
        overrides["method"] = args.method
    if args.config:
        return ExperimentConfig.from_file(args.config, **overrides)
    return ExperimentConfig(**{k: v for k, v in overrides.items() if v is not None})


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        if args.command == "ground-truth":
            lattice = LatticeSpec.parse(args.lattice, args.t, args.U)
            print(ground_truth_report(lattice, fock_ground=args.fock).format())
            return 0
        config = config_from_args(args)
        result = run_table(config)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(result.format_table())
    if config.out:
        print(f"wrote {len(result.rows)} rows to {config.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
