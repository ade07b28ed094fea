"""Benchmark command line: solve / find-ecut / sweep-hbar / phase-mask.

Exit codes: 0 success, 2 configuration error, 3 numerical failure,
4 accuracy gate failure.
"""

from __future__ import annotations

import argparse
import sys

from .config import load_config, load_sweep_config
from .errors import (AccuracyGateError, ConfigError, EmptyBasisError,
                     IllConditionedOverlapError, InvalidArgumentError,
                     NumericalFailureError, SingularPotentialError)
from .experiments import (emit_phase_mask, run_experiment, search_ecut,
                          sweep_hbar)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_GATE = 4


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vneig",
        description="Spectral bound-state benchmarks on periodic grids with "
                    "phase-space Gaussian bases.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("config", help="experiment config file (INI)")
        p.add_argument("--out-dir", default=".", help="output directory")
        p.add_argument("--quiet", action="store_true", help="suppress progress output")

    p_solve = sub.add_parser("solve", help="run one configured experiment")
    common(p_solve)
    p_solve.add_argument("--tolerance-digits", type=int, default=None,
                         help="fail (exit 4) if the worst level error exceeds "
                              "10^-digits against the oracle")

    p_ecut = sub.add_parser("find-ecut", help="search the energy cut for a "
                                              "target kept-cell count")
    p_ecut.add_argument("config", help="experiment config file (INI)")
    p_ecut.add_argument("--target", type=int, required=True,
                        help="desired number of kept cells")
    p_ecut.add_argument("--quiet", action="store_true")

    p_sweep = sub.add_parser("sweep-hbar", help="basis-efficiency sweep over hbar")
    common(p_sweep)
    p_sweep.add_argument("--tolerance-digits", type=int, default=None,
                         help="override the sweep accuracy gate digits")

    p_mask = sub.add_parser("phase-mask", help="emit kept/dropped cells of the "
                                               "bvn mask for plotting")
    common(p_mask)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "solve":
            config = load_config(args.config)
            run_experiment(config, args.out_dir,
                           tolerance_digits=args.tolerance_digits,
                           quiet=args.quiet)
        elif args.command == "find-ecut":
            config = load_config(args.config)
            found = search_ecut(config.lattice, config.model, config.mass,
                                args.target)
            if not found.exact and not args.quiet:
                print(f"warning: exact count {args.target} unreachable; "
                      f"achievable neighbors {found.neighbor_counts}",
                      file=sys.stderr)
            print(f"e_cut = {found.e_cut!r}  (kept {found.count} cells)")
        elif args.command == "sweep-hbar":
            sweep = load_sweep_config(args.config)
            outcome = sweep_hbar(sweep, args.out_dir,
                                 tolerance_digits=args.tolerance_digits,
                                 quiet=args.quiet)
            if outcome.failures and not args.quiet:
                print(f"warning: gate unreachable at hbar = {outcome.failures}",
                      file=sys.stderr)
        elif args.command == "phase-mask":
            config = load_config(args.config)
            emit_phase_mask(config, args.out_dir, quiet=args.quiet)
    except (ConfigError, InvalidArgumentError, FileNotFoundError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericalFailureError, IllConditionedOverlapError,
            SingularPotentialError, EmptyBasisError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except AccuracyGateError as exc:
        print(f"accuracy gate failure: {exc}", file=sys.stderr)
        return EXIT_GATE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
