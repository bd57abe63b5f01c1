"""Command-line sweeps over the deformed-graphene model.

Subcommands::

    spectrum    reduced Landau-level table per parameter set
    partition   partition-function records over a (tau, theta, eta) grid
    thermo      full thermodynamic records over the same grid
    compare     the three evaluation schemes side by side with deviations
    fock-check  truncated-basis diagonalization against the analytic levels

Exit codes: 0 success, 1 configuration error, 2 numerical non-convergence
(or an oracle residual above threshold), 3 output I/O failure.  Set
NC_GRAPHENE_NO_PARALLEL=1 to force serial evaluation; results are identical
either way.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .fock import build_hamiltonian
from .model import NCParams
from .sweep import (
    ConfigError,
    PRESETS,
    SweepConfig,
    SweepResult,
    compare_sweep,
    fock_check_table,
    load_config,
    parse_float_list,
    parse_schemes,
    parse_tau_spec,
    partition_sweep,
    spectrum_table,
    thermo_sweep_records,
    write_result,
)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NONCONVERGED = 2
EXIT_IO = 3


class _Parser(argparse.ArgumentParser):
    """argparse variant that reports usage problems as configuration errors."""

    def error(self, message):
        raise ConfigError(message)


def _add_common_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="PATH", help="flat key = value config file")
    parser.add_argument("--tau", metavar="START:STOP:COUNT[:log]",
                        help="temperature grid specification")
    parser.add_argument("--theta-bar", metavar="LIST", help="comma-separated values")
    parser.add_argument("--eta-bar", metavar="LIST", help="comma-separated values")
    parser.add_argument("--scheme", choices=["direct", "hurwitz", "em", "all"],
                        help="evaluation scheme selection")
    parser.add_argument("--particles", type=int, metavar="N")
    parser.add_argument("--dim", type=int, metavar="D", help="Fock cutoff (fock-check)")
    parser.add_argument("--levels", type=int, metavar="K", help="level count (spectrum)")
    parser.add_argument("--format", choices=["csv", "json"], dest="fmt")
    parser.add_argument("--precision", type=int, metavar="P",
                        help="significant digits in the output (6..17)")
    parser.add_argument("--out", metavar="PATH", help="output path, '-' for stdout")
    parser.add_argument("--preset", choices=sorted(PRESETS),
                        help="figure-reproduction preset")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ncgraphene",
                     description="Deformed Landau levels and their thermodynamics.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("spectrum", "emit the reduced Landau-level table"),
        ("partition", "emit partition-function records"),
        ("thermo", "emit thermodynamic records"),
        ("compare", "compare the three partition-function schemes"),
        ("fock-check", "validate the analytic spectrum numerically"),
    ):
        cmd = sub.add_parser(name, help=help_text)
        _add_common_options(cmd)
        if name == "fock-check":
            cmd.add_argument("--dump-matrices", metavar="DIR",
                             help="also dump ladder and Hamiltonian matrices as CSV")
    return parser


def _config_from_args(args: argparse.Namespace) -> SweepConfig:
    overrides: dict[str, object] = {}
    if args.tau is not None:
        overrides.update(parse_tau_spec(args.tau))
    if args.theta_bar is not None:
        overrides["theta_bar"] = parse_float_list(args.theta_bar)
    if args.eta_bar is not None:
        overrides["eta_bar"] = parse_float_list(args.eta_bar)
    if args.scheme is not None:
        overrides["schemes"] = parse_schemes(args.scheme)
    if args.particles is not None:
        overrides["particles"] = args.particles
    if args.dim is not None:
        overrides["dim"] = args.dim
    if args.levels is not None:
        overrides["levels"] = args.levels
    if args.fmt is not None:
        overrides["format"] = args.fmt
    if args.precision is not None:
        overrides["precision"] = args.precision
    if args.out is not None:
        overrides["out"] = args.out
    return load_config(path=args.config, preset=args.preset, overrides=overrides)


def _dump_matrices(config: SweepConfig, directory: str) -> None:
    import os

    os.makedirs(directory, exist_ok=True)
    scales = config.scales()
    for theta in sorted(config.theta_bars):
        for eta in sorted(config.eta_bars):
            rep = build_hamiltonian(NCParams(theta, eta), scales, config.dim)
            prefix = os.path.join(directory, f"theta{theta:g}_eta{eta:g}_")
            np.savetxt(prefix + "a_matrix.csv", rep.a_matrix, delimiter=",")
            np.savetxt(prefix + "h_matrix_re.csv", rep.h_matrix.real, delimiter=",")
            np.savetxt(prefix + "h_matrix_im.csv", rep.h_matrix.imag, delimiter=",")


_DISPATCH = {
    "spectrum": spectrum_table,
    "partition": partition_sweep,
    "thermo": thermo_sweep_records,
    "compare": compare_sweep,
    "fock-check": fock_check_table,
}


def _emit(result: SweepResult, config: SweepConfig) -> int:
    try:
        if config.output.path == "-":
            write_result(result, config.output, sys.stdout)
        else:
            with open(config.output.path, "w", encoding="utf-8", newline="") as handle:
                write_result(result, config.output, handle)
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_NONCONVERGED if result.nonconverged else EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        config = _config_from_args(args)
        result = _DISPATCH[args.command](config)
        if args.command == "fock-check" and getattr(args, "dump_matrices", None):
            _dump_matrices(config, args.dump_matrices)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    for message in result.messages:
        print(message, file=sys.stderr)
    return _emit(result, config)


if __name__ == "__main__":
    sys.exit(main())
