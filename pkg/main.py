# zaremba-spectra - Spectral toolkit for non-coercive mixed problems
# Copyright (C) 2025 Nicholas Acord <ncacord@protonmail.com>
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with this program.  If not, see <https://www.gnu.org/licenses/>.
#
# Contact: ncacord@protonmail.com

"""
main.py - Command-line entry point for zaremba-spectra.

Subcommands: check-ellipticity, spectrum, expand, pencil, verify.
Exit status: 0 when every gated check passes, 1 on a failed check or
numerical error, 2 on configuration or I/O errors.
"""

import argparse
import logging
import sys
from typing import Any, Dict, List, Optional

from cli.commands import run
from cli.report import Report
from cli.settings import SUITES, build_config
from utils import __version__
from utils.error_handler import ConfigInvalid, ZarembaError, exit_code_for, handle_error
from utils.logging_manager import get_logger, logger_manager

logger = get_logger("zaremba.cli")

PENCIL_ACTIONS = ("char-values", "solve", "ray-scan", "corners", "chains", "double-completeness")


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON config file; flags override its entries")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--threads", type=int, help="worker threads (ZS_THREADS overrides)")
    parser.add_argument("--output", help="CSV destination (default stdout)")
    parser.add_argument("--report", help="JSON report destination")
    parser.add_argument(
        "--tol",
        action="append",
        default=[],
        metavar="NAME=VALUE",
        help="override a check tolerance (repeatable)",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    parser.add_argument("-q", "--quiet", action="store_true")


def _add_model(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--d", type=float, help="weight exponent d >= 0")
    parser.add_argument("--rho", type=float, help="boundary order in [0, 1/2]")
    parser.add_argument("--vartheta", type=float)
    parser.add_argument("--mode", choices=("paper", "derived"), help="boundary coefficient mode")
    parser.add_argument("--form", choices=("scaled", "normal"), help="boundary derivative form")
    parser.add_argument("--quad-order", dest="quad_order", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zaremba",
        description="Spectral toolkit for non-coercive mixed problems.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    ell = sub.add_parser("check-ellipticity", help="audit a ray and the perturbation budgets")
    _add_common(ell)
    ell.add_argument("--ray", type=float, help="ray angle phi (default: optimal ray)")
    ell.add_argument("--scan-rays", dest="scan_rays", type=int, metavar="COUNT")
    ell.add_argument("--n", type=int, help="space dimension")
    ell.add_argument("--rho", type=float)
    ell.add_argument("--delta-s-norm", dest="delta_s_norm", type=float)
    ell.add_argument("--boundary-class", dest="boundary_class", choices=("Lipschitz", "C2"))
    ell.add_argument("--ae-threshold", dest="ae_threshold", type=float)

    spec = sub.add_parser("spectrum", help="tabulate disk eigenpairs")
    _add_common(spec)
    _add_model(spec)
    spec.add_argument("--kmin", type=int)
    spec.add_argument("--kmax", type=int)
    spec.add_argument("--count", type=int, help="eigenpairs per wavenumber")

    exp = sub.add_parser("expand", help="expand a function in the disk eigenbasis")
    _add_common(exp)
    _add_model(exp)
    source = exp.add_mutually_exclusive_group()
    source.add_argument("--input", help="CSV of samples x1,x2,re,im")
    source.add_argument("--preset", choices=("one", "re_z"))
    exp.add_argument("--K", dest="kmax", type=int, help="wavenumbers |k| <= K")
    exp.add_argument("--N", type=int, help="eigenpairs per wavenumber")
    exp.add_argument("--remainder-output", dest="remainder_output")

    pen = sub.add_parser("pencil", help="analyse the family L(lambda)")
    _add_common(pen)
    _add_model(pen)
    origin = pen.add_mutually_exclusive_group()
    origin.add_argument("--family", help="JSON family file")
    origin.add_argument("--disk", action="store_true", help="assemble from the disk eigenbasis (default)")
    pen.add_argument("--K", dest="kmax", type=int)
    pen.add_argument("--N", dest="count", type=int, help="eigenpairs per wavenumber")
    actions = pen.add_mutually_exclusive_group(required=True)
    for action in PENCIL_ACTIONS:
        actions.add_argument(
            f"--{action}", dest="action", action="store_const", const=action
        )
    pen.add_argument("--lambda", dest="lambda", help="spectral parameter a+bi")
    pen.add_argument("--rhs", help="CSV of re,im rows")
    pen.add_argument("--phi", type=float, help="ray angle for --ray-scan")
    pen.add_argument("--moduli", help="lo:hi:n")
    pen.add_argument("--eps", type=float)
    pen.add_argument("--n", type=int)
    pen.add_argument("--corner-mode", dest="corner_mode", choices=("self_adjoint", "general"))
    pen.add_argument("--perturb-seed", dest="perturb_seed", type=int)
    pen.add_argument("--ds-norm", dest="ds_norm", type=float)
    pen.add_argument("--dc-norm", dest="dc_norm", type=float)
    pen.add_argument("--save-family", dest="save_family")
    pen.add_argument("--encoding", choices=("csv", "base64"))

    ver = sub.add_parser("verify", help="run a property suite")
    _add_common(ver)
    _add_model(ver)
    ver.add_argument("--suite", choices=SUITES)
    ver.add_argument("--kmin", type=int)
    ver.add_argument("--kmax", type=int)
    ver.add_argument("--count", type=int)
    ver.add_argument("--N", type=int)
    ver.add_argument("--eps", type=float)
    ver.add_argument("--n", type=int)
    ver.add_argument("--dc-norm", dest="dc_norm", type=float)
    ver.add_argument("--perturb-seed", dest="perturb_seed", type=int)

    return parser


def _parse_tolerances(items: List[str]) -> Optional[Dict[str, float]]:
    if not items:
        return None
    out = {}
    for item in items:
        name, _, value = item.partition("=")
        try:
            out[name.strip()] = float(value)
        except ValueError:
            raise ConfigInvalid(f"bad tolerance override '{item}'") from None
    return out


def _values(args: argparse.Namespace) -> Dict[str, Any]:
    skip = {"config", "tol", "verbose", "quiet", "disk"}
    values = {k: v for k, v in vars(args).items() if k not in skip}
    values["tolerances"] = _parse_tolerances(args.tol)
    return values


def _emit_report(report: Report, report_path: Optional[str], csv_to_file: bool) -> None:
    if report_path is not None:
        report.write(report_path)
    else:
        report.write(stream=sys.stdout if csv_to_file else sys.stderr)


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point; returns the process exit status."""
    args = build_parser().parse_args(argv)

    if args.verbose:
        logger_manager.set_console_level(logging.INFO)
    elif args.quiet:
        logger_manager.set_console_level(logging.ERROR)

    try:
        config = build_config(_values(args), args.config)
    except ZarembaError as e:
        handle_error(e, context=["config"])
        report = Report(command=args.command, inputs={}, config_hash="", seed=args.seed or 0)
        report.add_error(e, exit_code_for(e))
        _emit_report(report, args.report, args.output is not None)
        return report.exit_code

    logger.info(f"Starting {config.command} | seed={config.seed} | threads={config.threads}")
    report = run(config)
    try:
        _emit_report(report, config.report, config.output is not None)
    except ZarembaError as e:
        handle_error(e, context=["report"])
        return exit_code_for(e)
    return report.exit_code


if __name__ == "__main__":
    try:
        exit_code = main()
        sys.exit(exit_code)
    except KeyboardInterrupt:
        print("\nInterrupted", file=sys.stderr)
        sys.exit(130)
    except Exception as e:
        print(f"Fatal error: {e}", file=sys.stderr)
        sys.exit(1)
