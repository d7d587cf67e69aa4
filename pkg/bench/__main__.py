"""
Three-center integral bench - Command-line interface.

Regenerate the three-center nuclear attraction tables, compare them with
the embedded reference values, and run convergence and timing studies.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

from bench.config import parse_config
from bench.reference import DATA_DIR, load_reference
from bench.runner import (
    EXIT_CONFIG, EXIT_NUMERICAL, EXIT_OK, FORMATS, RunOptions, bench_legendre, run_convergence,
    run_table, seed_oracles,
)
from common.errors import ConfigError, ThreeCenterError
from common.logging_config import set_level, setup_logger
from precision.context import DEFAULT_GUARD_DIGITS, PrecisionContext
from precision.gamma import dirac_gamma
from quadrature.adaptive import DEFAULT_RULE_ORDER
from special.legendre import LegendreStrategy
from threecenter.basic import basic_nuclear_attraction
from validation.writer import render_convergence

logger = setup_logger(__name__)

# inverse fine-structure constant, CODATA 2018
SPEED_OF_LIGHT_AU = "137.035999084"

EPILOG = """
Examples:
  # Reproduce the first bundled table (text and CSV reports in ./reports)
  python -m bench table --config threecenter1

  # One case at 30 digits, all report formats, four worker processes
  python -m bench table --config threecenter2 --case t2-ss-2.1 --digits 30 --format all --jobs 4

  # Partial sums of the non-collinear case at several summation limits
  python -m bench convergence --case t4-ss-2.0 --lmax 10 15 30 40

  # Legendre strategy timing, default parameters
  python -m bench legendre --xi-c 2

  # Closed-form basic integral and relativistic exponents
  python -m bench basic --kappa 2 --lam 1 --tau 0 --z 1.5 --R 2 --theta 0.3 --phi 0
  python -m bench dirac --kappa -1 1 -2 --Z 80

  # Bundled reference cases
  python -m bench list
"""


def resolve_config(name: str) -> str:
    """A config path, or the name of a bundled config such as ``threecenter1``."""
    path = Path(name)
    if path.is_file():
        return str(path)
    bundled = DATA_DIR / (name if name.endswith(".cfg") else f"{name}.cfg")
    if bundled.is_file():
        return str(bundled)
    raise ConfigError("configuration file not found", name)


def _options(args: argparse.Namespace) -> RunOptions:
    return RunOptions(
        digits=args.digits,
        l_max=args.lmax if args.command == "table" else None,
        tol=args.tol,
        guard_digits=args.guard,
        strategy=LegendreStrategy.parse(args.strategy),
        rule_order=args.rule_order,
        jobs=getattr(args, "jobs", 1),
        output_format=args.format,
        out_dir=args.out,
    )


def cmd_table(args: argparse.Namespace) -> int:
    options = _options(args)
    run = run_table(resolve_config(args.config), options, args.case)
    if args.seed_oracle:
        oracles = seed_oracles(options.context())
        oracle_path = Path(options.out_dir) / "oracles.json"
        oracle_path.write_text(json.dumps(oracles, indent=2), encoding="utf-8")
        for entry in oracles:
            print(f"{entry['name']}: J {entry['J_digits']} digits, K {entry['K_digits']} digits")
        print(f"Oracle values written to: {oracle_path}")
    print(run.metrics.summary())
    print(f"Fingerprint:             {run.fingerprint}")
    for kind, path in run.outputs.items():
        print(f"{kind + ':':<25}{path}")
    return run.exit_code


def _find_case(args: argparse.Namespace):
    reference = load_reference()
    if args.config:
        cases = {case.id: case for case in parse_config(resolve_config(args.config), reference)}
    else:
        cases = reference.cases
    if args.case not in cases:
        raise ConfigError(f"unknown case id {args.case!r}", args.config)
    return cases[args.case], reference


def cmd_convergence(args: argparse.Namespace) -> int:
    case, reference = _find_case(args)
    run = run_convergence(case, args.lmax, _options(args), reference)
    print(render_convergence(run.rows, f"Convergence of {case.id}"))
    print(f"Fingerprint: {run.fingerprint}")
    return run.exit_code


def _context(args: argparse.Namespace) -> PrecisionContext:
    if args.digits:
        return PrecisionContext(args.digits, args.guard)
    return PrecisionContext.from_env(args.guard)


def cmd_legendre(args: argparse.Namespace) -> int:
    ctx = _context(args)
    report = bench_legendre(args.L, args.Lambda, args.q, args.N1, args.N2, args.p1, args.p2, args.xi_c,
                            args.repetitions, ctx, args.tol)
    print(report.render())
    if args.json:
        Path(args.json).write_text(json.dumps(report.to_dict(), indent=2), encoding="utf-8")
        print(f"Timing report written to: {args.json}")
    return EXIT_OK


def cmd_basic(args: argparse.Namespace) -> int:
    ctx = _context(args)
    value = basic_nuclear_attraction(args.kappa, args.lam, args.tau, args.z, args.R, args.theta, args.phi, ctx)
    print(ctx.to_decimal(value))
    return EXIT_OK


def cmd_dirac(args: argparse.Namespace) -> int:
    ctx = _context(args)
    for kappa in args.kappa:
        print(f"kappa={kappa:+d}  gamma={ctx.to_decimal(dirac_gamma(kappa, args.Z, args.c, ctx))}")
    return EXIT_OK


def cmd_list(args: argparse.Namespace) -> int:
    reference = load_reference(args.reference)
    for table in reference.tables:
        print(f"{table}: {reference.captions[table]}")
        for case in reference.table_cases(table):
            note = " (mantissa only)" if case.mantissa_only else ""
            print(f"  {case.id:<16} {case.label:<14} {case.reference_value}  min {case.min_digits}{note}")
    for case_id, published in reference.convergence.items():
        limits = ", ".join(str(limit) for limit in sorted(published.rows))
        print(f"convergence {case_id}: l_max {limits}")
    print(f"magnitude-only auxiliary rows: {len(reference.auxiliary)}")
    return EXIT_OK


def _add_precision_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--digits", type=int, default=None,
                        help="Target decimal digits (default: per case, or THREECENTER_DIGITS)")
    parser.add_argument("--guard", type=int, default=DEFAULT_GUARD_DIGITS,
                        help=f"Guard digits carried on top of the target (default: {DEFAULT_GUARD_DIGITS})")
    parser.add_argument("--tol", default=None, help="Relative quadrature tolerance (default: 10^-digits)")


def _add_run_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=sorted(FORMATS), default="both",
                        help="Report formats to write (default: both = txt and csv)")
    parser.add_argument("--out", default="reports", help="Report directory (default: reports)")
    parser.add_argument("--strategy", choices=[s.value for s in LegendreStrategy],
                        default=LegendreStrategy.RECURRENCE.value,
                        help="Normalized Legendre evaluation strategy")
    parser.add_argument("--rule-order", type=int, default=DEFAULT_RULE_ORDER,
                        help=f"Gauss order of the adaptive rule (default: {DEFAULT_RULE_ORDER})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="python -m bench",
        description="Three-center nuclear attraction integrals over Slater-type orbitals",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=EPILOG,
    )
    parser.add_argument("--verbose", "-v", action="store_true", help="Debug logging")
    parser.add_argument("--log-file", default=None, help="Also write the log to this file")
    commands = parser.add_subparsers(dest="command", required=True)

    table = commands.add_parser("table", help="Evaluate every case of a configuration")
    table.add_argument("--config", required=True, help="Config file, or a bundled name like threecenter1")
    table.add_argument("--case", action="append", default=None, help="Only this case id (repeatable)")
    table.add_argument("--lmax", type=int, default=None, help="Override each case's summation limit")
    table.add_argument("--jobs", type=int, default=1, help="Worker processes (default: 1)")
    table.add_argument("--seed-oracle", action="store_true",
                       help="Also run the fixed-rule auxiliary oracles and write oracles.json")
    _add_precision_flags(table)
    _add_run_flags(table)
    table.set_defaults(handler=cmd_table)

    convergence = commands.add_parser("convergence", help="Partial sums of one case at several l_max")
    convergence.add_argument("--case", required=True, help="Case id")
    convergence.add_argument("--config", default=None, help="Config holding the case (default: reference data)")
    convergence.add_argument("--lmax", type=int, nargs="+", default=None,
                             help="Strictly ascending summation limits (default: published rows)")
    _add_precision_flags(convergence)
    _add_run_flags(convergence)
    convergence.set_defaults(handler=cmd_convergence)

    legendre = commands.add_parser("legendre", help="Time reduced auxiliary functions per Legendre strategy")
    legendre.add_argument("--L", type=int, default=3)
    legendre.add_argument("--Lambda", type=int, default=1)
    legendre.add_argument("--q", type=int, default=0)
    legendre.add_argument("--N1", default="3")
    legendre.add_argument("--N2", default="2")
    legendre.add_argument("--p1", default="2.5")
    legendre.add_argument("--p2", default="1.5")
    legendre.add_argument("--xi-c", required=True, help="Position xi_C > 1 splitting the two integrals")
    legendre.add_argument("--repetitions", type=int, default=3, help="Timed runs per strategy (>= 3)")
    legendre.add_argument("--json", default=None, help="Write the timing report to this JSON file")
    _add_precision_flags(legendre)
    legendre.set_defaults(handler=cmd_legendre)

    basic = commands.add_parser("basic", help="Closed-form basic nuclear attraction integral")
    basic.add_argument("--kappa", required=True)
    basic.add_argument("--lam", type=int, required=True)
    basic.add_argument("--tau", type=int, default=0)
    basic.add_argument("--z", required=True, help="Orbital exponent")
    basic.add_argument("--R", required=True, help="Distance to the point charge")
    basic.add_argument("--theta", default="0")
    basic.add_argument("--phi", default="0")
    _add_precision_flags(basic)
    basic.set_defaults(handler=cmd_basic)

    dirac = commands.add_parser("dirac", help="Relativistic exponents sqrt(kappa^2 - Z^2/c^2)")
    dirac.add_argument("--kappa", type=int, nargs="+", required=True)
    dirac.add_argument("--Z", required=True, help="Nuclear charge")
    dirac.add_argument("--c", default=SPEED_OF_LIGHT_AU, help=f"Speed of light (default: {SPEED_OF_LIGHT_AU})")
    _add_precision_flags(dirac)
    dirac.set_defaults(handler=cmd_dirac)

    listing = commands.add_parser("list", help="List the bundled reference cases")
    listing.add_argument("--reference", default=None, help="Reference YAML (default: bundled)")
    listing.set_defaults(handler=cmd_list)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.verbose or args.log_file:
        set_level(logging.DEBUG if args.verbose else logging.INFO, args.log_file)
    logger.debug(f"Running command {args.command}")

    try:
        return args.handler(args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except ThreeCenterError as e:
        print(f"numerical error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
