"""
Command-line entry point.

Exit codes: 0 on success, 1 on usage or domain errors (message on stderr),
2 when a verification sweep finds a violated bound (offending instances on
stderr as JSON).
"""
from typing import List, Optional, TextIO
import argparse
import json
import logging
import sys

from config import (
    APP_NAME,
    APP_VERSION,
    BISECTION_TOLERANCE,
    DEFAULT_SEED,
    HK_LIMIT_N,
    MC_BLOCK_SIZE,
    SWEEP_INSTANCES,
)
from core.bounds import BoundViolationError
from utils.numerics import ConvergenceError
from .commands import COMMANDS, VerificationFailure
from .output import FORMATS, JSON, emit

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_VIOLATION = 2


class UsageError(ValueError):
    """Bad command-line arguments."""


class _Parser(argparse.ArgumentParser):
    # argparse would exit with status 2, which is reserved for violations
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _add_dist_args(parser: argparse.ArgumentParser):
    group = parser.add_mutually_exclusive_group()
    group.add_argument('--dist', help='Law of X as "a1:p1,a2:p2,..."')
    group.add_argument('--dist-file', help='Law of X as a JSON file {"atoms": [...], "probs": [...]}')


def _format_parent() -> argparse.ArgumentParser:
    # SUPPRESS keeps a subcommand from overwriting a --format given before it
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument('--format', choices=FORMATS, default=argparse.SUPPRESS, help='Output format (default per command)')
    return parent


def build_parser() -> argparse.ArgumentParser:
    fmt = _format_parent()
    parser = _Parser(prog='prophet', description=f"{APP_NAME}: prophet inequalities under Poisson arrivals")
    parser.add_argument('--version', action='version', version=f"{APP_NAME} {APP_VERSION}")
    parser.add_argument('-v', '--verbose', action='count', default=0, help='-v for info logging, -vv for debug')
    parser.add_argument('--format', choices=FORMATS, default=None, help='Output format (default per command)')
    sub = parser.add_subparsers(dest='command', parser_class=_Parser)

    p = sub.add_parser('constants', parents=[fmt], help='Hill-Kertz constants and alpha_0')
    p.add_argument('--n', help='Grid of n, e.g. "2..10,100,1e4,1e6" (default: the standard table)')
    p.add_argument('--tol', type=float, default=BISECTION_TOLERANCE, help='Bisection bracket width')

    p = sub.add_parser('value', parents=[fmt], help='V(t) in closed form and by ODE, and M(t)')
    _add_dist_args(p)
    p.add_argument('--t', default='1', help='Horizon grid')

    p = sub.add_parser('threshold', parents=[fmt], help='Threshold-rule values')
    _add_dist_args(p)
    p.add_argument('--t', type=float, required=True)
    rule = p.add_mutually_exclusive_group()
    rule.add_argument('--c', type=float, help='Fixed threshold')
    rule.add_argument('--best', action='store_true', help='Best threshold over the atoms (default)')
    rule.add_argument('--minimax', type=float, nargs=2, metavar=('A', 'B'), help='Minimax threshold for [A, B]')
    rule.add_argument('--universal', action='store_true', help='Threshold solving E(X - c)^+ = alpha*(t) c')

    p = sub.add_parser('curve', parents=[fmt], help='Bound curves over a horizon grid')
    p.add_argument('--which', default='f,g,min_f_long', help='Comma list from f,g,fhat,ghat,long,min_f_long')
    p.add_argument('--t', default='0.01..10', help='Horizon grid')

    p = sub.add_parser('bounds', parents=[fmt], help='Long-range constants, sharpness thresholds and curves')
    p.add_argument('--curve', default='f,g,min_f_long', help='Comma list from f,g,fhat,ghat,long,min_f_long')
    p.add_argument('--t-grid', default='0.01..10', help='Horizon grid')
    p.add_argument('--n', default='100', help='n grid for the sharpness thresholds')
    p.add_argument('--precise-t', type=float, default=1000.0)
    p.add_argument('--precise-n', type=int, default=HK_LIMIT_N)

    p = sub.add_parser('verify', parents=[fmt], help='Check every inequality on random instances')
    p.add_argument('--count', type=int, default=SWEEP_INSTANCES)
    p.add_argument('--seed', type=int, default=DEFAULT_SEED)
    p.add_argument('--t', default='0.1,0.5,1,2,5,10,50', help='Horizon grid')
    p.add_argument('--unit-interval', action='store_true', help='Draw atoms uniformly from [0, 1]')
    p.add_argument('--renewal-count', type=int, default=0, help='Also check V_n <= M_n <= 2 V_n on this many renewal instances')
    p.add_argument('--report', help='Write every report as JSON to this file')

    p = sub.add_parser('simulate', parents=[fmt], help='Monte Carlo estimate of M(t) or a policy value')
    _add_dist_args(p)
    p.add_argument('--t', type=float, required=True)
    p.add_argument('--policy', default='optimal', help='optimal | threshold:<c> | prophet')
    p.add_argument('--paths', type=int, default=100_000)
    p.add_argument('--seed', type=int, default=DEFAULT_SEED)
    p.add_argument('--antithetic', action='store_true')
    p.add_argument('--block-size', type=int, default=MC_BLOCK_SIZE, help='Paths per seeded substream; estimates depend on it')
    p.add_argument('--workers', type=int, default=1)

    p = sub.add_parser('renewal', parents=[fmt], help='Discrete-time renewal arrivals')
    modes = p.add_subparsers(dest='mode', parser_class=_Parser)
    m = modes.add_parser('values', parents=[fmt], help='Exact M_n and V_n')
    _add_dist_args(m)
    m.add_argument('--T', help='Gap law as "k1:p1,k2:p2,..."')
    m.add_argument('--binomial', type=float, help='Geometric gaps with success probability p')
    m.add_argument('--n', type=int, required=True)
    m.add_argument('--brute-force', action='store_true', help='Cross-check by exhaustive enumeration')
    m = modes.add_parser('counterexample', parents=[fmt], help='Closed forms for T in {1, n}, X in {eps, 1}')
    m.add_argument('--n', type=int, required=True)
    m.add_argument('--p', type=float, required=True)
    m.add_argument('--pi', type=float, required=True)
    m = modes.add_parser('explore', parents=[fmt], help='Scan the counterexample family')
    m.add_argument('--n', default='2..20')
    m.add_argument('--p', default='0.05..0.95:19')
    m.add_argument('--pi', default='0.001,0.01,0.05,0.1,0.25,0.5')

    p = sub.add_parser('explore', parents=[fmt], help='Grid search for the largest M/V over two-valued laws')
    p.add_argument('--t', default='0.25..2:8', help='Horizon grid')
    p.add_argument('--grid', type=int, default=60, help='Points per axis')
    return parser


def _default_format(command: str) -> str:
    return JSON if command == 'simulate' else 'csv'


def run(argv: Optional[List[str]] = None, stdout: Optional[TextIO] = None, stderr: Optional[TextIO] = None) -> int:
    """
    Parse argv, run the command and write its output.

    Returns:
        Process exit code
    """
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        print(e, file=stderr)
        return EXIT_ERROR
    except SystemExit as e:  # --help and --version
        return int(e.code or 0)

    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG if args.verbose > 1 else logging.INFO)

    if args.command is None or (args.command == 'renewal' and args.mode is None):
        print("prophet: a subcommand is required (see --help)", file=stderr)
        return EXIT_ERROR
    key = f"renewal {args.mode}" if args.command == 'renewal' else args.command
    fmt = args.format or _default_format(args.command)

    try:
        envelope = COMMANDS[key](args)
    except VerificationFailure as e:
        emit(e.envelope, fmt, stdout)
        for violation in e.violations:
            print(json.dumps(violation), file=stderr)
        return EXIT_VIOLATION
    except BoundViolationError as e:
        print(json.dumps(e.report.to_json()), file=stderr)
        return EXIT_VIOLATION
    except (ValueError, ConvergenceError, OSError) as e:
        logger.debug("Command failed", exc_info=True)
        print(f"prophet {key}: {e}", file=stderr)
        return EXIT_ERROR

    emit(envelope, fmt, stdout)
    return EXIT_OK
