"""
Ehrhart Limit Explorer

Command-line entry point: h*-polynomials of lattice simplex families,
Ehrhart limit prefixes, verification suites and the dilate-counting oracle.

Exit codes: 0 ok, 1 failed check or inconsistency, 2 usage or parameter
error, 3 unsupported form, 4 no stabilization, 5 budget exceeded,
6 oracle scale guard.
"""

import argparse
import json
import logging
import os
import sys
from typing import Any, Dict, List, Optional

from .core import fpp
from .core.limits import family_member, limit_prefix_certified, member_hstar, stabilize_empirical
from .core.simplex import FamilySpec
from .utils.config import load_config
from .utils.errors import (
    BudgetExceededError,
    CertificationError,
    DegenerateSimplexError,
    OracleScaleError,
    ParameterError,
    PreconditionError,
    UnsupportedFormError,
)
from .utils.file_utils import read_simplex_file
from .verification.oracle import check_oracle_scale, consistency_check, ehrhart_prefix_by_counting
from .verification.suites import SUITES, run_suite

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_FORM = 3
EXIT_UNSTABLE = 4
EXIT_BUDGET = 5
EXIT_ORACLE_GUARD = 6

# First matching entry wins.
ERROR_EXIT_CODES = (
    (UnsupportedFormError, EXIT_FORM),
    (OracleScaleError, EXIT_ORACLE_GUARD),
    (BudgetExceededError, EXIT_BUDGET),
    (CertificationError, EXIT_FAILED),
    (ParameterError, EXIT_USAGE),
    (PreconditionError, EXIT_USAGE),
    (DegenerateSimplexError, EXIT_USAGE),
    (FileNotFoundError, EXIT_USAGE),
)

CLI_FAMILIES = ("S", "delta", "qn", "bidiagonal", "multidiagonal", "crosspolytope", "free_sum")


def _int_list(text: str) -> List[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma separated list of integers, got {text!r}")


class EhrlimitRunner:
    """
    Executes one parsed command line.

    Holds the effective configuration and the enumeration options derived
    from it, so every command sees the same budget and worker settings.
    """

    def __init__(self, config: Dict[str, Any], threads: Optional[int] = None, budget: Optional[int] = None):
        self.config = config
        enumeration = config['enumeration']
        self.options = {
            'workers': threads or os.cpu_count() or 1,
            'budget': budget or enumeration['budget'],
            'chunk_size': enumeration['chunk_size'],
            'parallel_threshold': enumeration['parallel_threshold'],
        }

    @staticmethod
    def family_spec(args: argparse.Namespace) -> FamilySpec:
        return FamilySpec(
            kind=args.family,
            m=args.m,
            a=tuple(args.a or ()),
            q=tuple(args.q or ()),
            k=args.k,
            n=args.n,
            d=args.d,
        )

    def _polytope(self, args: argparse.Namespace):
        """(polytope, family spec or None) for --family or --matrix."""
        if args.matrix is not None:
            return read_simplex_file(args.matrix), None
        spec = self.family_spec(args)
        return family_member(spec), spec

    def _hstar(self, P, spec: Optional[FamilySpec]):
        if spec is None:
            return fpp.hstar(P, **self.options)
        return member_hstar(spec, **self.options)

    def cmd_hstar(self, args: argparse.Namespace) -> int:
        P, spec = self._polytope(args)
        h = self._hstar(P, spec)
        if args.json:
            print(json.dumps({"hstar": list(h.coeffs), "dim": P.dim, "volume": h(1)}))
        else:
            print(" ".join(str(c) for c in h.coeffs))
        return EXIT_OK

    def cmd_limit(self, args: argparse.Namespace) -> int:
        spec = self.family_spec(args)
        if args.mode == "certified":
            report = limit_prefix_certified(spec, args.degree, **self.options)
        else:
            limits = self.config['limits']
            report = stabilize_empirical(
                spec, args.degree,
                window=args.window or limits['window'],
                d_max=args.d_max or limits['d_max'],
                **self.options,
            )
        if args.table:
            print(report.table.to_pandas().to_string())
        else:
            print(report.to_json())
        return EXIT_OK if report.stabilized else EXIT_UNSTABLE

    def cmd_verify(self, args: argparse.Namespace) -> int:
        results = run_suite(args.suite, max_value=args.max, d=args.d, **self.options)
        for result in results:
            print(result)
        return EXIT_OK if all(r.passed for r in results) else EXIT_FAILED

    def cmd_oracle(self, args: argparse.Namespace) -> int:
        P, spec = self._polytope(args)
        guard = self.config['oracle']
        check_oracle_scale(P, args.t_max, max_dim=guard['max_dim'], max_t=guard['max_t'])
        h = self._hstar(P, spec)
        counted = ehrhart_prefix_by_counting(P, args.t_max)
        consistent = consistency_check(P, args.t_max, hstar=h)
        verdict = "consistent" if consistent else "inconsistent"
        print(" ".join(str(c) for c in counted.coeffs) + f" {verdict}")
        return EXIT_OK if consistent else EXIT_FAILED


def _add_family_options(parser: argparse.ArgumentParser, with_matrix: bool):
    if with_matrix:
        source = parser.add_mutually_exclusive_group(required=True)
        source.add_argument('--family', choices=CLI_FAMILIES, help='Simplex family')
        source.add_argument('--matrix', metavar='FILE', help='Simplex file (JSON vertices or matrix text)')
    else:
        parser.add_argument('--family', choices=CLI_FAMILIES, required=True, help='Simplex family')
    parser.add_argument('--d', type=int, help='Dimension parameter d')
    parser.add_argument('--m', type=int, help='Bidiagonal parameter m')
    parser.add_argument('--n', type=int, help='Index n of the q(n) family')
    parser.add_argument('--a', type=_int_list, help='Multidiagonal band, e.g. 3,2')
    parser.add_argument('--q', type=_int_list, help='Weight vector, e.g. 1,1,3')
    parser.add_argument('--k', type=int, help='Number of S_d summands in the free_sum family')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='ehrlimit', description='Ehrhart h*-polynomials and Ehrhart limits')
    parser.add_argument('--config', metavar='FILE', help='YAML file merged over the packaged defaults')
    parser.add_argument('--threads', type=int, help='Worker processes (default: available CPUs)')
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument('-v', '--verbose', action='store_true', help='Debug logging')
    verbosity.add_argument('-q', '--quiet', action='store_true', help='Warnings and errors only')
    commands = parser.add_subparsers(dest='command', required=True)

    hstar = commands.add_parser('hstar', help='Print the h*-polynomial')
    _add_family_options(hstar, with_matrix=True)
    hstar.add_argument('--json', action='store_true', help='Print {"hstar", "dim", "volume"} as JSON')

    limit = commands.add_parser('limit', help='Compute an Ehrhart limit prefix')
    _add_family_options(limit, with_matrix=False)
    limit.add_argument('--degree', type=int, required=True, help='Highest coefficient r')
    limit.add_argument('--mode', choices=('certified', 'empirical'), required=True)
    limit.add_argument('--window', type=int, help='Consecutive agreeing members (empirical)')
    limit.add_argument('--d-max', type=int, help='Last schedule parameter tried (empirical)')
    limit.add_argument('--budget', type=int, help='Maximum parallelepiped points per enumeration')
    limit.add_argument('--table', action='store_true',
                       help='Print the evaluated coefficients by dimension and degree instead of JSON')

    verify = commands.add_parser('verify', help='Run a verification suite')
    verify.add_argument('suite', choices=tuple(SUITES))
    verify.add_argument('--max', type=int, help='Upper end of the suite range')
    verify.add_argument('--d', type=int, help='Dimension used by the suite')

    oracle = commands.add_parser('oracle', help='Count dilates and compare with h*')
    _add_family_options(oracle, with_matrix=True)
    oracle.add_argument('--t-max', type=int, required=True, help='Largest dilation factor')

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point."""
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        config = load_config(args.config)
    except (FileNotFoundError, ParameterError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE

    level = config['logging']['level']
    if args.verbose:
        level = 'DEBUG'
    elif args.quiet:
        level = 'WARNING'
    logging.basicConfig(level=level, format=config['logging']['format'], stream=sys.stderr)

    runner = EhrlimitRunner(config, threads=args.threads, budget=getattr(args, 'budget', None))
    handler = getattr(runner, f"cmd_{args.command}")
    try:
        return handler(args)
    except tuple(cls for cls, _ in ERROR_EXIT_CODES) as e:
        code = next(code for cls, code in ERROR_EXIT_CODES if isinstance(e, cls))
        logger.error(str(e))
        return code


if __name__ == "__main__":
    sys.exit(main())
