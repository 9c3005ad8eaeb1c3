#!/usr/bin/env python3
"""
Command-line entry point for qwalk-forge.

Usage:
    qwalk single --t 100 --coin up
    qwalk distance --n 3 --k 2 --t-min 100 --t-max 300
    qwalk spectrum --n 6 --format csv,svg
    qwalk check
"""

import argparse
import logging
import sys
from importlib import metadata
from pathlib import Path
from typing import Dict, List, Optional

from src.cli import commands
from src.cli.check import CHECKS, run_checks
from src.config.settings import (
    DEFAULT_SEED,
    DEFAULT_TRIALS,
    DEFAULT_T_MAX,
    DEFAULT_T_MIN,
    VERSION,
)
from src.types.errors import (
    InvalidCoinError,
    InvariantViolation,
    ParticleIndexError,
    SizeBudgetError,
)
from src.types.reports import RunConfig, RunSummary
from src.types.walks import CoinVector
from src.utils.file_handler import FORMATS, OutputWriter

logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(levelname)s - %(message)s',
    datefmt='%Y-%m-%d %H:%M:%S',
)
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVARIANT = 2

DEFAULT_FORMATS = ['csv', 'json']


class UsageError(Exception):
    """Raised by the parser instead of exiting, so main owns the exit code."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(f'{self.prog}: {message}')


def package_version() -> str:
    try:
        return metadata.version('qwalk-forge')
    except metadata.PackageNotFoundError:
        return VERSION


def parse_formats(values: Optional[List[str]]) -> List[str]:
    """Flatten repeated/comma-separated --format values, keeping first-seen order."""
    if not values:
        return list(DEFAULT_FORMATS)
    formats: List[str] = []
    for value in values:
        for fmt in value.split(','):
            fmt = fmt.strip().lower()
            if fmt not in FORMATS:
                raise UsageError(f'Unknown format {fmt!r}; choose from {", ".join(FORMATS)}')
            if fmt not in formats:
                formats.append(fmt)
    return formats


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument('--out', type=Path, help='Output directory (default: $QWALK_OUT_DIR)')
    common.add_argument(
        '--format', action='append', dest='formats', metavar='FMT',
        help='csv, json and/or svg; repeat or comma-separate (default: csv,json)',
    )
    common.add_argument('--verbose', '-v', action='store_true', help='Log at DEBUG level')

    particles = _Parser(add_help=False)
    particles.add_argument('--n', type=int, required=True, help='Number of walkers')
    particles.add_argument('--k', help="Eigenstate index, decimal or '(1001010)b'")
    particles.add_argument(
        '--coin', help="'eigen:<k>', 'basis:<xi>' or a comma list of 2^n complex amplitudes"
    )
    particles.add_argument('--positions', help='Comma list of initial sites (default: all 0)')

    steps = _Parser(add_help=False)
    steps.add_argument('--t-min', type=int, default=DEFAULT_T_MIN)
    steps.add_argument('--t-max', type=int, default=DEFAULT_T_MAX)
    steps.add_argument('--t-step', type=int, default=1)

    parser = _Parser(
        prog='qwalk',
        description='Multi-particle Hadamard walk simulator and analytics',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  %(prog)s single --t 100 --coin up --format csv,svg
  %(prog)s distance --n 3 --coin eigen:2 --t-min 100 --t-max 300
  %(prog)s classical --n 3 --t-max 100 --trials 100000 --seed 7
  %(prog)s spectrum --n 8
  %(prog)s symmetry --n 7 --k '(1001010)b'
  %(prog)s entropy --n 6 --k 6
  %(prog)s entropy --n 3 --k 2 --cut 2 --t-max 50
  %(prog)s jointdist --n 7 --k '(1001010)b' --t 30 --pair 1,2 --format csv,svg
  %(prog)s moments --n 7 --k '(1001010)b' --t 100
  %(prog)s c2 --n 2 --coin 0.6,0,0,0.8
  %(prog)s check --only spectrum,symmetry
        """,
    )
    parser.add_argument('--version', action='version', version=f'%(prog)s {package_version()}')
    sub = parser.add_subparsers(dest='command', required=True, parser_class=_Parser)

    single = sub.add_parser('single', parents=[common], help='One walker from the origin')
    single.add_argument('--t', type=int, required=True)
    single.add_argument('--coin', default='up', help="'up', 'down' or two amplitudes 'a,b'")

    sub.add_parser('distance', parents=[common, particles, steps], help='<D>(t) and fitted c2')

    classical = sub.add_parser(
        'classical', parents=[common, steps], help='Monte Carlo distance of classical walkers'
    )
    classical.add_argument('--n', type=int, required=True)
    classical.add_argument('--trials', type=int, default=DEFAULT_TRIALS)
    classical.add_argument('--seed', type=int, default=DEFAULT_SEED)
    classical.add_argument('--positions')

    spectrum = sub.add_parser('spectrum', parents=[common], help='Eigenvalues of M')
    spectrum.add_argument('--n', type=int, required=True)

    sym = sub.add_parser('symmetry', parents=[common], help='Subgraphs of an eigenstate')
    sym.add_argument('--n', type=int, required=True)
    sym.add_argument('--k', required=True)

    entropy = sub.add_parser(
        'entropy', parents=[common, particles], help='Schmidt spectrum or coin entropy over t'
    )
    entropy.add_argument('--cut', help='Comma list of kept particles')
    entropy.add_argument('--t-max', type=int, help='Follow the coin entropy for t = 0..t-max')

    joint = sub.add_parser('jointdist', parents=[common, particles], help='P(x_j, x_k)')
    joint.add_argument('--t', type=int, required=True)
    joint.add_argument('--pair', default='1,2')

    moments = sub.add_parser('moments', parents=[common, particles], help='<x_i^2> and <x_j x_k>')
    moments.add_argument('--t', type=int, required=True)

    sub.add_parser('c2', parents=[common, particles], help='a^dagger M a of a coin spec')

    check = sub.add_parser('check', parents=[common], help='Run the invariant suite')
    check.add_argument('--only', help=f'Comma list drawn from: {", ".join(CHECKS)}')

    return parser


def resolve_coin(args: argparse.Namespace) -> CoinVector:
    """--coin wins over --k; one of them is required."""
    if args.coin:
        return commands.parse_coin(args.coin, args.n)
    if args.k is not None:
        return commands.parse_coin(f'eigen:{args.k}', args.n)
    raise UsageError('Give a coin state with --coin or --k')


def run_config(args: argparse.Namespace, writer: OutputWriter) -> RunConfig:
    def pick(name: str):
        return getattr(args, name, None)

    k = pick('k')
    return RunConfig(
        command=args.command,
        n=pick('n'),
        t=pick('t'),
        t_min=pick('t_min'),
        t_max=pick('t_max'),
        coin=pick('coin'),
        k=commands.parse_k(k) if k is not None else None,
        positions=commands.parse_int_list(pick('positions')),
        pair=commands.parse_int_list(pick('pair')),
        cut=commands.parse_int_list(pick('cut')),
        trials=pick('trials'),
        seed=pick('seed'),
        out=str(writer.out_dir),
        formats=list(writer.formats),
    )


def dispatch(
    args: argparse.Namespace, writer: OutputWriter, config: RunConfig
) -> Dict[str, object]:
    command = args.command
    positions = config['positions']

    if command == 'single':
        return commands.cmd_single(writer, commands.parse_coin(args.coin, 1).amplitudes, args.t)
    if command == 'distance':
        steps = commands.step_range(args.t_min, args.t_max, args.t_step)
        return commands.cmd_distance(writer, resolve_coin(args), steps, positions)
    if command == 'classical':
        steps = commands.step_range(args.t_min, args.t_max, args.t_step)
        return commands.cmd_classical(writer, args.n, steps, args.trials, args.seed, positions)
    if command == 'spectrum':
        return commands.cmd_spectrum(writer, args.n)
    if command == 'symmetry':
        return commands.cmd_symmetry(writer, args.n, config['k'])
    if command == 'entropy':
        steps = list(range(args.t_max + 1)) if args.t_max is not None else None
        return commands.cmd_entropy(writer, resolve_coin(args), config['k'], config['cut'], steps)
    if command == 'jointdist':
        pair = config['pair']
        if len(pair) != 2:
            raise UsageError(f'--pair needs two particle indices, got {args.pair!r}')
        return commands.cmd_jointdist(writer, resolve_coin(args), args.t, pair, positions)
    if command == 'moments':
        return commands.cmd_moments(writer, resolve_coin(args), args.t, positions)
    if command == 'c2':
        return commands.cmd_c2(writer, resolve_coin(args))
    raise UsageError(f'Unknown command {command!r}')


def run_check(args: argparse.Namespace, writer: OutputWriter, config: RunConfig) -> int:
    names = [name.strip() for name in args.only.split(',')] if args.only else None
    results = run_checks(names)
    writer.write_csv(
        'check.csv', ('name', 'passed', 'detail'),
        [(r['name'], r['passed'], r['detail']) for r in results],
    )
    failed = [r['name'] for r in results if not r['passed']]
    writer.write_json(
        'check.json',
        RunSummary(version=package_version(), config=config, results={'checks': results}),
    )
    if failed:
        logger.error(f'{len(failed)} of {len(results)} checks failed: {", ".join(failed)}')
        return EXIT_INVARIANT
    logger.info(f'All {len(results)} checks passed')
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.verbose:
            logging.getLogger().setLevel(logging.DEBUG)

        writer = OutputWriter(args.out, parse_formats(args.formats))
        config = run_config(args, writer)
        logger.info(f'Running {args.command} into {writer.out_dir}')

        if args.command == 'check':
            return run_check(args, writer, config)

        results = dispatch(args, writer, config)
        writer.write_json(
            f'{args.command}.json',
            RunSummary(version=package_version(), config=config, results=results),
        )
        return EXIT_OK

    except (UsageError, InvalidCoinError, ParticleIndexError, ValueError) as e:
        parser.print_usage(sys.stderr)
        logger.error(str(e))
        return EXIT_USAGE
    except SizeBudgetError as e:
        logger.error(f'Request exceeds the size budget: {e}')
        return EXIT_USAGE
    except InvariantViolation as e:
        logger.error(f'Invariant violated: {e}', exc_info=True)
        return EXIT_INVARIANT
    except Exception as e:
        logger.critical(f'Unexpected error: {e}', exc_info=True)
        return EXIT_USAGE


if __name__ == '__main__':
    sys.exit(main())
