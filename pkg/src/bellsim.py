#!/usr/bin/env python3
# Copyright 2026 The bellsim Authors.
# See LICENSE file for licensing details.

"""Command-line front end for the qudit Bell-inequality noise simulator.

Subcommands:

  bell-sweep          I_d and Zohren-Gill values over a (d, noise, p, N) grid
  threshold-sweep     noise strength p_min at which the violation ends
  fit-check           noiseless I_d against 2.97 (1 - 1/(10 d))
  verify-measurement  resonator-to-qubit mapping circuit check
"""

import argparse
import logging
import sys
from typing import List, Optional

from utils import config
from utils import errors
from utils import manager
from utils.noise import NoiseKind

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'


class LoggingAdapter:
    """Maps the debug and log-level options onto the root logger."""

    def __init__(self, sweep_config: config.SweepConfig):
        self.config = sweep_config

    @property
    def valid_level(self) -> bool:
        return self.config.log_level in config.LOG_LEVELS

    @property
    def level(self) -> int:
        if self.config.debug:
            return logging.DEBUG
        if self.valid_level:
            return getattr(logging, self.config.log_level)
        return logging.WARNING

    def configure(self) -> None:
        logging.basicConfig(level=self.level, format=LOG_FORMAT,
                            stream=sys.stderr, force=True)
        if not self.valid_level:
            logger.error('log-level must be one of the following values '
                         '(DEBUG, INFO, WARNING, ERROR) not '
                         f'"{self.config.log_level}"')


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        '--config', default=None,
        help='key=value file of options; flags override it')
    common.add_argument('--d-min', type=int, default=None)
    common.add_argument('--d-max', type=int, default=None)
    common.add_argument(
        '--allow-large-d', action='store_true', default=None,
        help='raise the d-max cap from 16 to 32')
    common.add_argument(
        '--noise', action='append', default=None,
        choices=[kind.value for kind in NoiseKind],
        help='noise kind; repeatable')
    common.add_argument(
        '--p', nargs='+', default=None,
        help='noise strengths in [0, 1], space or comma separated')
    common.add_argument(
        '--iterations', action='append', default=None,
        help='single, linear or an explicit count; repeatable')
    common.add_argument('--substeps', type=int, default=None,
                        help='continuous amplitude-damping substeps')
    common.add_argument('--state', choices=['max', 'app', 'rev'],
                        default=None)
    common.add_argument('--convention',
                        choices=['paper-literal', 'fourier-scaled'],
                        default=None)
    common.add_argument('--offset', choices=['flipped', 'verbatim'],
                        default=None)
    common.add_argument('--inequality', choices=['cglmp', 'zg', 'both'],
                        default=None)
    common.add_argument('--tolerance', type=float, default=None,
                        help='bisection tolerance on p')
    common.add_argument('--format', choices=['csv', 'json'], default=None)
    common.add_argument('--out', default=None,
                        help='output file (default: standard output)')
    common.add_argument('--seed', type=int, default=None)
    common.add_argument('--jobs', type=int, default=None,
                        help='worker processes for sweep cells')
    common.add_argument('--qubits', type=int, default=None,
                        help='qubit count n for verify-measurement')
    common.add_argument('--trials', type=int, default=None,
                        help='random states for verify-measurement')
    common.add_argument('--debug', action='store_true', default=None)
    common.add_argument('--log-level', default=None)
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='bellsim',
        description='Qudit CGLMP / Zohren-Gill violation under noise')
    common = _common_options()
    commands = parser.add_subparsers(dest='command', required=True)
    commands.add_parser('bell-sweep', parents=[common],
                        help='Bell values over a parameter grid')
    commands.add_parser('threshold-sweep', parents=[common],
                        help='threshold noise strengths per dimension')
    commands.add_parser('fit-check', parents=[common],
                        help='noiseless I_d against the fitted curve')
    commands.add_parser('verify-measurement', parents=[common],
                        help='check the resonator-to-qubit mapping circuit')
    return parser


def flags_from_args(args: argparse.Namespace) -> dict:
    """Option-name keyed flag values; unset flags are None."""
    flags = {}
    for key in ('d-min', 'd-max', 'allow-large-d', 'noise', 'p',
                'iterations', 'substeps', 'state', 'convention', 'offset',
                'inequality', 'tolerance', 'format', 'out', 'seed', 'jobs',
                'qubits', 'trials', 'debug', 'log-level'):
        flags[key] = getattr(args, key.replace('-', '_'))
    return flags


def cmd_bell_sweep(mgr: manager.SweepManager) -> int:
    mgr.write_rows(mgr.run_bell_sweep(), manager.BELL_FIELDS)
    return 0


def cmd_threshold_sweep(mgr: manager.SweepManager) -> int:
    rows = mgr.run_threshold_sweep()
    mgr.write_rows(rows, manager.THRESHOLD_FIELDS)
    failed = [row for row in rows if row['status'] != 'ok']
    if failed:
        logger.warning(f'{len(failed)} of {len(rows)} threshold row(s) '
                       'failed')
    return 0 if len(failed) < len(rows) else 1


def cmd_fit_check(mgr: manager.SweepManager) -> int:
    rows = mgr.run_fit_check()
    sys.stdout.write(mgr.render_fit_check(rows))
    if mgr.config.out:
        mgr.write_rows(rows, manager.FIT_FIELDS)
    return 0 if all(row['within'] for row in rows) else 1


def cmd_verify_measurement(mgr: manager.SweepManager) -> int:
    report = mgr.verify_measurement()
    sys.stdout.write(mgr.render_verification(report))
    return 0 if report.passed else 1


COMMANDS = {
    'bell-sweep': cmd_bell_sweep,
    'threshold-sweep': cmd_threshold_sweep,
    'fit-check': cmd_fit_check,
    'verify-measurement': cmd_verify_measurement,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        sweep_config = config.load_config(flags_from_args(args), args.config)
    except errors.BellSimException as e:
        print(f'bellsim: error: {e}', file=sys.stderr)
        return 2
    LoggingAdapter(sweep_config).configure()
    try:
        return COMMANDS[args.command](manager.SweepManager(sweep_config))
    except (errors.BellSimException, OSError) as e:
        logger.exception(f'{args.command} failed')
        print(f'bellsim: error: {e}', file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
