#!/usr/bin/env python3

# Copyright 2026 The bellsim Authors.
# See LICENSE file for licensing details.

import io
import logging
import os
import sys
import tempfile
import unittest

import mock

sys.path.append('src')  # noqa

import bellsim
from utils import config
from utils import manager

import unit_tests.test_utils as test_utils


def run(argv):
    """main() with captured stdout and stderr."""
    with mock.patch('sys.stdout', new_callable=io.StringIO) as out, \
            mock.patch('sys.stderr', new_callable=io.StringIO) as err:
        code = bellsim.main(argv)
    return code, out.getvalue(), err.getvalue()


class TestParser(unittest.TestCase):

    def test_repeatable_flags(self):
        args = bellsim.build_parser().parse_args([
            'bell-sweep', '--noise', 'depolarizing', '--noise', 'dephasing',
            '--iterations', 'single', '--iterations', '4',
            '--p', '1', '0.9,0.5'])
        flags = bellsim.flags_from_args(args)
        self.assertEqual(flags['noise'], ['depolarizing', 'dephasing'])
        self.assertEqual(flags['iterations'], ['single', '4'])
        self.assertEqual(flags['p'], ['1', '0.9,0.5'])
        self.assertIsNone(flags['d-max'])
        self.assertIsNone(flags['debug'])

    def test_subcommand_required(self):
        with mock.patch('sys.stderr', new_callable=io.StringIO):
            with self.assertRaises(SystemExit):
                bellsim.build_parser().parse_args([])

    def test_unknown_noise_kind(self):
        with mock.patch('sys.stderr', new_callable=io.StringIO):
            with self.assertRaises(SystemExit):
                bellsim.build_parser().parse_args(
                    ['bell-sweep', '--noise', 'bit-flip'])


class TestLoggingAdapter(unittest.TestCase):

    def test_debug_wins(self):
        cfg = config.load_config({'debug': True, 'log-level': 'ERROR'})
        self.assertEqual(bellsim.LoggingAdapter(cfg).level, logging.DEBUG)

    def test_level(self):
        cfg = config.load_config({'log-level': 'info'})
        self.assertEqual(bellsim.LoggingAdapter(cfg).level, logging.INFO)

    def test_invalid_level(self):
        cfg = config.load_config({'log-level': 'chatty'})
        adapter = bellsim.LoggingAdapter(cfg)
        self.assertEqual(adapter.level, logging.WARNING)
        with mock.patch.object(bellsim.logging, 'basicConfig'):
            with self.assertLogs(bellsim.logger, level='ERROR') as logs:
                adapter.configure()
        self.assertIn('CHATTY', logs.output[0])


class TestCommands(test_utils.PatchedTestCase):

    def test_config_error_exit(self):
        code, out, err = run(['fit-check', '--d-max', '17'])
        self.assertEqual(code, 2)
        self.assertIn('d-max', err)
        self.assertEqual(out, '')

    def test_verify_qubit_range(self):
        code, _, err = run(['verify-measurement', '--qubits', '6'])
        self.assertEqual(code, 2)
        self.assertIn('qubits', err)

    def test_empty_noise_list_from_file(self):
        fd, path = tempfile.mkstemp()
        with os.fdopen(fd, 'w') as f:
            f.write('noise=\n')
        self.addCleanup(os.remove, path)
        code, _, err = run(['threshold-sweep', '--config', path])
        self.assertEqual(code, 2)
        self.assertIn('noise', err)

    def test_fit_check(self):
        code, out, _ = run(['fit-check', '--d-max', '3'])
        self.assertEqual(code, 0)
        self.assertIn('PASS', out)

    def test_verify_measurement(self):
        code, out, _ = run(['verify-measurement', '--qubits', '2',
                            '--trials', '3', '--seed', '1'])
        self.assertEqual(code, 0)
        self.assertIn('4, 2, 1', out)

    def test_bell_sweep_stdout(self):
        code, out, _ = run(['bell-sweep', '--d-max', '2', '--p', '1'])
        self.assertEqual(code, 0)
        lines = out.splitlines()
        self.assertEqual(lines[0], ','.join(manager.BELL_FIELDS))
        self.assertTrue(lines[1].startswith(
            '2,depolarizing,1,single,1,2.82842712'))


class TestCommandExitCodes(test_utils.PatchedTestCase):

    PATCHES = ['manager']

    def setUp(self):
        super().setUp(bellsim, self.PATCHES)
        self.mgr = mock.MagicMock()
        self.mgr.config = config.load_config()
        self.manager.SweepManager.return_value = self.mgr

    def test_threshold_sweep_all_failed(self):
        self.mgr.run_threshold_sweep.return_value = [
            {'status': 'no violation'}, {'status': 'bumpy'}]
        code, _, _ = run(['threshold-sweep'])
        self.assertEqual(code, 1)
        self.mgr.write_rows.assert_called_once()

    def test_threshold_sweep_partial_failure(self):
        self.mgr.run_threshold_sweep.return_value = [
            {'status': 'ok'}, {'status': 'bumpy'}]
        code, _, _ = run(['threshold-sweep'])
        self.assertEqual(code, 0)

    def test_fit_check_outside_tolerance(self):
        self.mgr.run_fit_check.return_value = [{'within': True},
                                               {'within': False}]
        self.mgr.render_fit_check.return_value = 'FAIL\n'
        code, out, _ = run(['fit-check'])
        self.assertEqual(code, 1)
        self.assertEqual(out, 'FAIL\n')

    def test_verify_failure(self):
        self.mgr.verify_measurement.return_value = mock.MagicMock(
            passed=False)
        self.mgr.render_verification.return_value = 'FAIL\n'
        code, _, _ = run(['verify-measurement'])
        self.assertEqual(code, 1)

    def test_runtime_error_exit(self):
        self.mgr.run_bell_sweep.side_effect = OSError('disk full')
        code, _, err = run(['bell-sweep'])
        self.assertEqual(code, 1)
        self.assertIn('disk full', err)


if __name__ == '__main__':
    unittest.main()
