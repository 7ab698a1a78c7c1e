# Copyright 2026 The bellsim Authors.
# See LICENSE file for licensing details.

import os
import sys
import tempfile
import unittest

sys.path.append('src')  # noqa

from utils import config
from utils import errors
from utils import gates
from utils import inequalities
from utils import noise
from utils import thresholds

import unit_tests.test_utils as test_utils


class TestSchema(test_utils.PatchedTestCase):

    def setUp(self):
        super().setUp()
        self.schema = config.load_schema()

    def test_options_present(self):
        for key in ('debug', 'log-level', 'd-min', 'd-max', 'allow-large-d',
                    'noise', 'p', 'iterations', 'state', 'convention',
                    'offset', 'inequality', 'format', 'out', 'seed', 'jobs',
                    'tolerance', 'substeps', 'qubits', 'trials'):
            self.assertIn(key, self.schema)
            self.assertIn('description', self.schema[key])

    def test_defaults_are_valid(self):
        cfg = config.load_config()
        self.assertEqual(cfg.d_range, range(2, 17))
        self.assertEqual(cfg.noise, (noise.NoiseKind.DEPOLARIZING,))
        self.assertEqual(cfg.p, (1.0,))
        self.assertEqual(cfg.iterations, (noise.Iterations.SINGLE,))
        self.assertIs(cfg.offset, inequalities.DEFAULT_OFFSET)
        self.assertIs(cfg.convention, gates.PhaseConvention.FOURIER_SCALED)
        self.assertEqual(cfg.selected_inequalities,
                         tuple(thresholds.Inequality))
        self.assertIsNone(cfg.out)
        self.assertEqual(cfg.log_level, 'WARNING')

    def test_coerce(self):
        self.assertIs(config.coerce('debug', 'yes', self.schema), True)
        self.assertEqual(config.coerce('d-max', '8', self.schema), 8)
        self.assertEqual(config.coerce('tolerance', '1e-4', self.schema),
                         1e-4)
        self.assertEqual(config.coerce('noise', ['a', 'b'], self.schema),
                         'a,b')

    def test_coerce_errors_name_the_option(self):
        with self.assertRaises(errors.ConfigError) as ctx:
            config.coerce('d-max', 'lots', self.schema)
        self.assertEqual(ctx.exception.field, 'd-max')
        with self.assertRaises(errors.ConfigError) as ctx:
            config.coerce('colour', 'red', self.schema)
        self.assertEqual(ctx.exception.field, 'colour')
        self.assertTrue(str(ctx.exception).startswith('colour:'))

    def test_split_list(self):
        self.assertEqual(config.split_list('a, b,,c'), ['a', 'b', 'c'])
        self.assertEqual(config.split_list(['1', '0.9,0.5']),
                         ['1', '0.9', '0.5'])
        self.assertEqual(config.split_list(None), [])


class TestConfigFile(test_utils.PatchedTestCase):

    def write(self, text):
        fd, path = tempfile.mkstemp(suffix='.conf')
        with os.fdopen(fd, 'w') as f:
            f.write(text)
        self.addCleanup(os.remove, path)
        return path

    def test_file_values(self):
        path = self.write(
            '# Damping run\n'
            'd-max = 4\n'
            '\n'
            'noise = depolarizing, amplitude-damping  # two kinds\n'
            'p = 1, 0.9\n'
            'iterations = single,linear,3\n'
            'format = json\n')
        cfg = config.load_config(config_file=path)
        self.assertEqual(cfg.d_range, range(2, 5))
        self.assertEqual(cfg.noise, (noise.NoiseKind.DEPOLARIZING,
                                     noise.NoiseKind.AMPLITUDE_DAMPING))
        self.assertEqual(cfg.p, (1.0, 0.9))
        self.assertEqual(cfg.iterations, (noise.Iterations.SINGLE,
                                          noise.Iterations.LINEAR, 3))
        self.assertEqual(cfg.format, 'json')

    def test_flags_override_file(self):
        path = self.write('d-max = 4\nnoise = dephasing\n')
        cfg = config.load_config({'d-max': 3, 'noise': None,
                                  'p': ['0.5']}, path)
        self.assertEqual(cfg.d_max, 3)
        self.assertEqual(cfg.noise, (noise.NoiseKind.DEPHASING,))
        self.assertEqual(cfg.p, (0.5,))

    def test_unknown_key(self):
        path = self.write('colour = red\n')
        with self.assertRaises(errors.ConfigError) as ctx:
            config.load_config(config_file=path)
        self.assertEqual(ctx.exception.field, 'colour')

    def test_malformed_line(self):
        path = self.write('d-max 4\n')
        with self.assertRaises(errors.ConfigError):
            config.load_config(config_file=path)

    def test_missing_file(self):
        with self.assertRaises(errors.ConfigError) as ctx:
            config.load_config(config_file='/nonexistent/bellsim.conf')
        self.assertEqual(ctx.exception.field, 'config')

    def test_empty_noise_list(self):
        path = self.write('noise =\n')
        with self.assertRaises(errors.ConfigError) as ctx:
            config.load_config(config_file=path)
        self.assertEqual(ctx.exception.field, 'noise')


class TestValidation(test_utils.PatchedTestCase):

    def assertRejected(self, flags, field):
        with self.assertRaises(errors.ConfigError) as ctx:
            config.load_config(flags)
        self.assertEqual(ctx.exception.field, field)

    def test_d_range(self):
        self.assertRejected({'d-min': 1}, 'd-min')
        self.assertRejected({'d-min': 5, 'd-max': 4}, 'd-max')
        self.assertRejected({'d-max': 17}, 'd-max')
        self.assertRejected({'d-max': 33, 'allow-large-d': True}, 'd-max')
        cfg = config.load_config({'d-max': 32, 'allow-large-d': True})
        self.assertEqual(cfg.d_max, 32)

    def test_p_range(self):
        self.assertRejected({'p': ['1.5']}, 'p')
        self.assertRejected({'p': ['high']}, 'p')

    def test_continuous_damping_at_zero(self):
        self.assertRejected({'noise': ['amplitude-damping'],
                             'p': ['0', '0.5'], 'substeps': 4}, 'p')

    def test_enumerations(self):
        self.assertRejected({'noise': ['bit-flip']}, 'noise')
        self.assertRejected({'state': 'ghz'}, 'state')
        self.assertRejected({'convention': 'other'}, 'convention')
        self.assertRejected({'offset': 'sideways'}, 'offset')
        self.assertRejected({'format': 'xml'}, 'format')
        self.assertRejected({'inequality': 'chsh'}, 'inequality')
        self.assertRejected({'iterations': ['often']}, 'iterations')

    def test_counts(self):
        self.assertRejected({'jobs': 0}, 'jobs')
        self.assertRejected({'qubits': 6}, 'qubits')
        self.assertRejected({'trials': 0}, 'trials')
        self.assertRejected({'substeps': 0}, 'substeps')
        self.assertRejected({'tolerance': 0.0}, 'tolerance')

    def test_single_inequality(self):
        cfg = config.load_config({'inequality': 'zg'})
        self.assertEqual(cfg.selected_inequalities,
                         (thresholds.Inequality.ZOHREN_GILL,))

    def test_log_level_upper_cased(self):
        cfg = config.load_config({'log-level': 'debug'})
        self.assertEqual(cfg.log_level, 'DEBUG')


if __name__ == '__main__':
    unittest.main()
