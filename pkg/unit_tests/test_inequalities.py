# Copyright 2026 The bellsim Authors.
# See LICENSE file for licensing details.

import sys
import unittest

import numpy as np

sys.path.append('src')  # noqa

from utils import gates
from utils import inequalities
from utils import noise

import unit_tests.test_utils as test_utils

# Noiseless CGLMP values of the maximally entangled state.
I_2 = 2 * np.sqrt(2)
I_3 = (12 + 8 * np.sqrt(3)) / 9
I_4 = 2.89624


def noiseless(d, variant=gates.StateVariant.MAX_ENTANGLED, **kwargs):
    spec = noise.NoiseSpec(noise.NoiseKind.DEPOLARIZING, 1.0)
    return inequalities.run_experiment(d, spec, variant, **kwargs)


class TestProbabilityTable(test_utils.PatchedTestCase):

    def test_uniform(self):
        table = inequalities.ProbabilityTable(
            3, (1, 1), np.full((3, 3), 1 / 9))
        self.assertAllClose(table.alice_marginal(), np.full(3, 1 / 3))
        self.assertAllClose(table.bob_marginal(), np.full(3, 1 / 3))

    def test_read_only(self):
        table = inequalities.ProbabilityTable(2, (1, 2), np.eye(2) / 2)
        with self.assertRaises(ValueError):
            table.entries[0, 0] = 1.0

    def test_rejects_bad_tables(self):
        with self.assertRaises(ValueError):
            inequalities.ProbabilityTable(2, (1, 1), np.full((3, 3), 1 / 9))
        with self.assertRaises(ValueError):
            inequalities.ProbabilityTable(
                2, (1, 1), np.array([[0.6, -0.1], [0.25, 0.25]]))
        with self.assertRaises(ValueError):
            inequalities.ProbabilityTable(2, (1, 1), np.full((2, 2), 0.3))

    def test_clips_round_off(self):
        entries = np.array([[0.5, -1e-15], [0.0, 0.5 + 1e-15]])
        table = inequalities.ProbabilityTable(2, (2, 2), entries)
        self.assertGreaterEqual(table.entries.min(), 0.0)

    def test_prob_equal_mod(self):
        entries = np.zeros((3, 3))
        entries[1, 0] = 0.5
        entries[2, 1] = 0.5
        table = inequalities.ProbabilityTable(3, (1, 1), entries)
        # A = B + 1 always.
        self.assertAlmostEqual(inequalities.prob_equal_mod(table, 1), 1.0)
        self.assertAlmostEqual(inequalities.prob_equal_mod(table, -2), 1.0)
        self.assertAlmostEqual(inequalities.prob_equal_mod(
            table, 2, inequalities.OffsetConvention.VERBATIM), 1.0)


class TestBellValues(test_utils.PatchedTestCase):

    def test_noiseless_optimum(self):
        self.assertAlmostEqual(noiseless(2).i_d, I_2, delta=1e-9)
        self.assertAlmostEqual(noiseless(3).i_d, I_3, delta=1e-9)
        self.assertAlmostEqual(noiseless(4).i_d, I_4, delta=2e-5)

    def test_noiseless_result_flags(self):
        result = noiseless(3)
        self.assertTrue(result.cglmp_violated)
        self.assertTrue(result.zg_violated)
        self.assertEqual(result.n_applied, 1)
        self.assertIs(result.offset, inequalities.DEFAULT_OFFSET)

    def test_verbatim_offset_is_weaker(self):
        flipped = noiseless(3).i_d
        verbatim = noiseless(
            3, offset=inequalities.OffsetConvention.VERBATIM).i_d
        self.assertLess(verbatim, flipped)

    def test_zohren_gill_identity(self):
        rng = np.random.default_rng(21)
        for d in (2, 3, 4, 5):
            rho = test_utils.random_density(d * d, rng)
            rho = 0.5 * rho + 0.5 * inequalities.initial_density(
                d, gates.StateVariant.MAX_ENTANGLED)
            i_d, zg = inequalities.evaluate(rho)
            self.assertAlmostEqual(
                zg, inequalities.cglmp_to_zohren_gill(i_d, d), delta=1e-10)

    def test_zohren_gill_noiseless(self):
        self.assertAlmostEqual(noiseless(2).zg_value, 0.792893, delta=1e-6)
        self.assertAlmostEqual(noiseless(3).zg_value, 0.709022, delta=1e-6)

    def test_diagonal_state_gives_uniform_tables(self):
        rng = np.random.default_rng(4)
        for d in (2, 3, 4):
            rho = test_utils.random_diagonal_density(d * d, rng)
            for table in inequalities.all_tables(rho).values():
                self.assertAllClose(table.entries,
                                    np.full((d, d), 1 / d ** 2))

    def test_maximally_mixed_scores_zero(self):
        d = 4
        i_d, zg = inequalities.evaluate(np.eye(d * d) / d ** 2)
        self.assertAlmostEqual(i_d, 0.0, delta=1e-12)
        self.assertAlmostEqual(
            zg, inequalities.cglmp_to_zohren_gill(0.0, d), delta=1e-12)

    def test_depolarizing_is_linear(self):
        for d in (2, 3, 5):
            base = noiseless(d).i_d
            for p in (0.25, 0.9):
                spec = noise.NoiseSpec('depolarizing', p)
                result = inequalities.run_experiment(d, spec)
                self.assertAlmostEqual(result.i_d, p * base, delta=1e-10)

    def test_rev_state_matches_standard_without_noise(self):
        for d in (2, 3, 4):
            self.assertAlmostEqual(
                noiseless(d, gates.StateVariant.REV).i_d, noiseless(d).i_d,
                delta=1e-10)

    def test_missing_table(self):
        rho = inequalities.initial_density(2, gates.StateVariant.MAX_ENTANGLED)
        tables = inequalities.all_tables(rho)
        del tables[(2, 2)]
        with self.assertRaises(ValueError):
            inequalities.cglmp(tables)
        with self.assertRaises(ValueError):
            inequalities.zohren_gill(tables)

    def test_tables_accept_any_order(self):
        rho = inequalities.initial_density(3, gates.StateVariant.MAX_ENTANGLED)
        tables = inequalities.all_tables(rho)
        shuffled = [tables[pair] for pair in reversed(list(tables))]
        self.assertAlmostEqual(inequalities.cglmp(shuffled),
                               inequalities.cglmp(tables))

    def test_marginals_do_not_signal(self):
        for d in range(2, 9):
            rho = inequalities.initial_density(
                d, gates.StateVariant.MAX_ENTANGLED)
            for kind in noise.NoiseKind:
                spec = noise.NoiseSpec(kind, 0.8, noise.Iterations.LINEAR)
                tables = inequalities.all_tables(
                    noise.apply_noise(rho, spec, d))
                for setting in gates.SETTING_CHOICES:
                    self.assertAllClose(
                        tables[(setting, 1)].alice_marginal(),
                        tables[(setting, 2)].alice_marginal(), atol=1e-12)
                    self.assertAllClose(
                        tables[(1, setting)].bob_marginal(),
                        tables[(2, setting)].bob_marginal(), atol=1e-12)

    def test_joint_probability_formula(self):
        d = 3
        rho = inequalities.initial_density(d, gates.StateVariant.MAX_ENTANGLED)
        table = inequalities.joint_probabilities(rho, 1, 1)
        alpha, beta = 0.0, 0.25
        for j in range(d):
            for k in range(d):
                x = np.pi * (j - k + alpha + beta) / d
                expected = 1 / (2 * d ** 3 * np.sin(x) ** 2)
                self.assertAlmostEqual(table.entries[j, k], expected,
                                       delta=1e-12)


if __name__ == '__main__':
    unittest.main()
