# Copyright 2026 Google LLC
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Unit tests for the numerical studies."""

# pylint: disable=wrong-import-order,ungrouped-imports
import math
from unittest import mock

from absl.testing import absltest
from absl.testing import parameterized
from qupass.lib import adversary
from qupass.lib import errors
from qupass.lib import experiments
from qupass.lib import protocol
from qupass.lib import qcore


class EstimateWithCITest(parameterized.TestCase):
  """Unit tests for the Wilson score interval."""

  def test_ZeroSuccesses(self):
    """Tests that zero successes gives a lower bound of zero."""
    estimate, ci_low, ci_high = experiments.EstimateWithCI(0, 100)
    self.assertEqual(estimate, 0.0)
    self.assertEqual(ci_low, 0.0)
    self.assertGreater(ci_high, 0.0)

  def test_HalfIsSymmetric(self):
    """Tests that 50/100 gives an interval centred on 1/2."""
    estimate, ci_low, ci_high = experiments.EstimateWithCI(50, 100)
    self.assertEqual(estimate, 0.5)
    self.assertAlmostEqual(estimate - ci_low, ci_high - estimate)
    self.assertAlmostEqual(ci_high - ci_low, 0.19, places=2)

  def test_ContainsHeadlineRate(self):
    """Tests that 694/1000 covers 25/36."""
    _, ci_low, ci_high = experiments.EstimateWithCI(694, 1000)
    self.assertLess(ci_low, 25 / 36)
    self.assertGreater(ci_high, 25 / 36)

  def test_AllSuccesses(self):
    """Tests that all successes gives an upper bound of one."""
    estimate, _, ci_high = experiments.EstimateWithCI(20, 20)
    self.assertEqual(estimate, 1.0)
    self.assertEqual(ci_high, 1.0)

  @parameterized.named_parameters(
      ('no_trials', 0, 0),
      ('too_many', 5, 3),
      ('negative', -1, 3),
  )
  def test_Invalid(self, successes, trials):
    """Tests that impossible counts are rejected."""
    with self.assertRaises(errors.InvalidParameterError):
      experiments.EstimateWithCI(successes, trials)


class DetectionTest(parameterized.TestCase):
  """Unit tests for MinLengthForDetection and DetectionClaimCheck."""

  @parameterized.named_parameters(
      ('ninety_nine', 0.99, adversary.FIDELITY_METRIC, 13),
      ('three_nines', 0.999, adversary.FIDELITY_METRIC, 19),
      ('half', 0.5, adversary.FIDELITY_METRIC, 2),
      ('operational', 0.99, adversary.OPERATIONAL_METRIC, 26),
  )
  def test_MinLengthForDetection(self, target, metric, expected):
    """Tests the shortest passwords for each detection target."""
    self.assertEqual(experiments.MinLengthForDetection(target, metric),
                     expected)

  @parameterized.named_parameters(
      ('zero', 0.0),
      ('one', 1.0),
  )
  def test_InvalidTarget(self, target):
    """Tests that targets outside (0, 1) are rejected."""
    with self.assertRaises(errors.InvalidParameterError):
      experiments.MinLengthForDetection(target)

  def test_ClaimAtThirteenIsNotReproduced(self):
    """Tests that 99.9% detection at 13 qubits does not hold."""
    claim = experiments.DetectionClaimCheck()
    self.assertFalse(claim.reproduced)
    self.assertEqual(claim.n_qubits, 13)
    self.assertEqual(claim.required_qubits, 19)
    self.assertAlmostEqual(claim.detection, 1 - (5 / 6)**26)

  def test_NinetyNinePercentAtThirteen(self):
    """Tests that 99% detection at 13 qubits holds."""
    self.assertTrue(experiments.DetectionClaimCheck(13, 0.99).reproduced)


class SweepPasswordLengthTest(parameterized.TestCase):
  """Unit tests for SweepPasswordLength."""

  def test_Sweep(self):
    """Tests rows, estimates and analytic values of a short sweep."""
    table = experiments.SweepPasswordLength(1, 2, 1000, seed=4)
    self.assertLen(table, 2)
    for row, n_qubits in zip(table, (1, 2)):
      self.assertEqual(row.n_qubits, n_qubits)
      self.assertEqual(row.metric, adversary.FIDELITY_METRIC)
      self.assertEqual(row.trials, 1000)
      self.assertEqual(row.estimate, row.successes / 1000)
      self.assertLessEqual(row.ci_low, row.estimate)
      self.assertLessEqual(row.estimate, row.ci_high)
      self.assertAlmostEqual(row.analytic, (25 / 36)**n_qubits)
      standard_error = math.sqrt(row.analytic * (1 - row.analytic) / 1000)
      self.assertLess(abs(row.estimate - row.analytic), 4 * standard_error)

  def test_IntervalsCoverTheAnalyticValue(self):
    """Tests that the 95% intervals cover the closed form on most rows."""
    table = experiments.SweepPasswordLength(1, 12, 1000, seed=123, workers=4)
    covered = sum(row.ci_low <= row.analytic <= row.ci_high for row in table)
    self.assertGreaterEqual(covered, 0.93 * len(table))

  def test_RowsSurviveWiderRangesAndWorkers(self):
    """Tests that rows depend only on the seed, length and metric."""
    narrow = experiments.SweepPasswordLength(1, 2, 1000, seed=9)
    wide = experiments.SweepPasswordLength(1, 3, 1000, seed=9, workers=3)
    self.assertEqual(narrow.rows, wide.rows[:2])

  @parameterized.named_parameters(
      ('zero_min', 0, 3, 1000, adversary.FIDELITY_METRIC),
      ('inverted', 3, 2, 1000, adversary.FIDELITY_METRIC),
      ('too_long', 1, 21, 1000, adversary.FIDELITY_METRIC),
      ('too_few_trials', 1, 2, 999, adversary.FIDELITY_METRIC),
      ('bad_metric', 1, 2, 1000, 'vibes'),
  )
  def test_Invalid(self, n_min, n_max, trials, metric):
    """Tests that bad ranges are rejected before any trial runs."""
    with self.assertRaises(errors.InvalidParameterError):
      experiments.SweepPasswordLength(n_min, n_max, trials, metric)

  def test_AnalyticSuccess(self):
    """Tests the analytic column for both metrics."""
    self.assertAlmostEqual(
        experiments.AnalyticSuccess(13, adversary.FIDELITY_METRIC),
        (5 / 6)**26)
    self.assertAlmostEqual(
        experiments.AnalyticSuccess(3, adversary.OPERATIONAL_METRIC),
        (5 / 6)**3, places=9)


class SummarizeAttackTest(absltest.TestCase):
  """Unit tests for SummarizeAttack and AnalyticAttackSuccess."""

  @mock.patch.object(experiments, '_CHUNK_TRIALS', 7)
  def test_ChunkedSummaryMatchesSingleRun(self):
    """Tests that chunks across workers add up to one plain run."""
    scenario = adversary.AttackScenario(
        adversary.UQCM_SYMMETRIC, adversary.ALICE_STATION, 2, 30,
        adversary.OPERATIONAL_METRIC)
    chunked = experiments.SummarizeAttack(scenario, qcore.Rng(3), workers=3)
    single = adversary.Summarize(adversary.RunAttack(scenario, qcore.Rng(3)))
    self.assertEqual(chunked, single)

  def test_AnalyticAttackSuccess(self):
    """Tests which scenarios have a closed form."""
    def Scenario(strategy, metric, strike_point=adversary.ALICE_STATION):
      return adversary.AttackScenario(strategy, strike_point, 4, 10, metric)

    self.assertAlmostEqual(
        experiments.AnalyticAttackSuccess(
            Scenario(adversary.UQCM_SYMMETRIC, adversary.FIDELITY_METRIC)),
        (25 / 36)**4)
    self.assertAlmostEqual(
        experiments.AnalyticAttackSuccess(
            Scenario(adversary.RANDOM_GUESS, adversary.OPERATIONAL_METRIC)),
        0.75**4)
    self.assertIsNone(experiments.AnalyticAttackSuccess(
        Scenario(adversary.UQCM_SYMMETRIC, adversary.FIDELITY_METRIC,
                 adversary.BOB_SERVER)))
    self.assertIsNone(experiments.AnalyticAttackSuccess(
        Scenario(adversary.INTERCEPT_RESEND, adversary.FIDELITY_METRIC)))
    self.assertIsNone(experiments.AnalyticAttackSuccess(
        Scenario(adversary.UQCM_SYMMETRIC, adversary.FIDELITY_METRIC),
        protocol.Channel(protocol.DEPOLARIZING, 0.1)))


class NoiseTradeoffSweepTest(parameterized.TestCase):
  """Unit tests for NoiseTradeoffSweep."""

  def test_Grid(self):
    """Tests the usability and security properties of a small grid."""
    rows = experiments.NoiseTradeoffSweep(
        protocol.DEPOLARIZING, [0.0, 0.2], [1.0, 0.5], n_qubits=10,
        trials=150, seed=2)
    self.assertLen(rows, 4)
    self.assertEqual([(r.noise_strength, r.threshold_fraction) for r in rows],
                     [(0.0, 1.0), (0.0, 0.5), (0.2, 1.0), (0.2, 0.5)])
    quiet_strict, quiet_loose, noisy_strict, noisy_loose = rows
    self.assertEqual(quiet_strict.honest_accept_rate, 1.0)
    self.assertEqual(quiet_loose.honest_accept_rate, 1.0)
    self.assertGreater(quiet_loose.eve_success_rate,
                       quiet_strict.eve_success_rate)
    self.assertGreaterEqual(noisy_loose.eve_success_rate,
                            noisy_strict.eve_success_rate)
    self.assertGreaterEqual(noisy_loose.honest_accept_rate,
                            noisy_strict.honest_accept_rate)
    # Ten qubits each passing with 1 - 0.2/4.
    expected = 0.95**10
    standard_error = math.sqrt(expected * (1 - expected) / 150)
    self.assertLess(abs(noisy_strict.honest_accept_rate - expected),
                    4 * standard_error)

  def test_StorageNoiseLowersUsability(self):
    """Tests that a decohered stored copy rejects honest logins."""
    rows = experiments.NoiseTradeoffSweep(
        protocol.DEPOLARIZING, [0.0], [1.0], n_qubits=4, trials=100,
        seed=1, storage_strength=1.0)
    self.assertLess(rows[0].honest_accept_rate, 1.0)

  @parameterized.named_parameters(
      ('zero_threshold', [0.0], [0.0], 2),
      ('noise_above_one', [1.5], [1.0], 2),
      ('no_qubits', [0.0], [1.0], 0),
      ('no_levels', [], [1.0], 2),
  )
  def test_Invalid(self, levels, thresholds, n_qubits):
    """Tests that out of range grids are rejected."""
    with self.assertRaises(errors.InvalidParameterError):
      experiments.NoiseTradeoffSweep(protocol.DEPOLARIZING, levels,
                                     thresholds, n_qubits, 10)

  @parameterized.named_parameters(
      ('noise_below_zero', -0.1, 1.0, 10),
      ('noise_above_one', 1.5, 1.0, 10),
      ('zero_threshold', 0.0, 0.0, 10),
      ('threshold_above_one', 0.0, 1.2, 10),
      ('no_trials', 0.0, 1.0, 0),
  )
  def test_InvalidRow(self, noise_strength, threshold_fraction, trials):
    """Tests that a row outside the sweep's ranges cannot be built."""
    with self.assertRaises(errors.InvalidParameterError):
      experiments.NoiseTradeoffRow(noise_strength, threshold_fraction, 1.0,
                                   0.5, trials)


if __name__ == '__main__':
  absltest.main()
