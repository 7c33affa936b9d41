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
"""Unit tests for the quantum password protocol."""

# pylint: disable=wrong-import-order,ungrouped-imports
import math
from unittest import mock

import numpy as np

from absl.testing import absltest
from absl.testing import parameterized
from qupass.lib import adversary
from qupass.lib import errors
from qupass.lib import protocol
from qupass.lib import qcore


def _WithinStandardErrors(count: int, trials: int, p: float,
                          n_errors: float = 4.0) -> bool:
  standard_error = math.sqrt(max(p * (1.0 - p), 1e-12) / trials)
  return abs(count / trials - p) <= n_errors * standard_error


class SetupAccountTest(absltest.TestCase):
  """Unit tests for SetupAccount."""

  def test_RecordMatchesPassword(self):
    """Tests that every copy of the password agrees with the descriptions."""
    record, password = protocol.SetupAccount(4, qcore.Rng(1), 'carol')
    self.assertEqual(record.account_id, 'carol')
    self.assertLen(record, 4)
    self.assertLen(password, 4)
    for description, stored, offline, qubit in zip(
        record.descriptions, record.stored_copy, record.offline_copy,
        password.qubits):
      self.assertAlmostEqual(qcore.Fidelity(description.State(), stored), 1.0)
      self.assertAlmostEqual(qcore.Fidelity(description.State(), qubit), 1.0)
      self.assertEqual(description, offline)

  def test_ZeroQubits(self):
    """Tests that empty passwords are rejected."""
    with self.assertRaises(errors.InvalidParameterError):
      protocol.SetupAccount(0, qcore.Rng(1))

  def test_Deterministic(self):
    """Tests that one seed gives one password."""
    a, _ = protocol.SetupAccount(3, qcore.Rng(8))
    b, _ = protocol.SetupAccount(3, qcore.Rng(8))
    self.assertEqual(a.descriptions, b.descriptions)


class SwapTestTest(absltest.TestCase):
  """Unit tests for the SWAP test."""

  def test_AcceptanceMatchesOverlap(self):
    """Tests p0 = (1 + |<phi|psi>|^2) / 2 on random pure pairs."""
    rng = qcore.Rng(2)
    for _ in range(200):
      phi, psi = qcore.HaarRandomQubit(rng), qcore.HaarRandomQubit(rng)
      self.assertAlmostEqual(
          protocol.SwapTestAcceptance(phi, psi),
          0.5 * (1.0 + qcore.Fidelity(phi, psi)), places=9)

  def test_IdenticalStatesAlwaysPass(self):
    """Tests that identical states give P(1) = 0 exactly."""
    state = qcore.HaarRandomQubit(qcore.Rng(3))
    self.assertEqual(protocol.SwapTestAcceptance(state, state), 1.0)

  def test_OrthogonalStatesHalf(self):
    """Tests that orthogonal states pass half the time."""
    state = qcore.HaarRandomQubit(qcore.Rng(4))
    self.assertAlmostEqual(
        protocol.SwapTestAcceptance(state, qcore.OrthogonalQubit(state)), 0.5)

  def test_SampledFrequencies(self):
    """Tests sampled outcomes against the exact probability."""
    rng = qcore.Rng(5)
    phi, psi = qcore.HaarRandomQubit(rng), qcore.HaarRandomQubit(rng)
    expected = protocol.SwapTestAcceptance(phi, psi)
    shots = 4000
    zeros = sum(protocol.SwapTestPair(phi, psi, rng)[0] == 0
                for _ in range(shots))
    self.assertTrue(_WithinStandardErrors(zeros, shots, expected))

  def test_AncillaMustStartInZero(self):
    """Tests that a flipped ancilla is rejected."""
    register = qcore.BasisState('100')
    with self.assertRaises(errors.InvalidStateError):
      protocol.RunSwapTest(register, 1, 2, qcore.Rng(0))

  def test_SingleQubitsOnly(self):
    """Tests that multi-qubit inputs are rejected."""
    with self.assertRaises(errors.DimensionMismatchError):
      protocol.SwapTestAcceptance(qcore.BasisState('00'), qcore.BasisState('0'))


class AcceptancePolicyTest(parameterized.TestCase):
  """Unit tests for AcceptancePolicy."""

  @parameterized.named_parameters(
      ('strict', 1.0, 10, 10),
      ('half', 0.5, 10, 5),
      ('rounds_up', 0.95, 10, 10),
      ('at_least_one', 0.01, 10, 1),
  )
  def test_RequiredPasses(self, fraction, n_qubits, expected):
    """Tests the number of passes each fraction needs."""
    policy = protocol.AcceptancePolicy.ForFraction(fraction)
    self.assertEqual(policy.RequiredPasses(n_qubits), expected)

  @parameterized.named_parameters(
      ('strict_below_one', protocol.STRICT, 0.9),
      ('threshold_at_one', protocol.THRESHOLD, 1.0),
      ('zero', protocol.THRESHOLD, 0.0),
      ('unknown_mode', 'lenient', 0.5),
  )
  def test_Invalid(self, mode, fraction):
    """Tests that inconsistent policies are rejected."""
    with self.assertRaises(errors.InvalidParameterError):
      protocol.AcceptancePolicy(mode, fraction)

  def test_LostQubitsFail(self):
    """Tests that lost qubits count as failures whatever their outcome."""
    policy = protocol.AcceptancePolicy.ForFraction(0.5)
    self.assertTrue(policy.Accepts([0, 0, 1, 1]))
    self.assertFalse(policy.Accepts([0, 0, 1, 1], lost_indices=[0]))

  def test_AcceptanceProbability(self):
    """Tests the product and Poisson-binomial forms."""
    self.assertAlmostEqual(
        protocol.AcceptanceProbability(
            [0.5, 0.8], protocol.AcceptancePolicy.Strict()), 0.4)
    self.assertAlmostEqual(
        protocol.AcceptanceProbability(
            [0.5, 0.5], protocol.AcceptancePolicy.ForFraction(0.5)), 0.75)


class NoiseTest(parameterized.TestCase):
  """Unit tests for the channel noise maps."""

  @parameterized.named_parameters(
      ('depolarizing', protocol.DEPOLARIZING),
      ('dephasing', protocol.DEPHASING),
      ('amplitude_damping', protocol.AMPLITUDE_DAMPING),
  )
  def test_TracePreserving(self, kind):
    """Tests that every map is trace preserving."""
    kraus = protocol.NoiseKrausOperators(kind, 0.3)
    completeness = sum(k.conj().T @ k for k in kraus)
    np.testing.assert_allclose(completeness, np.eye(2), atol=1e-12)

  def test_DepolarizingHonestPass(self):
    """Tests that depolarizing p gives an honest pass of 1 - p/4."""
    state = qcore.HaarRandomQubit(qcore.Rng(6))
    for p in (0.0, 0.1, 0.5, 1.0):
      noisy = protocol.ApplyNoise(state, protocol.DEPOLARIZING, p)
      self.assertAlmostEqual(
          protocol.SwapTestAcceptance(state, noisy), 1.0 - p / 4.0)

  def test_Dephasing(self):
    """Tests that dephasing p leaves |+> with fidelity 1 - p."""
    plus = qcore.ApplyGate(qcore.BasisState('0'), qcore.HADAMARD, [0])
    noisy = protocol.ApplyNoise(plus, protocol.DEPHASING, 0.3)
    self.assertAlmostEqual(qcore.Fidelity(plus, noisy), 0.7)

  def test_AmplitudeDamping(self):
    """Tests that |1> decays to |0> with probability p."""
    noisy = protocol.ApplyNoise(qcore.BasisState('1'),
                                protocol.AMPLITUDE_DAMPING, 0.25)
    self.assertAlmostEqual(qcore.MeasureProbabilities(noisy, 0)[0], 0.25)

  def test_NoiseOnOneQubitOfPair(self):
    """Tests that noise on qubit 1 leaves qubit 0 alone."""
    pair = qcore.Tensor(qcore.BasisState('0'), qcore.BasisState('0'))
    noisy = protocol.ApplyNoise(pair, protocol.DEPOLARIZING, 1.0, 1)
    self.assertAlmostEqual(
        qcore.Fidelity(qcore.BasisState('0'), qcore.PartialTrace(noisy, [0])),
        1.0)
    self.assertLess(
        qcore.MaxEntryDifference(qcore.PartialTrace(noisy, [1]),
                                 qcore.MaximallyMixed(1)), 1e-12)

  def test_InvalidStrength(self):
    """Tests that strengths outside [0, 1] are rejected."""
    with self.assertRaises(errors.InvalidParameterError):
      protocol.Channel(protocol.DEPOLARIZING, 1.2)


class TransmitTest(absltest.TestCase):
  """Unit tests for Transmit."""

  def test_IdealChannelIsIdentity(self):
    """Tests that an ideal channel delivers the password untouched."""
    _, password = protocol.SetupAccount(3, qcore.Rng(1))
    received, lost = protocol.Transmit(password, protocol.Channel(),
                                       qcore.Rng(2))
    self.assertEqual(lost, ())
    for sent, got in zip(password.qubits, received.qubits):
      self.assertLess(qcore.MaxEntryDifference(sent, got), 1e-12)

  def test_TotalLoss(self):
    """Tests that certain loss flags every qubit."""
    _, password = protocol.SetupAccount(3, qcore.Rng(1))
    received, lost = protocol.Transmit(
        password, protocol.Channel(loss_probability=1.0), qcore.Rng(2))
    self.assertEqual(lost, (0, 1, 2))
    self.assertAlmostEqual(received.qubits[0].Purity(), 0.5)

  def test_InterceptorSeesEveryQubit(self):
    """Tests that the interceptor is called once per surviving qubit."""
    _, password = protocol.SetupAccount(3, qcore.Rng(1))
    interceptor = mock.Mock(side_effect=lambda index, qubit, rng: qubit)
    protocol.Transmit(password, protocol.Channel(interceptor=interceptor),
                      qcore.Rng(2))
    self.assertEqual([c.args[0] for c in interceptor.call_args_list],
                     [0, 1, 2])


class VerifyTest(parameterized.TestCase):
  """Unit tests for Verify and Login."""

  @parameterized.named_parameters(
      ('one_qubit', 1),
      ('thirteen_qubits', 13),
      ('twenty_qubits', 20),
  )
  def test_HonestLoginsAreReusable(self, n_qubits):
    """Tests that 100 honest logins accept and leave the password intact."""
    rng = qcore.Rng(10)
    record, password = protocol.SetupAccount(n_qubits, rng.Fork('setup'))
    issued = record.descriptions
    policy = protocol.AcceptancePolicy.Strict()
    for number in range(100):
      result = protocol.Login(record, password, protocol.Channel(), policy,
                              rng.Fork(f'round/{number}'))
      self.assertTrue(result.accepted)
      self.assertEqual(result.p_accept_analytic, 1.0)
      record, password = result.post_bob, result.post_alice
    self.assertLen(password, n_qubits)
    for description, qubit in zip(issued, password.qubits):
      self.assertGreater(qcore.Fidelity(description.State(), qubit),
                         1.0 - 1e-9)

  def test_ThresholdMixedSubmission(self):
    """Tests sampled threshold verdicts against the exact acceptance rate."""
    record, _ = protocol.SetupAccount(5, qcore.Rng(4))
    states = [d.State() for d in record.descriptions]
    # One genuine qubit, three orthogonal ones and a symmetric clone.
    submitted = protocol.QuantumPassword(
        (states[0].ToDensity(),) +
        tuple(qcore.OrthogonalQubit(s).ToDensity() for s in states[1:4]) +
        (adversary.SymmetricUQCM(states[4]).Clone(),))
    policy = protocol.AcceptancePolicy.ForFraction(0.8)
    self.assertEqual(policy.RequiredPasses(5), 4)
    expected = 45 / 96
    rng = qcore.Rng(11)
    accepted = 0
    for trial in range(2000):
      result = protocol.Verify(record, submitted, policy,
                               rng.Fork(f'trial/{trial}'))
      np.testing.assert_allclose(result.per_qubit_p0,
                                 [1.0, 0.5, 0.5, 0.5, 11 / 12], atol=1e-9)
      self.assertAlmostEqual(result.p_accept_analytic, expected)
      accepted += result.accepted
    self.assertAlmostEqual(
        protocol.AcceptanceProbability(result.per_qubit_p0, policy), expected)
    self.assertTrue(_WithinStandardErrors(accepted, 2000, expected))

  def test_LengthMismatch(self):
    """Tests that a password of the wrong length is rejected."""
    record, _ = protocol.SetupAccount(3, qcore.Rng(1))
    _, other = protocol.SetupAccount(2, qcore.Rng(1))
    with self.assertRaises(errors.LengthMismatchError):
      protocol.Verify(record, other, protocol.AcceptancePolicy.Strict(),
                      qcore.Rng(0))

  def test_LostQubitsAreNotTested(self):
    """Tests that lost qubits fail without a SWAP test."""
    record, password = protocol.SetupAccount(2, qcore.Rng(1))
    result = protocol.Verify(record, password,
                             protocol.AcceptancePolicy.Strict(), qcore.Rng(0),
                             lost_indices=[1])
    self.assertFalse(result.accepted)
    self.assertEqual(result.per_qubit_outcomes, (0, 1))
    self.assertEqual(result.per_qubit_p0, (1.0, 0.0))
    self.assertEqual(result.lost_indices, (1,))

  def test_WrongPasswordRarelyPasses(self):
    """Tests that a random 20 qubit guess has a small acceptance chance."""
    record, _ = protocol.SetupAccount(20, qcore.Rng(1))
    _, guess = protocol.SetupAccount(20, qcore.Rng(2))
    result = protocol.Verify(record, guess, protocol.AcceptancePolicy.Strict(),
                             qcore.Rng(3))
    self.assertLess(result.p_accept_analytic, 0.1)

  def test_DepolarizedLoginRate(self):
    """Tests the per-qubit honest pass rate through a depolarizing channel."""
    rng = qcore.Rng(11)
    channel = protocol.Channel(protocol.DEPOLARIZING, 0.4)
    trials = 2000
    passes = 0
    for trial in range(trials):
      trial_rng = rng.Fork(f'trial/{trial}')
      record, password = protocol.SetupAccount(1, trial_rng)
      passes += protocol.Login(record, password, channel,
                               protocol.AcceptancePolicy.Strict(),
                               trial_rng).accepted
    self.assertTrue(_WithinStandardErrors(passes, trials, 0.9))


class IntegrityTest(absltest.TestCase):
  """Unit tests for BobIntegrityCheck, Regenerate and StoreRecord."""

  def test_FreshRecordIsIntact(self):
    """Tests the exact and sampled checks on an untouched record."""
    record, _ = protocol.SetupAccount(4, qcore.Rng(1))
    intact, fidelities = protocol.BobIntegrityCheck(record)
    self.assertTrue(intact)
    for fidelity in fidelities:
      self.assertAlmostEqual(fidelity, 1.0)
    self.assertTrue(
        protocol.BobIntegrityCheck(record, sampled=True, rng=qcore.Rng(2))[0])

  def test_DecoheredRecordFails(self):
    """Tests that storage noise is caught by the exact check."""
    record, _ = protocol.SetupAccount(4, qcore.Rng(1))
    stored = protocol.StoreRecord(record, protocol.DEPOLARIZING, 0.5)
    intact, fidelities = protocol.BobIntegrityCheck(stored)
    self.assertFalse(intact)
    for fidelity in fidelities:
      self.assertAlmostEqual(fidelity, 0.75)

  def test_ClonedStoredCopyFails(self):
    """Tests that a stored copy swapped for clone marginals is caught."""
    record, _ = protocol.SetupAccount(3, qcore.Rng(1))
    clones = [adversary.SymmetricUQCM(d.State()).Forwarded()
              for d in record.descriptions]
    intact, fidelities = protocol.BobIntegrityCheck(
        record.WithStoredCopy(clones))
    self.assertFalse(intact)
    for fidelity in fidelities:
      self.assertAlmostEqual(fidelity, 5 / 6)

  def test_SampledCheckNeedsRng(self):
    """Tests that the sampled check requires a random stream."""
    record, _ = protocol.SetupAccount(1, qcore.Rng(1))
    with self.assertRaises(errors.InvalidParameterError):
      protocol.BobIntegrityCheck(record, sampled=True)

  def test_SampledCheckCatchesOrthogonalState(self):
    """Tests that an orthogonal stored qubit always fails the sampled check."""
    record, _ = protocol.SetupAccount(1, qcore.Rng(1))
    flipped = qcore.OrthogonalQubit(record.descriptions[0].State())
    tampered = record.WithStoredCopy([flipped.ToDensity()])
    self.assertFalse(
        protocol.BobIntegrityCheck(tampered, sampled=True, rng=qcore.Rng(2))[0])

  def test_Regenerate(self):
    """Tests that regeneration keeps the account and replaces the password."""
    record, _ = protocol.SetupAccount(3, qcore.Rng(1), 'dave')
    fresh, password = protocol.Regenerate(record, qcore.Rng(2))
    self.assertEqual(fresh.account_id, 'dave')
    self.assertLen(password, 3)
    self.assertNotEqual(fresh.descriptions, record.descriptions)
    self.assertTrue(protocol.BobIntegrityCheck(fresh)[0])


if __name__ == '__main__':
  absltest.main()
