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
"""Quantum password protocol: account setup, use and SWAP-test verification.

Bob draws each password qubit at random and keeps its classical description,
a live stored copy in quantum memory and an offline reference. Alice returns
her qubits over a (possibly noisy) channel and Bob compares them to his stored
copy one qubit at a time with a SWAP test.
"""

import dataclasses
import math
from typing import Callable, Optional, Sequence

from absl import logging
import numpy as np

from qupass.lib import errors
from qupass.lib import qcore
from qupass.lib import utils


logger = logging.logging.getLogger('qupass')

IDEAL = 'ideal'
DEPOLARIZING = 'depolarizing'
DEPHASING = 'dephasing'
AMPLITUDE_DAMPING = 'amplitude_damping'
NOISE_KINDS = frozenset((IDEAL, DEPOLARIZING, DEPHASING, AMPLITUDE_DAMPING))

STRICT = 'strict'
THRESHOLD = 'threshold'
POLICY_MODES = frozenset((STRICT, THRESHOLD))

DEFAULT_ACCOUNT_ID = 'alice'
INTACT_TOLERANCE = qcore.ALGEBRAIC_TOLERANCE

_ANCILLA = qcore.BasisState('0').ToDensity()

# Called once per transmitted qubit, after noise: (index, qubit, rng) -> qubit
Interceptor = Callable[[int, qcore.DensityOp, qcore.Rng], qcore.DensityOp]


@dataclasses.dataclass(frozen=True)
class QubitDescription:
  """Bob's classical record of one password qubit, c1|0> + c2|1>."""
  c1: complex
  c2: complex

  def __post_init__(self):
    norm = abs(self.c1)**2 + abs(self.c2)**2
    if abs(norm - 1.0) > qcore.CONSTRUCTION_TOLERANCE:
      raise errors.InvalidStateError(f'Description with squared norm {norm}')

  @classmethod
  def FromState(cls, state: qcore.PureState) -> 'QubitDescription':
    if state.n_qubits != 1:
      raise errors.DimensionMismatchError('A description covers one qubit')
    c1, c2 = state.amplitudes
    return cls(complex(c1), complex(c2))

  def State(self) -> qcore.PureState:
    return qcore.Qubit(self.c1, self.c2)

  def Density(self) -> qcore.DensityOp:
    return self.State().ToDensity()

  def RotationToZero(self) -> qcore.Gate:
    """Returns the unitary taking this state to |0>, its complement to |1>."""
    return qcore.Gate(1, np.array([[np.conj(self.c1), np.conj(self.c2)],
                                   [-self.c2, self.c1]]), 'R')


@dataclasses.dataclass(frozen=True, eq=False)
class PasswordRecord:
  """Bob's side of an account."""
  account_id: str
  descriptions: tuple[QubitDescription, ...]
  stored_copy: tuple[qcore.DensityOp, ...]
  offline_copy: tuple[QubitDescription, ...]

  def __post_init__(self):
    for name in ('descriptions', 'stored_copy', 'offline_copy'):
      object.__setattr__(self, name, tuple(getattr(self, name)))
    lengths = {len(self.descriptions), len(self.stored_copy),
               len(self.offline_copy)}
    if len(lengths) != 1 or not self.descriptions:
      raise errors.InvalidParameterError(
          f'Record lists must share one length >= 1, got {sorted(lengths)}')
    if any(q.n_qubits != 1 for q in self.stored_copy):
      raise errors.DimensionMismatchError('Stored copies are single qubits')

  def __len__(self) -> int:
    return len(self.descriptions)

  @classmethod
  def Fresh(cls, account_id: str,
            descriptions: Sequence[QubitDescription]) -> 'PasswordRecord':
    """Builds a record whose stored and offline copies match descriptions."""
    return cls(account_id, tuple(descriptions),
               tuple(d.Density() for d in descriptions), tuple(descriptions))

  def WithStoredCopy(self, stored_copy: Sequence[qcore.DensityOp]
                     ) -> 'PasswordRecord':
    return dataclasses.replace(self, stored_copy=tuple(stored_copy))


@dataclasses.dataclass(frozen=True, eq=False)
class QuantumPassword:
  """Alice's side of an account: one density operator per qubit."""
  qubits: tuple[qcore.DensityOp, ...]

  def __post_init__(self):
    object.__setattr__(self, 'qubits', tuple(self.qubits))
    if any(q.n_qubits != 1 for q in self.qubits):
      raise errors.DimensionMismatchError('Password qubits are single qubits')

  def __len__(self) -> int:
    return len(self.qubits)


@dataclasses.dataclass(frozen=True)
class Channel:
  """An insecure quantum channel between Alice and Bob."""
  noise_kind: str = IDEAL
  noise_strength: float = 0.0
  loss_probability: float = 0.0
  interceptor: Optional[Interceptor] = None

  def __post_init__(self):
    utils.CheckChoice('noise_kind', self.noise_kind, NOISE_KINDS)
    utils.CheckProbability('noise_strength', self.noise_strength)
    utils.CheckProbability('loss_probability', self.loss_probability)

  def WithInterceptor(self, interceptor: Optional[Interceptor]) -> 'Channel':
    return dataclasses.replace(self, interceptor=interceptor)


@dataclasses.dataclass(frozen=True)
class AcceptancePolicy:
  """How many per-qubit SWAP tests must pass for Bob to grant access."""
  mode: str = STRICT
  threshold_fraction: float = 1.0

  def __post_init__(self):
    utils.CheckChoice('mode', self.mode, POLICY_MODES)
    if not 0.0 < self.threshold_fraction <= 1.0:
      raise errors.InvalidParameterError(
          'threshold_fraction must be in (0, 1], got '
          f'{self.threshold_fraction}')
    if (self.mode == STRICT) != (self.threshold_fraction == 1.0):
      raise errors.InvalidParameterError(
          'Strict mode requires threshold_fraction 1 and threshold mode '
          'requires threshold_fraction < 1')

  @classmethod
  def Strict(cls) -> 'AcceptancePolicy':
    return cls(STRICT, 1.0)

  @classmethod
  def ForFraction(cls, threshold_fraction: float) -> 'AcceptancePolicy':
    """Returns the strict policy for 1 and a threshold policy otherwise."""
    if threshold_fraction == 1.0:
      return cls.Strict()
    return cls(THRESHOLD, threshold_fraction)

  def RequiredPasses(self, n_qubits: int) -> int:
    """Returns the number of outcome-0 qubits needed out of n_qubits."""
    if self.mode == STRICT:
      return n_qubits
    return max(1, math.ceil(self.threshold_fraction * n_qubits - 1e-9))

  def Accepts(self, outcomes: Sequence[int],
              lost_indices: Sequence[int] = ()) -> bool:
    """Returns True if the per-qubit outcomes satisfy the policy.

    Lost qubits count as failed whatever their recorded outcome.
    """
    lost = set(lost_indices)
    passes = sum(1 for i, outcome in enumerate(outcomes)
                 if outcome == 0 and i not in lost)
    return passes >= self.RequiredPasses(len(outcomes))


@dataclasses.dataclass(frozen=True, eq=False)
class VerificationResult:
  """The outcome of one login attempt."""
  accepted: bool
  per_qubit_outcomes: tuple[int, ...]
  p_accept_analytic: float
  post_alice: QuantumPassword
  post_bob: PasswordRecord
  per_qubit_p0: tuple[float, ...] = ()
  lost_indices: tuple[int, ...] = ()


def NoiseKrausOperators(noise_kind: str, strength: float
                        ) -> list[np.ndarray]:
  """Returns Kraus operators for one of the single qubit noise maps.

  depolarizing:      rho -> (1 - p) rho + p I/2
  dephasing:         rho -> (1 - p) rho + p Z rho Z
  amplitude_damping: |1> decays to |0> with probability p

  Args:
    noise_kind: One of NOISE_KINDS.
    strength: The noise parameter p in [0, 1].

  Returns:
    The Kraus operators of the map.
  """
  utils.CheckChoice('noise_kind', noise_kind, NOISE_KINDS)
  p = utils.CheckProbability('noise_strength', strength)
  identity = qcore.IDENTITY.matrix
  if noise_kind == DEPOLARIZING:
    return [math.sqrt(1.0 - 0.75 * p) * identity,
            math.sqrt(p / 4.0) * qcore.PAULI_X.matrix,
            math.sqrt(p / 4.0) * qcore.PAULI_Y.matrix,
            math.sqrt(p / 4.0) * qcore.PAULI_Z.matrix]
  if noise_kind == DEPHASING:
    return [math.sqrt(1.0 - p) * identity, math.sqrt(p) * qcore.PAULI_Z.matrix]
  if noise_kind == AMPLITUDE_DAMPING:
    return [np.array([[1.0, 0.0], [0.0, math.sqrt(1.0 - p)]]),
            np.array([[0.0, math.sqrt(p)], [0.0, 0.0]])]
  return [identity]


def ApplyNoise(state: qcore.State, noise_kind: str, strength: float,
               target: int = 0) -> qcore.DensityOp:
  """Applies a noise map to one qubit of state."""
  if noise_kind == IDEAL or strength == 0.0:
    return state.ToDensity()
  return qcore.ApplyChannel(
      state, NoiseKrausOperators(noise_kind, strength), target)


def SetupAccount(n_qubits: int, rng: qcore.Rng,
                 account_id: str = DEFAULT_ACCOUNT_ID
                 ) -> tuple[PasswordRecord, QuantumPassword]:
  """Creates an account: Bob's record and the password handed to Alice.

  Issuance is in person: Alice's copy reaches her without noise or
  interception.

  Args:
    n_qubits: The password length.
    rng: The random stream the password is drawn from.
    account_id: The opaque classical username.

  Returns:
    (Bob's record, Alice's password).

  Raises:
    InvalidParameterError: If n_qubits < 1.
  """
  if n_qubits < 1:
    raise errors.InvalidParameterError(f'n_qubits must be >= 1, got {n_qubits}')
  descriptions = tuple(
      QubitDescription.FromState(qcore.HaarRandomQubit(rng))
      for _ in range(n_qubits))
  record = PasswordRecord.Fresh(account_id, descriptions)
  password = QuantumPassword(tuple(d.Density() for d in descriptions))
  logger.debug('Set up account %s with %d qubits', account_id, n_qubits)
  return record, password


def Transmit(password: QuantumPassword, channel: Channel, rng: qcore.Rng
             ) -> tuple[QuantumPassword, tuple[int, ...]]:
  """Sends a password through a channel, qubit by qubit.

  Each qubit is independently lost (replaced by the maximally mixed state and
  flagged) with channel.loss_probability; survivors get the noise map and then
  the interceptor, if any.

  Returns:
    (the received password, indices of lost qubits).
  """
  qubits: list[qcore.DensityOp] = []
  lost: list[int] = []
  for index, qubit in enumerate(password.qubits):
    if channel.loss_probability > 0.0 and rng.Bernoulli(
        channel.loss_probability):
      lost.append(index)
      qubits.append(qcore.MaximallyMixed(1))
      continue
    qubit = ApplyNoise(qubit, channel.noise_kind, channel.noise_strength)
    if channel.interceptor is not None:
      qubit = channel.interceptor(index, qubit, rng)
    qubits.append(qubit)
  if lost:
    logger.debug('Lost qubits in transit: %s', lost)
  return QuantumPassword(tuple(qubits)), tuple(lost)


def _SwapTestCircuit(register: qcore.State, phi_index: int,
                     psi_index: int) -> qcore.State:
  """Hadamard on the ancilla (qubit 0), controlled-SWAP, Hadamard again."""
  register = qcore.ApplyGate(register, qcore.HADAMARD, [0])
  register = qcore.ApplyGate(register, qcore.FREDKIN, [0, phi_index, psi_index])
  return qcore.ApplyGate(register, qcore.HADAMARD, [0])


def RunSwapTest(register: qcore.State, phi_index: int, psi_index: int,
                rng: qcore.Rng) -> tuple[int, qcore.State, float]:
  """Runs the SWAP test on two qubits of a register whose qubit 0 is |0>.

  Args:
    register: The full register; qubit 0 is the ancilla.
    phi_index: The first compared qubit.
    psi_index: The second compared qubit.
    rng: The random stream for the ancilla measurement.

  Returns:
    (ancilla outcome, post measurement register, exact probability of 0).
  """
  if qcore.MeasureProbabilities(register, 0)[0] != 1.0:
    raise errors.InvalidStateError('The SWAP-test ancilla must start in |0>')
  register = _SwapTestCircuit(register, phi_index, psi_index)
  p0, _ = qcore.MeasureProbabilities(register, 0)
  outcome, post, _ = qcore.MeasureQubit(register, 0, rng)
  return outcome, post, p0


def _PairRegister(phi: qcore.State, psi: qcore.State) -> qcore.State:
  if phi.n_qubits != 1 or psi.n_qubits != 1:
    raise errors.DimensionMismatchError('SWAP test pairs are single qubits')
  return qcore.Tensor(qcore.Tensor(_ANCILLA, phi), psi)


def SwapTestAcceptance(phi: qcore.State, psi: qcore.State) -> float:
  """Returns the exact probability that the SWAP test on phi, psi gives 0."""
  register = _SwapTestCircuit(_PairRegister(phi, psi), 1, 2)
  return qcore.MeasureProbabilities(register, 0)[0]


def SwapTestPair(phi: qcore.State, psi: qcore.State, rng: qcore.Rng
                 ) -> tuple[int, qcore.DensityOp, float]:
  """Compares two single qubit states with the SWAP test.

  For pure inputs the outcome is 0 with probability (1 + |<phi|psi>|^2) / 2.

  Returns:
    (outcome, post measurement state of (phi, psi), exact probability of 0).
  """
  outcome, post, p0 = RunSwapTest(_PairRegister(phi, psi), 1, 2, rng)
  return outcome, qcore.PartialTrace(post, [1, 2]), p0


def AcceptanceProbability(p0s: Sequence[float],
                          policy: AcceptancePolicy) -> float:
  """Returns the exact probability that independent tests satisfy policy.

  Strict mode is the product of the p0s; threshold mode is the upper tail of
  the Poisson-binomial distribution of the number of passing qubits.
  """
  if policy.mode == STRICT:
    return float(np.clip(math.prod(p0s), 0.0, 1.0))
  distribution = np.zeros(len(p0s) + 1)
  distribution[0] = 1.0
  for p0 in p0s:
    distribution[1:] = distribution[1:] * (1.0 - p0) + distribution[:-1] * p0
    distribution[0] *= 1.0 - p0
  required = policy.RequiredPasses(len(p0s))
  return float(np.clip(np.sum(distribution[required:]), 0.0, 1.0))


def RefreshStoredCopy(record: PasswordRecord) -> PasswordRecord:
  """Re-prepares every stored qubit from Bob's classical descriptions."""
  return record.WithStoredCopy(d.Density() for d in record.descriptions)


def Verify(record: PasswordRecord, submitted: QuantumPassword,
           policy: AcceptancePolicy, rng: qcore.Rng,
           lost_indices: Sequence[int] = ()) -> VerificationResult:
  """Verifies a submitted password against Bob's stored copy.

  Each qubit is SWAP-tested against its stored counterpart. Lost qubits are
  never tested and count as failed. Bob then re-prepares his stored copy and
  Alice gets back the reduced state of each of her qubits.

  Args:
    record: Bob's record.
    submitted: The received password.
    policy: The acceptance policy.
    rng: The random stream for the ancilla measurements.
    lost_indices: Qubits flagged lost by the channel.

  Returns:
    The VerificationResult.

  Raises:
    LengthMismatchError: If the lengths differ.
  """
  if len(submitted) != len(record):
    raise errors.LengthMismatchError(
        f'Submitted {len(submitted)} qubits for a {len(record)} qubit record')
  lost = set(lost_indices)
  outcomes: list[int] = []
  p0s: list[float] = []
  returned: list[qcore.DensityOp] = []
  for index, (stored, qubit) in enumerate(
      zip(record.stored_copy, submitted.qubits)):
    if index in lost:
      outcomes.append(1)
      p0s.append(0.0)
      returned.append(qubit)
      continue
    outcome, joint, p0 = SwapTestPair(stored, qubit, rng)
    logger.debug('Qubit %d: p0=%s outcome=%d', index, p0, outcome)
    outcomes.append(outcome)
    p0s.append(p0)
    returned.append(qcore.PartialTrace(joint, [1]))
  accepted = policy.Accepts(outcomes, sorted(lost))
  return VerificationResult(
      accepted=accepted,
      per_qubit_outcomes=tuple(outcomes),
      p_accept_analytic=AcceptanceProbability(p0s, policy),
      post_alice=QuantumPassword(tuple(returned)),
      post_bob=RefreshStoredCopy(record),
      per_qubit_p0=tuple(p0s),
      lost_indices=tuple(sorted(lost)))


def Login(record: PasswordRecord, password: QuantumPassword, channel: Channel,
          policy: AcceptancePolicy, rng: qcore.Rng) -> VerificationResult:
  """Alice sends her password through channel and Bob verifies it."""
  received, lost = Transmit(password, channel, rng)
  return Verify(record, received, policy, rng, lost)


def ProjectOntoDescription(state: qcore.State, index: int,
                           description: QubitDescription, rng: qcore.Rng
                           ) -> tuple[bool, qcore.State]:
  """Measures one qubit in the basis {description, its orthogonal state}.

  Returns:
    (True if the qubit was found in the described state, post state).
  """
  rotation = description.RotationToZero()
  rotated = qcore.ApplyGate(state, rotation, [index])
  outcome, post, _ = qcore.MeasureQubit(rotated, index, rng)
  return outcome == 0, qcore.ApplyGate(post, rotation.Inverse(), [index])


def BobIntegrityCheck(record: PasswordRecord, sampled: bool = False,
                      rng: Optional[qcore.Rng] = None
                      ) -> tuple[bool, list[float]]:
  """Checks Bob's stored copy against his offline reference.

  The exact form compares fidelities, which Bob can compute because he knows
  every state. The sampled form projects each stored qubit onto
  {offline state, orthogonal state} and fails on any orthogonal outcome.

  Args:
    record: Bob's record.
    sampled: Use the projective measurement form.
    rng: Required when sampled is True.

  Returns:
    (intact, per-qubit fidelity of stored copy to offline copy).
  """
  fidelities = [qcore.Fidelity(reference.State(), stored)
                for reference, stored in zip(record.offline_copy,
                                             record.stored_copy)]
  if not sampled:
    intact = all(f >= 1.0 - INTACT_TOLERANCE for f in fidelities)
  else:
    if rng is None:
      raise errors.InvalidParameterError('The sampled check needs an rng')
    intact = all([
        ProjectOntoDescription(stored, 0, reference, rng)[0]
        for reference, stored in zip(record.offline_copy, record.stored_copy)])
  if not intact:
    logger.debug('Integrity check failed for %s: %s', record.account_id,
                 fidelities)
  return intact, fidelities


def Regenerate(record: PasswordRecord, rng: qcore.Rng
               ) -> tuple[PasswordRecord, QuantumPassword]:
  """Discards an account's password and issues a fresh one."""
  logger.debug('Regenerating password for %s', record.account_id)
  return SetupAccount(len(record), rng, record.account_id)


def StoreRecord(record: PasswordRecord, noise_kind: str,
                strength: float) -> PasswordRecord:
  """Applies storage decoherence to Bob's stored copy."""
  return record.WithStoredCopy(
      ApplyNoise(stored, noise_kind, strength) for stored in record.stored_copy)
