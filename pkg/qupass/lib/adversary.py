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
"""Eve's attacks on quantum passwords.

Eve captures each password qubit at Alice's station, in transit or in Bob's
memory, and leaves behind a two qubit pair per position: her clone (qubit 0)
and the qubit that goes back into circulation (qubit 1). Trials are scored
either by the fidelity accounting (each test passes with probability equal to
the fidelity of the tested qubit) or operationally (both SWAP tests are run on
the correlated pair).
"""

import dataclasses
import functools
import math
from typing import Optional, Sequence

from absl import logging
import numpy as np

from qupass.lib import errors
from qupass.lib import protocol
from qupass.lib import qcore
from qupass.lib import utils


logger = logging.logging.getLogger('qupass')

UQCM_SYMMETRIC = 'uqcm_symmetric'
UQCM_ASYMMETRIC = 'uqcm_asymmetric'
RANDOM_GUESS = 'random_guess'
INTERCEPT_RESEND = 'intercept_resend'
HANDOVER = 'handover'
STRATEGIES = frozenset(
    (UQCM_SYMMETRIC, UQCM_ASYMMETRIC, RANDOM_GUESS, INTERCEPT_RESEND, HANDOVER))
CLONERS = frozenset((UQCM_SYMMETRIC, UQCM_ASYMMETRIC))

ALICE_STATION = 'alice_station'
IN_TRANSIT = 'in_transit'
BOB_SERVER = 'bob_server'
STRIKE_POINTS = frozenset((ALICE_STATION, IN_TRANSIT, BOB_SERVER))

FIDELITY_METRIC = 'fidelity'
OPERATIONAL_METRIC = 'operational'
METRICS = frozenset((FIDELITY_METRIC, OPERATIONAL_METRIC))

SYMMETRIC_CLONE_FIDELITY = 5.0 / 6.0

_ANCILLA = qcore.BasisState('0').ToDensity()

# Columns: input |j>. Rows: output qubits (kept, forwarded, ancilla).
_SYMMETRIC_ISOMETRY = np.zeros((8, 2))
_SYMMETRIC_ISOMETRY[[1, 2, 4], 0] = (
    math.sqrt(2.0 / 3.0), math.sqrt(1.0 / 6.0), math.sqrt(1.0 / 6.0))
_SYMMETRIC_ISOMETRY[[6, 3, 5], 1] = (
    math.sqrt(2.0 / 3.0), math.sqrt(1.0 / 6.0), math.sqrt(1.0 / 6.0))

# Measurement bases for intercept-resend: Z, X and Y, each rotated onto Z.
_BASIS_CHANGES = (
    qcore.IDENTITY,
    qcore.HADAMARD,
    qcore.Gate(1, qcore.HADAMARD.matrix @ np.diag([1.0, -1.0j]), 'HSdg'),
)


@dataclasses.dataclass(frozen=True, eq=False)
class CloneOutput:
  """Joint 1->2 cloner output on qubits (kept clone, forwarded, ancilla)."""
  joint: qcore.DensityOp
  f_clone: float
  f_forwarded: float

  def Clone(self) -> qcore.DensityOp:
    return qcore.PartialTrace(self.joint, [0])

  def Forwarded(self) -> qcore.DensityOp:
    return qcore.PartialTrace(self.joint, [1])

  def Pair(self) -> qcore.DensityOp:
    """Returns the (kept clone, forwarded) reduced state."""
    return qcore.PartialTrace(self.joint, [0, 1])


@dataclasses.dataclass(frozen=True)
class AttackScenario:
  """Which strategy Eve runs, where she strikes and how trials are scored."""
  strategy: str
  strike_point: str = ALICE_STATION
  n_qubits: int = 1
  trials: int = 1000
  metric: str = FIDELITY_METRIC
  asymmetry: Optional[float] = None
  sampled_integrity: bool = False

  def __post_init__(self):
    utils.CheckChoice('strategy', self.strategy, STRATEGIES)
    utils.CheckChoice('strike_point', self.strike_point, STRIKE_POINTS)
    utils.CheckChoice('metric', self.metric, METRICS)
    if self.n_qubits < 1:
      raise errors.InvalidParameterError(
          f'n_qubits must be >= 1, got {self.n_qubits}')
    if self.trials < 1:
      raise errors.InvalidParameterError(
          f'trials must be >= 1, got {self.trials}')
    if self.strategy == UQCM_ASYMMETRIC:
      if self.asymmetry is None:
        raise errors.InvalidParameterError(
            'asymmetry is required for the asymmetric cloner')
      utils.CheckProbability('asymmetry', self.asymmetry)
    elif self.asymmetry is not None:
      raise errors.InvalidParameterError(
          f'asymmetry is only valid for {UQCM_ASYMMETRIC}')


@dataclasses.dataclass(frozen=True)
class AttackTrialResult:
  """The outcome of one attack trial."""
  alice_survives: bool
  clone_accepted: bool
  eve_detected: bool
  integrity_fired: bool = False
  eve_outcomes: tuple[int, ...] = ()
  alice_outcomes: tuple[int, ...] = ()

  @property
  def eve_success(self) -> bool:
    """Eve wins when her clone is accepted and Alice is undisturbed."""
    return self.clone_accepted and self.alice_survives


@dataclasses.dataclass(frozen=True)
class AttackSummary:
  """Counts over a list of trial results."""
  trials: int
  successes: int
  clone_accepted: int
  alice_survived: int
  detected: int
  integrity_fired: int


@dataclasses.dataclass(frozen=True)
class TradeoffPoint:
  asymmetry: float
  f_clone: float
  f_forwarded: float

  @property
  def product(self) -> float:
    return self.f_clone * self.f_forwarded


@dataclasses.dataclass
class _Capture:
  """What Eve leaves behind for one password position."""
  pair: qcore.DensityOp
  eve_lost: bool = False
  alice_lost: bool = False


def _AsInput(input_state: qcore.State) -> qcore.State:
  if not isinstance(input_state, (qcore.PureState, qcore.DensityOp)):
    input_state = qcore.PureState.FromAmplitudes(input_state)
  if input_state.n_qubits != 1:
    raise errors.DimensionMismatchError('Cloners take a single qubit')
  return input_state


def _ApplyIsometry(isometry: np.ndarray, input_state: qcore.State
                   ) -> qcore.DensityOp:
  rho = input_state.ToDensity().matrix
  return qcore.DensityOp(3, isometry @ rho @ isometry.conj().T)


def _CloneWith(isometry: np.ndarray, input_state: qcore.State) -> CloneOutput:
  input_state = _AsInput(input_state)
  joint = _ApplyIsometry(isometry, input_state)
  return CloneOutput(
      joint=joint,
      f_clone=qcore.Fidelity(input_state, qcore.PartialTrace(joint, [0])),
      f_forwarded=qcore.Fidelity(input_state, qcore.PartialTrace(joint, [1])))


def AsymmetryWeights(asymmetry: float) -> tuple[float, float]:
  """Maps t in [0, 1] to weights (a, b) with a^2 + ab + b^2 = 1, b/(a+b) = t."""
  t = utils.CheckProbability('asymmetry', asymmetry)
  scale = 1.0 / math.sqrt(1.0 - t + t * t)
  return (1.0 - t) * scale, t * scale


def _AsymmetricIsometry(asymmetry: float) -> np.ndarray:
  """a |psi>_fwd |Phi+>_(kept,anc) + b |psi>_kept |Phi+>_(fwd,anc)."""
  a, b = AsymmetryWeights(asymmetry)
  isometry = np.zeros((8, 2))
  for j in (0, 1):
    for x in (0, 1):
      isometry[4 * x + 2 * j + x, j] += a / math.sqrt(2.0)
      isometry[4 * j + 2 * x + x, j] += b / math.sqrt(2.0)
  return isometry


def SymmetricUQCM(input_state: qcore.State) -> CloneOutput:
  """Runs the symmetric 1->2 universal cloner; both clones have fidelity 5/6.

  Raises:
    InvalidStateError: If the input is not a normalised state.
  """
  return _CloneWith(_SYMMETRIC_ISOMETRY, input_state)


def AsymmetricUQCM(input_state: qcore.State, asymmetry: float) -> CloneOutput:
  """Runs the asymmetric universal cloner.

  f_forwarded = 1 - b^2/2 and f_clone = 1 - a^2/2. asymmetry 0 leaves the
  input untouched in the forwarded slot, 1/2 is the symmetric cloner.

  Raises:
    InvalidParameterError: If asymmetry is outside [0, 1].
  """
  return _CloneWith(_AsymmetricIsometry(asymmetry), input_state)


def AsymmetricTradeoff(points: int = 101) -> list[TradeoffPoint]:
  """Evaluates both fidelities of the asymmetric cloner on an even grid."""
  if points < 2:
    raise errors.InvalidParameterError(f'points must be >= 2, got {points}')
  reference = qcore.BasisState('0')
  tradeoff = []
  for i in range(points):
    t = i / (points - 1)
    output = AsymmetricUQCM(reference, t)
    tradeoff.append(TradeoffPoint(t, output.f_clone, output.f_forwarded))
  return tradeoff


def CloneSuccessBound(n_qubits: int) -> float:
  """Returns (5/6)^(2N), the fidelity accounting of Eve's success."""
  if n_qubits < 1:
    raise errors.InvalidParameterError(f'n_qubits must be >= 1, got {n_qubits}')
  return SYMMETRIC_CLONE_FIDELITY**(2 * n_qubits)


def OperationalOracle(clone: CloneOutput,
                      reference: qcore.PureState) -> np.ndarray:
  """Computes the joint SWAP-test outcome table directly from a cloner output.

  A SWAP test against a stored pure |phi> passes with the effect
  (I + |phi><phi|)/2 on the tested qubit, so
  table[e, a] = tr[(E_e (x) E_a (x) I) rho_joint] for Eve's outcome e on the
  kept clone and Alice's outcome a on the forwarded qubit.

  Returns:
    A 2x2 array of probabilities summing to 1.
  """
  projector = reference.ToDensity().matrix
  identity = np.eye(2)
  effects = (0.5 * (identity + projector), 0.5 * (identity - projector))
  table = np.zeros((2, 2))
  for eve in (0, 1):
    for alice in (0, 1):
      operator = np.kron(np.kron(effects[eve], effects[alice]), identity)
      table[eve, alice] = np.real(np.trace(operator @ clone.joint.matrix))
  return table


def _Cloner(strategy: str, asymmetry: Optional[float]):
  if strategy == UQCM_SYMMETRIC:
    return SymmetricUQCM
  if strategy == UQCM_ASYMMETRIC:
    return functools.partial(AsymmetricUQCM, asymmetry=asymmetry)
  raise errors.InvalidParameterError(f'{strategy} is not a cloner')


def CloneReference(strategy: str = UQCM_SYMMETRIC,
                   asymmetry: Optional[float] = None) -> CloneOutput:
  """Runs a cloner on |0>; cloner fidelities are the same for every input."""
  return _Cloner(strategy, asymmetry)(qcore.BasisState('0'))


@functools.lru_cache(maxsize=None)
def OperationalSuccessPerQubit(strategy: str = UQCM_SYMMETRIC,
                               asymmetry: Optional[float] = None) -> float:
  """Returns the exact per-qubit probability that both SWAP tests pass."""
  clone = CloneReference(strategy, asymmetry)
  return float(OperationalOracle(clone, qcore.BasisState('0'))[0, 0])


def FidelitySuccessPerQubit(strategy: str = UQCM_SYMMETRIC,
                            asymmetry: Optional[float] = None) -> float:
  """Returns f_clone * f_forwarded for a cloner."""
  clone = CloneReference(strategy, asymmetry)
  return clone.f_clone * clone.f_forwarded


def _CaptureQubit(scenario: AttackScenario, qubit: qcore.DensityOp,
                  rng: qcore.Rng) -> _Capture:
  """Applies Eve's strategy to one qubit she holds."""
  strategy = scenario.strategy
  if strategy in CLONERS:
    cloner = _Cloner(strategy, scenario.asymmetry)
    return _Capture(cloner(qubit).Pair())
  if strategy == RANDOM_GUESS:
    guess = qcore.HaarRandomQubit(rng).ToDensity()
    return _Capture(qcore.Tensor(guess, qubit))
  if strategy == INTERCEPT_RESEND:
    change = _BASIS_CHANGES[rng.Choice(len(_BASIS_CHANGES))]
    rotated = qcore.ApplyGate(qubit, change, [0])
    _, collapsed, _ = qcore.MeasureQubit(rotated, 0, rng)
    eigenstate = qcore.ApplyGate(collapsed, change.Inverse(), [0])
    return _Capture(qcore.Tensor(eigenstate, eigenstate))
  # Handover: Eve walks away with the genuine qubit.
  return _Capture(qcore.Tensor(qubit, qcore.MaximallyMixed(1)),
                  alice_lost=True)


def _ThroughChannel(pair: qcore.DensityOp, index: int,
                    channel: protocol.Channel, rng: qcore.Rng
                    ) -> tuple[qcore.DensityOp, bool]:
  """Sends one qubit of a pair through channel; a lost qubit is depolarised."""
  if channel.loss_probability > 0.0 and rng.Bernoulli(
      channel.loss_probability):
    return protocol.ApplyNoise(pair, protocol.DEPOLARIZING, 1.0, index), True
  return protocol.ApplyNoise(pair, channel.noise_kind, channel.noise_strength,
                             index), False


def _InterceptInTransit(scenario: AttackScenario,
                        password: protocol.QuantumPassword,
                        channel: protocol.Channel,
                        rng: qcore.Rng) -> list[_Capture]:
  """Eve rides the channel as its interceptor and captures every qubit.

  Transmit applies loss and noise first. Eve keeps the joint pair and the
  channel carries on only the half she forwards. A lost qubit never reaches
  her, so she falls back on a random guess for it.

  Returns:
    One capture per password position.
  """
  captures: dict[int, _Capture] = {}

  def Intercept(index: int, qubit: qcore.DensityOp,
                qubit_rng: qcore.Rng) -> qcore.DensityOp:
    captures[index] = _CaptureQubit(scenario, qubit, qubit_rng)
    return qcore.PartialTrace(captures[index].pair, [1])

  _, lost = protocol.Transmit(password, channel.WithInterceptor(Intercept),
                              rng)
  for index in lost:
    guess = qcore.HaarRandomQubit(rng).ToDensity()
    captures[index] = _Capture(qcore.Tensor(guess, qcore.MaximallyMixed(1)),
                               alice_lost=True)
  return [captures[index] for index in range(len(password))]


def _FidelityOutcome(reference: protocol.QubitDescription,
                     qubit: qcore.DensityOp, lost: bool, rng: qcore.Rng) -> int:
  if lost:
    return 1
  return 0 if rng.Bernoulli(qcore.Fidelity(reference.State(), qubit)) else 1


def _TestSingle(stored: qcore.DensityOp, qubit: qcore.DensityOp, lost: bool,
                rng: qcore.Rng) -> int:
  if lost:
    return 1
  return protocol.SwapTestPair(stored, qubit, rng)[0]


def _TestPairQubit(stored: qcore.DensityOp, pair: qcore.DensityOp, index: int,
                   lost: bool, rng: qcore.Rng) -> tuple[int, qcore.DensityOp]:
  """SWAP-tests one qubit of a correlated pair against a stored qubit.

  Returns:
    (outcome, post measurement state of the other qubit of the pair).
  """
  other = 1 - index
  if lost:
    return 1, qcore.PartialTrace(pair, [other])
  register = qcore.Tensor(qcore.Tensor(_ANCILLA, stored), pair)
  outcome, post, _ = protocol.RunSwapTest(register, 1, 2 + index, rng)
  return outcome, qcore.PartialTrace(post, [2 + other])


def _ScorePosition(scenario: AttackScenario, capture: _Capture,
                   description: protocol.QubitDescription,
                   stored: qcore.DensityOp, alice_first: bool,
                   rng: qcore.Rng) -> tuple[int, int]:
  """Returns (Eve's outcome, Alice's outcome) for one password position."""
  if scenario.metric == FIDELITY_METRIC:
    eve = _FidelityOutcome(description, qcore.PartialTrace(capture.pair, [0]),
                           capture.eve_lost, rng)
    alice = _FidelityOutcome(description,
                             qcore.PartialTrace(capture.pair, [1]),
                             capture.alice_lost, rng)
    return eve, alice
  # Bob re-prepares his stored qubit after every test, so both tests see it.
  if alice_first:
    alice, rest = _TestPairQubit(stored, capture.pair, 1, capture.alice_lost,
                                 rng)
    return _TestSingle(stored, rest, capture.eve_lost, rng), alice
  eve, rest = _TestPairQubit(stored, capture.pair, 0, capture.eve_lost, rng)
  return eve, _TestSingle(stored, rest, capture.alice_lost, rng)


def _ClientSideTrial(scenario: AttackScenario, record: protocol.PasswordRecord,
                     password: protocol.QuantumPassword,
                     channel: protocol.Channel,
                     policy: protocol.AcceptancePolicy,
                     rng: qcore.Rng) -> AttackTrialResult:
  """Eve strikes at Alice's station or on the channel."""
  in_transit = scenario.strike_point == IN_TRANSIT
  eve_outcomes: list[int] = []
  alice_outcomes: list[int] = []
  if in_transit:
    captures = _InterceptInTransit(scenario, password, channel, rng)
  for index, qubit in enumerate(password.qubits):
    if in_transit:
      capture = captures[index]
    else:
      capture = _CaptureQubit(scenario, qubit, rng)
      if not capture.alice_lost:
        capture.pair, capture.alice_lost = _ThroughChannel(
            capture.pair, 1, channel, rng)
    capture.pair, capture.eve_lost = _ThroughChannel(capture.pair, 0, channel,
                                                     rng)
    eve, alice = _ScorePosition(scenario, capture, record.descriptions[index],
                                record.stored_copy[index], in_transit, rng)
    eve_outcomes.append(eve)
    alice_outcomes.append(alice)
  clone_accepted = policy.Accepts(eve_outcomes)
  alice_survives = policy.Accepts(alice_outcomes)
  return AttackTrialResult(
      alice_survives=alice_survives,
      clone_accepted=clone_accepted,
      eve_detected=not alice_survives,
      eve_outcomes=tuple(eve_outcomes),
      alice_outcomes=tuple(alice_outcomes))


def _AliceLogin(scenario: AttackScenario, record: protocol.PasswordRecord,
                password: protocol.QuantumPassword, channel: protocol.Channel,
                policy: protocol.AcceptancePolicy, rng: qcore.Rng) -> list[int]:
  """Alice's own login with an untouched password; returns her outcomes."""
  received, lost = protocol.Transmit(password, channel, rng)
  if scenario.metric == FIDELITY_METRIC:
    return [_FidelityOutcome(description, qubit, index in lost, rng)
            for index, (description, qubit) in enumerate(
                zip(record.descriptions, received.qubits))]
  return list(protocol.Verify(record, received, policy, rng,
                              lost).per_qubit_outcomes)


def _ServerSideTrial(scenario: AttackScenario, record: protocol.PasswordRecord,
                     password: protocol.QuantumPassword,
                     channel: protocol.Channel,
                     policy: protocol.AcceptancePolicy,
                     rng: qcore.Rng) -> AttackTrialResult:
  """Eve strikes Bob's stored copy; Bob checks it before the next login."""
  captures = [_CaptureQubit(scenario, stored, rng)
              for stored in record.stored_copy]
  if scenario.sampled_integrity:
    fired = False
    for capture, description in zip(captures, record.offline_copy):
      passed, capture.pair = protocol.ProjectOntoDescription(
          capture.pair, 1, description, rng)
      fired = fired or not passed
  else:
    tampered = record.WithStoredCopy(
        qcore.PartialTrace(c.pair, [1]) for c in captures)
    fired = not protocol.BobIntegrityCheck(tampered)[0]

  for capture in captures:
    capture.pair, capture.eve_lost = _ThroughChannel(capture.pair, 0, channel,
                                                     rng)
  if fired:
    record, password = protocol.Regenerate(record, rng)

  eve_outcomes: list[int] = []
  for capture, description in zip(captures, record.descriptions):
    clone = qcore.PartialTrace(capture.pair, [0])
    if scenario.metric == FIDELITY_METRIC:
      eve_outcomes.append(
          _FidelityOutcome(description, clone, capture.eve_lost, rng))
    elif fired:
      eve_outcomes.append(
          _TestSingle(description.Density(), clone, capture.eve_lost, rng))
    elif capture.eve_lost:
      eve_outcomes.append(1)
    else:
      # Bob's memory still holds qubit 1 of the pair.
      register = qcore.Tensor(_ANCILLA, capture.pair)
      eve_outcomes.append(protocol.RunSwapTest(register, 1, 2, rng)[0])

  alice_outcomes = _AliceLogin(scenario, protocol.RefreshStoredCopy(record),
                               password, channel, policy, rng)
  alice_survives = policy.Accepts(alice_outcomes)
  return AttackTrialResult(
      alice_survives=alice_survives,
      clone_accepted=policy.Accepts(eve_outcomes),
      eve_detected=fired or not alice_survives,
      integrity_fired=fired,
      eve_outcomes=tuple(eve_outcomes),
      alice_outcomes=tuple(alice_outcomes))


def RunAttackTrials(scenario: AttackScenario, rng: qcore.Rng, start: int,
                    stop: int, channel: Optional[protocol.Channel] = None,
                    policy: Optional[protocol.AcceptancePolicy] = None
                    ) -> list[AttackTrialResult]:
  """Runs trials [start, stop) of a scenario.

  Trial k always draws from rng.Fork('trial/k'), so any split of the trial
  range gives the same results as one run.
  """
  channel = (channel or protocol.Channel()).WithInterceptor(None)
  policy = policy or protocol.AcceptancePolicy.Strict()
  results = []
  for trial in range(start, stop):
    trial_rng = rng.Fork(f'trial/{trial}')
    record, password = protocol.SetupAccount(scenario.n_qubits, trial_rng)
    if scenario.strike_point == BOB_SERVER:
      results.append(_ServerSideTrial(scenario, record, password, channel,
                                      policy, trial_rng))
    else:
      results.append(_ClientSideTrial(scenario, record, password, channel,
                                      policy, trial_rng))
  return results


def RunAttack(scenario: AttackScenario, rng: qcore.Rng,
              channel: Optional[protocol.Channel] = None,
              policy: Optional[protocol.AcceptancePolicy] = None
              ) -> list[AttackTrialResult]:
  """Runs every trial of an attack scenario.

  Args:
    scenario: The attack to run.
    rng: The random stream; each trial forks its own child.
    channel: The channel between Alice, Eve and Bob. Ideal by default.
    policy: Bob's acceptance policy. Strict by default.

  Returns:
    One AttackTrialResult per trial, in trial order.
  """
  logger.debug('Running %d trials of %s at %s (%s metric, %d qubits)',
               scenario.trials, scenario.strategy, scenario.strike_point,
               scenario.metric, scenario.n_qubits)
  return RunAttackTrials(scenario, rng, 0, scenario.trials, channel, policy)


def Summarize(results: Sequence[AttackTrialResult]) -> AttackSummary:
  """Counts the events over a list of trial results."""
  return AttackSummary(
      trials=len(results),
      successes=sum(r.eve_success for r in results),
      clone_accepted=sum(r.clone_accepted for r in results),
      alice_survived=sum(r.alice_survives for r in results),
      detected=sum(r.eve_detected for r in results),
      integrity_fired=sum(r.integrity_fired for r in results))
