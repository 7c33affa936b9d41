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
"""Seeded numerical studies over the attack and protocol simulations."""

from concurrent import futures
import dataclasses
import math
from typing import Optional, Sequence

from absl import logging
from scipy import stats

from qupass.lib import adversary
from qupass.lib import errors
from qupass.lib import protocol
from qupass.lib import qcore
from qupass.lib import utils


logger = logging.logging.getLogger('qupass')

MAX_SWEEP_QUBITS = 20
MIN_SWEEP_TRIALS = 1000
DEFAULT_TRIALS = 100_000
CONFIDENCE = 0.95

CLAIMED_QUBITS = 13
CLAIMED_DETECTION = 0.999

# Trials per executor task.
_CHUNK_TRIALS = 5000


@dataclasses.dataclass(frozen=True)
class SweepRow:
  """Eve's measured and analytic success at one password length."""
  n_qubits: int
  metric: str
  trials: int
  successes: int
  estimate: float
  ci_low: float
  ci_high: float
  analytic: float

  def __post_init__(self):
    if not 0 <= self.successes <= self.trials:
      raise errors.InvalidParameterError(
          f'successes {self.successes} outside [0, {self.trials}]')
    for name in ('estimate', 'ci_low', 'ci_high', 'analytic'):
      utils.CheckProbability(name, getattr(self, name))
    if not self.ci_low <= self.estimate <= self.ci_high:
      raise errors.InvalidParameterError(
          f'estimate {self.estimate} outside [{self.ci_low}, {self.ci_high}]')


@dataclasses.dataclass(frozen=True)
class SweepTable:
  rows: tuple[SweepRow, ...]

  def __iter__(self):
    return iter(self.rows)

  def __len__(self) -> int:
    return len(self.rows)


@dataclasses.dataclass(frozen=True)
class NoiseTradeoffRow:
  """Usability and security of one (noise, threshold) setting."""
  noise_strength: float
  threshold_fraction: float
  honest_accept_rate: float
  eve_success_rate: float
  trials: int

  def __post_init__(self):
    utils.CheckProbability('noise_strength', self.noise_strength)
    if not 0.0 < self.threshold_fraction <= 1.0:
      raise errors.InvalidParameterError(
          'threshold_fraction must be in (0, 1], got '
          f'{self.threshold_fraction}')
    if self.trials < 1:
      raise errors.InvalidParameterError(
          f'trials must be positive, got {self.trials}')
    utils.CheckProbability('honest_accept_rate', self.honest_accept_rate)
    utils.CheckProbability('eve_success_rate', self.eve_success_rate)


@dataclasses.dataclass(frozen=True)
class DetectionClaim:
  """A claimed detection rate at a password length, checked against the bound.

  Attributes:
    n_qubits: The claimed password length.
    claimed_detection: The claimed detection rate.
    detection: The rate 1 - (5/6)^(2N) gives at n_qubits.
    required_qubits: The shortest length whose detection meets the claim.
    reproduced: Whether detection meets the claim at n_qubits.
  """
  n_qubits: int
  claimed_detection: float
  detection: float
  required_qubits: int
  reproduced: bool


def EstimateWithCI(successes: int, trials: int) -> tuple[float, float, float]:
  """Returns (estimate, ci_low, ci_high) with a 95% Wilson score interval.

  Raises:
    InvalidParameterError: Unless 0 <= successes <= trials and trials >= 1.
  """
  if trials < 1 or not 0 <= successes <= trials:
    raise errors.InvalidParameterError(
        f'Need 0 <= successes <= trials and trials >= 1, got {successes} of '
        f'{trials}')
  z = stats.norm.ppf(0.5 + CONFIDENCE / 2.0)
  estimate = successes / trials
  z2 = z * z
  denominator = 1.0 + z2 / trials
  centre = (estimate + z2 / (2.0 * trials)) / denominator
  margin = z * math.sqrt(
      estimate * (1.0 - estimate) / trials + z2 / (4.0 * trials * trials)
  ) / denominator
  ci_low = min(estimate, max(0.0, centre - margin))
  ci_high = max(estimate, min(1.0, centre + margin))
  return estimate, ci_low, ci_high


def _PerQubitSuccess(metric: str) -> float:
  utils.CheckChoice('metric', metric, adversary.METRICS)
  if metric == adversary.FIDELITY_METRIC:
    return adversary.CloneSuccessBound(1)
  return adversary.OperationalSuccessPerQubit()


def AnalyticSuccess(n_qubits: int, metric: str) -> float:
  """Returns Eve's exact symmetric-cloner success at n_qubits under metric."""
  if metric == adversary.FIDELITY_METRIC:
    return adversary.CloneSuccessBound(n_qubits)
  return _PerQubitSuccess(metric)**n_qubits


def MinLengthForDetection(target_detection: float,
                          metric: str = adversary.FIDELITY_METRIC) -> int:
  """Returns the shortest password whose analytic detection meets target.

  Raises:
    InvalidParameterError: If target_detection is not in (0, 1).
  """
  if not 0.0 < target_detection < 1.0:
    raise errors.InvalidParameterError(
        f'target_detection must be in (0, 1), got {target_detection}')
  _PerQubitSuccess(metric)
  n_qubits = 1
  while 1.0 - AnalyticSuccess(n_qubits, metric) < target_detection:
    n_qubits += 1
  return n_qubits


def DetectionClaimCheck(n_qubits: int = CLAIMED_QUBITS,
                        claimed_detection: float = CLAIMED_DETECTION
                        ) -> DetectionClaim:
  """Checks a (length, detection rate) claim against the fidelity bound."""
  detection = 1.0 - adversary.CloneSuccessBound(n_qubits)
  return DetectionClaim(
      n_qubits=n_qubits,
      claimed_detection=claimed_detection,
      detection=detection,
      required_qubits=MinLengthForDetection(claimed_detection),
      reproduced=detection >= claimed_detection)


def _Chunks(trials: int) -> list[tuple[int, int]]:
  return [(start, min(start + _CHUNK_TRIALS, trials))
          for start in range(0, trials, _CHUNK_TRIALS)]


def _SummarizeChunk(scenario: adversary.AttackScenario, rng: qcore.Rng,
                    start: int, stop: int,
                    channel: Optional[protocol.Channel] = None,
                    policy: Optional[protocol.AcceptancePolicy] = None
                    ) -> adversary.AttackSummary:
  return adversary.Summarize(adversary.RunAttackTrials(
      scenario, rng, start, stop, channel, policy))


def _Add(a: adversary.AttackSummary,
         b: adversary.AttackSummary) -> adversary.AttackSummary:
  return adversary.AttackSummary(*(
      getattr(a, f.name) + getattr(b, f.name)
      for f in dataclasses.fields(adversary.AttackSummary)))


def SummarizeAttack(scenario: adversary.AttackScenario, rng: qcore.Rng,
                    channel: Optional[protocol.Channel] = None,
                    policy: Optional[protocol.AcceptancePolicy] = None,
                    workers: int = 1) -> adversary.AttackSummary:
  """Runs an attack in chunks across workers and adds up the counts.

  The counts equal those of Summarize(RunAttack(...)) for any worker count.
  """
  summary = adversary.Summarize([])
  with futures.ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
    pending = [
        executor.submit(_SummarizeChunk, scenario, rng, start, stop, channel,
                        policy)
        for start, stop in _Chunks(scenario.trials)]
    for future in futures.as_completed(pending):
      summary = _Add(summary, future.result())
  return summary


def AnalyticAttackSuccess(scenario: adversary.AttackScenario,
                          channel: Optional[protocol.Channel] = None,
                          policy: Optional[protocol.AcceptancePolicy] = None
                          ) -> Optional[float]:
  """Returns Eve's exact success where a closed form applies, else None.

  Closed forms cover cloners and random guessing against Alice's station or
  the channel, over an ideal lossless channel under the strict policy.
  """
  channel = channel or protocol.Channel()
  policy = policy or protocol.AcceptancePolicy.Strict()
  if (scenario.strike_point == adversary.BOB_SERVER or
      policy.mode != protocol.STRICT or channel.loss_probability > 0.0 or
      (channel.noise_kind != protocol.IDEAL and channel.noise_strength > 0.0)):
    return None
  operational = scenario.metric == adversary.OPERATIONAL_METRIC
  if scenario.strategy in adversary.CLONERS:
    if operational:
      per_qubit = adversary.OperationalSuccessPerQubit(scenario.strategy,
                                                      scenario.asymmetry)
    else:
      per_qubit = adversary.FidelitySuccessPerQubit(scenario.strategy,
                                                   scenario.asymmetry)
  elif scenario.strategy == adversary.RANDOM_GUESS:
    # Haar averages of (1 + F) / 2 and F.
    per_qubit = 0.75 if operational else 0.5
  else:
    return None
  return per_qubit**scenario.n_qubits


def SweepPasswordLength(n_min: int, n_max: int,
                        trials: int = DEFAULT_TRIALS,
                        metric: str = adversary.FIDELITY_METRIC,
                        seed: int = 0, workers: int = 1) -> SweepTable:
  """Measures Eve's symmetric-cloner success for every length in a range.

  Each length draws from a child stream keyed by (length, metric), so adding
  lengths to the range leaves the existing rows unchanged.

  Args:
    n_min: The shortest password length.
    n_max: The longest password length.
    trials: Trials per length.
    metric: The success metric.
    seed: The master seed.
    workers: Executor threads.

  Returns:
    One SweepRow per length, shortest first.

  Raises:
    InvalidParameterError: On a bad range, trial count, metric or seed.
  """
  if not 1 <= n_min <= n_max <= MAX_SWEEP_QUBITS:
    raise errors.InvalidParameterError(
        f'Need 1 <= min <= max <= {MAX_SWEEP_QUBITS}, got {n_min}..{n_max}')
  if trials < MIN_SWEEP_TRIALS:
    raise errors.InvalidParameterError(
        f'trials must be >= {MIN_SWEEP_TRIALS}, got {trials}')
  utils.CheckChoice('metric', metric, adversary.METRICS)
  root = qcore.Rng(seed)

  successes: dict[int, int] = {}
  with futures.ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
    tasks = {}
    for n_qubits in range(n_min, n_max + 1):
      successes[n_qubits] = 0
      scenario = adversary.AttackScenario(
          adversary.UQCM_SYMMETRIC, adversary.ALICE_STATION, n_qubits, trials,
          metric)
      rng = root.Fork(f'sweep/{n_qubits}/{metric}')
      for start, stop in _Chunks(trials):
        future = executor.submit(_SummarizeChunk, scenario, rng, start, stop)
        tasks[future] = n_qubits
    for future in futures.as_completed(tasks):
      successes[tasks[future]] += future.result().successes

  rows = []
  for n_qubits in sorted(successes):
    estimate, ci_low, ci_high = EstimateWithCI(successes[n_qubits], trials)
    rows.append(SweepRow(
        n_qubits=n_qubits,
        metric=metric,
        trials=trials,
        successes=successes[n_qubits],
        estimate=estimate,
        ci_low=ci_low,
        ci_high=ci_high,
        analytic=AnalyticSuccess(n_qubits, metric)))
    logger.debug('Sweep N=%d %s: %d/%d', n_qubits, metric,
                 successes[n_qubits], trials)
  return SweepTable(tuple(rows))


@dataclasses.dataclass(frozen=True)
class _NoiseOutcomes:
  honest: list[tuple[int, ...]]
  attacks: list[adversary.AttackTrialResult]


def _RunNoiseLevel(n_qubits: int, trials: int, channel: protocol.Channel,
                   storage_strength: float, rng: qcore.Rng) -> _NoiseOutcomes:
  """Samples honest logins and attacks once; every threshold reuses them."""
  honest = []
  honest_rng = rng.Fork('honest')
  for trial in range(trials):
    trial_rng = honest_rng.Fork(f'trial/{trial}')
    record, password = protocol.SetupAccount(n_qubits, trial_rng)
    if storage_strength > 0.0:
      record = protocol.StoreRecord(record, channel.noise_kind,
                                    storage_strength)
    result = protocol.Login(record, password, channel,
                            protocol.AcceptancePolicy.Strict(), trial_rng)
    honest.append(result.per_qubit_outcomes)
  scenario = adversary.AttackScenario(
      adversary.UQCM_SYMMETRIC, adversary.ALICE_STATION, n_qubits, trials,
      adversary.OPERATIONAL_METRIC)
  return _NoiseOutcomes(
      honest, adversary.RunAttack(scenario, rng.Fork('eve'), channel))


def NoiseTradeoffSweep(noise_kind: str, noise_levels: Sequence[float],
                       thresholds: Sequence[float], n_qubits: int,
                       trials: int, seed: int = 0,
                       storage_strength: float = 0.0,
                       workers: int = 1) -> list[NoiseTradeoffRow]:
  """Maps usability against security over channel noise and policy leeway.

  For each noise level, honest logins and symmetric-cloner attacks at Alice's
  station are sampled once through the noisy channel; each threshold then
  scores the same outcomes, so rates are monotone in the threshold.

  Args:
    noise_kind: The channel noise model.
    noise_levels: Noise strengths, each in [0, 1].
    thresholds: Acceptance fractions, each in (0, 1].
    n_qubits: The password length.
    trials: Trials per noise level.
    seed: The master seed.
    storage_strength: Decoherence of Bob's stored copy before honest logins.
    workers: Executor threads.

  Returns:
    One row per (noise, threshold), noise-major in the given order.

  Raises:
    InvalidParameterError: If any parameter is out of range.
  """
  if n_qubits < 1:
    raise errors.InvalidParameterError(f'n_qubits must be >= 1, got {n_qubits}')
  if trials < 1:
    raise errors.InvalidParameterError(f'trials must be >= 1, got {trials}')
  if not noise_levels or not thresholds:
    raise errors.InvalidParameterError('Need at least one level and threshold')
  utils.CheckProbability('storage_strength', storage_strength)
  channels = [protocol.Channel(noise_kind, level) for level in noise_levels]
  policies = [protocol.AcceptancePolicy.ForFraction(t) for t in thresholds]
  root = qcore.Rng(seed)

  with futures.ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
    pending = [
        executor.submit(_RunNoiseLevel, n_qubits, trials, channel,
                        storage_strength,
                        root.Fork(f'noise/{noise_kind}/'
                                  f'{channel.noise_strength!r}'))
        for channel in channels]
    outcomes = [future.result() for future in pending]

  rows = []
  for channel, level in zip(channels, outcomes):
    for policy in policies:
      honest = sum(policy.Accepts(o) for o in level.honest)
      eve = sum(policy.Accepts(r.eve_outcomes) and
                policy.Accepts(r.alice_outcomes) for r in level.attacks)
      rows.append(NoiseTradeoffRow(
          noise_strength=channel.noise_strength,
          threshold_fraction=policy.threshold_fraction,
          honest_accept_rate=honest / trials,
          eve_success_rate=eve / trials,
          trials=trials))
      logger.debug('Noise %s threshold %s: honest %d eve %d of %d',
                   channel.noise_strength, policy.threshold_fraction, honest,
                   eve, trials)
  return rows
