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
"""Qupass report and CSV formatting."""

import csv
import io
from typing import Optional, Sequence

import humanize

from qupass.lib import adversary
from qupass.lib import errors
from qupass.lib import experiments
from qupass.lib import protocol
from qupass.lib import utils


SWEEP_HEADER = ('n_qubits', 'metric', 'trials', 'successes', 'estimate',
                'ci_low', 'ci_high', 'analytic')
NOISE_HEADER = ('noise', 'threshold', 'honest_accept', 'eve_success', 'trials')
ATTACK_HEADER = ('strategy', 'strike_point', 'n_qubits', 'metric', 'trials',
                 'successes', 'estimate', 'ci_low', 'ci_high', 'clone_accepted',
                 'alice_survived', 'detected', 'integrity_fired')
TRADEOFF_HEADER = ('asymmetry', 'f_clone', 'f_forwarded', 'product')

_METRIC_LABELS = {
    adversary.FIDELITY_METRIC: 'fidelity accounting (pass with p = fidelity)',
    adversary.OPERATIONAL_METRIC: 'operational (sampled SWAP tests)',
}

_P = utils.FormatProbability


def _Interval(estimate: float, ci_low: float, ci_high: float) -> str:
  return f'{_P(estimate)} (95% CI {_P(ci_low)} - {_P(ci_high)})'


def _Small(p: float) -> str:
  """Formats p, adding scientific notation for values below one percent."""
  if 0.0 < p < 0.01:
    return f'{_P(p)} ({humanize.scientific(p, precision=2)})'
  return _P(p)


def FormatDemo(n_qubits: int, seed: int,
               results: Sequence[protocol.VerificationResult],
               min_fidelity: float) -> list[str]:
  """Formats an honest setup / login / verification demo.

  Args:
    n_qubits: The password length.
    seed: The seed the demo ran with.
    results: One verification result per round.
    min_fidelity: The lowest fidelity of Alice's final qubits to Bob's
      descriptions.

  Returns:
    A list of strings, one per line, of formatted output.
  """
  lines = [f'Account set up with a {n_qubits} qubit password (seed {seed})']
  for number, result in enumerate(results, start=1):
    verdict = 'accepted' if result.accepted else 'rejected'
    passes = result.per_qubit_outcomes.count(0)
    lines.append(
        f'Round {number}: {verdict} ({passes}/{len(result.per_qubit_outcomes)} '
        f'SWAP tests passed, P(accept) = {_P(result.p_accept_analytic)})')
  unchanged = min_fidelity >= 1.0 - protocol.INTACT_TOLERANCE
  lines.append(
      f'Password {"unchanged" if unchanged else "CHANGED"}: minimum fidelity '
      f'{_P(min_fidelity)} to the issued state')
  return lines


def FormatDetectionClaim(claim: experiments.DetectionClaim) -> list[str]:
  """Reports whether a detection claim holds under (5/6)^(2N)."""
  verdict = 'reproduced' if claim.reproduced else 'NOT reproduced'
  return [
      f'Detection claim: {_P(claim.claimed_detection)} at N='
      f'{claim.n_qubits} is {verdict}; the bound gives '
      f'{_P(claim.detection)} at N={claim.n_qubits} and first reaches '
      f'{_P(claim.claimed_detection)} at N={claim.required_qubits}'
  ]


def FormatAttack(scenario: adversary.AttackScenario,
                 channel: protocol.Channel,
                 policy: protocol.AcceptancePolicy,
                 summary: adversary.AttackSummary, seed: int,
                 analytic: Optional[float] = None,
                 cloner: Optional[adversary.CloneOutput] = None) -> list[str]:
  """Formats the outcome of an attack run.

  Args:
    scenario: The scenario that ran.
    channel: The channel it ran over.
    policy: Bob's acceptance policy.
    summary: The event counts.
    seed: The seed it ran with.
    analytic: Eve's exact success, where one is known.
    cloner: A cloner output on a reference input, for cloning strategies.

  Returns:
    A list of strings, one per line, of formatted output.
  """
  trials = summary.trials
  strategy = scenario.strategy
  if scenario.asymmetry is not None:
    strategy += f' (asymmetry {_P(scenario.asymmetry)})'
  lines = [
      f'Strategy:      {strategy}',
      f'Strike point:  {scenario.strike_point}',
      f'Password:      {scenario.n_qubits} qubits',
      f'Metric:        {_METRIC_LABELS[scenario.metric]}',
      f'Channel:       {channel.noise_kind} {_P(channel.noise_strength)}, '
      f'loss {_P(channel.loss_probability)}',
      f'Policy:        {policy.mode}, '
      f'{policy.RequiredPasses(scenario.n_qubits)}'
      f'/{scenario.n_qubits} passes required',
      f'Trials:        {humanize.intcomma(trials)} (seed {seed})',
  ]
  if cloner is not None:
    lines.append(
        f'Cloner:        f_clone {_P(cloner.f_clone)}, f_forwarded '
        f'{_P(cloner.f_forwarded)}')
  lines.append(
      'Eve success:   ' + _Interval(
          *experiments.EstimateWithCI(summary.successes, trials)))
  if analytic is not None:
    lines.append(f'Analytic:      {_Small(analytic)}')
  if scenario.strategy in adversary.CLONERS:
    lines.append('Bound (5/6)^(2N): '
                 f'{_Small(adversary.CloneSuccessBound(scenario.n_qubits))}')
  lines.append(f'Clone accepted: {_P(summary.clone_accepted / trials)}')
  lines.append(f'Alice survived: {_P(summary.alice_survived / trials)}')
  lines.append(f'Eve detected:   {_P(summary.detected / trials)}')
  if scenario.strike_point == adversary.BOB_SERVER:
    check = 'sampled' if scenario.sampled_integrity else 'exact'
    lines.append(
        f'Integrity check ({check}) fired in '
        f'{humanize.intcomma(summary.integrity_fired)}/'
        f'{humanize.intcomma(trials)} trials '
        f'({_P(summary.integrity_fired / trials)})')
  return lines


def FormatSweep(table: experiments.SweepTable) -> list[str]:
  """Formats a password length sweep as an aligned table."""
  lines = [f'{"N":>3}  {"successes":>11}  {"estimate":>9}  '
           f'{"95% CI":>21}  analytic']
  for row in table:
    lines.append(
        f'{row.n_qubits:>3}  {humanize.intcomma(row.successes):>11}  '
        f'{_P(row.estimate):>9}  '
        f'{"[" + _P(row.ci_low) + ", " + _P(row.ci_high) + "]":>21}  '
        f'{_Small(row.analytic)}')
  return lines


def FormatNoise(rows: Sequence[experiments.NoiseTradeoffRow]) -> list[str]:
  """Formats a noise / threshold grid."""
  lines = [f'{"noise":>8}  {"threshold":>9}  {"honest":>8}  {"eve":>8}']
  for row in rows:
    lines.append(
        f'{_P(row.noise_strength):>8}  {_P(row.threshold_fraction):>9}  '
        f'{_P(row.honest_accept_rate):>8}  {_P(row.eve_success_rate):>8}')
  return lines


def FormatTradeoff(points: Sequence[adversary.TradeoffPoint]) -> list[str]:
  """Formats the asymmetric cloner's fidelity tradeoff."""
  lines = [f'{"asymmetry":>9}  {"f_clone":>8}  {"f_forwarded":>11}  product']
  for point in points:
    lines.append(
        f'{_P(point.asymmetry):>9}  {_P(point.f_clone):>8}  '
        f'{_P(point.f_forwarded):>11}  {_P(point.product)}')
  return lines


def _WriteCsv(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
  buffer = io.StringIO()
  writer = csv.writer(buffer, lineterminator='\n')
  writer.writerow(header)
  writer.writerows(rows)
  return buffer.getvalue()


def SweepCsv(table: experiments.SweepTable) -> str:
  """Renders a sweep table as CSV text."""
  return _WriteCsv(SWEEP_HEADER, [
      (str(row.n_qubits), row.metric, str(row.trials), str(row.successes),
       _P(row.estimate), _P(row.ci_low), _P(row.ci_high), _P(row.analytic))
      for row in table])


def NoiseCsv(rows: Sequence[experiments.NoiseTradeoffRow]) -> str:
  """Renders noise tradeoff rows as CSV text."""
  return _WriteCsv(NOISE_HEADER, [
      (_P(row.noise_strength), _P(row.threshold_fraction),
       _P(row.honest_accept_rate), _P(row.eve_success_rate), str(row.trials))
      for row in rows])


def TradeoffCsv(points: Sequence[adversary.TradeoffPoint]) -> str:
  """Renders the cloner tradeoff as CSV text."""
  return _WriteCsv(TRADEOFF_HEADER, [
      (_P(point.asymmetry), _P(point.f_clone), _P(point.f_forwarded),
       _P(point.product))
      for point in points])


def AttackCsv(scenario: adversary.AttackScenario,
              summary: adversary.AttackSummary) -> str:
  """Renders an attack summary as one CSV row."""
  estimate, ci_low, ci_high = experiments.EstimateWithCI(summary.successes,
                                                         summary.trials)
  return _WriteCsv(ATTACK_HEADER, [(
      scenario.strategy, scenario.strike_point, str(scenario.n_qubits),
      scenario.metric, str(summary.trials), str(summary.successes),
      _P(estimate), _P(ci_low), _P(ci_high), str(summary.clone_accepted),
      str(summary.alice_survived), str(summary.detected),
      str(summary.integrity_fired))])


def _ReadCsv(text: str, header: Sequence[str]) -> list[dict[str, str]]:
  reader = csv.DictReader(io.StringIO(text))
  if tuple(reader.fieldnames or ()) != tuple(header):
    raise errors.InvalidParameterError(
        f'Expected CSV header {",".join(header)}, got '
        f'{",".join(reader.fieldnames or ())}')
  return list(reader)


def ReadSweepCsv(text: str) -> experiments.SweepTable:
  """Parses CSV text written by SweepCsv.

  Raises:
    InvalidParameterError: If the header or a value is malformed.
  """
  try:
    return experiments.SweepTable(tuple(
        experiments.SweepRow(
            n_qubits=int(row['n_qubits']),
            metric=row['metric'],
            trials=int(row['trials']),
            successes=int(row['successes']),
            estimate=float(row['estimate']),
            ci_low=float(row['ci_low']),
            ci_high=float(row['ci_high']),
            analytic=float(row['analytic']))
        for row in _ReadCsv(text, SWEEP_HEADER)))
  except (TypeError, ValueError) as error:
    raise errors.InvalidParameterError(
        f'Malformed sweep CSV: {error}') from error


def ReadNoiseCsv(text: str) -> list[experiments.NoiseTradeoffRow]:
  """Parses CSV text written by NoiseCsv.

  Raises:
    InvalidParameterError: If the header or a value is malformed.
  """
  try:
    return [
        experiments.NoiseTradeoffRow(
            noise_strength=float(row['noise']),
            threshold_fraction=float(row['threshold']),
            honest_accept_rate=float(row['honest_accept']),
            eve_success_rate=float(row['eve_success']),
            trials=int(row['trials']))
        for row in _ReadCsv(text, NOISE_HEADER)]
  except (TypeError, ValueError) as error:
    raise errors.InvalidParameterError(
        f'Malformed noise CSV: {error}') from error
