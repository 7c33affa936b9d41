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
"""Quantum password simulator.

Supports commands demo, attack, sweep, noise, tradeoff, help
"""

from collections.abc import Sequence
import datetime
import os
import sys
import tempfile
from typing import Any, Optional

from absl import app
from absl import flags
from absl import logging

from qupass.lib import adversary
from qupass.lib import config
from qupass.lib import errors
from qupass.lib import experiments
from qupass.lib import formatters
from qupass.lib import protocol
from qupass.lib import qcore
from qupass.lib import utils


logger = logging.logging.getLogger('qupass')

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

NOISE_TRIALS = 1000
DETECTION_TARGETS = (0.99, 0.999)

# go/keep-sorted start
_ASYMMETRY_HELP = (
    'Asymmetric cloner setting in [0, 1]: 0 forwards the input untouched, '
    '0.5 is the symmetric cloner')
_CONFIG_HELP = 'Path to an INI scenario file'
_DEBUG_HELP = 'Enable debug logging'
_KIND_HELP = 'Noise model swept by the noise command'
_LEVELS_HELP = 'Comma separated noise strengths, eg "0,0.05,0.1"'
_LOSS_HELP = 'Per-qubit channel loss probability'
_MAX_HELP = 'Longest password length in the sweep'
_METRIC_HELP = 'Success metric: fidelity or operational'
_MIN_HELP = 'Shortest password length in the sweep'
_NOISE_KIND_HELP = (
    'Channel noise: ideal, depolarizing, dephasing or amplitude_damping')
_NOISE_STRENGTH_HELP = 'Channel noise strength in [0, 1]'
_OUT_HELP = 'CSV output path. Default: print CSV to stdout'
_POINTS_HELP = 'Grid points from asymmetry 0 to 1 in the tradeoff table'
_POLICY_HELP = 'Acceptance policy: strict or threshold'
_QUBITS_HELP = 'Password length in qubits'
_ROUNDS_HELP = 'Number of honest logins in the demo'
_SAMPLED_INTEGRITY_HELP = (
    'Bob checks his stored copy by measurement instead of exact fidelity')
_SCENARIO_HELP = 'Named preset: cd_key, credit_card or atm'
_SEED_HELP = (
    '64-bit seed. Default: [run] seed, then '
    f'${config.SEED_ENVIRONMENT_VARIABLE}, then 0')
_STORAGE_STRENGTH_HELP = (
    'Decoherence of Bob\'s stored copy in the noise command, same noise model')
_STRATEGY_HELP = (
    'Eve\'s strategy: uqcm_symmetric, uqcm_asymmetric, random_guess, '
    'intercept_resend or handover')
_STRIKE_POINT_HELP = (
    'Where Eve strikes: alice_station, in_transit or bob_server')
_THRESHOLD_HELP = (
    'Fraction of SWAP tests that must pass under --policy threshold')
_THRESHOLDS_HELP = 'Comma separated acceptance fractions, eg "1,0.9,0.8"'
_TRIALS_HELP = 'Monte Carlo trials (per point for sweeps)'
_WORKERS_HELP = 'Worker threads for attacks and sweeps'
# go/keep-sorted end

_COMMANDS = frozenset(
    ('demo', 'attack', 'sweep', 'noise', 'tradeoff', 'help'))

# Flags mirrored by scenario file keys.
_FLAG_KEYS = {
    'asymmetry': ('attack', 'asymmetry'),
    'loss': ('channel', 'loss_probability'),
    'metric': ('attack', 'metric'),
    'noise-kind': ('channel', 'noise_kind'),
    'noise-strength': ('channel', 'noise_strength'),
    'policy': ('policy', 'mode'),
    'qubits': ('password', 'n_qubits'),
    'sampled-integrity': ('attack', 'sampled_integrity'),
    'strategy': ('attack', 'strategy'),
    'strike-point': ('attack', 'strike_point'),
    'threshold': ('policy', 'threshold_fraction'),
    'trials': ('run', 'trials'),
}

_LOGGED_FLAGS = sorted(
    set(_FLAG_KEYS) | {'config', 'debug', 'kind', 'levels', 'max', 'min', 'out',
                       'points', 'rounds', 'scenario', 'seed',
                       'storage-strength', 'thresholds', 'workers'})


def _FlagLine(name: str, text: str) -> str:
  return f'  --{flags.FLAGS[name].name} {text}'


def _USAGE():
  scenario_flags = '\n'.join((
      _FlagLine('config', _CONFIG_HELP),
      _FlagLine('scenario', _SCENARIO_HELP),
      _FlagLine('qubits', _QUBITS_HELP),
      _FlagLine('seed', _SEED_HELP),
      _FlagLine('noise-kind', _NOISE_KIND_HELP),
      _FlagLine('noise-strength', _NOISE_STRENGTH_HELP),
      _FlagLine('loss', _LOSS_HELP),
      _FlagLine('policy', _POLICY_HELP),
      _FlagLine('threshold', _THRESHOLD_HELP),
  ))
  return f"""qupass {{demo,attack,sweep,noise,tradeoff,help}}

demo - Set up an account and run honest logins, checking the password survives
{scenario_flags}
{_FlagLine('rounds', _ROUNDS_HELP)}

attack - Run Eve's attack and report her success rate
{scenario_flags}
{_FlagLine('strategy', _STRATEGY_HELP)}
{_FlagLine('asymmetry', _ASYMMETRY_HELP)}
{_FlagLine('strike-point', _STRIKE_POINT_HELP)}
{_FlagLine('metric', _METRIC_HELP)}
{_FlagLine('sampled-integrity', _SAMPLED_INTEGRITY_HELP)}
{_FlagLine('trials', _TRIALS_HELP)}
{_FlagLine('workers', _WORKERS_HELP)}
{_FlagLine('out', _OUT_HELP)}

sweep - Eve's symmetric cloner success against password length, as CSV
{_FlagLine('min', _MIN_HELP)}
{_FlagLine('max', _MAX_HELP)}
{_FlagLine('metric', _METRIC_HELP)}
{_FlagLine('trials', _TRIALS_HELP)}
{_FlagLine('seed', _SEED_HELP)}
{_FlagLine('workers', _WORKERS_HELP)}
{_FlagLine('out', _OUT_HELP)}

noise - Honest acceptance and Eve's success over noise levels and thresholds
{_FlagLine('kind', _KIND_HELP)}
{_FlagLine('levels', _LEVELS_HELP)}
{_FlagLine('thresholds', _THRESHOLDS_HELP)}
{_FlagLine('qubits', _QUBITS_HELP)}
{_FlagLine('storage-strength', _STORAGE_STRENGTH_HELP)}
{_FlagLine('trials', _TRIALS_HELP)}
{_FlagLine('seed', _SEED_HELP)}
{_FlagLine('workers', _WORKERS_HELP)}
{_FlagLine('out', _OUT_HELP)}

tradeoff - Clone and forwarded fidelities of the asymmetric cloner, as CSV
{_FlagLine('points', _POINTS_HELP)}
{_FlagLine('out', _OUT_HELP)}

help - Display this text and exit

Exit codes: {EXIT_OK} success, {EXIT_FAILURE} runtime or I/O failure, \
{EXIT_USAGE} usage or validation error
Enable debug logging with --{flags.FLAGS['debug'].name}
"""


class Main:
  """Main driver class."""

  @classmethod
  def DefineFlags(cls):
    """Define absl flags for the application."""
    # go/keep-sorted start
    flags.DEFINE_bool(name='debug', default=False, help=_DEBUG_HELP)
    flags.DEFINE_bool(
        name='sampled-integrity', default=False, required=False,
        help=_SAMPLED_INTEGRITY_HELP)
    flags.DEFINE_float(
        name='asymmetry', default=None, required=False, help=_ASYMMETRY_HELP)
    flags.DEFINE_float(
        name='loss', default=0.0, required=False, help=_LOSS_HELP)
    flags.DEFINE_float(
        name='noise-strength', default=0.0, required=False,
        help=_NOISE_STRENGTH_HELP)
    flags.DEFINE_float(
        name='storage-strength', default=0.0, required=False,
        help=_STORAGE_STRENGTH_HELP)
    flags.DEFINE_float(
        name='threshold', default=1.0, required=False, help=_THRESHOLD_HELP)
    flags.DEFINE_integer(name='max', default=15, required=False, help=_MAX_HELP)
    flags.DEFINE_integer(name='min', default=1, required=False, help=_MIN_HELP)
    flags.DEFINE_integer(
        name='points', default=11, required=False, help=_POINTS_HELP)
    flags.DEFINE_integer(
        name='qubits', default=config.DEFAULT_QUBITS, required=False,
        help=_QUBITS_HELP)
    flags.DEFINE_integer(
        name='rounds', default=5, required=False, help=_ROUNDS_HELP)
    flags.DEFINE_integer(
        name='seed', default=None, required=False, help=_SEED_HELP)
    flags.DEFINE_integer(
        name='trials', default=None, required=False, help=_TRIALS_HELP)
    flags.DEFINE_integer(
        name='workers', default=1, required=False, help=_WORKERS_HELP)
    flags.DEFINE_string(
        name='config', default='', required=False, help=_CONFIG_HELP)
    flags.DEFINE_string(
        name='kind', default=protocol.DEPOLARIZING, required=False,
        help=_KIND_HELP)
    flags.DEFINE_string(
        name='levels', default='0,0.05,0.1', required=False, help=_LEVELS_HELP)
    flags.DEFINE_string(
        name='metric', default=adversary.FIDELITY_METRIC, required=False,
        help=_METRIC_HELP)
    flags.DEFINE_string(
        name='noise-kind', default=protocol.IDEAL, required=False,
        help=_NOISE_KIND_HELP)
    flags.DEFINE_string(name='out', default='', required=False, help=_OUT_HELP)
    flags.DEFINE_string(
        name='policy', default=protocol.STRICT, required=False,
        help=_POLICY_HELP)
    flags.DEFINE_string(
        name='scenario', default='', required=False, help=_SCENARIO_HELP)
    flags.DEFINE_string(
        name='strategy', default=adversary.UQCM_SYMMETRIC, required=False,
        help=_STRATEGY_HELP)
    flags.DEFINE_string(
        name='strike-point', default=adversary.ALICE_STATION, required=False,
        help=_STRIKE_POINT_HELP)
    flags.DEFINE_string(
        name='thresholds', default='1,0.9,0.8', required=False,
        help=_THRESHOLDS_HELP)
    # go/keep-sorted end

  def main(self, argv: Sequence[str]) -> int:
    """Main driver.

    Args:
      argv: Command line args.

    Returns:
      The process exit code.
    """
    if flags.FLAGS['debug'].value:
      self._SetUpLogging()

    command = self._ParseArgs(argv)
    if not command:
      return EXIT_USAGE
    if command == 'help':
      print(_USAGE())
      return EXIT_OK

    return self._RunCommand(command)

  def _ParseArgs(self, argv: Sequence[str]) -> Optional[str]:
    """Minor arg parsing and validation.

    Args:
      argv: Args from command line

    Returns:
      None if the command line is invalid, otherwise the command.
    """
    argv = argv[1:]  # Remove the binary path from argv, we don't need it

    if len(argv) != 1 or argv[0] not in _COMMANDS:
      print(f'Unrecognised command\n{_USAGE()}')
      return None

    if flags.FLAGS['workers'].value < 1:
      print(f'--{flags.FLAGS["workers"].name} must be >= 1.')
      return None

    return argv[0]

  def _SetUpLogging(self) -> None:
    """Sets up logging if requested."""
    filename = os.path.join(
        tempfile.gettempdir(),
        f'qupass_{datetime.datetime.now().strftime("%Y%m%dT%H%M%S")}.log')

    logger.setLevel(logging.DEBUG)
    logger.propagate = False
    fh = logging.logging.FileHandler(filename)

    fh.setFormatter(logging.logging.Formatter(
        fmt=(
            '%(asctime)s.%(msecs)03d - %(threadName)s - %(module)s.%(funcName)s'
            ':%(lineno)d - %(message)s'),
        datefmt='%Y-%m-%dT%H:%M:%S'))
    logger.addHandler(fh)

    print(f'Logging to {filename}')

    logger.debug('Args: %s', ' '.join(sys.argv))
    for name in _LOGGED_FLAGS:
      logger.debug('%s flag: %s', name, flags.FLAGS[name].value)

  def _RunCommand(self, command: str) -> int:
    """Runs a command, mapping failures to exit codes.

    Args:
      command: The qupass command to run.

    Returns:
      The process exit code.
    """
    try:
      if command == 'demo':
        return self._RunDemo()
      if command == 'attack':
        return self._RunAttack()
      if command == 'sweep':
        return self._RunSweep()
      if command == 'tradeoff':
        return self._RunTradeoff()
      return self._RunNoise()
    except (errors.ConfigError, errors.InvalidParameterError) as error:
      logger.debug('Invalid configuration', exc_info=True)
      print(f'{error}\n{_USAGE()}')
      return EXIT_USAGE
    except OSError as error:
      logger.error('I/O error', exc_info=True)
      print(f'I/O error: {error}')
      return EXIT_FAILURE
    except Exception as error:
      logger.error('Unknown error encountered', exc_info=True)
      raise error

  def _FlagOverrides(self) -> dict[str, dict[str, Any]]:
    """Returns {section: {key: value}} for flags given on the command line."""
    overrides: dict[str, dict[str, Any]] = {}
    for name, (section, key) in _FLAG_KEYS.items():
      if not flags.FLAGS[name].using_default_value:
        overrides.setdefault(section, {})[key] = flags.FLAGS[name].value
    return overrides

  def _LoadConfig(self) -> config.ScenarioConfig:
    """Layers --scenario, --config and explicit flags into a config."""
    file_overrides = None
    if flags.FLAGS['config'].value:
      file_overrides = config.LoadScenarioFile(flags.FLAGS['config'].value)
    return config.BuildConfig(flags.FLAGS['scenario'].value or None,
                              file_overrides, self._FlagOverrides())

  def _Seed(self, scenario_config: config.ScenarioConfig) -> int:
    flag = flags.FLAGS['seed']
    return config.ResolveSeed(
        None if flag.using_default_value else flag.value, scenario_config)

  def _Trials(self, default: int) -> int:
    trials = flags.FLAGS['trials'].value
    return default if trials is None else trials

  def _Emit(self, text: str) -> None:
    """Writes CSV text to --out, or prints it."""
    path = flags.FLAGS['out'].value
    if not path:
      print(text, end='')
      return
    with open(path, 'w', encoding='utf-8', newline='') as f:
      f.write(text)
    print(f'Wrote {path}')

  def _RunDemo(self) -> int:
    """Sets up an account and runs honest logins against it."""
    scenario_config = self._LoadConfig()
    rounds = flags.FLAGS['rounds'].value
    if rounds < 1:
      raise errors.InvalidParameterError(f'rounds must be >= 1, got {rounds}')
    seed = self._Seed(scenario_config)
    rng = qcore.Rng(seed)
    n_qubits = scenario_config.password.n_qubits
    channel = scenario_config.Channel()
    policy = scenario_config.Policy()

    record, password = protocol.SetupAccount(n_qubits, rng.Fork('setup'))
    issued = record.descriptions
    results = []
    for number in range(rounds):
      result = protocol.Login(record, password, channel, policy,
                              rng.Fork(f'round/{number}'))
      results.append(result)
      record, password = result.post_bob, result.post_alice
    min_fidelity = min(
        qcore.Fidelity(description.State(), qubit)
        for description, qubit in zip(issued, password.qubits))

    for line in formatters.FormatDemo(n_qubits, seed, results, min_fidelity):
      print(line)
    return EXIT_OK if all(r.accepted for r in results) else EXIT_FAILURE

  def _RunAttack(self) -> int:
    """Runs the configured attack and reports on it."""
    scenario_config = self._LoadConfig()
    seed = self._Seed(scenario_config)
    scenario = scenario_config.Scenario()
    channel = scenario_config.Channel()
    policy = scenario_config.Policy()

    summary = experiments.SummarizeAttack(
        scenario, qcore.Rng(seed).Fork('attack'), channel, policy,
        flags.FLAGS['workers'].value)
    cloner = None
    if scenario.strategy in adversary.CLONERS:
      cloner = adversary.CloneReference(scenario.strategy, scenario.asymmetry)

    lines = formatters.FormatAttack(
        scenario, channel, policy, summary, seed,
        experiments.AnalyticAttackSuccess(scenario, channel, policy), cloner)
    if scenario.strategy in adversary.CLONERS:
      lines += formatters.FormatDetectionClaim(
          experiments.DetectionClaimCheck())
    for line in lines:
      print(line)
    if flags.FLAGS['out'].value:
      self._Emit(formatters.AttackCsv(scenario, summary))
    return EXIT_OK

  def _RunSweep(self) -> int:
    """Sweeps password length and writes the table as CSV."""
    metric = utils.CheckChoice('metric', flags.FLAGS['metric'].value,
                               adversary.METRICS)
    seed = self._Seed(self._SeedConfig())
    table = experiments.SweepPasswordLength(
        flags.FLAGS['min'].value, flags.FLAGS['max'].value,
        self._Trials(experiments.DEFAULT_TRIALS), metric, seed,
        flags.FLAGS['workers'].value)

    lines = formatters.FormatSweep(table)
    for target in DETECTION_TARGETS:
      lines.append(
          f'Shortest password for {utils.FormatProbability(target)} '
          f'detection ({metric}): '
          f'{experiments.MinLengthForDetection(target, metric)} qubits')
    lines += formatters.FormatDetectionClaim(experiments.DetectionClaimCheck())
    if flags.FLAGS['out'].value:
      for line in lines:
        print(line)
    self._Emit(formatters.SweepCsv(table))
    return EXIT_OK

  def _RunNoise(self) -> int:
    """Sweeps noise and thresholds and writes the grid as CSV."""
    scenario_config = self._LoadConfig()
    seed = self._Seed(scenario_config)
    rows = experiments.NoiseTradeoffSweep(
        utils.CheckChoice('kind', flags.FLAGS['kind'].value,
                          protocol.NOISE_KINDS),
        utils.ParseFloatList(flags.FLAGS['levels'].value),
        utils.ParseFloatList(flags.FLAGS['thresholds'].value),
        scenario_config.password.n_qubits,
        self._Trials(NOISE_TRIALS),
        seed,
        flags.FLAGS['storage-strength'].value,
        flags.FLAGS['workers'].value)
    if flags.FLAGS['out'].value:
      for line in formatters.FormatNoise(rows):
        print(line)
    self._Emit(formatters.NoiseCsv(rows))
    return EXIT_OK

  def _RunTradeoff(self) -> int:
    """Tabulates the asymmetric cloner's fidelities and writes them as CSV."""
    points = adversary.AsymmetricTradeoff(flags.FLAGS['points'].value)
    if flags.FLAGS['out'].value:
      for line in formatters.FormatTradeoff(points):
        print(line)
    self._Emit(formatters.TradeoffCsv(points))
    return EXIT_OK

  def _SeedConfig(self) -> config.ScenarioConfig:
    """Returns the scenario file's config, for its [run] seed."""
    if not flags.FLAGS['config'].value:
      return config.ScenarioConfig()
    return config.BuildConfig(
        file_overrides=config.LoadScenarioFile(flags.FLAGS['config'].value))


def main():
  """Main."""
  Main.DefineFlags()
  m = Main()
  app.run(m.main)
