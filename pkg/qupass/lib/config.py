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
"""Scenario configuration: presets, INI scenario files and flag overrides.

Values are layered lowest first: dataclass defaults, a named preset, a
scenario file, then flags given on the command line.
"""

import configparser
import dataclasses
import os
import re
from typing import Any, Callable, Mapping, Optional

from absl import logging

from qupass.lib import adversary
from qupass.lib import errors
from qupass.lib import protocol
from qupass.lib import utils


logger = logging.logging.getLogger('qupass')

SEED_ENVIRONMENT_VARIABLE = 'QUPASS_SEED'
DEFAULT_QUBITS = 13
DEFAULT_TRIALS = 10_000

CD_KEY = 'cd_key'
CREDIT_CARD = 'credit_card'
ATM = 'atm'

# Overrides = {section: {key: value}}
Overrides = Mapping[str, Mapping[str, Any]]

# Eve steals a game key from a shared station, a card operator handles the
# password in transit, a rigged ATM poses as the login server.
PRESETS: dict[str, Overrides] = {
    CD_KEY: {'attack': {'strike_point': adversary.ALICE_STATION}},
    CREDIT_CARD: {'attack': {'strike_point': adversary.IN_TRANSIT}},
    ATM: {'attack': {'strike_point': adversary.BOB_SERVER}},
}


@dataclasses.dataclass(frozen=True)
class PasswordConfig:
  n_qubits: int = DEFAULT_QUBITS


@dataclasses.dataclass(frozen=True)
class AttackConfig:
  strategy: str = adversary.UQCM_SYMMETRIC
  asymmetry: Optional[float] = None
  strike_point: str = adversary.ALICE_STATION
  metric: str = adversary.FIDELITY_METRIC
  sampled_integrity: bool = False


@dataclasses.dataclass(frozen=True)
class ChannelConfig:
  noise_kind: str = protocol.IDEAL
  noise_strength: float = 0.0
  loss_probability: float = 0.0


@dataclasses.dataclass(frozen=True)
class PolicyConfig:
  mode: str = protocol.STRICT
  threshold_fraction: float = 1.0


@dataclasses.dataclass(frozen=True)
class RunConfig:
  trials: int = DEFAULT_TRIALS
  seed: Optional[int] = None


@dataclasses.dataclass(frozen=True)
class ScenarioConfig:
  """Everything needed to run one attack scenario."""
  password: PasswordConfig = dataclasses.field(default_factory=PasswordConfig)
  attack: AttackConfig = dataclasses.field(default_factory=AttackConfig)
  channel: ChannelConfig = dataclasses.field(default_factory=ChannelConfig)
  policy: PolicyConfig = dataclasses.field(default_factory=PolicyConfig)
  run: RunConfig = dataclasses.field(default_factory=RunConfig)

  def Scenario(self) -> adversary.AttackScenario:
    return adversary.AttackScenario(
        strategy=self.attack.strategy,
        strike_point=self.attack.strike_point,
        n_qubits=self.password.n_qubits,
        trials=self.run.trials,
        metric=self.attack.metric,
        asymmetry=self.attack.asymmetry,
        sampled_integrity=self.attack.sampled_integrity)

  def Channel(self) -> protocol.Channel:
    return protocol.Channel(self.channel.noise_kind,
                            self.channel.noise_strength,
                            self.channel.loss_probability)

  def Policy(self) -> protocol.AcceptancePolicy:
    return protocol.AcceptancePolicy(self.policy.mode,
                                     self.policy.threshold_fraction)

  def Validate(self) -> None:
    """Checks every value against its home module's ranges.

    Raises:
      InvalidParameterError: On the first bad value.
    """
    self.Scenario()
    self.Channel()
    self.Policy()
    if self.run.seed is not None:
      utils.CheckSeed(self.run.seed)


def _AtLeastOne(name: str, value: int) -> int:
  if value < 1:
    raise errors.InvalidParameterError(f'{name} must be >= 1, got {value}')
  return value


def _Choices(choices: frozenset[str]) -> Callable[[str, str], str]:
  return lambda name, value: utils.CheckChoice(name, value, choices)


def _Any(unused_name: str, value: Any) -> Any:
  return value


# section -> key -> (parsed type, range check)
_SCHEMA: dict[str, dict[str, tuple[type[Any], Callable[[str, Any], Any]]]] = {
    'password': {
        'n_qubits': (int, _AtLeastOne),
    },
    'attack': {
        'strategy': (str, _Choices(adversary.STRATEGIES)),
        'asymmetry': (float, utils.CheckProbability),
        'strike_point': (str, _Choices(adversary.STRIKE_POINTS)),
        'metric': (str, _Choices(adversary.METRICS)),
        'sampled_integrity': (bool, _Any),
    },
    'channel': {
        'noise_kind': (str, _Choices(protocol.NOISE_KINDS)),
        'noise_strength': (float, utils.CheckProbability),
        'loss_probability': (float, utils.CheckProbability),
    },
    'policy': {
        'mode': (str, _Choices(protocol.POLICY_MODES)),
        'threshold_fraction': (float, utils.CheckProbability),
    },
    'run': {
        'trials': (int, _AtLeastOne),
        'seed': (int, lambda unused_name, value: utils.CheckSeed(value)),
    },
}

_SECTION_LINE = re.compile(r'^\s*\[([^\]]+)\]')
_KEY_LINE = re.compile(r'^\s*([^=:\s]+)\s*[=:]')


def _LineNumbers(text: str) -> dict[tuple[str, str], int]:
  """Maps (section, key) and (section, '') to 1-based line numbers."""
  lines = {}
  section = ''
  for number, line in enumerate(text.splitlines(), start=1):
    if line.lstrip().startswith(('#', ';')):
      continue
    match = _SECTION_LINE.match(line)
    if match:
      section = match.group(1).strip()
      lines.setdefault((section, ''), number)
      continue
    match = _KEY_LINE.match(line)
    if match:
      lines.setdefault((section, match.group(1).lower()), number)
  return lines


def _ParseValue(parser: configparser.ConfigParser, section: str,
                key: str) -> Any:
  value_type = _SCHEMA[section][key][0]
  if value_type is bool:
    return parser.getboolean(section, key)
  if value_type is int:
    return parser.getint(section, key)
  if value_type is float:
    return parser.getfloat(section, key)
  return parser.get(section, key).strip()


def ParseScenarioText(text: str) -> dict[str, dict[str, Any]]:
  """Parses scenario INI text into checked overrides.

  Args:
    text: The file contents.

  Returns:
    {section: {key: value}} for every key present.

  Raises:
    ConfigError: On syntax errors, unknown sections or keys, unparsable or
      out of range values. The error names the key and its line.
  """
  parser = configparser.ConfigParser(interpolation=None,
                                     default_section='__no_defaults__')
  try:
    parser.read_string(text)
  except configparser.Error as error:
    raise errors.ConfigError(
        f'Malformed scenario file: {error}',
        line=getattr(error, 'lineno', None)) from error
  lines = _LineNumbers(text)

  overrides: dict[str, dict[str, Any]] = {}
  for section in parser.sections():
    if section not in _SCHEMA:
      raise errors.ConfigError(f'Unknown section [{section}]', key=section,
                               line=lines.get((section, '')))
    overrides[section] = {}
    for key in parser.options(section):
      line = lines.get((section, key))
      if key not in _SCHEMA[section]:
        raise errors.ConfigError(f'Unknown key in [{section}]', key=key,
                                 line=line)
      try:
        value = _ParseValue(parser, section, key)
        _SCHEMA[section][key][1](key, value)
      except (ValueError, errors.InvalidParameterError) as error:
        raise errors.ConfigError(str(error), key=key, line=line) from error
      overrides[section][key] = value
  return overrides


def LoadScenarioFile(path: str) -> dict[str, dict[str, Any]]:
  """Reads and parses a scenario file.

  Raises:
    OSError: If the file cannot be read.
    ConfigError: If it is malformed.
  """
  with open(path, 'r', encoding='utf-8') as f:
    text = f.read()
  logger.debug('Loaded scenario file %s', path)
  return ParseScenarioText(text)


def Merge(config: ScenarioConfig, overrides: Overrides) -> ScenarioConfig:
  """Returns config with overrides applied on top.

  Raises:
    ConfigError: If overrides name an unknown section or key.
  """
  sections = {}
  for section, values in overrides.items():
    if section not in _SCHEMA:
      raise errors.ConfigError(f'Unknown section [{section}]', key=section)
    unknown = set(values) - set(_SCHEMA[section])
    if unknown:
      raise errors.ConfigError(f'Unknown key in [{section}]',
                               key=sorted(unknown)[0])
    sections[section] = dataclasses.replace(getattr(config, section), **values)
  return dataclasses.replace(config, **sections)


def BuildConfig(preset: Optional[str] = None,
                file_overrides: Optional[Overrides] = None,
                flag_overrides: Optional[Overrides] = None) -> ScenarioConfig:
  """Layers defaults, preset, file and flags, then validates the result.

  Raises:
    ConfigError: On an unknown preset, section or key.
    InvalidParameterError: If the merged values are inconsistent.
  """
  config = ScenarioConfig()
  if preset:
    if preset not in PRESETS:
      raise errors.ConfigError(
          f'Unknown scenario preset, expected one of {", ".join(PRESETS)}',
          key=preset)
    config = Merge(config, PRESETS[preset])
  config = Merge(config, file_overrides or {})
  config = Merge(config, flag_overrides or {})
  config.Validate()
  return config


def ResolveSeed(flag_seed: Optional[int], config: ScenarioConfig,
                environ: Optional[Mapping[str, str]] = None) -> int:
  """Picks the seed: flag, then file, then QUPASS_SEED, then 0.

  Raises:
    InvalidParameterError: If the chosen seed is not a 64-bit unsigned int.
  """
  environ = os.environ if environ is None else environ
  if flag_seed is not None:
    return utils.CheckSeed(flag_seed)
  if config.run.seed is not None:
    return utils.CheckSeed(config.run.seed)
  value = environ.get(SEED_ENVIRONMENT_VARIABLE, '').strip()
  if value:
    try:
      return utils.CheckSeed(int(value))
    except ValueError as error:
      raise errors.InvalidParameterError(
          f'{SEED_ENVIRONMENT_VARIABLE} is not an integer: "{value}"'
      ) from error
  return 0
