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
"""Qupass utility methods and constants."""

from typing import Sequence

from qupass.lib import errors


MAX_SEED = 2**64
SIGNIFICANT_DIGITS = 6


def FormatProbability(p: float) -> str:
  """Formats a probability with the fixed number of significant digits.

  Args:
    p: The probability to format.

  Returns:
    The probability as a string, eg '0.694444'.
  """
  return f'{p:.{SIGNIFICANT_DIGITS}g}'


def ParseFloatList(value: str) -> list[float]:
  """Parses a comma separated list of floats, eg '0,0.05,0.1'.

  Args:
    value: The comma separated string.

  Returns:
    The parsed floats, in order.

  Raises:
    InvalidParameterError: If any item is not a float or the list is empty.
  """
  items = [item.strip() for item in value.split(',') if item.strip()]
  if not items:
    raise errors.InvalidParameterError(f'Empty list: "{value}"')
  try:
    return [float(item) for item in items]
  except ValueError as error:
    raise errors.InvalidParameterError(
        f'Could not parse "{value}" as a list of numbers') from error


def CheckProbability(name: str, value: float) -> float:
  """Checks that value lies in [0, 1].

  Raises:
    InvalidParameterError: If it does not.
  """
  if not 0.0 <= value <= 1.0:
    raise errors.InvalidParameterError(f'{name} must be in [0, 1], got {value}')
  return value


def CheckSeed(seed: int) -> int:
  """Checks that seed is a 64-bit unsigned value.

  Raises:
    InvalidParameterError: If it is not.
  """
  if not 0 <= seed < MAX_SEED:
    raise errors.InvalidParameterError(
        f'seed must be in [0, 2^64), got {seed}')
  return seed


def CheckChoice(name: str, value: str, choices: Sequence[str]) -> str:
  """Checks that value is one of choices.

  Raises:
    InvalidParameterError: If it is not.
  """
  if value not in choices:
    raise errors.InvalidParameterError(
        f'{name} must be one of {", ".join(sorted(choices))}, got "{value}"')
  return value
