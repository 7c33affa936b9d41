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
"""Qupass error definitions."""

from typing import Optional


class InvalidStateError(Exception):
  """Raised when a state, operator or gate breaks its physical invariants."""


class DimensionMismatchError(Exception):
  """Raised when qubit indices or register sizes do not line up."""


class LengthMismatchError(Exception):
  """Raised when a submitted password and a record differ in length."""


class InvalidParameterError(Exception):
  """Raised when a numeric parameter is outside its documented range."""


class ConfigError(Exception):
  """Raised when a scenario file is malformed."""

  def __init__(self, message: str, key: str = '', line: Optional[int] = None):
    location = f' (key "{key}", line {line})' if line else (
        f' (key "{key}")' if key else '')
    super().__init__(f'{message}{location}')
    self.key = key
    self.line = line
