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
"""Unit tests for utils."""

# pylint: disable=wrong-import-order,ungrouped-imports
from absl.testing import absltest
from absl.testing import parameterized
from qupass.lib import errors
from qupass.lib import utils


class UtilsTest(parameterized.TestCase):
  """Unit tests for the utils module."""

  @parameterized.named_parameters(
      ('headline', 25 / 36, '0.694444'),
      ('one', 1.0, '1'),
      ('zero', 0.0, '0'),
      ('third', 1 / 3, '0.333333'),
  )
  def test_FormatProbability(self, value, expected):
    """Tests probabilities print with six significant digits."""
    self.assertEqual(utils.FormatProbability(value), expected)

  @parameterized.named_parameters(
      ('plain', '0,0.05,0.1', [0.0, 0.05, 0.1]),
      ('spaces', ' 0.5 , 1 ', [0.5, 1.0]),
      ('trailing_comma', '0.2,', [0.2]),
  )
  def test_ParseFloatList(self, value, expected):
    """Tests parsing comma separated lists."""
    self.assertEqual(utils.ParseFloatList(value), expected)

  @parameterized.named_parameters(
      ('empty', ''),
      ('commas', ' , '),
      ('words', '0.1,lots'),
  )
  def test_ParseFloatListInvalid(self, value):
    """Tests bad lists are rejected."""
    with self.assertRaises(errors.InvalidParameterError):
      utils.ParseFloatList(value)

  def test_Checks(self):
    """Tests the range checks return their input or raise."""
    self.assertEqual(utils.CheckProbability('p', 0.25), 0.25)
    self.assertEqual(utils.CheckSeed(2**64 - 1), 2**64 - 1)
    self.assertEqual(utils.CheckChoice('kind', 'a', ('a', 'b')), 'a')
    with self.assertRaises(errors.InvalidParameterError):
      utils.CheckProbability('p', -0.1)
    with self.assertRaises(errors.InvalidParameterError):
      utils.CheckSeed(2**64)
    with self.assertRaisesRegex(errors.InvalidParameterError, 'a, b'):
      utils.CheckChoice('kind', 'c', ('b', 'a'))


if __name__ == '__main__':
  absltest.main()
