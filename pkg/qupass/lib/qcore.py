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
"""Exact dense simulation of small qubit registers.

Qubit 0 is the most significant bit of an amplitude index: the basis state
|q0 q1 ... q(n-1)> lives at index sum(q_k * 2**(n - 1 - k)). States, operators
and gates are immutable values. Randomness only ever comes from an Rng passed
in by the caller.
"""

import dataclasses
import hashlib
import math
from typing import Sequence, Union

import numpy as np

from qupass.lib import errors
from qupass.lib import utils


ALGEBRAIC_TOLERANCE = 1e-9
CONSTRUCTION_TOLERANCE = 1e-12
# Born probabilities this close to 0 or 1 are snapped to exactly 0 or 1.
SNAP_TOLERANCE = 1e-12

_EINSUM_LETTERS = 'abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ'


class Rng:
  """A seeded random stream that forks reproducible child streams.

  A child is keyed by (seed, fork path, label) only, so it is the same no
  matter how much of the parent stream has already been consumed.
  """

  def __init__(self, seed: int, path: Sequence[int] = ()):
    """Initialises the stream.

    Args:
      seed: A 64-bit unsigned seed.
      path: The fork path of this stream. Empty for a root stream.
    """
    self._seed = utils.CheckSeed(int(seed))
    self._path = tuple(int(p) for p in path)
    self._generator = np.random.Generator(np.random.PCG64(
        np.random.SeedSequence(entropy=self._seed, spawn_key=self._path)))

  @property
  def seed(self) -> int:
    return self._seed

  @property
  def path(self) -> tuple[int, ...]:
    return self._path

  def Fork(self, label: str) -> 'Rng':
    """Returns the child stream for label."""
    digest = hashlib.blake2b(label.encode('utf-8'), digest_size=4).digest()
    return Rng(self._seed, self._path + (int.from_bytes(digest, 'big'),))

  def Random(self) -> float:
    """Returns a float uniform on [0, 1)."""
    return float(self._generator.random())

  def Uniform(self, low: float, high: float) -> float:
    """Returns a float uniform on [low, high)."""
    return float(self._generator.uniform(low, high))

  def Bernoulli(self, p: float) -> bool:
    """Returns True with probability p."""
    return self.Random() < p

  def Choice(self, n: int) -> int:
    """Returns an integer uniform on [0, n)."""
    return int(self._generator.integers(n))


def _Freeze(array: np.ndarray) -> np.ndarray:
  frozen = np.array(array, dtype=np.complex128)
  frozen.setflags(write=False)
  return frozen


def _QubitCount(dimension: int) -> int:
  n_qubits = int(round(math.log2(dimension))) if dimension > 0 else 0
  if n_qubits < 1 or 2**n_qubits != dimension:
    raise errors.InvalidStateError(
        f'Dimension {dimension} is not a power of two >= 2')
  return n_qubits


@dataclasses.dataclass(frozen=True, eq=False)
class PureState:
  """A normalised state vector on n_qubits qubits."""
  n_qubits: int
  amplitudes: np.ndarray

  def __post_init__(self):
    amplitudes = _Freeze(np.asarray(self.amplitudes).reshape(-1))
    object.__setattr__(self, 'amplitudes', amplitudes)
    if self.n_qubits < 1 or amplitudes.shape != (2**self.n_qubits,):
      raise errors.InvalidStateError(
          f'{amplitudes.shape[0]} amplitudes for {self.n_qubits} qubits')
    if not np.all(np.isfinite(amplitudes)):
      raise errors.InvalidStateError('Non-finite amplitude')
    norm = float(np.vdot(amplitudes, amplitudes).real)
    if abs(norm - 1.0) > ALGEBRAIC_TOLERANCE:
      raise errors.InvalidStateError(f'Squared norm {norm} != 1')

  @classmethod
  def FromAmplitudes(cls, amplitudes: Sequence[complex]) -> 'PureState':
    """Builds a state, inferring the qubit count from the vector length."""
    amplitudes = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
    return cls(_QubitCount(amplitudes.shape[0]), amplitudes)

  def ToDensity(self) -> 'DensityOp':
    """Returns |s><s|."""
    return DensityOp(self.n_qubits,
                     np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclasses.dataclass(frozen=True, eq=False)
class DensityOp:
  """A Hermitian, positive semidefinite, trace one operator on n_qubits."""
  n_qubits: int
  matrix: np.ndarray

  def __post_init__(self):
    matrix = np.asarray(self.matrix, dtype=np.complex128)
    dimension = 2**self.n_qubits if self.n_qubits >= 1 else 0
    if self.n_qubits < 1 or matrix.shape != (dimension, dimension):
      raise errors.InvalidStateError(
          f'Matrix of shape {matrix.shape} for {self.n_qubits} qubits')
    if not np.all(np.isfinite(matrix)):
      raise errors.InvalidStateError('Non-finite matrix entry')
    if np.max(np.abs(matrix - matrix.conj().T)) > ALGEBRAIC_TOLERANCE:
      raise errors.InvalidStateError('Matrix is not Hermitian')
    trace = complex(np.trace(matrix))
    if abs(trace - 1.0) > ALGEBRAIC_TOLERANCE:
      raise errors.InvalidStateError(f'Trace {trace} != 1')
    hermitian = 0.5 * (matrix + matrix.conj().T)
    if np.min(np.linalg.eigvalsh(hermitian)) < -ALGEBRAIC_TOLERANCE:
      raise errors.InvalidStateError('Matrix is not positive semidefinite')
    object.__setattr__(self, 'matrix', _Freeze(hermitian))

  @classmethod
  def FromMatrix(cls, matrix: np.ndarray) -> 'DensityOp':
    """Builds an operator, inferring the qubit count from the matrix shape."""
    matrix = np.asarray(matrix, dtype=np.complex128)
    return cls(_QubitCount(matrix.shape[0]), matrix)

  def ToDensity(self) -> 'DensityOp':
    return self

  def Purity(self) -> float:
    """Returns tr(rho^2)."""
    return float(np.real(np.trace(self.matrix @ self.matrix)))


State = Union[PureState, DensityOp]


@dataclasses.dataclass(frozen=True, eq=False)
class Gate:
  """A unitary acting on 1, 2 or 3 qubits."""
  arity: int
  matrix: np.ndarray
  name: str = ''

  def __post_init__(self):
    matrix = _Freeze(self.matrix)
    object.__setattr__(self, 'matrix', matrix)
    if self.arity not in (1, 2, 3):
      raise errors.InvalidStateError(f'Unsupported gate arity {self.arity}')
    dimension = 2**self.arity
    if matrix.shape != (dimension, dimension):
      raise errors.InvalidStateError(
          f'Gate matrix of shape {matrix.shape} for arity {self.arity}')
    if np.max(np.abs(matrix @ matrix.conj().T - np.eye(dimension))) > (
        ALGEBRAIC_TOLERANCE):
      raise errors.InvalidStateError(f'Gate {self.name} is not unitary')

  def Inverse(self) -> 'Gate':
    """Returns the adjoint gate."""
    return Gate(self.arity, self.matrix.conj().T, f'{self.name}^-1')


_SQRT_HALF = 1.0 / math.sqrt(2.0)

IDENTITY = Gate(1, np.eye(2), 'I')
HADAMARD = Gate(1, _SQRT_HALF * np.array([[1, 1], [1, -1]]), 'H')
PAULI_X = Gate(1, np.array([[0, 1], [1, 0]]), 'X')
PAULI_Y = Gate(1, np.array([[0, -1j], [1j, 0]]), 'Y')
PAULI_Z = Gate(1, np.array([[1, 0], [0, -1]]), 'Z')
SWAP = Gate(2, np.eye(4)[[0, 2, 1, 3]], 'SWAP')
# Control is the first target; |1> on the control swaps the other two.
FREDKIN = Gate(3, np.eye(8)[[0, 1, 2, 3, 4, 6, 5, 7]], 'CSWAP')


def Qubit(c1: complex, c2: complex) -> PureState:
  """Returns c1|0> + c2|1>."""
  return PureState(1, np.array([c1, c2], dtype=np.complex128))


def BasisState(bits: str) -> PureState:
  """Returns the computational basis state for a bit string, eg '010'."""
  if not bits or set(bits) - {'0', '1'}:
    raise errors.InvalidStateError(f'Invalid basis label "{bits}"')
  amplitudes = np.zeros(2**len(bits), dtype=np.complex128)
  amplitudes[int(bits, 2)] = 1.0
  return PureState(len(bits), amplitudes)


def MaximallyMixed(n_qubits: int) -> DensityOp:
  """Returns I / 2**n_qubits."""
  dimension = 2**n_qubits
  return DensityOp(n_qubits, np.eye(dimension) / dimension)


def OrthogonalQubit(state: PureState) -> PureState:
  """Returns the single qubit state orthogonal to state."""
  if state.n_qubits != 1:
    raise errors.DimensionMismatchError('OrthogonalQubit needs one qubit')
  c1, c2 = state.amplitudes
  return Qubit(-np.conj(c2), np.conj(c1))


def HaarRandomQubit(rng: Rng) -> PureState:
  """Draws a single qubit state uniformly from the Bloch sphere.

  cos(theta) is uniform on [-1, 1] and the phase uniform on [0, 2pi); the
  global phase is fixed so the |0> amplitude is real and nonnegative.

  Args:
    rng: The random stream to draw from.

  Returns:
    cos(theta/2)|0> + e^{i lambda} sin(theta/2)|1>.
  """
  theta = math.acos(rng.Uniform(-1.0, 1.0))
  phase = rng.Uniform(0.0, 2.0 * math.pi)
  amplitude = complex(math.cos(phase), math.sin(phase)) * math.sin(theta / 2.0)
  return Qubit(math.cos(theta / 2.0), amplitude)


def _CheckIndex(n_qubits: int, index: int) -> int:
  if not 0 <= index < n_qubits:
    raise errors.DimensionMismatchError(
        f'Qubit index {index} out of range for {n_qubits} qubits')
  return index


def _CheckTargets(n_qubits: int, targets: Sequence[int], arity: int
                  ) -> list[int]:
  targets = [_CheckIndex(n_qubits, t) for t in targets]
  if len(targets) != arity:
    raise errors.DimensionMismatchError(
        f'{len(targets)} targets for a gate of arity {arity}')
  if len(set(targets)) != len(targets):
    raise errors.DimensionMismatchError(f'Repeated targets {targets}')
  return targets


def _ApplyToAxes(tensor: np.ndarray, matrix: np.ndarray,
                 axes: Sequence[int]) -> np.ndarray:
  """Contracts a 2**k x 2**k matrix into k axes of a (2, 2, ...) tensor."""
  k = len(axes)
  operator = matrix.reshape((2,) * (2 * k))
  result = np.tensordot(operator, tensor, axes=(list(range(k, 2 * k)), axes))
  return np.moveaxis(result, list(range(k)), list(axes))


def _ApplyOperator(state: State, matrix: np.ndarray,
                   targets: Sequence[int]) -> np.ndarray:
  """Returns the raw amplitudes or matrix of the operator applied to state."""
  n = state.n_qubits
  if isinstance(state, PureState):
    tensor = state.amplitudes.reshape((2,) * n)
    return _ApplyToAxes(tensor, matrix, targets).reshape(-1)
  tensor = state.matrix.reshape((2,) * (2 * n))
  tensor = _ApplyToAxes(tensor, matrix, targets)
  tensor = _ApplyToAxes(tensor, matrix.conj(), [t + n for t in targets])
  return tensor.reshape(2**n, 2**n)


def ApplyGate(state: State, gate: Gate, targets: Sequence[int]) -> State:
  """Applies gate to the target qubits, in order, of state.

  Args:
    state: A pure state or density operator.
    gate: The gate to apply.
    targets: Qubit indices; targets[0] is the gate's most significant qubit.

  Returns:
    U|s> for a pure state, U rho U^dagger for a density operator.

  Raises:
    DimensionMismatchError: For out of range, repeated or miscounted targets.
  """
  targets = _CheckTargets(state.n_qubits, targets, gate.arity)
  result = _ApplyOperator(state, gate.matrix, targets)
  if isinstance(state, PureState):
    return PureState(state.n_qubits, result)
  return DensityOp(state.n_qubits, result)


def ApplyChannel(state: State, kraus_ops: Sequence[np.ndarray],
                 target: int) -> DensityOp:
  """Applies a single qubit CPTP map, given by Kraus operators, to one qubit.

  Raises:
    InvalidStateError: If the Kraus operators are not trace preserving.
    DimensionMismatchError: If target is out of range.
  """
  _CheckIndex(state.n_qubits, target)
  kraus_ops = [np.asarray(k, dtype=np.complex128) for k in kraus_ops]
  completeness = sum(k.conj().T @ k for k in kraus_ops)
  if np.max(np.abs(completeness - np.eye(2))) > ALGEBRAIC_TOLERANCE:
    raise errors.InvalidStateError('Kraus operators are not trace preserving')
  rho = state.ToDensity()
  matrix = sum(_ApplyOperator(rho, k, [target]) for k in kraus_ops)
  return DensityOp(state.n_qubits, matrix)


def _Snap(p: float) -> float:
  if p < SNAP_TOLERANCE:
    return 0.0
  if p > 1.0 - SNAP_TOLERANCE:
    return 1.0
  return p


def _BitMask(n_qubits: int, index: int, bit: int) -> np.ndarray:
  return ((np.arange(2**n_qubits) >> (n_qubits - 1 - index)) & 1) == bit


def MeasureProbabilities(state: State, index: int) -> tuple[float, float]:
  """Returns the exact Born probabilities (p0, p1) for measuring one qubit.

  Probabilities within SNAP_TOLERANCE of 0 or 1 are returned as exactly 0 or 1.

  Raises:
    DimensionMismatchError: If index is out of range.
  """
  _CheckIndex(state.n_qubits, index)
  if isinstance(state, PureState):
    weights = np.abs(state.amplitudes)**2
  else:
    weights = np.real(np.diag(state.matrix))
  weights = np.clip(weights, 0.0, None)
  p0 = float(np.sum(weights[_BitMask(state.n_qubits, index, 0)]))
  p0 = _Snap(p0 / float(np.sum(weights)))
  return p0, 1.0 - p0


def _Project(state: State, index: int, outcome: int) -> State:
  mask = _BitMask(state.n_qubits, index, outcome)
  if isinstance(state, PureState):
    amplitudes = np.where(mask, state.amplitudes, 0.0)
    return PureState(state.n_qubits,
                     amplitudes / np.linalg.norm(amplitudes))
  matrix = state.matrix * np.outer(mask, mask)
  return DensityOp(state.n_qubits, matrix / np.real(np.trace(matrix)))


def MeasureQubit(state: State, index: int, rng: Rng
                 ) -> tuple[int, State, float]:
  """Measures one qubit in the computational basis.

  A branch of zero probability is never selected.

  Args:
    state: The state to measure.
    index: The qubit to measure.
    rng: The random stream to sample the outcome from.

  Returns:
    (outcome, post measurement state, Born probability of the outcome).
  """
  p0, p1 = MeasureProbabilities(state, index)
  if p1 == 0.0:
    outcome = 0
  elif p0 == 0.0:
    outcome = 1
  else:
    outcome = 0 if rng.Random() < p0 else 1
  return outcome, _Project(state, index, outcome), (p0, p1)[outcome]


def Tensor(a: State, b: State) -> State:
  """Returns a (x) b; a takes the lower qubit indices.

  Two pure states give a pure state. Otherwise both operands are promoted to
  density operators.
  """
  n_qubits = a.n_qubits + b.n_qubits
  if isinstance(a, PureState) and isinstance(b, PureState):
    return PureState(n_qubits, np.kron(a.amplitudes, b.amplitudes))
  return DensityOp(n_qubits, np.kron(a.ToDensity().matrix,
                                     b.ToDensity().matrix))


def PartialTrace(rho: State, keep: Sequence[int]) -> DensityOp:
  """Traces out every qubit not in keep.

  Args:
    rho: The state to reduce. Pure states are promoted.
    keep: The qubits to keep, in the order they appear in the result.

  Returns:
    The reduced density operator.

  Raises:
    DimensionMismatchError: For an empty, repeated or out of range keep list.
  """
  if not keep:
    raise errors.DimensionMismatchError('Empty keep list')
  n = rho.n_qubits
  keep = _CheckTargets(n, keep, len(keep))
  tensor = rho.ToDensity().matrix.reshape((2,) * (2 * n))
  rows = _EINSUM_LETTERS[:n]
  cols = ''.join(_EINSUM_LETTERS[n + q] if q in keep else rows[q]
                 for q in range(n))
  out = ''.join(rows[q] for q in keep) + ''.join(cols[q] for q in keep)
  reduced = np.einsum(f'{rows}{cols}->{out}', tensor)
  dimension = 2**len(keep)
  return DensityOp(len(keep), reduced.reshape(dimension, dimension))


def _PsdSqrt(matrix: np.ndarray) -> np.ndarray:
  eigenvalues, eigenvectors = np.linalg.eigh(matrix)
  roots = np.sqrt(np.clip(eigenvalues, 0.0, None))
  return (eigenvectors * roots) @ eigenvectors.conj().T


def Fidelity(a: State, b: State) -> float:
  """Returns the fidelity between two states on the same number of qubits.

  |<a|b>|^2 for two pure states, <a|rho|a> for a pure and a mixed state, and
  the Uhlmann fidelity (tr sqrt(sqrt(a) b sqrt(a)))^2 for two mixed states.

  Raises:
    DimensionMismatchError: If the qubit counts differ.
  """
  if a.n_qubits != b.n_qubits:
    raise errors.DimensionMismatchError(
        f'Fidelity between {a.n_qubits} and {b.n_qubits} qubit states')
  if isinstance(a, PureState) and isinstance(b, PureState):
    value = abs(np.vdot(a.amplitudes, b.amplitudes))**2
  elif isinstance(a, PureState):
    value = np.real(np.vdot(a.amplitudes, b.matrix @ a.amplitudes))
  elif isinstance(b, PureState):
    value = np.real(np.vdot(b.amplitudes, a.matrix @ b.amplitudes))
  else:
    root = _PsdSqrt(a.matrix)
    inner = root @ b.matrix @ root
    eigenvalues = np.linalg.eigvalsh(0.5 * (inner + inner.conj().T))
    value = np.sum(np.sqrt(np.clip(eigenvalues, 0.0, None)))**2
  return float(np.clip(value, 0.0, 1.0))


def MaxEntryDifference(a: State, b: State) -> float:
  """Returns the largest entrywise difference between two density matrices."""
  return float(np.max(np.abs(a.ToDensity().matrix - b.ToDensity().matrix)))


