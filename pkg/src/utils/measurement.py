# Copyright 2026 The bellsim Authors.
# See LICENSE file for licensing details.

"""Mapping a d = 2^n resonator state onto n qubits.

Qubits are numbered 1..n, qubit 1 being the most significant bit of the
register value. A composite basis state |x_1 ... x_n> (x) |y> has index
X * 2^n + y, where X is the register value.

The qubit-resonator phase gate acts as |x>|y> -> exp(-i theta x y)|x>|y>
and the qubit-qubit phase gate as |x_a>|x_b> -> exp(-i theta x_a x_b).
Stage k works on qubit q = n - k + 1 with theta = pi / 2^(k-1); the trailing
phases picked up from the already decoded qubits i > q are removed with
theta = -pi / 2^(i-q). With these signs the circuit output is exactly
sum_y c_y |bits(y)> (x) |y>, with no leftover global phase.
"""

import enum
import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from utils import errors
from utils import linalg

logger = logging.getLogger(__name__)

MAX_QUBITS = 5
_HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


class GateKind(enum.Enum):
    QUBIT_HADAMARD = 'qubit-hadamard'
    QUBIT_RESONATOR_PHASE = 'qubit-resonator-phase'
    QUBIT_QUBIT_PHASE = 'qubit-qubit-phase'


@dataclass(frozen=True)
class GateDescriptor:
    kind: GateKind
    targets: Tuple[int, ...]
    angle: float = 0.0

    def __str__(self):
        label = ','.join(str(t) for t in self.targets)
        if self.kind is GateKind.QUBIT_HADAMARD:
            return f'{self.kind.value}[{label}]'
        return f'{self.kind.value}[{label}]({self.angle:+.6f})'


@dataclass(frozen=True, eq=False)
class CompositeState:
    """n-qubit register (x) 2^n-level resonator."""

    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        _check_qubits(self.n)
        amplitudes = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        dim = 2 ** self.n
        if amplitudes.shape[0] != dim * dim:
            raise errors.CircuitError(
                f'{self.n} qubits need {dim * dim} amplitudes, got '
                f'{amplitudes.shape[0]}')
        object.__setattr__(self, 'amplitudes', amplitudes)

    @property
    def resonator_dim(self) -> int:
        return 2 ** self.n

    def tensor(self) -> np.ndarray:
        """Amplitudes with one axis per qubit and a last resonator axis."""
        return self.amplitudes.reshape((2,) * self.n + (self.resonator_dim,))

    @classmethod
    def from_tensor(cls, n: int, tensor: np.ndarray) -> 'CompositeState':
        return cls(n, tensor.reshape(-1))

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def _check_qubits(n: int) -> None:
    if int(n) != n or not 1 <= n <= MAX_QUBITS:
        raise errors.CircuitError(
            f'Qubit count must be between 1 and {MAX_QUBITS}, got {n}')


def _qubits_for(dim: int) -> int:
    n = int(dim).bit_length() - 1
    if dim < 2 or 2 ** n != dim:
        raise errors.CircuitError(
            f'Resonator dimension must be a power of two >= 2, got {dim}')
    _check_qubits(n)
    return n


def build_circuit(n: int) -> List[GateDescriptor]:
    """Ordered gate list for the n-qubit mapping circuit.

    :raises: CircuitError if n is outside 1..5.
    """
    _check_qubits(n)
    circuit = [GateDescriptor(GateKind.QUBIT_HADAMARD, (q,))
               for q in range(1, n + 1)]
    for k in range(1, n + 1):
        q = n - k + 1
        circuit.append(GateDescriptor(GateKind.QUBIT_RESONATOR_PHASE, (q,),
                                      np.pi / 2 ** (k - 1)))
        for i in range(q + 1, n + 1):
            circuit.append(GateDescriptor(GateKind.QUBIT_QUBIT_PHASE, (q, i),
                                          -np.pi / 2 ** (i - q)))
        circuit.append(GateDescriptor(GateKind.QUBIT_HADAMARD, (q,)))
    logger.debug(f'Built mapping circuit for n={n}: {len(circuit)} gates')
    return circuit


def gate_counts(circuit: Sequence[GateDescriptor]) -> Tuple[int, int, int]:
    """(Hadamards, qubit-resonator gates, qubit-qubit gates)."""
    kinds = [g.kind for g in circuit]
    return (kinds.count(GateKind.QUBIT_HADAMARD),
            kinds.count(GateKind.QUBIT_RESONATOR_PHASE),
            kinds.count(GateKind.QUBIT_QUBIT_PHASE))


def _check_targets(n: int, gate: GateDescriptor) -> None:
    expected = 2 if gate.kind is GateKind.QUBIT_QUBIT_PHASE else 1
    if len(gate.targets) != expected:
        raise errors.CircuitError(
            f'{gate.kind.value} takes {expected} target(s), got '
            f'{gate.targets}')
    for target in gate.targets:
        if int(target) != target or not 1 <= target <= n:
            raise errors.CircuitError(
                f'Target qubit {target} is not in 1..{n}')
    if len(set(gate.targets)) != len(gate.targets):
        raise errors.CircuitError(f'Repeated target in {gate.targets}')


def _broadcast_shape(n: int, axes: Sequence[int],
                     sizes: Sequence[int]) -> List[int]:
    shape = [1] * (n + 1)
    for axis, size in zip(axes, sizes):
        shape[axis] = size
    return shape


def apply_gate(state: CompositeState,
               gate: GateDescriptor) -> CompositeState:
    """Applies one gate to a composite state.

    :raises: CircuitError for an invalid target.
    """
    n = state.n
    _check_targets(n, gate)
    t = state.tensor()
    if gate.kind is GateKind.QUBIT_HADAMARD:
        axis = gate.targets[0] - 1
        t = np.moveaxis(np.tensordot(_HADAMARD, t, axes=([1], [axis])),
                        0, axis)
    elif gate.kind is GateKind.QUBIT_RESONATOR_PHASE:
        axis = gate.targets[0] - 1
        dim = state.resonator_dim
        phase = np.exp(-1j * gate.angle * np.outer(np.arange(2),
                                                   np.arange(dim)))
        t = t * phase.reshape(_broadcast_shape(n, (axis, n), (2, dim)))
    else:
        a, b = (target - 1 for target in gate.targets)
        phase = np.exp(-1j * gate.angle * np.outer(np.arange(2),
                                                   np.arange(2)))
        if a > b:
            a, b, phase = b, a, phase.T
        t = t * phase.reshape(_broadcast_shape(n, (a, b), (2, 2)))
    return CompositeState.from_tensor(n, t)


def initial_state(c: np.ndarray) -> CompositeState:
    """|0 ... 0> (x) sum_y c_y |y>.

    :raises: CircuitError if len(c) is not a power of two.
    """
    c = np.asarray(c, dtype=complex).reshape(-1)
    n = _qubits_for(c.shape[0])
    if not linalg.is_normalized(c, tol=1e-10):
        raise ValueError(f'Resonator state has norm {np.linalg.norm(c)}')
    amplitudes = np.zeros(c.shape[0] ** 2, dtype=complex)
    amplitudes[:c.shape[0]] = c
    return CompositeState(n, amplitudes)


def run_stages(c: np.ndarray) -> List[CompositeState]:
    """State after the initial Hadamards and after each of the n stages."""
    state = initial_state(c)
    circuit = build_circuit(state.n)
    for gate in circuit[:state.n]:
        state = apply_gate(state, gate)
    snapshots = [state]
    for gate in circuit[state.n:]:
        state = apply_gate(state, gate)
        if gate.kind is GateKind.QUBIT_HADAMARD:
            snapshots.append(state)
    return snapshots


def map_resonator_to_qubits(c: np.ndarray) -> CompositeState:
    """Runs the mapping circuit on a unit-norm resonator state.

    :raises: CircuitError if the dimension is not a power of two up to 2^5.
    """
    state = initial_state(c)
    for gate in build_circuit(state.n):
        state = apply_gate(state, gate)
    return state


def expected_mapped_state(c: np.ndarray) -> CompositeState:
    """sum_y c_y |bits(y)> (x) |y>."""
    c = np.asarray(c, dtype=complex).reshape(-1)
    n = _qubits_for(c.shape[0])
    dim = c.shape[0]
    y = np.arange(dim)
    amplitudes = np.zeros(dim * dim, dtype=complex)
    amplitudes[y * dim + y] = c
    return CompositeState(n, amplitudes)


def readout_distribution(state: CompositeState) -> np.ndarray:
    """Probability of each register bitstring, resonator traced out."""
    probs = np.abs(state.amplitudes.reshape(state.resonator_dim, -1)) ** 2
    return probs.sum(axis=1)


def resonator_marginal(state: CompositeState) -> np.ndarray:
    """Reduced resonator density matrix, qubits traced out."""
    m = state.amplitudes.reshape(state.resonator_dim, state.resonator_dim)
    return m.T @ m.conj()


def stage_deviation(state: CompositeState, k: int) -> float:
    """Weight left outside |y_(n-k+1) ... y_n> on the last k qubits.

    Zero after stage k for every resonator component |y>.
    """
    if not 0 <= k <= state.n:
        raise ValueError(f'Stage {k} out of range for n={state.n}')
    dim = state.resonator_dim
    m = state.amplitudes.reshape(dim, dim)
    registers = np.arange(dim)[:, np.newaxis]
    y = np.arange(dim)[np.newaxis, :]
    low = 2 ** k - 1
    wrong = (registers & low) != (y & low)
    return float((np.abs(m[wrong]) ** 2).sum())


def mapping_fidelity(c: np.ndarray) -> float:
    """|<expected|mapped>|, insensitive to a global phase."""
    mapped = map_resonator_to_qubits(c)
    expected = expected_mapped_state(c)
    return linalg.overlap(expected.amplitudes, mapped.amplitudes)


def random_resonator_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    c = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return linalg.normalize(c)
