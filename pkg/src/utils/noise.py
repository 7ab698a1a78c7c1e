# Copyright 2026 The bellsim Authors.
# See LICENSE file for licensing details.

"""Trace-preserving noise maps applied between preparation and rotation."""

import enum
import logging
from dataclasses import dataclass
from typing import List, Union

import numpy as np

from utils import gates

logger = logging.getLogger(__name__)


class NoiseKind(enum.Enum):
    DEPOLARIZING = 'depolarizing'
    DEPHASING = 'dephasing'
    AMPLITUDE_DAMPING = 'amplitude-damping'


class Iterations(enum.Enum):
    """Named iteration policies; an int is an explicit count."""

    SINGLE = 'single'
    LINEAR = 'linear'


IterationPolicy = Union[Iterations, int]


def parse_iterations(value: Union[str, int]) -> IterationPolicy:
    """Parses 'single', 'linear' or a non-negative count.

    :raises: ValueError for anything else.
    """
    if isinstance(value, Iterations):
        return value
    text = str(value).strip().lower()
    for policy in Iterations:
        if text == policy.value:
            return policy
    try:
        count = int(text)
    except ValueError:
        raise ValueError(
            f'iterations must be single, linear or a count, not {value!r}')
    if count < 0:
        raise ValueError(f'iteration count must be >= 0, got {count}')
    return count


def policy_label(policy: IterationPolicy) -> str:
    if isinstance(policy, Iterations):
        return policy.value
    return str(policy)


@dataclass(frozen=True)
class NoiseSpec:
    """Channel kind, strength p and iteration policy.

    p = 1 is the noiseless channel for every kind. `substeps` > 1 splits each
    amplitude-damping application into that many weaker ones.
    """

    kind: NoiseKind
    p: float
    iterations: IterationPolicy = Iterations.SINGLE
    substeps: int = 1

    def __post_init__(self):
        object.__setattr__(self, 'kind', NoiseKind(self.kind))
        object.__setattr__(self, 'iterations',
                           parse_iterations(self.iterations))
        _check_probability(self.p)
        if self.substeps < 1:
            raise ValueError(f'substeps must be >= 1, got {self.substeps}')

    def applications(self, d: int) -> int:
        """Number of channel applications N for dimension d."""
        if self.iterations is Iterations.SINGLE:
            return 1
        if self.iterations is Iterations.LINEAR:
            return d
        return self.iterations

    @property
    def policy(self) -> str:
        return policy_label(self.iterations)


def _check_probability(p: float) -> None:
    if not 0 <= p <= 1:
        raise ValueError(f'Noise probability p must be in [0, 1], got {p}')


def _dimension(rho: np.ndarray) -> int:
    d = int(round(np.sqrt(rho.shape[0])))
    if d * d != rho.shape[0] or rho.shape[0] != rho.shape[1]:
        raise ValueError(
            f'Expected a bipartite d^2 x d^2 matrix, got {rho.shape}')
    return d


def depolarize(rho: np.ndarray, p: float) -> np.ndarray:
    """rho -> p rho + (1 - p) I / d^2 on the joint space."""
    _check_probability(p)
    dim = rho.shape[0]
    return p * rho + (1 - p) * np.eye(dim) / dim


def dephase(rho: np.ndarray, p: float) -> np.ndarray:
    """Scales every off-diagonal entry by p; populations are untouched."""
    _check_probability(p)
    out = p * rho
    np.fill_diagonal(out, np.diag(rho))
    return out


def amplitude_damping_kraus(d: int, p: float) -> List[np.ndarray]:
    """Single-qudit Kraus pair E0, E1 where level j survives with p^j.

    E0 = sum_j sqrt(p^j)|j><j| and E1 = sum_{j>=1} sqrt(1 - p^j)|j-1><j|.
    """
    gates.check_dimension(d)
    _check_probability(p)
    d = int(d)
    survival = np.power(float(p), np.arange(d))
    e0 = np.diag(np.sqrt(survival)).astype(complex)
    e1 = np.zeros((d, d), dtype=complex)
    j = np.arange(1, d)
    e1[j - 1, j] = np.sqrt(1 - survival[1:])
    return [e0, e1]


def kraus_completeness(kraus: List[np.ndarray]) -> np.ndarray:
    """sum_m E_m^dagger E_m."""
    return sum(e.conj().T @ e for e in kraus)


def _apply_local_kraus(rho: np.ndarray, kraus: List[np.ndarray],
                       d: int) -> np.ndarray:
    # rho as a tensor t[a, b, a', b'] with Alice on a/a' and Bob on b/b'.
    t = rho.reshape(d, d, d, d)
    bob = sum(np.einsum('xy,aycz,wz->axcw', e, t, e.conj()) for e in kraus)
    both = sum(np.einsum('xy,ybzc,wz->xbwc', e, bob, e.conj())
               for e in kraus)
    return both.reshape(d * d, d * d)


def amplitude_damp(rho: np.ndarray, p: float) -> np.ndarray:
    """Applies sum_{l,m} (E_l x E_m) rho (E_l x E_m)^dagger.

    The product map is applied one party at a time, which is the same sum
    without building the d^2 x d^2 Kraus operators.
    """
    _check_probability(p)
    d = _dimension(rho)
    return _apply_local_kraus(rho, amplitude_damping_kraus(d, p), d)


def amplitude_damp_continuous(rho: np.ndarray, p: float,
                              substeps: int) -> np.ndarray:
    """Splits one damping step into `substeps` steps of p^(1/substeps).

    :raises: ValueError for substeps < 1, or p = 0 with substeps > 1.
    """
    _check_probability(p)
    if substeps < 1:
        raise ValueError(f'substeps must be >= 1, got {substeps}')
    if substeps == 1:
        return amplitude_damp(rho, p)
    if p == 0:
        raise ValueError('Continuous damping needs p > 0 when substeps > 1')
    step = p ** (1.0 / substeps)
    d = _dimension(rho)
    kraus = amplitude_damping_kraus(d, step)
    for _ in range(substeps):
        rho = _apply_local_kraus(rho, kraus, d)
    return rho


def apply_channel(rho: np.ndarray, spec: NoiseSpec) -> np.ndarray:
    """One application of the channel described by `spec`."""
    if spec.kind is NoiseKind.DEPOLARIZING:
        return depolarize(rho, spec.p)
    if spec.kind is NoiseKind.DEPHASING:
        return dephase(rho, spec.p)
    return amplitude_damp_continuous(rho, spec.p, spec.substeps)


def apply_noise(rho: np.ndarray, spec: NoiseSpec, d: int) -> np.ndarray:
    """Iterates the channel N = spec.applications(d) times."""
    n_applied = spec.applications(d)
    logger.debug(f'Applying {spec.kind.value} p={spec.p} {n_applied} '
                 f'time(s) at d={d}')
    for _ in range(n_applied):
        rho = apply_channel(rho, spec)
    return rho
