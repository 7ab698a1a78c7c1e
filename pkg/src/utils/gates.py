# Copyright 2026 The bellsim Authors.
# See LICENSE file for licensing details.

"""Qudit gates, measurement rotations and the entangled input states.

The generalized Hadamard is the unitary DFT, H[j, k] = w^(jk) / sqrt(d) with
w = exp(2 pi i / d). The two-qudit controlled phase is diagonal,
CR(theta)|j, k> = exp(-i j k theta)|j, k>, and the bipartite basis index of
|j, k> is j * d + k throughout the package.
"""

import enum
import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from utils import linalg

logger = logging.getLogger(__name__)


class Party(enum.Enum):
    ALICE = 'alice'
    BOB = 'bob'


class PhaseConvention(enum.Enum):
    """How a setting's phase enters the diagonal of its rotation."""

    PAPER_LITERAL = 'paper-literal'
    FOURIER_SCALED = 'fourier-scaled'


class StateVariant(enum.Enum):
    MAX_ENTANGLED = 'max'
    APP = 'app'
    REV = 'rev'


_SETTING_PHASES = {
    (Party.ALICE, 1): 0.0,
    (Party.ALICE, 2): 0.5,
    (Party.BOB, 1): 0.25,
    (Party.BOB, 2): -0.25,
}

SETTING_CHOICES = (1, 2)


def check_dimension(d: int) -> None:
    if int(d) != d or d < 2:
        raise ValueError(f'Qudit dimension must be an integer >= 2, got {d}')


@dataclass(frozen=True)
class MeasurementSetting:
    party: Party
    choice: int

    def __post_init__(self):
        if (self.party, self.choice) not in _SETTING_PHASES:
            raise ValueError(
                f'No measurement setting {self.choice} for {self.party}')

    @property
    def phase(self) -> float:
        return _SETTING_PHASES[(self.party, self.choice)]


def dft_hadamard(d: int) -> np.ndarray:
    """The d x d generalized Hadamard (unitary DFT) gate."""
    check_dimension(d)
    # scipy uses the exp(-2 pi i jk / d) sign; the qudit Hadamard is the
    # conjugate of that matrix.
    return np.conj(scipy.linalg.dft(d, scale='sqrtn'))


def controlled_phase(d: int, theta: float) -> np.ndarray:
    """The d^2 x d^2 diagonal gate CR(theta)."""
    check_dimension(d)
    j, k = np.divmod(np.arange(d * d), d)
    return np.diag(np.exp(-1j * j * k * theta))


def reversal(d: int) -> np.ndarray:
    """Permutation R|k> = |(d - k) mod d>."""
    check_dimension(d)
    r = np.zeros((d, d), dtype=complex)
    k = np.arange(d)
    r[(d - k) % d, k] = 1
    return r


def prepare_entangled_state(
        d: int,
        variant: StateVariant = StateVariant.MAX_ENTANGLED) -> np.ndarray:
    """Builds one of the bipartite input states as a d^2 vector.

    MAX_ENTANGLED puts 1/sqrt(d) on every |j, j>. APP weights |j, j> by
    1/sqrt((j + 1)(d - j)) before normalization. REV puts 1/sqrt(d) on
    |j, (d - j) mod d>, so j = 0 pairs with |0, 0>.
    """
    check_dimension(d)
    variant = StateVariant(variant)
    j = np.arange(d)
    psi = np.zeros(d * d, dtype=complex)
    if variant is StateVariant.MAX_ENTANGLED:
        psi[j * d + j] = 1
    elif variant is StateVariant.APP:
        psi[j * d + j] = 1 / np.sqrt((j + 1) * (d - j))
    else:
        psi[j * d + (d - j) % d] = 1
    return linalg.normalize(psi)


def prepare_via_circuit(d: int) -> np.ndarray:
    """Runs the preparation circuit on |0, 0>.

    The gates are applied as (I x H) CR(2 pi / d) (H x H), the order used
    when the output is worked out term by term.
    """
    check_dimension(d)
    h = dft_hadamard(d)
    identity = np.eye(d)
    psi = linalg.basis_state(d * d, 0)
    psi = linalg.kron(h, h) @ psi
    psi = controlled_phase(d, 2 * np.pi / d) @ psi
    psi = linalg.kron(identity, h) @ psi
    logger.debug(f'Prepared entangled state for d={d} by circuit')
    return psi


def measurement_unitary(
        d: int,
        setting: MeasurementSetting,
        conv: PhaseConvention = PhaseConvention.FOURIER_SCALED,
        reverse: bool = False) -> np.ndarray:
    """Rotation applied by one party before the fixed-basis measurement.

    Alice rotates with the DFT, Bob with its inverse. The setting's phase is
    a diagonal acting on the incoming basis state k, so that
    U[j, k] = exp(+-2 pi i jk / d) exp(i phi(k)) / sqrt(d), with
    phi(k) = 2 pi phase k / d (FOURIER_SCALED) or phase k (PAPER_LITERAL).

    :param d: qudit dimension
    :param setting: party and measurement choice
    :param conv: phase convention
    :param reverse: compose with the reversal permutation; only meaningful
                    for Bob measuring the REV state
    """
    check_dimension(d)
    conv = PhaseConvention(conv)
    h = dft_hadamard(d)
    if setting.party is Party.BOB:
        h = np.conj(h)
    k = np.arange(d)
    if conv is PhaseConvention.FOURIER_SCALED:
        phases = np.exp(2j * np.pi * setting.phase * k / d)
    else:
        phases = np.exp(1j * setting.phase * k)
    u = h * phases[np.newaxis, :]
    if reverse:
        u = u @ reversal(d)
    return u
