# Copyright 2026 The bellsim Authors.
# See LICENSE file for licensing details.

"""Joint outcome tables and the CGLMP / Zohren-Gill Bell expressions."""

import enum
import itertools
import logging
from dataclasses import dataclass
from typing import Dict, Iterable, Tuple

import numpy as np

from utils import gates
from utils import linalg
from utils import noise

logger = logging.getLogger(__name__)

CLASSICAL_BOUND = 2.0
ZG_BOUND = 1.0
# Below this magnitude a probability counts as an exact zero in the ordering
# sums of the Zohren-Gill expression.
ZERO_CUTOFF = 1e-14
NEGATIVE_TOL = 1e-12
SUM_TOL = 1e-10

SETTING_PAIRS = tuple(itertools.product(gates.SETTING_CHOICES, repeat=2))


class OffsetConvention(enum.Enum):
    """Which outcome the modular offset k is added to.

    VERBATIM sums P(A = j, B = j + k); FLIPPED sums P(A = j + k, B = j),
    i.e. reads P(A = B + k) with the offset on Alice's side.
    """

    VERBATIM = 'verbatim'
    FLIPPED = 'flipped'


# Chosen because it reproduces the known noiseless optimum (2 sqrt 2 at
# d = 2) and the 2.97 (1 - 1/(10 d)) fit with the default phases.
DEFAULT_OFFSET = OffsetConvention.FLIPPED


@dataclass(frozen=True, eq=False)
class ProbabilityTable:
    """P(A_a = j, B_b = k) for one setting pair, j indexing rows."""

    d: int
    setting_pair: Tuple[int, int]
    entries: np.ndarray

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=float)
        if entries.shape != (self.d, self.d):
            raise ValueError(
                f'Table for d={self.d} has shape {entries.shape}')
        if entries.min() < -NEGATIVE_TOL:
            raise ValueError(
                f'Negative probability {entries.min()} in table '
                f'{self.setting_pair}')
        if abs(entries.sum() - 1) > SUM_TOL:
            raise ValueError(
                f'Table {self.setting_pair} sums to {entries.sum()}')
        entries = np.clip(entries, 0.0, None)
        entries.setflags(write=False)
        object.__setattr__(self, 'entries', entries)

    def alice_marginal(self) -> np.ndarray:
        return self.entries.sum(axis=1)

    def bob_marginal(self) -> np.ndarray:
        return self.entries.sum(axis=0)


@dataclass(frozen=True)
class BellResult:
    d: int
    noise: noise.NoiseSpec
    state_variant: gates.StateVariant
    convention: gates.PhaseConvention
    offset: OffsetConvention
    n_applied: int
    i_d: float
    zg_value: float

    @property
    def cglmp_violated(self) -> bool:
        return self.i_d > CLASSICAL_BOUND

    @property
    def zg_violated(self) -> bool:
        return self.zg_value < ZG_BOUND


def rotate_state(rho: np.ndarray, a: int, b: int,
                 conv: gates.PhaseConvention = (
                     gates.PhaseConvention.FOURIER_SCALED),
                 reverse_bob: bool = False) -> np.ndarray:
    """(U_A,a x U_B,b) rho (U_A,a x U_B,b)^dagger."""
    d = int(round(np.sqrt(rho.shape[0])))
    u_a = gates.measurement_unitary(
        d, gates.MeasurementSetting(gates.Party.ALICE, a), conv)
    u_b = gates.measurement_unitary(
        d, gates.MeasurementSetting(gates.Party.BOB, b), conv,
        reverse=reverse_bob)
    u = linalg.kron(u_a, u_b)
    return u @ rho @ u.conj().T


def joint_probabilities(rho: np.ndarray, a: int, b: int,
                        conv: gates.PhaseConvention = (
                            gates.PhaseConvention.FOURIER_SCALED),
                        reverse_bob: bool = False) -> ProbabilityTable:
    """Diagonal of the rotated state, reshaped to a d x d table."""
    d = int(round(np.sqrt(rho.shape[0])))
    rotated = rotate_state(rho, a, b, conv, reverse_bob)
    entries = np.real(np.diag(rotated)).reshape(d, d)
    return ProbabilityTable(d, (a, b), entries)


def all_tables(rho: np.ndarray,
               conv: gates.PhaseConvention = (
                   gates.PhaseConvention.FOURIER_SCALED),
               reverse_bob: bool = False
               ) -> Dict[Tuple[int, int], ProbabilityTable]:
    return {(a, b): joint_probabilities(rho, a, b, conv, reverse_bob)
            for a, b in SETTING_PAIRS}


def prob_equal_mod(table: ProbabilityTable, k: int,
                   offset: OffsetConvention = DEFAULT_OFFSET) -> float:
    """Probability that the outcomes differ by k modulo d.

    Negative k wraps modulo d.
    """
    d = table.d
    j = np.arange(d)
    shifted = (j + k) % d
    if OffsetConvention(offset) is OffsetConvention.VERBATIM:
        return float(table.entries[j, shifted].sum())
    return float(table.entries[shifted, j].sum())


def _by_pair(tables) -> Dict[Tuple[int, int], ProbabilityTable]:
    if isinstance(tables, dict):
        tables = tables.values()
    indexed = {t.setting_pair: t for t in tables}
    missing = [pair for pair in SETTING_PAIRS if pair not in indexed]
    if missing:
        raise ValueError(f'Missing tables for setting pairs {missing}')
    dims = {t.d for t in indexed.values()}
    if len(dims) != 1:
        raise ValueError(f'Tables have mismatched dimensions {sorted(dims)}')
    return indexed


def cglmp(tables: Iterable[ProbabilityTable],
          offset: OffsetConvention = DEFAULT_OFFSET) -> float:
    """The CGLMP Bell parameter I_d; local models satisfy I_d <= 2.

    :param tables: the four tables, keyed or in any order
    :param offset: reading of the modular offset
    :raises: ValueError if a setting pair is missing or dimensions differ
    """
    t = _by_pair(tables)
    d = t[(1, 1)].d

    def a_eq_b_plus(pair, k):
        return prob_equal_mod(t[pair], k, offset)

    def b_eq_a_plus(pair, k):
        return prob_equal_mod(t[pair], -k, offset)

    def script_p(k):
        return (a_eq_b_plus((1, 1), k) + b_eq_a_plus((2, 1), k + 1)
                + a_eq_b_plus((2, 2), k) + b_eq_a_plus((1, 2), k))

    total = 0.0
    for k in range(d // 2):
        weight = 1 - 2 * k / (d - 1)
        total += weight * (script_p(k) - script_p(-k - 1))
    return total


def zohren_gill(tables: Iterable[ProbabilityTable]) -> float:
    """P(A2<B2) + P(B2<A1) + P(A1<B1) + P(B1<=A2); local models give >= 1.

    :raises: ValueError if a setting pair is missing or dimensions differ
    """
    t = _by_pair(tables)

    def cleaned(pair):
        entries = t[pair].entries
        return np.where(np.abs(entries) < ZERO_CUTOFF, 0.0, entries)

    # Rows are Alice's outcome, columns Bob's.
    a2_lt_b2 = np.triu(cleaned((2, 2)), 1).sum()
    b2_lt_a1 = np.tril(cleaned((1, 2)), -1).sum()
    a1_lt_b1 = np.triu(cleaned((1, 1)), 1).sum()
    b1_le_a2 = np.tril(cleaned((2, 1)), 0).sum()
    return float(a2_lt_b2 + b2_lt_a1 + a1_lt_b1 + b1_le_a2)


def cglmp_to_zohren_gill(i_d: float, d: int) -> float:
    """Zohren-Gill value implied by I_d for no-signalling tables.

    The two expressions are affinely related, which is why their violation
    thresholds coincide.
    """
    return (2 - 1 / d) - (d - 1) / (2 * d) * i_d


def initial_density(d: int, variant: gates.StateVariant) -> np.ndarray:
    return linalg.projector(gates.prepare_entangled_state(d, variant))


def evaluate(rho: np.ndarray,
             conv: gates.PhaseConvention = (
                 gates.PhaseConvention.FOURIER_SCALED),
             offset: OffsetConvention = DEFAULT_OFFSET,
             reverse_bob: bool = False) -> Tuple[float, float]:
    """(I_d, Zohren-Gill) for a noisy state before rotation."""
    tables = all_tables(rho, conv, reverse_bob)
    return cglmp(tables, offset), zohren_gill(tables)


def run_experiment(d: int, spec: noise.NoiseSpec,
                   variant: gates.StateVariant = (
                       gates.StateVariant.MAX_ENTANGLED),
                   conv: gates.PhaseConvention = (
                       gates.PhaseConvention.FOURIER_SCALED),
                   offset: OffsetConvention = DEFAULT_OFFSET) -> BellResult:
    """Prepares, adds noise, rotates and evaluates both inequalities.

    Bob's rotations are reversed automatically for the REV state.
    """
    variant = gates.StateVariant(variant)
    conv = gates.PhaseConvention(conv)
    offset = OffsetConvention(offset)
    rho = noise.apply_noise(initial_density(d, variant), spec, d)
    i_d, zg = evaluate(rho, conv, offset,
                       reverse_bob=variant is gates.StateVariant.REV)
    logger.debug(f'd={d} {spec.kind.value} p={spec.p} N={spec.policy}: '
                 f'I_d={i_d:.12g} ZG={zg:.12g}')
    return BellResult(d=d, noise=spec, state_variant=variant,
                      convention=conv, offset=offset,
                      n_applied=spec.applications(d), i_d=i_d, zg_value=zg)
