# Copyright 2026 The bellsim Authors.
# See LICENSE file for licensing details.

"""Threshold noise strengths and the noiseless-value fit.

The threshold p_min of a configuration is the noise strength at which the
inequality value crosses its classical bound (I_d = 2, or Zohren-Gill = 1)
on the way down from the noiseless point p = 1.
"""

import dataclasses
import enum
import logging
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence

import numpy as np
import scipy.optimize

from utils import errors
from utils import gates
from utils import inequalities
from utils import noise
from utils import pool

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-6
PRESAMPLE_POINTS = 9
MONOTONE_TOL = 1e-9
FIT_AMPLITUDE = 2.97
# Continuous damping is undefined at p = 0, so its scan starts here.
CONTINUOUS_FLOOR = 1e-3
FIT_REL_TOLERANCE = 0.015


class Inequality(enum.Enum):
    CGLMP = 'cglmp'
    ZOHREN_GILL = 'zg'


@dataclass(frozen=True)
class ThresholdQuery:
    d: int
    kind: noise.NoiseKind
    iterations: noise.IterationPolicy = noise.Iterations.SINGLE
    inequality: Inequality = Inequality.CGLMP
    variant: gates.StateVariant = gates.StateVariant.MAX_ENTANGLED
    tolerance: float = DEFAULT_TOLERANCE
    convention: gates.PhaseConvention = gates.PhaseConvention.FOURIER_SCALED
    offset: inequalities.OffsetConvention = inequalities.DEFAULT_OFFSET
    substeps: int = 1

    def __post_init__(self):
        object.__setattr__(self, 'kind', noise.NoiseKind(self.kind))
        object.__setattr__(self, 'iterations',
                           noise.parse_iterations(self.iterations))
        object.__setattr__(self, 'inequality', Inequality(self.inequality))
        object.__setattr__(self, 'variant', gates.StateVariant(self.variant))
        if not self.tolerance > 0:
            raise ValueError(
                f'tolerance must be positive, got {self.tolerance}')

    def noise_spec(self, p: float) -> noise.NoiseSpec:
        return noise.NoiseSpec(self.kind, p, self.iterations, self.substeps)


@dataclass(frozen=True)
class ThresholdResult:
    """Outcome of one threshold search.

    A failed search keeps p_min as NaN and the reason in `status`.
    """

    query: ThresholdQuery
    p_min: float
    converged: bool
    evaluations: int
    reentrant: bool = False
    status: str = 'ok'

    @property
    def ok(self) -> bool:
        return self.status == 'ok'


@dataclass(frozen=True)
class FitRow:
    d: int
    i_d: float
    fit: float
    rel_error: float

    @property
    def within(self) -> bool:
        return self.rel_error <= FIT_REL_TOLERANCE


def bell_value_at(query: ThresholdQuery, p: float) -> float:
    """Value of the query's inequality at noise strength p."""
    result = inequalities.run_experiment(
        query.d, query.noise_spec(p), query.variant, query.convention,
        query.offset)
    if query.inequality is Inequality.CGLMP:
        return result.i_d
    return result.zg_value


def violation_margin(query: ThresholdQuery, p: float) -> float:
    """Positive exactly when the inequality is violated at p."""
    value = bell_value_at(query, p)
    if query.inequality is Inequality.CGLMP:
        return value - inequalities.CLASSICAL_BOUND
    return inequalities.ZG_BOUND - value


def find_threshold(query: ThresholdQuery) -> ThresholdResult:
    """Bisects for p_min after a coarse monotonicity check.

    The margin is sampled on 9 evenly spaced points of [0, 1]. The bracket is
    the highest non-violating sample and its right neighbour; the samples
    from the bracket up to p = 1 must be nondecreasing. Violating samples
    below the bracket are reported as `reentrant` and otherwise ignored.

    :raises: NoThresholdError if the noiseless configuration does not
             violate; NonMonotoneError if the sampled margin decreases
             between the bracket and p = 1.
    """
    samples = np.linspace(0.0, 1.0, PRESAMPLE_POINTS)
    if (query.kind is noise.NoiseKind.AMPLITUDE_DAMPING
            and query.substeps > 1):
        samples[0] = CONTINUOUS_FLOOR
    margins = [violation_margin(query, p) for p in samples]
    evaluations = len(samples)
    if margins[-1] <= 0:
        raise errors.NoThresholdError(
            f'{query.inequality.value} is not violated without noise at '
            f'd={query.d} ({query.kind.value}, {query.variant.value})')

    non_violating = [i for i, m in enumerate(margins) if m <= 0]
    if not non_violating:
        logger.info(f'd={query.d} {query.kind.value}: violated on all of '
                    '[0, 1]')
        return ThresholdResult(query, float(samples[0]), True, evaluations)
    lo = non_violating[-1]

    upper = margins[lo:]
    for left, right in zip(upper, upper[1:]):
        if right < left - MONOTONE_TOL:
            raise errors.NonMonotoneError(
                f'Margin decreases above p={samples[lo]:.3f} at d={query.d} '
                f'({query.kind.value}, '
                f'N={noise.policy_label(query.iterations)}); inspect this '
                'configuration manually')

    reentrant = any(m > 0 for m in margins[:lo])
    if reentrant:
        logger.warning(f'd={query.d} {query.kind.value}: violation '
                       f're-enters below p={samples[lo]:.3f}')

    if margins[lo] == 0:
        return ThresholdResult(query, float(samples[lo]), True, evaluations,
                               reentrant)

    logger.debug(f'Bisecting d={query.d} on [{samples[lo]:.3f}, '
                 f'{samples[lo + 1]:.3f}]')
    root, info = scipy.optimize.bisect(
        lambda p: violation_margin(query, p), samples[lo], samples[lo + 1],
        xtol=query.tolerance, full_output=True, disp=False)
    return ThresholdResult(query, float(root), bool(info.converged),
                           evaluations + info.function_calls, reentrant)


def _threshold_cell(query: ThresholdQuery) -> ThresholdResult:
    try:
        return find_threshold(query)
    except (errors.BellSimException, ValueError) as exc:
        logger.warning(f'Threshold search failed for d={query.d} '
                       f'{query.kind.value}: {exc}')
        return ThresholdResult(query, float('nan'), False, 0,
                               status=str(exc))


def threshold_sweep(d_range: Iterable[int],
                    queries: Sequence[ThresholdQuery],
                    jobs: int = 1) -> List[ThresholdResult]:
    """One threshold per (d, query), d outermost, queries in given order.

    The `d` of each query template is replaced by the sweep dimension.
    Failed cells are returned with their status and do not stop the sweep.
    """
    cells = [dataclasses.replace(q, d=d) for d in d_range for q in queries]
    return pool.ordered_map(_threshold_cell, cells, jobs)


def noiseless_value(d: int,
                    variant: gates.StateVariant = (
                        gates.StateVariant.MAX_ENTANGLED),
                    conv: gates.PhaseConvention = (
                        gates.PhaseConvention.FOURIER_SCALED),
                    offset: inequalities.OffsetConvention = (
                        inequalities.DEFAULT_OFFSET)) -> float:
    spec = noise.NoiseSpec(noise.NoiseKind.DEPOLARIZING, 1.0)
    return inequalities.run_experiment(d, spec, variant, conv, offset).i_d


def depolarizing_threshold(d: int, n_applied: int,
                           i_noiseless: Optional[float] = None) -> float:
    """Closed form (2 / I_d(1))^(1/N) for N depolarizing applications."""
    if n_applied < 1:
        raise ValueError(f'Need at least one application, got {n_applied}')
    if i_noiseless is None:
        i_noiseless = noiseless_value(d)
    return (inequalities.CLASSICAL_BOUND / i_noiseless) ** (1.0 / n_applied)


def fit_value(d: int) -> float:
    return FIT_AMPLITUDE * (1 - 1 / (10 * d))


def fit_check(d_range: Iterable[int]) -> List[FitRow]:
    rows = []
    for d in d_range:
        i_d = noiseless_value(d)
        fit = fit_value(d)
        rows.append(FitRow(d, i_d, fit, abs(i_d - fit) / fit))
        if not rows[-1].within:
            logger.warning(f'd={d}: I_d(1)={i_d:.6f} is '
                           f'{rows[-1].rel_error:.2%} from the fit')
    return rows
