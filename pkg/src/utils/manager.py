# Copyright 2026 The bellsim Authors.
# See LICENSE file for licensing details.

import csv
import io
import json
import logging
import math
import os
import sys
import typing
from dataclasses import dataclass

import jinja2
import numpy as np

from utils import config
from utils import gates
from utils import inequalities
from utils import linalg
from utils import measurement
from utils import noise
from utils import pool
from utils import thresholds

logger = logging.getLogger(__name__)

TEMPLATE_DIR = os.path.join(os.path.dirname(__file__), '..', 'templates')
PRECISION = '{:.12g}'
VERIFY_TOLERANCE = 1e-9

BELL_FIELDS = ('d', 'noise', 'p', 'policy', 'n_applied', 'I_d', 'zg_value',
               'cglmp_violated', 'zg_violated')
THRESHOLD_FIELDS = ('d', 'noise', 'policy', 'inequality', 'p_min',
                    'converged', 'evaluations', 'reentrant', 'status')
FIT_FIELDS = ('d', 'I_d', 'fit', 'rel_error', 'within')


@dataclass(frozen=True)
class BellCell:
    d: int
    spec: noise.NoiseSpec
    sweep: config.SweepConfig


@dataclass(frozen=True)
class VerificationReport:
    n: int
    trials: int
    seed: int
    counts: typing.Tuple[int, int, int]
    max_overlap_deviation: float
    max_readout_deviation: float
    max_marginal_deviation: float
    max_stage_deviation: float

    @property
    def passed(self) -> bool:
        return max(self.max_overlap_deviation, self.max_readout_deviation,
                   self.max_marginal_deviation,
                   self.max_stage_deviation) <= VERIFY_TOLERANCE


def _bell_cell(cell: BellCell) -> inequalities.BellResult:
    return inequalities.run_experiment(
        cell.d, cell.spec, cell.sweep.state, cell.sweep.convention,
        cell.sweep.offset)


def format_value(value) -> typing.Any:
    """Renders a cell value for output.

    Reals use 12 significant digits; NaN becomes None.
    """
    if isinstance(value, bool) or isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, (float, np.floating)):
        if math.isnan(value):
            return None
        return float(PRECISION.format(value))
    return value


def _csv_text(value) -> str:
    if value is None:
        return 'nan'
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        return PRECISION.format(value)
    return str(value)


class SweepManager:
    """Runs the configured sweeps and writes their tables."""

    def __init__(self, sweep_config: config.SweepConfig):
        self.config = sweep_config
        self._env = None

    @property
    def env(self) -> jinja2.Environment:
        if self._env is None:
            self._env = jinja2.Environment(
                loader=jinja2.FileSystemLoader(TEMPLATE_DIR),
                keep_trailing_newline=True,
                undefined=jinja2.StrictUndefined)
        return self._env

    def bell_cells(self) -> typing.List[BellCell]:
        """Cells in output order: d, then noise, then p, then policy."""
        cfg = self.config
        return [BellCell(d, noise.NoiseSpec(kind, p, policy, cfg.substeps),
                         cfg)
                for d in cfg.d_range
                for kind in cfg.noise
                for p in cfg.p
                for policy in cfg.iterations]

    def run_bell_sweep(self) -> typing.List[dict]:
        cells = self.bell_cells()
        logger.info(f'Running bell sweep over {len(cells)} cells')
        results = pool.ordered_map(_bell_cell, cells, self.config.jobs)
        return [self.bell_row(result) for result in results]

    @staticmethod
    def bell_row(result: inequalities.BellResult) -> dict:
        return {
            'd': result.d,
            'noise': result.noise.kind.value,
            'p': result.noise.p,
            'policy': result.noise.policy,
            'n_applied': result.n_applied,
            'I_d': result.i_d,
            'zg_value': result.zg_value,
            'cglmp_violated': result.cglmp_violated,
            'zg_violated': result.zg_violated,
        }

    def threshold_queries(self) -> typing.List[thresholds.ThresholdQuery]:
        cfg = self.config
        return [thresholds.ThresholdQuery(
                    d=cfg.d_min, kind=kind, iterations=policy,
                    inequality=inequality, variant=cfg.state,
                    tolerance=cfg.tolerance, convention=cfg.convention,
                    offset=cfg.offset, substeps=cfg.substeps)
                for kind in cfg.noise
                for policy in cfg.iterations
                for inequality in cfg.selected_inequalities]

    def run_threshold_sweep(self) -> typing.List[dict]:
        queries = self.threshold_queries()
        logger.info(f'Running threshold sweep: {len(queries)} queries over '
                    f'd={self.config.d_min}..{self.config.d_max}')
        results = thresholds.threshold_sweep(
            self.config.d_range, queries, self.config.jobs)
        for result in results:
            self._log_closed_form(result)
        return [self.threshold_row(result) for result in results]

    @staticmethod
    def _log_closed_form(result: thresholds.ThresholdResult) -> None:
        query = result.query
        if (not result.ok
                or query.kind is not noise.NoiseKind.DEPOLARIZING
                or query.variant is not gates.StateVariant.MAX_ENTANGLED):
            return
        n_applied = query.noise_spec(1.0).applications(query.d)
        if n_applied == 0:
            return
        expected = thresholds.depolarizing_threshold(query.d, n_applied)
        logger.debug(f'd={query.d} depolarizing N={n_applied}: p_min='
                     f'{result.p_min:.8f}, closed form {expected:.8f}')

    @staticmethod
    def threshold_row(result: thresholds.ThresholdResult) -> dict:
        query = result.query
        return {
            'd': query.d,
            'noise': query.kind.value,
            'policy': noise.policy_label(query.iterations),
            'inequality': query.inequality.value,
            'p_min': result.p_min,
            'converged': result.converged,
            'evaluations': result.evaluations,
            'reentrant': result.reentrant,
            'status': result.status,
        }

    def run_fit_check(self) -> typing.List[dict]:
        rows = thresholds.fit_check(self.config.d_range)
        return [{'d': row.d, 'I_d': row.i_d, 'fit': row.fit,
                 'rel_error': row.rel_error, 'within': row.within}
                for row in rows]

    def verify_measurement(self) -> VerificationReport:
        """Runs seeded random resonator states through the mapping circuit."""
        n = self.config.qubits
        trials = self.config.trials
        rng = np.random.default_rng(self.config.seed)
        dim = 2 ** n
        counts = measurement.gate_counts(measurement.build_circuit(n))
        overlap_dev = readout_dev = marginal_dev = stage_dev = 0.0
        for _ in range(trials):
            c = measurement.random_resonator_state(dim, rng)
            stages = measurement.run_stages(c)
            mapped = stages[-1]
            expected = measurement.expected_mapped_state(c)
            overlap = linalg.overlap(expected.amplitudes, mapped.amplitudes)
            overlap_dev = max(overlap_dev, 1 - overlap)
            readout = measurement.readout_distribution(mapped)
            readout_dev = max(readout_dev,
                              float(np.max(np.abs(readout - np.abs(c) ** 2))))
            marginal = measurement.resonator_marginal(mapped)
            marginal_dev = max(marginal_dev, float(np.max(np.abs(
                np.diag(marginal) - np.abs(c) ** 2))))
            for k, state in enumerate(stages):
                stage_dev = max(stage_dev,
                                measurement.stage_deviation(state, k))
        report = VerificationReport(n, trials, self.config.seed, counts,
                                    overlap_dev, readout_dev, marginal_dev,
                                    stage_dev)
        logger.info(f'Measurement circuit n={n}: max overlap deviation '
                    f'{overlap_dev:.3e} over {trials} trial(s)')
        return report

    def render(self, template: str, **context) -> str:
        return self.env.get_template(template).render(**context)

    def render_fit_check(self, rows: typing.List[dict]) -> str:
        return self.render('fit-check.txt.j2', rows=rows,
                           tolerance=thresholds.FIT_REL_TOLERANCE)

    def render_verification(self, report: VerificationReport) -> str:
        return self.render('verify-measurement.txt.j2', report=report,
                           tolerance=VERIFY_TOLERANCE)

    def format_rows(self, rows: typing.List[dict],
                    fields: typing.Sequence[str]) -> str:
        """Serializes rows as CSV (LF line endings) or a JSON array."""
        cleaned = [{f: format_value(row[f]) for f in fields} for row in rows]
        if self.config.format == 'json':
            return json.dumps(cleaned, indent=2) + '\n'
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator='\n')
        writer.writerow(fields)
        for row in cleaned:
            writer.writerow([_csv_text(row[f]) for f in fields])
        return buf.getvalue()

    def write_rows(self, rows: typing.List[dict],
                   fields: typing.Sequence[str]) -> None:
        text = self.format_rows(rows, fields)
        if not self.config.out:
            sys.stdout.write(text)
            return
        with open(self.config.out, 'w', newline='') as f:
            f.write(text)
        logger.info(f'Wrote {len(rows)} row(s) to {self.config.out}')
