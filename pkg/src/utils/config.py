# Copyright 2026 The bellsim Authors.
# See LICENSE file for licensing details.

"""Option schema, key=value config files and sweep configuration.

Options resolve as schema defaults < config file < command-line flags.
"""

import logging
import os
from dataclasses import dataclass
from typing import Any, Dict, List, Mapping, Optional, Tuple

import yaml

from utils import errors
from utils import gates
from utils import inequalities
from utils import measurement
from utils.noise import IterationPolicy, Iterations, NoiseKind
from utils.noise import parse_iterations
from utils import thresholds

logger = logging.getLogger(__name__)

SCHEMA_PATH = os.path.join(os.path.dirname(__file__), '..', '..',
                           'config.yaml')

D_MAX_CAP = 16
D_MAX_LARGE_CAP = 32
LOG_LEVELS = ('DEBUG', 'INFO', 'WARNING', 'ERROR')
FORMATS = ('csv', 'json')
INEQUALITY_CHOICES = ('cglmp', 'zg', 'both')

_TRUE = ('true', 'yes', 'on', '1')
_FALSE = ('false', 'no', 'off', '0')


def load_schema(path: Optional[str] = None) -> Dict[str, Dict[str, Any]]:
    """Reads the `options:` mapping of config.yaml."""
    path = path or SCHEMA_PATH
    with open(path) as f:
        data = yaml.safe_load(f) or {}
    options = data.get('options')
    if not isinstance(options, dict):
        raise errors.ConfigError('schema', f'{path} has no options mapping')
    return options


def defaults(schema: Mapping[str, Dict[str, Any]]) -> Dict[str, Any]:
    return {key: opt.get('default') for key, opt in schema.items()}


def coerce(key: str, value: Any,
           schema: Mapping[str, Dict[str, Any]]) -> Any:
    """Converts `value` to the schema type of option `key`.

    :raises: ConfigError for unknown keys and values of the wrong type.
    """
    if key not in schema:
        raise errors.ConfigError(key, 'unknown option')
    kind = schema[key].get('type', 'string')
    if value is None:
        return None
    try:
        if kind == 'boolean':
            if isinstance(value, bool):
                return value
            text = str(value).strip().lower()
            if text in _TRUE:
                return True
            if text in _FALSE:
                return False
            raise ValueError(value)
        if kind == 'int':
            if isinstance(value, float) and not value.is_integer():
                raise ValueError(value)
            return int(value)
        if kind == 'float':
            return float(value)
    except (TypeError, ValueError):
        raise errors.ConfigError(key, f'expected {kind}, got {value!r}')
    if isinstance(value, (list, tuple)):
        return ','.join(str(v) for v in value)
    return str(value)


def parse_config_file(path: str,
                      schema: Mapping[str, Dict[str, Any]]) -> Dict[str, Any]:
    """Parses key=value lines; `#` comments and blank lines are skipped."""
    values = {}
    try:
        with open(path) as f:
            lines = f.readlines()
    except OSError as e:
        raise errors.ConfigError('config', f'cannot read {path}: {e}')
    for number, line in enumerate(lines, start=1):
        line = line.split('#', 1)[0].strip()
        if not line:
            continue
        if '=' not in line:
            raise errors.ConfigError(
                'config', f'{path}:{number}: expected key=value')
        key, value = (part.strip() for part in line.split('=', 1))
        values[key] = coerce(key, value, schema)
    logger.debug(f'Read {len(values)} option(s) from {path}')
    return values


def resolve_options(flags: Optional[Mapping[str, Any]] = None,
                    config_file: Optional[str] = None,
                    schema: Optional[Mapping[str, Dict[str, Any]]] = None
                    ) -> Dict[str, Any]:
    """Merges defaults, the config file and flags; None flags are unset."""
    schema = schema if schema is not None else load_schema()
    options = defaults(schema)
    if config_file:
        options.update(parse_config_file(config_file, schema))
    for key, value in (flags or {}).items():
        if value is not None:
            options[key] = coerce(key, value, schema)
    return options


def split_list(value: Any) -> List[str]:
    """'a, b' -> ['a', 'b']; lists are flattened the same way."""
    if value is None:
        return []
    if isinstance(value, (list, tuple)):
        value = ','.join(str(v) for v in value)
    return [item.strip() for item in str(value).split(',') if item.strip()]


def _parse_enum(key: str, value: Any, enum_cls):
    try:
        return enum_cls(value)
    except ValueError:
        choices = ', '.join(member.value for member in enum_cls)
        raise errors.ConfigError(key, f'{value!r} is not one of {choices}')


def _choice(key: str, value: Any, choices: Tuple[str, ...]) -> str:
    if value not in choices:
        raise errors.ConfigError(
            key, f'{value!r} is not one of {", ".join(choices)}')
    return value


@dataclass(frozen=True)
class SweepConfig:
    d_min: int = 2
    d_max: int = D_MAX_CAP
    allow_large_d: bool = False
    noise: Tuple[NoiseKind, ...] = (NoiseKind.DEPOLARIZING,)
    p: Tuple[float, ...] = (1.0,)
    iterations: Tuple[IterationPolicy, ...] = (Iterations.SINGLE,)
    substeps: int = 1
    state: gates.StateVariant = gates.StateVariant.MAX_ENTANGLED
    convention: gates.PhaseConvention = gates.PhaseConvention.FOURIER_SCALED
    offset: inequalities.OffsetConvention = inequalities.DEFAULT_OFFSET
    inequality: str = 'both'
    tolerance: float = thresholds.DEFAULT_TOLERANCE
    format: str = 'csv'
    out: Optional[str] = None
    seed: int = 0
    jobs: int = 1
    qubits: int = 3
    trials: int = 50
    debug: bool = False
    log_level: str = 'WARNING'

    def __post_init__(self):
        self.validate()

    @property
    def d_range(self) -> range:
        return range(self.d_min, self.d_max + 1)

    @property
    def selected_inequalities(self) -> Tuple[thresholds.Inequality, ...]:
        if self.inequality == 'both':
            return tuple(thresholds.Inequality)
        return (thresholds.Inequality(self.inequality),)

    def validate(self) -> None:
        """Checks every field.

        :raises: ConfigError naming the first offending field.
        """
        cap = D_MAX_LARGE_CAP if self.allow_large_d else D_MAX_CAP
        if self.d_min < 2:
            raise errors.ConfigError(
                'd-min', f'must be >= 2, got {self.d_min}')
        if self.d_max < self.d_min:
            raise errors.ConfigError(
                'd-max', f'{self.d_max} is below d-min {self.d_min}')
        if self.d_max > cap:
            hint = '' if self.allow_large_d else ' (set allow-large-d for 32)'
            raise errors.ConfigError(
                'd-max', f'{self.d_max} exceeds the cap of {cap}{hint}')
        if not self.noise:
            raise errors.ConfigError('noise', 'at least one kind is required')
        if not self.p:
            raise errors.ConfigError('p', 'at least one value is required')
        for value in self.p:
            if not 0 <= value <= 1:
                raise errors.ConfigError('p', f'{value} is not in [0, 1]')
        if not self.iterations:
            raise errors.ConfigError(
                'iterations', 'at least one policy is required')
        if self.substeps < 1:
            raise errors.ConfigError('substeps', 'must be >= 1')
        if (self.substeps > 1 and 0 in self.p
                and NoiseKind.AMPLITUDE_DAMPING in self.noise):
            raise errors.ConfigError(
                'p', 'p = 0 is undefined for continuous amplitude damping')
        if not self.tolerance > 0:
            raise errors.ConfigError('tolerance', 'must be positive')
        if self.jobs < 1:
            raise errors.ConfigError('jobs', 'must be >= 1')
        if not 1 <= self.qubits <= measurement.MAX_QUBITS:
            raise errors.ConfigError(
                'qubits', f'must be in 1..{measurement.MAX_QUBITS}, got '
                f'{self.qubits}')
        if self.trials < 1:
            raise errors.ConfigError('trials', 'must be >= 1')
        _choice('format', self.format, FORMATS)
        _choice('inequality', self.inequality, INEQUALITY_CHOICES)

    @classmethod
    def from_options(cls, options: Mapping[str, Any]) -> 'SweepConfig':
        """Builds a config from resolved option values.

        :raises: ConfigError naming the offending option.
        """
        kinds = tuple(_parse_enum('noise', kind, NoiseKind)
                      for kind in split_list(options.get('noise')))
        try:
            p_values = tuple(float(v) for v in split_list(options.get('p')))
        except ValueError as e:
            raise errors.ConfigError('p', str(e))
        try:
            policies = tuple(parse_iterations(v)
                             for v in split_list(options.get('iterations')))
        except ValueError as e:
            raise errors.ConfigError('iterations', str(e))
        log_level = str(options.get('log-level') or 'WARNING').upper()
        return cls(
            d_min=options['d-min'],
            d_max=options['d-max'],
            allow_large_d=bool(options.get('allow-large-d')),
            noise=kinds,
            p=p_values,
            iterations=policies,
            substeps=options['substeps'],
            state=_parse_enum('state', options['state'], gates.StateVariant),
            convention=_parse_enum('convention', options['convention'],
                                   gates.PhaseConvention),
            offset=_parse_enum('offset', options['offset'],
                               inequalities.OffsetConvention),
            inequality=options['inequality'],
            tolerance=options['tolerance'],
            format=options['format'],
            out=options.get('out') or None,
            seed=options['seed'],
            jobs=options['jobs'],
            qubits=options['qubits'],
            trials=options['trials'],
            debug=bool(options.get('debug')),
            log_level=log_level,
        )


def load_config(flags: Optional[Mapping[str, Any]] = None,
                config_file: Optional[str] = None,
                schema: Optional[Mapping[str, Dict[str, Any]]] = None
                ) -> SweepConfig:
    return SweepConfig.from_options(
        resolve_options(flags, config_file, schema))
