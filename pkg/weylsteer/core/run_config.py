# -*- coding: utf-8 -*-
"""
Конфигурация запуска (RunConfig).

JSON-документ с обязательным ключом ``command``; версия схемы проверяется
через packaging.version. Здесь же разбираются цели (именованные гейты,
файлы матриц, углы Эйлера, точки камеры) и пары гамильтонианов.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field as dataclass_field
from typing import Any

import numpy as np
from packaging import version

from ..constants import (
    CONFIG_SCHEMA_MIN,
    CONFIG_SCHEMA_NEXT_MAJOR,
    CONFIG_SCHEMA_VERSION,
    DEFAULT_SEED,
    SEED_ENV_VAR,
)
from ..utils import debug
from .bloch import EulerZXZ, euler_to_unitary, euler_zxz
from .errors import ConfigError, ContractViolation
from .localization import translate_runtime
from .matrix_io import read_matrix_file
from .weyl import WeylPoint, canonical_gate, fold_to_chamber, named_gate, weyl_coordinates

COMMANDS = (
    'design1q',
    'schedule2local',
    'bangbang',
    'invariants',
    'weyl',
    'equiv',
    'traj',
    'steer2q',
    'validate',
)

OUTPUT_FORMATS = ('json', 'csv', 'text')

_KNOWN_KEYS = {
    'command', 'schema_version', 'target', 'hamiltonian', 'field', 'pair',
    'strategy', 'options', 'seed', 'output',
}


def _t(key: str) -> str:
    return translate_runtime(key, key)


def _fmt(key: str, **kwargs) -> str:
    text = _t(key)
    try:
        return text.format(**kwargs)
    except Exception:
        return text


@dataclass
class RunConfig:
    """Один запуск CLI.

    Attributes:
        command: One of COMMANDS
        schema_version: Document schema version (1.x)
        target: Gate name, {'matrix_file'}, {'matrix'}, {'euler'} or {'weyl'}; a list for two-target commands
        hamiltonian: {'g1', 'g2', 'J'} for two-qubit commands
        field: Drive parameters for single-qubit pulse design
        pair: Bang-Bang Hamiltonian pair
        strategy: Planner or designer name
        options: Command-specific numeric options
        seed: Random seed (WEYLSTEER_SEED wins)
        output_path: Output file; None prints to stdout
        output_format: 'json', 'csv' or 'text'; None picks the command's default
        base_dir: Directory relative matrix files are resolved against
    """
    command: str
    schema_version: str = CONFIG_SCHEMA_VERSION
    target: Any = None
    hamiltonian: dict | None = None
    field: dict | None = None
    pair: dict | None = None
    strategy: str | None = None
    options: dict = dataclass_field(default_factory=dict)
    seed: int | None = None
    output_path: str | None = None
    output_format: str | None = None
    base_dir: str = ''

    @classmethod
    def from_mapping(cls, data: dict, base_dir: str = '') -> 'RunConfig':
        if not isinstance(data, dict):
            raise ConfigError(_t('error.config.not_object'))
        unknown = sorted(set(data) - _KNOWN_KEYS)
        if unknown:
            raise ConfigError(_fmt('error.config.unknown_keys', keys=', '.join(unknown)))
        command = data.get('command')
        if command not in COMMANDS:
            raise ConfigError(_fmt('error.config.bad_command', command=command, allowed=', '.join(COMMANDS)))
        schema = str(data.get('schema_version', CONFIG_SCHEMA_VERSION))
        check_schema_version(schema)
        options = data.get('options') or {}
        if not isinstance(options, dict):
            raise ConfigError(_fmt('error.config.bad_section', section='options'))
        for section in ('hamiltonian', 'field', 'pair'):
            if data.get(section) is not None and not isinstance(data[section], dict):
                raise ConfigError(_fmt('error.config.bad_section', section=section))
        output = data.get('output') or {}
        if not isinstance(output, dict):
            raise ConfigError(_fmt('error.config.bad_section', section='output'))
        fmt = output.get('format')
        fmt = None if fmt is None else str(fmt).lower()
        if fmt is not None and fmt not in OUTPUT_FORMATS:
            raise ConfigError(_fmt('error.config.bad_format', format=fmt))
        seed = data.get('seed')
        if seed is not None and (not isinstance(seed, int) or isinstance(seed, bool)):
            raise ConfigError(_fmt('error.config.bad_seed', seed=seed))
        return cls(
            command=command,
            schema_version=schema,
            target=data.get('target'),
            hamiltonian=data.get('hamiltonian'),
            field=data.get('field'),
            pair=data.get('pair'),
            strategy=data.get('strategy'),
            options=dict(options),
            seed=seed,
            output_path=output.get('path'),
            output_format=fmt,
            base_dir=base_dir,
        )

    @classmethod
    def from_file(cls, path: str) -> 'RunConfig':
        if not os.path.isfile(path):
            raise ConfigError(_fmt('error.config.missing_file', path=path))
        try:
            with open(path, 'r', encoding='utf-8') as f:
                data = json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigError(_fmt('error.config.bad_json', path=path, error=e))
        except OSError as e:
            raise ConfigError(_fmt('error.config.read_failed', path=path, error=e))
        debug(_fmt('log.config.loaded', path=path))
        return cls.from_mapping(data, base_dir=os.path.dirname(os.path.abspath(path)))

    def resolved_seed(self) -> int:
        raw = os.environ.get(SEED_ENV_VAR, '').strip()
        if raw:
            try:
                return int(raw)
            except ValueError:
                raise ConfigError(_fmt('error.config.bad_seed', seed=raw))
        return DEFAULT_SEED if self.seed is None else int(self.seed)

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.resolved_seed())

    def option(self, name: str, default=None):
        return self.options.get(name, default)

    def require(self, section: str) -> dict:
        value = getattr(self, section)
        if not value:
            raise ConfigError(_fmt('error.config.missing_section', section=section, command=self.command))
        return value

    def resolve_path(self, path: str) -> str:
        if os.path.isabs(path) or not self.base_dir:
            return path
        return os.path.join(self.base_dir, path)


def check_schema_version(value: str) -> None:
    """Accept 1.x documents only."""
    try:
        parsed = version.parse(str(value))
    except version.InvalidVersion:
        raise ConfigError(_fmt('error.config.bad_schema', version=value))
    if parsed < version.parse(CONFIG_SCHEMA_MIN) or parsed >= version.parse(CONFIG_SCHEMA_NEXT_MAJOR):
        raise ConfigError(_fmt('error.config.unsupported_schema', version=value, minimum=CONFIG_SCHEMA_MIN,
                               limit=CONFIG_SCHEMA_NEXT_MAJOR))


# ===== Разбор целей =====

def _matrix_from_pairs(rows) -> np.ndarray:
    try:
        return np.array([[complex(float(e[0]), float(e[1])) if isinstance(e, (list, tuple)) else complex(float(e))
                          for e in row] for row in rows], dtype=complex)
    except (TypeError, ValueError, IndexError):
        raise ConfigError(_t('error.config.bad_matrix'))


def resolve_matrix(spec, config: RunConfig | None = None) -> np.ndarray:
    """Matrix named by a target or Hamiltonian entry."""
    if isinstance(spec, str):
        try:
            return named_gate(spec)
        except ContractViolation as e:
            raise ConfigError(str(e))
    if isinstance(spec, dict):
        if 'matrix_file' in spec:
            path = str(spec['matrix_file'])
            return read_matrix_file(config.resolve_path(path) if config else path)
        if 'matrix' in spec:
            return _matrix_from_pairs(spec['matrix'])
        if 'euler' in spec:
            return euler_to_unitary(resolve_euler(spec))
        if 'weyl' in spec:
            return canonical_gate(resolve_weyl(spec))
    raise ConfigError(_fmt('error.config.bad_target', target=spec))


def resolve_euler(spec, config: RunConfig | None = None) -> EulerZXZ:
    if isinstance(spec, dict) and 'euler' in spec:
        angles = spec['euler']
        try:
            return EulerZXZ(theta=float(angles['theta']), phi=float(angles['phi']), gamma=float(angles['gamma']))
        except (KeyError, TypeError, ValueError):
            raise ConfigError(_t('error.config.bad_euler'))
    return euler_zxz(resolve_matrix(spec, config))


def resolve_weyl(spec, config: RunConfig | None = None) -> WeylPoint:
    if isinstance(spec, dict) and 'weyl' in spec:
        try:
            return fold_to_chamber([float(c) for c in spec['weyl']])
        except (TypeError, ValueError, ContractViolation):
            raise ConfigError(_t('error.config.bad_weyl'))
    if isinstance(spec, (list, tuple)) and len(spec) == 3 and all(isinstance(c, (int, float)) for c in spec):
        return fold_to_chamber([float(c) for c in spec])
    return weyl_coordinates(resolve_matrix(spec, config))


def resolve_targets(config: RunConfig, count: int) -> list:
    """The config target as a list of exactly count entries."""
    target = config.target
    if target is None:
        raise ConfigError(_fmt('error.config.missing_section', section='target', command=config.command))
    if count == 1:
        return [target]
    if not isinstance(target, list) or len(target) != count:
        raise ConfigError(_fmt('error.config.target_count', command=config.command, count=count))
    return list(target)
