# -*- coding: utf-8 -*-
"""
Текстовый формат матриц.

Первая значащая строка содержит размерность, далее строки матрицы из пар
``re,im``, разделённых пробелами. Строки, начинающиеся с ``#``, и хвосты
после ``#`` игнорируются.
"""

from __future__ import annotations

import os

import numpy as np

from ..utils import atomic_write_text, format_number
from .errors import ConfigError
from .localization import translate_runtime


def _t(key: str) -> str:
    return translate_runtime(key, key)


def _fmt(key: str, **kwargs) -> str:
    text = _t(key)
    try:
        return text.format(**kwargs)
    except Exception:
        return text


def _meaningful_lines(text: str) -> list[str]:
    lines = []
    for raw in text.splitlines():
        line = raw.split('#', 1)[0].strip()
        if line:
            lines.append(line)
    return lines


def parse_matrix_text(text: str, source: str = '<text>') -> np.ndarray:
    """Parse the plaintext matrix format into a complex array."""
    lines = _meaningful_lines(text)
    if not lines:
        raise ConfigError(_fmt('error.matrix_io.empty', source=source))
    try:
        dim = int(lines[0])
    except ValueError:
        raise ConfigError(_fmt('error.matrix_io.bad_header', source=source, header=lines[0]))
    if dim not in (2, 4):
        raise ConfigError(_fmt('error.matrix_io.bad_dimension', source=source, dim=dim))
    rows = lines[1:]
    if len(rows) != dim:
        raise ConfigError(_fmt('error.matrix_io.row_count', source=source, expected=dim, got=len(rows)))
    out = np.zeros((dim, dim), dtype=complex)
    for i, row in enumerate(rows):
        entries = row.split()
        if len(entries) != dim:
            raise ConfigError(_fmt('error.matrix_io.column_count', source=source, row=i + 1, expected=dim,
                                   got=len(entries)))
        for j, entry in enumerate(entries):
            parts = entry.split(',')
            try:
                if len(parts) == 1:
                    out[i, j] = float(parts[0])
                elif len(parts) == 2:
                    out[i, j] = complex(float(parts[0]), float(parts[1]))
                else:
                    raise ValueError(entry)
            except ValueError:
                raise ConfigError(_fmt('error.matrix_io.bad_entry', source=source, row=i + 1, entry=entry))
    if not np.all(np.isfinite(out)):
        raise ConfigError(_fmt('error.matrix_io.bad_entry', source=source, row=0, entry='nan/inf'))
    return out


def read_matrix_file(path: str) -> np.ndarray:
    if not os.path.isfile(path):
        raise ConfigError(_fmt('error.matrix_io.missing_file', path=path))
    try:
        with open(path, 'r', encoding='utf-8') as f:
            text = f.read()
    except OSError as e:
        raise ConfigError(_fmt('error.matrix_io.read_failed', path=path, error=e))
    return parse_matrix_text(text, source=path)


def format_matrix(M, comment: str | None = None) -> str:
    A = np.asarray(M, dtype=complex)
    lines = []
    if comment:
        lines.extend('# ' + part for part in str(comment).splitlines())
    lines.append(str(A.shape[0]))
    for row in A:
        lines.append(' '.join(f'{format_number(z.real)},{format_number(z.imag)}' for z in row))
    return '\n'.join(lines) + '\n'


def write_matrix_file(path: str, M, comment: str | None = None) -> str:
    return atomic_write_text(path, format_matrix(M, comment))
