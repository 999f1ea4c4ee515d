# -*- coding: utf-8 -*-
"""
Иерархия исключений WeylSteer.

Всё, что пакет выбрасывает намеренно, наследуется от WeylSteerError; CLI
сопоставляет подклассы с кодами завершения.
"""

from __future__ import annotations

from typing import Any


class WeylSteerError(RuntimeError):
    """Base class for errors raised on purpose by the toolkit."""


class ContractViolation(WeylSteerError, ValueError):
    """An input does not satisfy an operation's precondition."""


class SolverError(WeylSteerError):
    """A numeric search finished without meeting its acceptance threshold.

    Attributes:
        best: Best result found before giving up (may be None)
        residual: Residual or infidelity of ``best``
    """

    def __init__(self, message: str, *, best: Any = None, residual: float | None = None):
        super().__init__(message)
        self.best = best
        self.residual = residual


class VerificationError(WeylSteerError):
    """Simulation of a designed program disagrees with its target."""

    def __init__(self, message: str, *, fidelity: float | None = None, residual: float | None = None):
        super().__init__(message)
        self.fidelity = fidelity
        self.residual = residual


class ConfigError(WeylSteerError):
    """A run configuration is malformed or references missing files."""
