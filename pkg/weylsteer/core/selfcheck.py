# -*- coding: utf-8 -*-
"""
Встроенный набор самопроверок (команда validate).

Каждая проверка возвращает CheckResult и не бросает исключений наружу:
сбой решателя превращается в непройденную проверку с текстом ошибки.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..utils import debug
from .bangbang import HamiltonianPair, synthesize_bangbang
from .bloch import euler_to_unitary, euler_zxz
from .errors import WeylSteerError
from .localization import translate_runtime
from .pulse1q import design_resonant_perpendicular, lattice_residual
from .qmath import gate_fidelity, random_unitary
from .steer2q import plan_isotropic_ratio, plan_weak_cnot, solve_yy_gate, verify_plan
from .weyl import invariants_from_unitary, named_gate, weyl_coordinates

_PUBLISHED_B = (1.6753, 0.0, 3.0 * math.pi / 8.0)
_PUBLISHED_CNOT = (0.9516, 0.9492, 3.2551)
_PUBLISHED_TOL = 1e-3


def _t(key: str) -> str:
    return translate_runtime(key, key)


def _fmt(key: str, **kwargs) -> str:
    text = _t(key)
    try:
        return text.format(**kwargs)
    except Exception:
        return text


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ''

    def as_dict(self) -> dict:
        return {'name': self.name, 'passed': self.passed, 'detail': self.detail}


def check_named_invariants() -> CheckResult:
    cnot = invariants_from_unitary(named_gate('CNOT')).makhlin_form
    b = invariants_from_unitary(named_gate('B')).makhlin_form
    swap = weyl_coordinates(named_gate('SWAP')).as_array()
    err = max(
        float(np.max(np.abs(np.asarray(cnot) - (0.0, 0.0, 1.0)))),
        float(np.max(np.abs(np.asarray(b)))),
        float(np.max(np.abs(swap - math.pi / 2))),
    )
    return CheckResult('named_invariants', err <= 1e-9, f'max error {err:.3e}')


def check_hadamard_bangbang() -> CheckResult:
    pair = HamiltonianPair.standard(1.0, 2.0, math.pi / 6)
    seq = synthesize_bangbang(named_gate('H'), pair)
    F = gate_fidelity(seq.unitary(), named_gate('H'))
    return CheckResult('hadamard_bangbang', F >= 1.0 - 1e-9 and seq.segments == 3,
                       f'segments={seq.segments} fidelity={F:.12f}')


def check_isotropic_ratio() -> CheckResult:
    plan = plan_isotropic_ratio([4.0, 4.0, 4.0], 0.1, 4)
    result = verify_plan(plan, raise_on_failure=False)
    return CheckResult('isotropic_ratio', result.passed, f'residual {result.invariant_residual:.3e}')


def check_yy_b() -> CheckResult:
    plan = solve_yy_gate('B')
    p = plan.parameters
    err = max(abs(p['f1'] - _PUBLISHED_B[0]), abs(p['f2'] - _PUBLISHED_B[1]), abs(p['t'] - _PUBLISHED_B[2]))
    result = verify_plan(plan, raise_on_failure=False)
    return CheckResult('yy_b', result.passed and err <= _PUBLISHED_TOL,
                       f"f1={p['f1']:.5f} f2={p['f2']:.5f} t={p['t']:.5f}")


def check_yy_cnot() -> CheckResult:
    plan = solve_yy_gate('CNOT')
    p = plan.parameters
    err = max(abs(p['f1'] - _PUBLISHED_CNOT[0]), abs(p['f2'] - _PUBLISHED_CNOT[1]), abs(p['t'] - _PUBLISHED_CNOT[2]))
    result = verify_plan(plan, raise_on_failure=False)
    return CheckResult('yy_cnot', result.passed and err <= _PUBLISHED_TOL,
                       f"f1={p['f1']:.5f} f2={p['f2']:.5f} t={p['t']:.5f}")


def check_weak_cnot() -> CheckResult:
    plan = plan_weak_cnot([0.0, 0.0, 0.2])
    result = verify_plan(plan, raise_on_failure=False)
    endpoint = plan.simulate(32).endpoint
    err = abs(endpoint.c1 / math.pi - 0.5)
    return CheckResult('weak_cnot', err <= 5e-4, f'c1/pi={endpoint.c1 / math.pi:.6f} residual '
                                                  f'{result.invariant_residual:.3e}')


def check_pulse_lattice(samples: int = 16, seed: int = 7) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst_f, worst_r = 1.0, 0.0
    for _ in range(samples):
        target = euler_zxz(random_unitary(2, rng))
        program = design_resonant_perpendicular(target, 10.0, 1.0)
        worst_f = min(worst_f, gate_fidelity(program.simulate(), euler_to_unitary(target)))
        worst_r = max(worst_r, lattice_residual(program))
    return CheckResult('pulse_lattice', worst_f >= 1.0 - 1e-9 and worst_r <= 1e-9,
                       f'min fidelity {worst_f:.12f} max lattice residual {worst_r:.3e}')


CHECKS: tuple[tuple[str, Callable[[], CheckResult]], ...] = (
    ('named_invariants', check_named_invariants),
    ('hadamard_bangbang', check_hadamard_bangbang),
    ('isotropic_ratio', check_isotropic_ratio),
    ('yy_b', check_yy_b),
    ('yy_cnot', check_yy_cnot),
    ('weak_cnot', check_weak_cnot),
    ('pulse_lattice', check_pulse_lattice),
)


def run_selfcheck(names=None) -> list[CheckResult]:
    """Run the battery (or the named subset) and report each check."""
    selected = [c for c in CHECKS if names is None or c[0] in names]
    results = []
    for name, check in selected:
        try:
            result = check()
        except (WeylSteerError, ValueError, ArithmeticError) as e:
            result = CheckResult(name, False, f'{type(e).__name__}: {e}')
        debug(_fmt('log.selfcheck.result', name=name, status='ok' if result.passed else 'FAIL', detail=result.detail))
        results.append(result)
    return results
