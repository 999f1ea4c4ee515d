# -*- coding: utf-8 -*-
"""
Диспетчер команд WeylSteer.

run(config) выполняет одну RunConfig, пишет отчёт (JSON, CSV или строку
текста) и возвращает код завершения: 0 успех, 1 ошибка конфигурации или
контракта, 2 решатель не сошёлся, 3 самопроверка не пройдена.
"""

from __future__ import annotations

import json
import math
import sys
from dataclasses import dataclass, field
from typing import Callable, TextIO

import numpy as np

from .constants import (
    EXIT_CONFIG,
    EXIT_OK,
    EXIT_SOLVER,
    EXIT_VERIFICATION,
    PHYSICS_TOL,
    SCHEDULE_FIDELITY,
    TRAJECTORY_CHUNK,
    MAX_WORKERS,
    TRAJECTORY_CSV_HEADER,
    YY_MIN_FIELD,
)
from .core.bangbang import HamiltonianPair, max_switches, synthesize_bangbang
from .core.errors import ConfigError, ContractViolation, SolverError, VerificationError, WeylSteerError
from .core.localization import translate_runtime
from .core.pulse1q import (
    PulseProgram1Q,
    design_resonant_perpendicular,
    design_resonant_rotframe,
    design_tilted,
    lattice_residual,
    schedule_simultaneous,
)
from .core.qmath import gate_fidelity, pauli_vector
from .core.run_config import RunConfig, resolve_euler, resolve_matrix, resolve_targets, resolve_weyl
from .core.selfcheck import run_selfcheck
from .core.steer2q import (
    HamiltonianSpec,
    SteeringPlan,
    WeylTrajectory,
    plan_isotropic_equal,
    plan_isotropic_ratio,
    plan_nonlocal_polyline,
    plan_weak_cnot,
    solve_yy_gate,
    verify_plan,
)
from .core.weyl import invariants_from_unitary, is_locally_equivalent, weyl_coordinates
from .utils import atomic_write_text, debug, format_number, format_row
from .workers.trajectory_worker import compute_trajectory

DESIGN_FIDELITY = 1.0 - PHYSICS_TOL
STRATEGIES_2Q = ('isotropic_equal', 'isotropic_ratio', 'yy', 'weak_cnot', 'polyline')
DESIGNERS_1Q = ('perpendicular', 'rotframe', 'tilted')

_DEFAULT_FORMATS = {
    'traj': 'csv',
    'invariants': 'text',
    'weyl': 'text',
    'equiv': 'text',
}

_MISSING = object()


def _t(key: str) -> str:
    return translate_runtime(key, key)


def _fmt(key: str, **kwargs) -> str:
    text = _t(key)
    try:
        return text.format(**kwargs)
    except Exception:
        return text


@dataclass
class CommandResult:
    """Report of one command plus its optional text/CSV renderings.

    failure is set when the command finished but its self-verification did not pass.
    """
    report: dict
    text: str | None = None
    csv: str | None = None
    failure: str | None = None
    extra: dict = field(default_factory=dict)


# ===== Преобразование в JSON =====

def jsonable(value):
    """Numbers rounded to 12 significant digits; complex → [re, im]; arrays → lists."""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return jsonable(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (complex, np.complexfloating)):
        return [jsonable(float(value.real)), jsonable(float(value.imag))]
    if isinstance(value, (float, np.floating)):
        x = float(value)
        return x if not math.isfinite(x) else float(format_number(x))
    return value


def _point(p) -> list[float]:
    return [float(c) for c in p]


# ===== Разбор параметров =====

def _number(section: dict | None, key: str, default=_MISSING, name: str = '') -> float:
    value = (section or {}).get(key, default)
    if value is _MISSING:
        raise ConfigError(_fmt('error.cli.missing_value', key=key, section=name or 'options'))
    try:
        x = float(value)
    except (TypeError, ValueError):
        raise ConfigError(_fmt('error.cli.bad_number', key=key, value=value))
    if not math.isfinite(x):
        raise ConfigError(_fmt('error.cli.bad_number', key=key, value=value))
    return x


def _integer(section: dict | None, key: str, default: int) -> int:
    x = _number(section, key, default)
    if x != int(x):
        raise ConfigError(_fmt('error.cli.bad_integer', key=key, value=x))
    return int(x)


def _vector3(value, key: str) -> list[float]:
    if isinstance(value, (int, float)):
        raise ConfigError(_fmt('error.cli.bad_vector', key=key, value=value))
    try:
        v = [float(c) for c in value]
    except (TypeError, ValueError):
        raise ConfigError(_fmt('error.cli.bad_vector', key=key, value=value))
    if len(v) != 3:
        raise ConfigError(_fmt('error.cli.bad_vector', key=key, value=value))
    return v


def _coupling(value, key: str = 'J'):
    """Scalar, diagonal triple, or 3×3 matrix."""
    if isinstance(value, (int, float)):
        return float(value)
    try:
        arr = np.asarray(value, dtype=float)
    except (TypeError, ValueError):
        raise ConfigError(_fmt('error.cli.bad_vector', key=key, value=value))
    if arr.shape not in ((3,), (3, 3)):
        raise ConfigError(_fmt('error.cli.bad_vector', key=key, value=value))
    return arr


def _operator(value, config: RunConfig, key: str) -> np.ndarray:
    """A Hamiltonian given as Pauli coefficients [x, y, z] or as any matrix target."""
    if isinstance(value, (list, tuple)) and len(value) == 3 and all(isinstance(c, (int, float)) for c in value):
        return pauli_vector(value)
    if value is None:
        raise ConfigError(_fmt('error.cli.missing_value', key=key, section='pair'))
    return resolve_matrix(value, config)


def _hamiltonian(config: RunConfig) -> HamiltonianSpec:
    h = config.require('hamiltonian')
    if 'J' not in h:
        raise ConfigError(_fmt('error.cli.missing_value', key='J', section='hamiltonian'))
    J = _coupling(h['J'])
    if isinstance(J, float):
        J = np.diag([J, J, J])
    g1 = _vector3(h.get('g1', [0.0, 0.0, 0.0]), 'g1')
    g2 = _vector3(h.get('g2', [0.0, 0.0, 0.0]), 'g2')
    return HamiltonianSpec(g1, g2, J)


# ===== Одиночный кубит =====

def _program_report(program: PulseProgram1Q) -> dict:
    return {
        'model': program.model,
        'segments': [{'kind': s.kind, 'duration': s.duration, 'parameters': dict(s.parameters)}
                     for s in program.segments],
        'durations': {'t_z': program.t_z, 't_f': program.t_f, 'total': program.total_time},
        'parameters': {
            'omega0': program.drive.omega0,
            'A': program.drive.A,
            'omega': program.drive.omega,
            'delta': program.drive.delta,
            'zeta': program.drive.zeta,
            'lattice': dict(program.lattice),
            'global_phase': program.global_phase,
        },
    }


def _cmd_design1q(config: RunConfig) -> CommandResult:
    target = resolve_euler(resolve_targets(config, 1)[0], config)
    drive = config.require('field')
    omega0 = _number(drive, 'omega0', name='field')
    A = _number(drive, 'A', name='field')
    omega = drive.get('omega')
    omega = None if omega is None else _number(drive, 'omega', name='field')
    strategy = config.strategy or 'perpendicular'
    if strategy == 'perpendicular':
        program = design_resonant_perpendicular(target, omega0, A, omega)
    elif strategy == 'rotframe':
        program = design_resonant_rotframe(target, omega0, A, omega)
    elif strategy == 'tilted':
        program = design_tilted(target, omega0, A, _number(drive, 'zeta', name='field'), omega)
    else:
        raise ConfigError(_fmt('error.cli.bad_strategy', strategy=strategy, allowed=', '.join(DESIGNERS_1Q)))
    report = _program_report(program)
    fidelity = program.fidelity()
    report.update({
        'target': {'theta': target.theta, 'phi': target.phi, 'gamma': target.gamma},
        'lattice_residual': lattice_residual(program),
        'fidelity': fidelity,
        'verified': fidelity >= DESIGN_FIDELITY,
    })
    if config.option('exact', False):
        steps = config.option('steps')
        exact = program.simulate_exact(None if steps is None else _integer(config.options, 'steps', 0))
        report['exact_fidelity'] = gate_fidelity(exact, program.simulate())
    failure = None if report['verified'] else _fmt('error.cli.fidelity_below', fidelity=fidelity,
                                                   threshold=DESIGN_FIDELITY)
    return CommandResult(report=report, failure=failure)


def _cmd_schedule2local(config: RunConfig) -> CommandResult:
    first, second = (resolve_euler(t, config) for t in resolve_targets(config, 2))
    drive = config.require('field')
    schedule = schedule_simultaneous(
        first, second,
        _number(drive, 'omega0_1', name='field'),
        _number(drive, 'omega0_2', name='field'),
        _number(drive, 'A_max', name='field'),
        frame=str(config.option('frame', 'lab')),
        rng=config.rng(),
    )
    fidelity = min(schedule.fidelity_first, schedule.fidelity_second)
    report = {
        'programs': [_program_report(schedule.first), _program_report(schedule.second)],
        'durations': {'total': schedule.total_time},
        'parameters': {'frame': str(config.option('frame', 'lab')), 'evaluations': schedule.evaluations,
                       'seed': config.resolved_seed()},
        'fidelity_first': schedule.fidelity_first,
        'fidelity_second': schedule.fidelity_second,
        'fidelity': fidelity,
        'verified': fidelity >= SCHEDULE_FIDELITY,
    }
    failure = None if report['verified'] else _fmt('error.cli.fidelity_below', fidelity=fidelity,
                                                   threshold=SCHEDULE_FIDELITY)
    return CommandResult(report=report, failure=failure)


def _cmd_bangbang(config: RunConfig) -> CommandResult:
    U = resolve_matrix(resolve_targets(config, 1)[0], config)
    spec = config.require('pair')
    if 'H1' in spec or 'H2' in spec:
        pair = HamiltonianPair(_operator(spec.get('H1'), config, 'H1'), _operator(spec.get('H2'), config, 'H2'))
    else:
        pair = HamiltonianPair.standard(_number(spec, 'a', name='pair'), _number(spec, 'b', name='pair'),
                                        _number(spec, 'alpha', name='pair'))
    sequence = synthesize_bangbang(U, pair, closing_turns=_integer(config.options, 'closing_turns', 1),
                                   rng=config.rng())
    fidelity = gate_fidelity(sequence.unitary(), U)
    std = sequence.standardized
    report = {
        'segments': sequence.segments,
        'switches': sequence.switches,
        'durations': list(sequence.durations),
        'trailing_z': sequence.trailing_z,
        'total_time': sequence.total_time,
        'parameters': {
            'a': std.a, 'b': std.b, 'alpha': std.alpha, 'gamma': std.gamma,
            'max_switches': max_switches(std.alpha),
            'global_phase': sequence.global_phase,
        },
        'fidelity': fidelity,
        'verified': fidelity >= DESIGN_FIDELITY,
    }
    failure = None if report['verified'] else _fmt('error.cli.fidelity_below', fidelity=fidelity,
                                                   threshold=DESIGN_FIDELITY)
    return CommandResult(report=report, failure=failure)


# ===== Инварианты =====

def _cmd_invariants(config: RunConfig) -> CommandResult:
    triple = invariants_from_unitary(resolve_matrix(resolve_targets(config, 1)[0], config))
    makhlin = triple.makhlin_form
    report = {
        'G1_re': makhlin[0], 'G1_im': makhlin[1], 'G2': makhlin[2],
        'chamber_form': list(triple.chamber_form),
    }
    return CommandResult(
        report=report,
        text=format_row(makhlin) + '\n',
        csv='G1_re,G1_im,G2\n' + format_row(makhlin) + '\n',
    )


def _cmd_weyl(config: RunConfig) -> CommandResult:
    point = weyl_coordinates(resolve_matrix(resolve_targets(config, 1)[0], config))
    report = {'c1': point.c1, 'c2': point.c2, 'c3': point.c3, 'in_chamber': point.in_chamber()}
    return CommandResult(report=report, text=format_row(point) + '\n', csv='c1,c2,c3\n' + format_row(point) + '\n')


def _cmd_equiv(config: RunConfig) -> CommandResult:
    U, V = (resolve_matrix(t, config) for t in resolve_targets(config, 2))
    tol = _number(config.options, 'tolerance', PHYSICS_TOL)
    first, second = invariants_from_unitary(U), invariants_from_unitary(V)
    residual = float(np.max(np.abs(np.asarray(first.makhlin_form) - np.asarray(second.makhlin_form))))
    equivalent = is_locally_equivalent(U, V, tol)
    report = {
        'equivalent': equivalent,
        'residual': residual,
        'invariants': [list(first.makhlin_form), list(second.makhlin_form)],
        'weyl': [_point(weyl_coordinates(U)), _point(weyl_coordinates(V))],
    }
    return CommandResult(report=report, text=('true' if equivalent else 'false') + '\n')


# ===== Двухкубитные планы =====

def build_plan(config: RunConfig) -> SteeringPlan:
    strategy = config.strategy
    h = config.hamiltonian or {}
    if strategy == 'isotropic_equal':
        J = _number(h, 'J', name='hamiltonian')
        return plan_isotropic_equal(_vector3(h.get('g', h.get('g1', [0.0, 0.0, 0.0])), 'g'), J)
    if strategy == 'isotropic_ratio':
        return plan_isotropic_ratio(
            _vector3(h.get('g2'), 'g2'),
            _number(h, 'J', name='hamiltonian'),
            _integer(config.options, 'm', 1),
            root=str(config.option('root', 'below')),
        )
    if strategy == 'yy':
        target = resolve_targets(config, 1)[0]
        if not isinstance(target, str):
            raise ConfigError(_fmt('error.cli.yy_target', target=target))
        return solve_yy_gate(target, _number(h, 'J', 1.0), _number(config.options, 'min_field', YY_MIN_FIELD))
    if strategy == 'weak_cnot':
        J = _coupling(h.get('J', [0.0, 0.0, 0.2]))
        if isinstance(J, float) or np.asarray(J).shape != (3,):
            raise ConfigError(_fmt('error.cli.bad_vector', key='J', value=h.get('J')))
        return plan_weak_cnot(J, m=_integer(config.options, 'm', 3))
    if strategy == 'polyline':
        J = _coupling(h.get('J'))
        if isinstance(J, float) or np.asarray(J).shape != (3,):
            raise ConfigError(_fmt('error.cli.bad_vector', key='J', value=h.get('J')))
        return plan_nonlocal_polyline(resolve_weyl(resolve_targets(config, 1)[0], config), J)
    raise ConfigError(_fmt('error.cli.bad_strategy', strategy=strategy, allowed=', '.join(STRATEGIES_2Q)))


def _segment_report(segment) -> dict:
    if segment.kind == 'local':
        return {'kind': 'local', 'gate': np.asarray(segment.gate)}
    return {'kind': 'evolve', 'duration': segment.duration, 'hamiltonian': segment.hamiltonian.as_dict()}


def _cmd_steer2q(config: RunConfig) -> CommandResult:
    plan = build_plan(config)
    tol = config.option('tolerance')
    check = verify_plan(plan, tol=None if tol is None else _number(config.options, 'tolerance'),
                        raise_on_failure=False)
    report = {
        'strategy': plan.strategy,
        'sign': plan.sign,
        'segments': [_segment_report(s) for s in plan.segments],
        'durations': [s.duration for s in plan.segments if s.kind == 'evolve'],
        'coupling_time': plan.coupling_time,
        'parameters': dict(plan.parameters),
        'target_class': _point(plan.target_class),
        'predicted_endpoint': _point(plan.predicted_endpoint),
        'simulated_endpoint': _point(check.endpoint),
        'invariant_residual': check.invariant_residual,
        'fidelity': check.fidelity,
        'verified': check.passed,
    }
    failure = None if check.passed else _fmt('error.steer.verification_failed', strategy=plan.strategy,
                                             residual=check.invariant_residual)
    return CommandResult(report=report, failure=failure)


def _trajectory_csv(trajectory: WeylTrajectory) -> str:
    lines = [','.join(TRAJECTORY_CSV_HEADER)]
    lines.extend(format_row(row) for row in trajectory.rows())
    return '\n'.join(lines) + '\n'


def _cmd_traj(config: RunConfig) -> CommandResult:
    if config.strategy:
        plan = build_plan(config)
        trajectory = plan.simulate(_integer(config.options, 'samples_per_segment', 64))
        source = {'strategy': plan.strategy, 'parameters': dict(plan.parameters)}
    else:
        H = _hamiltonian(config)
        if 't_grid' in config.options:
            grid = [float(t) for t in config.options['t_grid']]
        else:
            t_max = _number(config.options, 't_max')
            samples = _integer(config.options, 'samples', 201)
            if samples < 2 or t_max <= 0:
                raise ConfigError(_fmt('error.cli.bad_grid', t_max=t_max, samples=samples))
            grid = np.linspace(0.0, t_max, samples)
        trajectory = compute_trajectory(
            H, grid, _integer(config.options, 'sign', 1),
            chunk_size=_integer(config.options, 'chunk', TRAJECTORY_CHUNK),
            max_workers=_integer(config.options, 'workers', MAX_WORKERS),
        )
        source = {'hamiltonian': H.as_dict()}
    end = trajectory.endpoint
    report = {
        'samples': len(trajectory),
        'endpoint': _point(end),
        'endpoint_over_pi': [c / math.pi for c in end],
        'source': source,
        'rows': [list(r) for r in trajectory.rows()],
    }
    return CommandResult(report=report, csv=_trajectory_csv(trajectory))


def _cmd_validate(config: RunConfig) -> CommandResult:
    names = config.option('checks')
    results = run_selfcheck(None if names is None else list(names))
    failed = [r.name for r in results if not r.passed]
    report = {'checks': [r.as_dict() for r in results], 'passed': not failed}
    text = ''.join(f"{'ok  ' if r.passed else 'FAIL'} {r.name}: {r.detail}\n" for r in results)
    failure = _fmt('error.cli.selfcheck_failed', checks=', '.join(failed)) if failed else None
    return CommandResult(report=report, text=text, failure=failure)


COMMAND_HANDLERS: dict[str, Callable[[RunConfig], CommandResult]] = {
    'design1q': _cmd_design1q,
    'schedule2local': _cmd_schedule2local,
    'bangbang': _cmd_bangbang,
    'invariants': _cmd_invariants,
    'weyl': _cmd_weyl,
    'equiv': _cmd_equiv,
    'traj': _cmd_traj,
    'steer2q': _cmd_steer2q,
    'validate': _cmd_validate,
}


# ===== Запуск =====

def render(config: RunConfig, result: CommandResult) -> str:
    fmt = config.output_format or _DEFAULT_FORMATS.get(config.command, 'json')
    if fmt == 'csv' and result.csv is not None:
        return result.csv
    if fmt == 'text' and result.text is not None:
        return result.text
    if fmt != 'json':
        debug(_fmt('log.cli.format_fallback', command=config.command, format=fmt))
    return json.dumps(jsonable(result.report), indent=2, ensure_ascii=False) + '\n'


def execute(config: RunConfig) -> CommandResult:
    """Dispatch without exit-code mapping; errors propagate."""
    handler = COMMAND_HANDLERS.get(config.command)
    if handler is None:
        raise ConfigError(_fmt('error.config.bad_command', command=config.command,
                               allowed=', '.join(COMMAND_HANDLERS)))
    debug(_fmt('log.cli.command', command=config.command, seed=config.resolved_seed()))
    return handler(config)


def run(config: RunConfig, stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    """Execute config, write its report and map the outcome to an exit status."""
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    try:
        result = execute(config)
        payload = render(config, result)
        if config.output_path:
            path = atomic_write_text(config.output_path, payload)
            debug(_fmt('log.cli.written', path=path))
        else:
            stdout.write(payload)
    except (ConfigError, ContractViolation) as e:
        return _report_error(stderr, 'config', e, EXIT_CONFIG)
    except SolverError as e:
        return _report_error(stderr, 'solver', e, EXIT_SOLVER)
    except VerificationError as e:
        return _report_error(stderr, 'verification', e, EXIT_VERIFICATION)
    except WeylSteerError as e:
        return _report_error(stderr, 'config', e, EXIT_CONFIG)
    except OSError as e:
        return _report_error(stderr, 'config', e, EXIT_CONFIG)
    if result.failure:
        return _report_error(stderr, 'verification', result.failure, EXIT_VERIFICATION)
    return EXIT_OK


def _report_error(stderr: TextIO, kind: str, error, code: int) -> int:
    message = _fmt('error.cli.' + kind, error=error)
    debug(message)
    try:
        stderr.write(message + '\n')
    except Exception:
        pass
    return code
