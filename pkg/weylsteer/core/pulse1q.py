# -*- coding: utf-8 -*-
"""
Closed-form single-qubit pulse designers.

Fields are H = ω0/2·σz + A/2·cos(ωt + δ)·H_c with H_c = cosζ·σz − sinζ·σx
(ζ = π/2 is the perpendicular drive). A program is a free z-evolution of
length t_z followed by the driven segment of length t_f; its propagator is
U(t_f)·e^{-iω0/2·σz·t_z}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterator

import numpy as np
from scipy.optimize import minimize

from ..constants import (
    LATTICE_SEARCH_LIMIT,
    PHYSICS_TOL,
    SCHEDULE_BUDGET,
    SCHEDULE_EXTRA_PERIODS,
    SCHEDULE_FIDELITY,
    SCHEDULE_QUBIT1_AMPLITUDE_SHARE,
    SCHEDULE_RESTARTS,
)
from ..utils import debug
from .bloch import EulerZXZ, euler_to_unitary, rx, rz
from .errors import ContractViolation, SolverError
from .localization import translate_runtime
from .qmath import PAULI_X, PAULI_Z, TimeDependentField, dagger, expm_hermitian, gate_fidelity, propagate_timedep

TWO_PI = 2.0 * math.pi
HALF_PI = 0.5 * math.pi


def _t(key: str) -> str:
    return translate_runtime(key, key)


def _fmt(key: str, **kwargs) -> str:
    text = _t(key)
    try:
        return text.format(**kwargs)
    except Exception:
        return text


@dataclass(frozen=True)
class OscillatingFieldSpec:
    """Drift frequency ω0, drive amplitude A, drive frequency ω (defaults to ω0), phase δ, tilt ζ."""
    omega0: float
    A: float
    omega: float | None = None
    delta: float = 0.0
    zeta: float = HALF_PI

    def __post_init__(self):
        if self.omega is None:
            object.__setattr__(self, 'omega', float(self.omega0))
        values = (self.omega0, self.A, self.omega, self.delta, self.zeta)
        if not all(math.isfinite(float(v)) for v in values):
            raise ContractViolation(_t('error.pulse.not_finite'))
        if self.A < 0:
            raise ContractViolation(_fmt('error.pulse.negative_amplitude', A=self.A))
        if self.omega0 <= 0:
            raise ContractViolation(_fmt('error.pulse.bad_omega0', omega0=self.omega0))

    @property
    def detuning(self) -> float:
        return float(self.omega0) - float(self.omega)

    @property
    def is_resonant(self) -> bool:
        return abs(self.detuning) <= PHYSICS_TOL * max(1.0, abs(self.omega0))


@dataclass(frozen=True)
class PulseSegment:
    kind: str
    duration: float
    parameters: dict = field(default_factory=dict)


@dataclass(frozen=True, eq=False)
class PulseProgram1Q:
    """Free z-evolution followed by one driven segment.

    Attributes:
        segments: (free_z, driven) in chronological order
        drive: Drive that the driven segment uses (δ included)
        model: 'perpendicular', 'rotframe' or 'tilted'; selects the matching closed form
        global_phase: Unit scalar with simulate() = global_phase · target unitary
        lattice: Integers (m1, m2, m3) of the chosen solution
        target: Euler angles the program was designed for
    """
    segments: tuple[PulseSegment, ...]
    drive: OscillatingFieldSpec
    model: str = 'perpendicular'
    global_phase: complex = 1.0 + 0.0j
    lattice: dict = field(default_factory=dict)
    target: EulerZXZ | None = None

    def _duration(self, kind: str) -> float:
        return float(sum(s.duration for s in self.segments if s.kind == kind))

    @property
    def t_f(self) -> float:
        return self._duration('driven')

    @property
    def t_z(self) -> float:
        return self._duration('free_z')

    @property
    def total_time(self) -> float:
        return self.t_f + self.t_z

    def simulate(self) -> np.ndarray:
        if self.model == 'tilted':
            return rwa_propagator_tilted(self.drive, self.t_f, self.t_z)
        if self.model == 'rotframe':
            return rwa_propagator_rotframe(self.drive, self.t_f, self.t_z)
        return rwa_propagator_perp(self.drive, self.t_f, self.t_z)

    def simulate_exact(self, steps: int | None = None) -> np.ndarray:
        """Integrate the lab-frame Hamiltonian instead of using the closed form."""
        drive = exact_field_tilted(self.drive) if self.model == 'tilted' else exact_field_perp(self.drive)
        U = propagate_timedep(drive, self.t_f, steps) @ expm_hermitian(0.5 * self.drive.omega0 * PAULI_Z, self.t_z)
        if self.model == 'rotframe':
            U = rz(-self.drive.omega * self.t_f) @ U
        return U

    def fidelity(self, target=None) -> float:
        if target is None:
            if self.target is None:
                raise ContractViolation(_t('error.pulse.no_target'))
            target = euler_to_unitary(self.target)
        return gate_fidelity(self.simulate(), target)

    def with_extra_free_time(self, extra: float) -> 'PulseProgram1Q':
        segments = tuple(
            replace(s, duration=s.duration + extra) if s.kind == 'free_z' else s
            for s in self.segments
        )
        return replace(self, segments=segments)


def _program(spec: OscillatingFieldSpec, t_f: float, t_z: float, model: str, lattice: dict,
             target: EulerZXZ | None) -> PulseProgram1Q:
    segments = (
        PulseSegment('free_z', float(t_z), {'omega0': spec.omega0}),
        PulseSegment('driven', float(t_f), {'A': spec.A, 'omega': spec.omega, 'delta': spec.delta, 'zeta': spec.zeta}),
    )
    program = PulseProgram1Q(segments=segments, drive=spec, model=model, lattice=dict(lattice), target=target)
    if target is None:
        return program
    U = program.simulate()
    overlap = np.trace(dagger(euler_to_unitary(target)) @ U) / 2.0
    phase = complex(overlap / abs(overlap)) if abs(overlap) > 0 else 1.0 + 0.0j
    return replace(program, global_phase=phase)


def exact_field_perp(spec: OscillatingFieldSpec) -> TimeDependentField:
    """H(t) = ω0/2·σz + A/2·cos(ωt + δ)·σx."""
    A, w, d = float(spec.A), float(spec.omega), float(spec.delta)
    return TimeDependentField(0.5 * spec.omega0 * PAULI_Z, ((lambda ts: 0.5 * A * np.cos(w * ts + d), PAULI_X),))


def exact_field_tilted(spec: OscillatingFieldSpec) -> TimeDependentField:
    """H(t) = ω0/2·σz + A/2·cos(ωt + δ)·(cosζ·σz − sinζ·σx)."""
    A, w, d = float(spec.A), float(spec.omega), float(spec.delta)
    control = math.cos(spec.zeta) * PAULI_Z - math.sin(spec.zeta) * PAULI_X
    return TimeDependentField(0.5 * spec.omega0 * PAULI_Z, ((lambda ts: 0.5 * A * np.cos(w * ts + d), control),))


def rwa_propagator_perp(spec: OscillatingFieldSpec, t_f: float, t_z: float) -> np.ndarray:
    """Rotating-wave propagator of the perpendicular drive, lab frame."""
    middle = expm_hermitian(0.25 * spec.A * PAULI_X + 0.5 * spec.detuning * PAULI_Z, t_f)
    return rz(spec.omega * t_f + spec.delta) @ middle @ rz(spec.omega0 * t_z - spec.delta)


def rwa_propagator_rotframe(spec: OscillatingFieldSpec, t_f: float, t_z: float) -> np.ndarray:
    """Perpendicular propagator seen from the frame rotating with the drive during t_f."""
    return rz(-spec.omega * t_f) @ rwa_propagator_perp(spec, t_f, t_z)


def rwa_propagator_tilted(spec: OscillatingFieldSpec, t_f: float, t_z: float) -> np.ndarray:
    """Rotating-wave propagator of the tilted drive (resonant)."""
    w0, A, d, zeta = float(spec.omega0), float(spec.A), float(spec.delta), float(spec.zeta)
    ripple = A * math.cos(zeta) * (math.sin(w0 * t_f + d) - math.sin(d)) / w0
    return rz(w0 * t_f + d) @ rx(-0.5 * A * math.sin(zeta) * t_f) @ rz(ripple - d + w0 * t_z)


def _check_resonant(spec_omega: float | None, omega0: float, A: float) -> None:
    if A <= 0:
        raise ContractViolation(_fmt('error.pulse.amplitude_required', A=A))
    if omega0 <= 0:
        raise ContractViolation(_fmt('error.pulse.bad_omega0', omega0=omega0))
    if spec_omega is not None and abs(float(spec_omega) - float(omega0)) > PHYSICS_TOL * max(1.0, abs(omega0)):
        raise ContractViolation(_fmt('error.pulse.off_resonance', omega=spec_omega, omega0=omega0))


def _turns(value: float) -> int:
    return int(round(value / TWO_PI))


def design_resonant_perpendicular(target: EulerZXZ, omega0: float, A: float,
                                  omega: float | None = None) -> PulseProgram1Q:
    """Lab-frame resonant design with the shortest total time over the integer lattice.

    For each m2 the driven time is t_f = 2(π − θ + 2πm2)/A; δ then pins m1 and
    t_z takes the smallest nonnegative value, pushed one period when the
    parity m1 + m2 + m3 is odd.
    """
    _check_resonant(omega, omega0, A)
    theta, phi, gamma = target.theta, target.phi, target.gamma
    best = None
    for m2 in range(0, LATTICE_SEARCH_LIMIT + 1):
        t_f = 2.0 * (math.pi - theta + TWO_PI * m2) / A
        if t_f < 0:
            continue
        delta = (phi - HALF_PI - omega0 * t_f) % TWO_PI
        t_z = ((delta + gamma) % TWO_PI) / omega0
        m1 = _turns(omega0 * t_f + delta - (phi - HALF_PI))
        m3 = _turns(omega0 * t_z - delta - gamma)
        if (m1 + m2 + m3) % 2:
            t_z += TWO_PI / omega0
            m3 += 1
        key = (t_f + t_z, t_f)
        if best is None or key < best[0]:
            best = (key, t_f, t_z, delta, {'m1': m1, 'm2': m2, 'm3': m3})
    if best is None:
        raise SolverError(_fmt('error.pulse.no_lattice_solution', limit=LATTICE_SEARCH_LIMIT))
    _key, t_f, t_z, delta, lattice = best
    spec = OscillatingFieldSpec(omega0=omega0, A=A, delta=delta)
    debug(_fmt('log.pulse.designed', model='perpendicular', t_f=t_f, t_z=t_z, delta=delta))
    return _program(spec, t_f, t_z, 'perpendicular', lattice, target)


def design_resonant_rotframe(target: EulerZXZ, omega0: float, A: float,
                             omega: float | None = None) -> PulseProgram1Q:
    """Rotating-frame resonant design: δ = φ − π/2, t_f = 2(π − θ)/A, t_z = ((δ + γ) mod 2π)/ω0."""
    _check_resonant(omega, omega0, A)
    theta, phi, gamma = target.theta, target.phi, target.gamma
    delta = (phi - HALF_PI) % TWO_PI
    t_f = 2.0 * (math.pi - theta) / A
    t_z = ((delta + gamma) % TWO_PI) / omega0
    m1 = _turns(delta - (phi - HALF_PI))
    m3 = _turns(omega0 * t_z - delta - gamma)
    if (m1 + m3) % 2:
        t_z += TWO_PI / omega0
        m3 += 1
    spec = OscillatingFieldSpec(omega0=omega0, A=A, delta=delta)
    debug(_fmt('log.pulse.designed', model='rotframe', t_f=t_f, t_z=t_z, delta=delta))
    return _program(spec, t_f, t_z, 'rotframe', {'m1': m1, 'm2': 0, 'm3': m3}, target)


def design_tilted(target: EulerZXZ, omega0: float, A: float, zeta: float,
                  omega: float | None = None) -> PulseProgram1Q:
    """Resonant design for a drive tilted by ζ from the drift axis."""
    _check_resonant(omega, omega0, A)
    s = math.sin(zeta)
    if abs(s) <= PHYSICS_TOL:
        raise ContractViolation(_fmt('error.pulse.no_transverse_drive', zeta=zeta))
    theta, phi, gamma = target.theta, target.phi, target.gamma
    if s > 0 and theta < math.pi:
        m2 = -1
    else:
        m2 = 0
    t_f = -2.0 * (math.pi - theta + TWO_PI * m2) / (A * s)
    t_f = max(t_f, 0.0)
    delta = (phi - HALF_PI - omega0 * t_f) % TWO_PI
    ripple = A * math.cos(zeta) * (math.sin(omega0 * t_f + delta) - math.sin(delta)) / omega0
    winding = gamma + delta - ripple
    t_z = (winding % TWO_PI) / omega0
    m1 = _turns(omega0 * t_f + delta - (phi - HALF_PI))
    m3 = _turns(ripple - delta + omega0 * t_z - gamma)
    if (m1 + m2 + m3) % 2:
        t_z += TWO_PI / omega0
        m3 += 1
    spec = OscillatingFieldSpec(omega0=omega0, A=A, delta=delta, zeta=zeta)
    debug(_fmt('log.pulse.designed', model='tilted', t_f=t_f, t_z=t_z, delta=delta))
    return _program(spec, t_f, t_z, 'tilted', {'m1': m1, 'm2': m2, 'm3': m3}, target)


def lattice_residual(program: PulseProgram1Q) -> float:
    """Distance of ω0·(t_f + t_z) from the quantized total-time lattice, in radians."""
    if program.target is None:
        raise ContractViolation(_t('error.pulse.no_target'))
    e = program.target
    spec = program.drive
    offset = e.phi + e.gamma - HALF_PI
    if program.model == 'tilted':
        offset += spec.A * math.cos(spec.zeta) / spec.omega0 * (math.cos(e.phi) + math.sin(spec.delta))
    if program.model == 'rotframe':
        offset += spec.omega0 * program.t_f
    value = (spec.omega0 * program.total_time - offset) % TWO_PI
    return min(value, TWO_PI - value)


@dataclass(frozen=True, eq=False)
class SimultaneousSchedule:
    """Two programs of equal total duration; iterates as (first, second)."""
    first: PulseProgram1Q
    second: PulseProgram1Q
    fidelity_first: float
    fidelity_second: float
    evaluations: int = 0

    def __iter__(self) -> Iterator[PulseProgram1Q]:
        yield self.first
        yield self.second

    @property
    def total_time(self) -> float:
        return self.first.total_time


def _second_qubit_program(x: np.ndarray, omega0: float, total: float, model: str) -> PulseProgram1Q:
    A, detuning, delta, t_f = (float(v) for v in x)
    t_f = min(max(t_f, 0.0), total)
    spec = OscillatingFieldSpec(omega0=omega0, A=max(A, 0.0), omega=omega0 - detuning, delta=delta % TWO_PI)
    return _program(spec, t_f, total - t_f, model, {}, None)


def schedule_simultaneous(target1: EulerZXZ, target2: EulerZXZ, omega0_1: float, omega0_2: float,
                          A_max: float, frame: str = 'lab',
                          rng: np.random.Generator | None = None) -> SimultaneousSchedule:
    """Resonant design on qubit 1, detuned numerical fit on qubit 2 at the same total time.

    Qubit 1 uses a share of A_max and fixes the total time T. Qubit 2 searches
    (A, Δ, δ, t_f) with t_z = T − t_f by bounded L-BFGS-B from several starts.
    When the fit misses the threshold, T is extended by whole drift periods of
    qubit 1 and the search repeats.

    Args:
        frame: 'lab' compares lab-frame propagators; 'rotating' compares each
            qubit in the frame of its own drive
    """
    if frame not in ('lab', 'rotating'):
        raise ContractViolation(_fmt('error.pulse.bad_frame', frame=frame))
    if A_max <= 0:
        raise ContractViolation(_fmt('error.pulse.amplitude_required', A=A_max))
    rng = rng if rng is not None else np.random.default_rng()
    model = 'perpendicular' if frame == 'lab' else 'rotframe'
    designer = design_resonant_perpendicular if frame == 'lab' else design_resonant_rotframe
    first = designer(target1, omega0_1, SCHEDULE_QUBIT1_AMPLITUDE_SHARE * A_max)
    U2 = euler_to_unitary(target2)
    evaluations = 0
    best = None
    per_attempt = max(1, SCHEDULE_BUDGET // SCHEDULE_RESTARTS)
    for extension in range(SCHEDULE_EXTRA_PERIODS + 1):
        program1 = first.with_extra_free_time(2.0 * TWO_PI * extension / omega0_1) if extension else first
        total = program1.total_time

        def infidelity(x: np.ndarray) -> float:
            return 1.0 - gate_fidelity(_second_qubit_program(x, omega0_2, total, model).simulate(), U2)

        # idle and resonant guesses first, then random restarts
        guesses = [np.array([0.0, 0.0, 0.0, total if frame == 'rotating' else 0.0])]
        try:
            resonant = designer(target2, omega0_2, A_max)
            guesses.append(np.array([A_max, 0.0, resonant.drive.delta, min(resonant.t_f, total)]))
        except Exception as exc:
            debug(_fmt('log.pulse.schedule_seed_failed', error=exc))
        lower = np.array([0.0, -A_max, 0.0, 0.0])
        upper = np.array([A_max, A_max, TWO_PI, total])
        while len(guesses) < SCHEDULE_RESTARTS:
            guesses.append(lower + rng.random(4) * (upper - lower))
        for x0 in guesses:
            value = infidelity(x0)
            evaluations += 1
            if value > 1.0 - SCHEDULE_FIDELITY and total > 0:
                result = minimize(infidelity, x0, method='L-BFGS-B', bounds=list(zip(lower, upper)),
                                  options={'maxfun': per_attempt, 'ftol': 1e-15, 'gtol': 1e-12})
                evaluations += int(result.nfev)
                x, value = np.asarray(result.x), float(result.fun)
            else:
                x = x0
            if best is None or value < best[0]:
                best = (value, x, program1, total)
            if value <= 1.0 - SCHEDULE_FIDELITY:
                break
        if best[0] <= 1.0 - SCHEDULE_FIDELITY and best[3] == total:
            break
        debug(_fmt('log.pulse.schedule_extend', extension=extension + 1, infidelity=best[0]))
    value, x, program1, total = best
    second = _second_qubit_program(x, omega0_2, total, model)
    second = _program(second.drive, second.t_f, second.t_z, model, {}, target2)
    schedule = SimultaneousSchedule(
        first=program1,
        second=second,
        fidelity_first=program1.fidelity(),
        fidelity_second=second.fidelity(U2),
        evaluations=evaluations,
    )
    if schedule.fidelity_second < SCHEDULE_FIDELITY:
        raise SolverError(
            _fmt('error.pulse.schedule_failed', fidelity=schedule.fidelity_second, threshold=SCHEDULE_FIDELITY),
            best=schedule,
            residual=1.0 - schedule.fidelity_second,
        )
    debug(_fmt('log.pulse.schedule_done', total=total, fidelity=schedule.fidelity_second, evaluations=evaluations))
    return schedule
