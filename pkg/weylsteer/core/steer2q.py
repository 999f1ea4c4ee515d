# -*- coding: utf-8 -*-
"""
Two-qubit steering in the Weyl chamber.

H = g1·σ⃗⊗I + I⊗g2·σ⃗ + Σ J_ab σ_a⊗σ_b. Trajectories map U(t) = e^{-i·sign·H·t}
to chamber points; planners return SteeringPlan objects whose segments are
coupling evolutions and interleaved local gates.

Planners use sign = −1 (U = e^{+iHt}); with canonical_gate = e^{+i/2·c·σσ} a
purely nonlocal diagonal coupling then moves along c = 2t·(Jx, Jy, Jz).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from ..constants import (
    PLAN_TOL,
    POLYLINE_MAX_SEGMENTS,
    STRUCTURAL_TOL,
    WEAK_COUPLING_RATIO,
    YY_FIELD_MAX,
    YY_FIELD_STEP,
    YY_MIN_FIELD,
    YY_SHARED_MISS,
    YY_TIME_MAX,
    YY_TIME_STEP,
)
from ..utils import debug
from .errors import ContractViolation, SolverError, VerificationError
from .localization import translate_runtime
from .qmath import IDENTITY4, PAULI_Z, dagger, expm_hermitian, expm_hermitian_series, gate_fidelity, kron, pauli_vector
from .weyl import (
    InvariantTriple,
    WeylPoint,
    canonical_gate,
    coupling_operator,
    fold_to_chamber,
    invariants_from_unitary,
    lift_rotation,
    makhlin_invariants,
    weyl_coordinates,
)

PLAN_SIGN = -1
_BISECT_ITERATIONS = 60
_WEAK_TOLERANCE = 1e-3
_WEAK_GRID = 4096
_WEAK_EXPANSIONS = 60
_POLYLINE_RESIDUAL = 1e-9
_POLYLINE_DET = 1e-12


def _t(key: str) -> str:
    return translate_runtime(key, key)


def _fmt(key: str, **kwargs) -> str:
    text = _t(key)
    try:
        return text.format(**kwargs)
    except Exception:
        return text


def _vector(v, name: str) -> np.ndarray:
    arr = np.asarray(v, dtype=float).reshape(-1)
    if arr.size != 3 or not np.all(np.isfinite(arr)):
        raise ContractViolation(_fmt('error.steer.bad_vector', name=name, value=v))
    return arr


def _coupling_matrix(J) -> np.ndarray:
    arr = np.asarray(J, dtype=float)
    if arr.shape == (3,):
        arr = np.diag(arr)
    if arr.shape != (3, 3) or not np.all(np.isfinite(arr)):
        raise ContractViolation(_fmt('error.steer.bad_coupling', shape=tuple(arr.shape)))
    return arr


# ===== Типы =====

@dataclass(frozen=True, eq=False)
class HamiltonianSpec:
    """Local fields g1, g2 and coupling J (3×3, or a diagonal triple)."""
    g1: np.ndarray
    g2: np.ndarray
    J: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'g1', _vector(self.g1, 'g1'))
        object.__setattr__(self, 'g2', _vector(self.g2, 'g2'))
        object.__setattr__(self, 'J', _coupling_matrix(self.J))

    @classmethod
    def nonlocal_only(cls, J) -> 'HamiltonianSpec':
        return cls(np.zeros(3), np.zeros(3), J)

    @property
    def is_diagonal(self) -> bool:
        return bool(np.all(self.J == np.diag(np.diag(self.J))))

    @property
    def coupling_diagonal(self) -> np.ndarray:
        return np.diag(self.J).copy()

    def matrix(self) -> np.ndarray:
        local = kron(pauli_vector(self.g1), np.eye(2)) + kron(np.eye(2), pauli_vector(self.g2))
        return local + coupling_operator(self.J)

    def as_dict(self) -> dict:
        return {'g1': self.g1.tolist(), 'g2': self.g2.tolist(), 'J': self.J.tolist()}


@dataclass(frozen=True)
class TrajectorySample:
    t: float
    point: WeylPoint
    invariants: InvariantTriple


@dataclass(frozen=True)
class WeylTrajectory:
    """Ordered samples of a chamber trajectory; sign = +1 means U = e^{-iHt}."""
    samples: tuple[TrajectorySample, ...]
    sign: int = 1

    def __len__(self) -> int:
        return len(self.samples)

    def __iter__(self) -> Iterator[TrajectorySample]:
        return iter(self.samples)

    @property
    def times(self) -> np.ndarray:
        return np.array([s.t for s in self.samples], dtype=float)

    @property
    def points(self) -> np.ndarray:
        return np.array([s.point.as_array() for s in self.samples], dtype=float).reshape(-1, 3)

    @property
    def endpoint(self) -> WeylPoint:
        return self.samples[-1].point

    def rows(self) -> list[tuple[float, ...]]:
        """(t, c1, c2, c3, Re G1, Im G1, G2) per sample."""
        return [(s.t, s.point.c1, s.point.c2, s.point.c3) + tuple(s.invariants.makhlin_form) for s in self.samples]


@dataclass(frozen=True, eq=False)
class PlanSegment:
    """Either an evolution under hamiltonian for duration, or an instantaneous local gate."""
    kind: str
    duration: float = 0.0
    hamiltonian: HamiltonianSpec | None = None
    gate: np.ndarray | None = None

    def unitary(self, sign: int = PLAN_SIGN) -> np.ndarray:
        if self.kind == 'local':
            return np.asarray(self.gate, dtype=complex)
        return expm_hermitian(self.hamiltonian.matrix(), sign * self.duration)


@dataclass(frozen=True, eq=False)
class SteeringPlan:
    """Chronological segments steering the identity to target_class.

    Attributes:
        segments: Evolutions and interleaved local gates
        predicted_endpoint: Chamber point the construction predicts
        target_class: Chamber point of the requested gate class
        strategy: Planner name
        sign: Propagator convention of the evolutions (−1: e^{+iHt})
        tolerance: Invariant tolerance the plan promises
        parameters: Strategy parameters (λ, ω, f1, f2, m, ...)
    """
    segments: tuple[PlanSegment, ...]
    predicted_endpoint: WeylPoint
    target_class: WeylPoint
    strategy: str
    sign: int = PLAN_SIGN
    tolerance: float = PLAN_TOL
    parameters: dict = field(default_factory=dict)

    @property
    def coupling_time(self) -> float:
        return float(sum(s.duration for s in self.segments if s.kind == 'evolve'))

    @property
    def evolutions(self) -> int:
        return sum(1 for s in self.segments if s.kind == 'evolve')

    def unitary(self) -> np.ndarray:
        U = np.eye(4, dtype=complex)
        for segment in self.segments:
            U = segment.unitary(self.sign) @ U
        return U

    def endpoint(self) -> WeylPoint:
        return weyl_coordinates(self.unitary())

    def simulate(self, samples_per_segment: int = 64) -> WeylTrajectory:
        """Chamber trajectory over the whole plan; time counts coupling time only."""
        if samples_per_segment < 1:
            raise ContractViolation(_fmt('error.steer.bad_samples', samples=samples_per_segment))
        prefix = np.eye(4, dtype=complex)
        elapsed = 0.0
        samples = [_sample(0.0, prefix)]
        for segment in self.segments:
            if segment.kind == 'local':
                prefix = segment.unitary(self.sign) @ prefix
                continue
            ts = np.linspace(0.0, segment.duration, samples_per_segment + 1)[1:]
            Us = expm_hermitian_series(segment.hamiltonian.matrix(), self.sign * ts)
            for t, U in zip(ts, Us):
                samples.append(_sample(elapsed + float(t), U @ prefix))
            prefix = Us[-1] @ prefix
            elapsed += segment.duration
        return WeylTrajectory(samples=tuple(samples), sign=self.sign)


@dataclass(frozen=True)
class PlanVerification:
    fidelity: float
    invariant_residual: float
    endpoint: WeylPoint
    passed: bool


def _sample(t: float, U: np.ndarray) -> TrajectorySample:
    return TrajectorySample(t=float(t), point=weyl_coordinates(U), invariants=invariants_from_unitary(U))


def verify_plan(plan: SteeringPlan, tol: float | None = None, raise_on_failure: bool = True) -> PlanVerification:
    """Simulate the plan and compare its endpoint class with the target class."""
    tol = plan.tolerance if tol is None else float(tol)
    U = plan.unitary()
    reference = canonical_gate(plan.target_class)
    residual = float(np.max(np.abs(np.asarray(makhlin_invariants(U)) - np.asarray(makhlin_invariants(reference)))))
    endpoint = weyl_coordinates(U)
    fidelity = gate_fidelity(canonical_gate(endpoint), reference)
    result = PlanVerification(fidelity=fidelity, invariant_residual=residual, endpoint=endpoint, passed=residual <= tol)
    debug(_fmt('log.steer.verified', strategy=plan.strategy, residual=residual, fidelity=fidelity))
    if raise_on_failure and not result.passed:
        raise VerificationError(_fmt('error.steer.verification_failed', strategy=plan.strategy, residual=residual),
                                fidelity=fidelity, residual=residual)
    return result


# ===== Траектории =====

def check_time_grid(t_grid: Sequence[float], sign: int = 1) -> np.ndarray:
    ts = np.asarray(t_grid, dtype=float).reshape(-1)
    if ts.size == 0 or not np.all(np.isfinite(ts)):
        raise ContractViolation(_t('error.steer.empty_grid'))
    if ts.size > 1 and np.any(np.diff(ts) <= 0):
        raise ContractViolation(_t('error.steer.grid_not_increasing'))
    if sign not in (1, -1):
        raise ContractViolation(_fmt('error.steer.bad_sign', sign=sign))
    return ts


def weyl_trajectory(H: HamiltonianSpec, t_grid: Sequence[float], sign: int = 1) -> WeylTrajectory:
    """Sample U(t) = e^{-i·sign·H·t} on t_grid and map each U(t) into the chamber."""
    ts = check_time_grid(t_grid, sign)
    Us = expm_hermitian_series(H.matrix(), sign * ts)
    return WeylTrajectory(samples=tuple(_sample(t, U) for t, U in zip(ts, Us)), sign=sign)


def _evolve(H: HamiltonianSpec, duration: float) -> PlanSegment:
    return PlanSegment(kind='evolve', duration=float(duration), hamiltonian=H)


def _local(gate: np.ndarray) -> PlanSegment:
    return PlanSegment(kind='local', gate=np.asarray(gate, dtype=complex))


# ===== Изотропная связь =====

def plan_isotropic_equal(g, J: float) -> SteeringPlan:
    """Equal local fields commute with JS: two π/(8J) evolutions around a σz on qubit 1 reach CNOT."""
    g = _vector(g, 'g')
    J = float(J)
    if not math.isfinite(J) or J == 0.0:
        raise ContractViolation(_t('error.steer.zero_coupling'))
    H = HamiltonianSpec(g, g, np.diag([J, J, J]))
    half = math.pi / (8.0 * abs(J))
    segments = (_evolve(H, half), _local(kron(PAULI_Z, np.eye(2))), _evolve(H, half))
    midpoint = fold_to_chamber(-PLAN_SIGN * 2.0 * half * J * np.ones(3))
    return SteeringPlan(
        segments=segments,
        predicted_endpoint=WeylPoint(math.pi / 2, 0.0, 0.0),
        target_class=WeylPoint(math.pi / 2, 0.0, 0.0),
        strategy='isotropic_equal',
        parameters={'J': J, 'segment_time': half, 'midpoint': midpoint.as_array().tolist()},
    )


def plan_isotropic_ratio(g2, J: float, m: int, root: str = 'below') -> SteeringPlan:
    """g1 = λ·g2 with (λ − 1)²‖g2‖² = (16m² − 4)J²; reaches CNOT at t = π/(4J) after m oscillations."""
    g2 = _vector(g2, 'g2')
    J = float(J)
    norm = float(np.linalg.norm(g2))
    if norm == 0.0:
        raise ContractViolation(_t('error.steer.zero_field'))
    if not math.isfinite(J) or J <= 0.0:
        raise ContractViolation(_t('error.steer.zero_coupling'))
    if int(m) != m or m < 1:
        raise ContractViolation(_fmt('error.steer.bad_m', m=m))
    if root not in ('below', 'above'):
        raise ContractViolation(_fmt('error.steer.bad_root', root=root))
    m = int(m)
    offset = math.sqrt(16.0 * m * m - 4.0) * J / norm
    lam = 1.0 - offset if root == 'below' else 1.0 + offset
    omega = math.sqrt((lam - 1.0) ** 2 * norm * norm + 4.0 * J * J)
    t = math.pi / (4.0 * J)
    H = HamiltonianSpec(lam * g2, g2, np.diag([J, J, J]))
    debug(_fmt('log.steer.ratio', lam=lam, omega=omega, t=t))
    return SteeringPlan(
        segments=(_evolve(H, t),),
        predicted_endpoint=WeylPoint(math.pi / 2, 0.0, 0.0),
        target_class=WeylPoint(math.pi / 2, 0.0, 0.0),
        strategy='isotropic_ratio',
        parameters={'lambda': lam, 'omega': omega, 't': t, 'm': m, 'J': J},
    )


def isotropic_ratio_curve(J: float, lam: float, g2, t) -> np.ndarray:
    """Closed-form trajectory [2Jt, β, β], β = |arcsin(2J/ω·sin ωt)|, of the ratio strategy (sign −1)."""
    g2 = _vector(g2, 'g2')
    ts = np.asarray(t, dtype=float).reshape(-1)
    omega = math.sqrt((lam - 1.0) ** 2 * float(np.dot(g2, g2)) + 4.0 * J * J)
    beta = np.abs(np.arcsin(np.clip(2.0 * J / omega * np.sin(omega * ts), -1.0, 1.0)))
    return np.stack([2.0 * J * ts, beta, beta], axis=1)


# ===== YY-связь =====

def yy_invariants(f1: float, f2: float, J: float, t: float) -> InvariantTriple:
    """Closed-form invariants of e^{+iH_yy t}; Im G1 ≡ 0 and the trajectory stays on c3 = 0."""
    f1s, f2s, J2 = f1 * f1, f2 * f2, J * J
    x = math.cos(math.sqrt(f2s + J2) * t)
    y = math.cos(math.sqrt(f1s + J2) * t)
    denom = (f1s + J2) * (f2s + J2)
    if denom == 0.0:
        return InvariantTriple(chamber_form=(4.0, 0.0, 3.0), makhlin_form=(1.0, 0.0, 3.0))
    root = ((f1s + J2) * J2 * x * x + (f2s + J2) * J2 * y * y + f1s * f2s - J2 * J2) / denom
    g3 = (3 * f1s * f2s - J2 * (f1s + f2s) + J2 * J2 * (8 * x * x * y * y + 3)
          + 4 * J2 * y * y * (f2s - J2) + 4 * J2 * x * x * (f1s - J2)) / denom
    return InvariantTriple(chamber_form=(4.0 * root, 0.0, g3), makhlin_form=(root * root, 0.0, g3))


def yy_hamiltonian(f1: float, f2: float, J: float = 1.0, tilt1: float = 0.0, tilt2: float = 0.0) -> HamiltonianSpec:
    """H = g1·σ⃗⊗I + I⊗g2·σ⃗ + J·σy⊗σy with ‖g1‖ + ‖g2‖ = f1 and ‖g1‖ − ‖g2‖ = f2.

    tilt1/tilt2 rotate each field inside the xz plane, which commutes with σy⊗σy.
    """
    n1 = 0.5 * (f1 + f2)
    n2 = 0.5 * (f1 - f2)
    g1 = n1 * np.array([math.cos(tilt1), 0.0, math.sin(tilt1)])
    g2 = n2 * np.array([math.cos(tilt2), 0.0, math.sin(tilt2)])
    return HamiltonianSpec(g1, g2, np.diag([0.0, J, 0.0]))


def _yy_conditions(target: str) -> list[tuple]:
    """Pairs (h1, h2), each h(f, t) vanishing on the target's condition."""
    def cnot(f, t):
        return np.cos(2.0 * np.sqrt(f * f + 1.0) * t) + f * f

    if target == 'CNOT':
        return [(cnot, cnot)]
    half = math.sqrt(2.0) / 2.0
    pairs = []
    for s in (1.0, -1.0):
        def first(f, t, s=s):
            return np.cos(2.0 * np.sqrt(f * f + 1.0) * t) + f * f - s * half * (f * f + 1.0)

        def second(f, t, s=s):
            return np.cos(2.0 * np.sqrt(f * f + 1.0) * t) + f * f + s * half * (f * f + 1.0)
        pairs.append((first, second))
    return pairs


_F_GRID = np.arange(0.0, YY_FIELD_MAX + 0.5 * YY_FIELD_STEP, YY_FIELD_STEP)


def _roots(h, t: float) -> list[float]:
    values = h(_F_GRID, t)
    roots = [float(f) for f in _F_GRID[values == 0.0]]
    crossings = np.nonzero(values[:-1] * values[1:] < 0)[0]
    for i in crossings:
        roots.append(brentq(lambda f: float(h(f, t)), _F_GRID[i], _F_GRID[i + 1], xtol=1e-14))
    return roots


def _yy_pick(pair, t: float, min_field: float) -> tuple[float, float] | None:
    """Roots f1 of the first condition and f2 of the second with f1 − f2 ≥ 2·min_field."""
    roots1 = _roots(pair[0], t)
    if not roots1:
        return None
    roots2 = _roots(pair[1], t)
    if not roots2:
        return None
    f1 = max(roots1)
    f2 = min(roots2)
    if f1 > 0.0 and f1 - f2 >= 2.0 * min_field:
        return f1, f2
    return None


def solve_yy_gate(target: str, J: float = 1.0, min_field: float = YY_MIN_FIELD) -> SteeringPlan:
    """Shortest single YY evolution reaching the B or CNOT class.

    The time axis is scanned on a fixed grid; the first feasible interval is
    bisected to the onset. Both qubits keep a field of at least min_field.

    Args:
        target: 'B' or 'CNOT'
        J: YY coupling strength (the search runs at J = 1 and rescales)
        min_field: Lower bound on each qubit's field norm

    Returns:
        SteeringPlan with parameters f1, f2, t
    """
    key = str(target or '').strip().upper()
    if key not in ('B', 'CNOT'):
        raise ContractViolation(_fmt('error.steer.bad_yy_target', target=target))
    J = float(J)
    if not math.isfinite(J) or J <= 0.0:
        raise ContractViolation(_t('error.steer.zero_coupling'))
    best = None
    for branch, pair in enumerate(_yy_conditions(key)):
        if key == 'CNOT':
            found = _yy_shared_onset(pair[0], min_field, YY_TIME_MAX)
        else:
            found = _yy_onset(pair, min_field, YY_TIME_MAX if best is None else best[2])
        debug(_fmt('log.steer.yy_branch', target=key, branch=branch, result=found))
        if found is not None and (best is None or found[2] < best[2]):
            best = found
    if best is None:
        raise SolverError(_fmt('error.steer.yy_no_solution', target=key, t_max=YY_TIME_MAX))
    f1, f2, t = best
    H = yy_hamiltonian(f1 * J, f2 * J, J)
    point = WeylPoint(math.pi / 2, math.pi / 4, 0.0) if key == 'B' else WeylPoint(math.pi / 2, 0.0, 0.0)
    return SteeringPlan(
        segments=(_evolve(H, t / J),),
        predicted_endpoint=point,
        target_class=point,
        strategy='yy_' + key.lower(),
        parameters={'f1': f1 * J, 'f2': f2 * J, 't': t / J, 'J': J},
    )


def _yy_onset(pair, min_field: float, t_max: float) -> tuple[float, float, float] | None:
    steps = int(math.ceil(t_max / YY_TIME_STEP - 1e-9))
    previous = 0.0
    for k in range(1, steps + 1):
        t = k * YY_TIME_STEP
        hit = _yy_pick(pair, t, min_field)
        if hit is None:
            previous = t
            continue
        lo, hi = previous, t
        for _ in range(_BISECT_ITERATIONS):
            mid = 0.5 * (lo + hi)
            candidate = _yy_pick(pair, mid, min_field)
            if candidate is None:
                lo = mid
            else:
                hi, hit = mid, candidate
        return hit[0], hit[1], hi
    return None


def _yy_shared_onset(h, min_field: float, t_max: float) -> tuple[float, float, float] | None:
    """Onset for a condition that both qubits share (the CNOT class).

    f1 stays at the double root f* where two distinct roots first appear. h is
    stationary in f there, so the first qubit's miss is second order in the
    time shift. f2 = f* − 2·min_field is an exact root at the returned time.
    Falls back to the exact root pair when the invariants miss by more than
    YY_SHARED_MISS.
    """
    onset = _yy_onset((h, h), min_field, t_max)
    if onset is None:
        return None
    upper, lower, t0 = onset
    if upper - lower <= 0.0:
        return onset
    peak = minimize_scalar(lambda f: -abs(float(h(f, t0))), bounds=(lower, upper), method='bounded',
                           options={'xatol': 1e-13})
    f1 = float(peak.x)
    f2 = f1 - 2.0 * min_field
    step = YY_TIME_STEP / 50.0
    start = float(h(f2, t0))
    lo = t0
    while lo < t_max:
        hi = lo + step
        if float(h(f2, hi)) * start <= 0.0:
            t = brentq(lambda s: float(h(f2, s)), lo, hi, xtol=1e-15)
            miss = float(np.max(np.abs(np.asarray(yy_invariants(f1, f2, 1.0, t).makhlin_form) - (0.0, 0.0, 1.0))))
            debug(_fmt('log.steer.yy_shared', f1=f1, f2=f2, t=t, miss=miss))
            if miss <= YY_SHARED_MISS:
                return f1, f2, t
            break
        lo = hi
    return onset


# ===== Слабая связь =====

def approx_straightline_ising(g1, g2) -> np.ndarray:
    """Direction of the weak Ising trajectory per unit Jz·t/‖g‖² for equal-norm fields."""
    g1 = _vector(g1, 'g1')
    g2 = _vector(g2, 'g2')
    n1, n2 = float(np.linalg.norm(g1)), float(np.linalg.norm(g2))
    if abs(n1 - n2) > 1e-9 * max(1.0, n1, n2):
        raise ContractViolation(_fmt('error.steer.unequal_norms', n1=n1, n2=n2))
    q = 2.0 * g1[2] * g2[2]
    rho = math.hypot(g1[0], g1[1]) * math.hypot(g2[0], g2[1])
    if q >= rho:
        return np.array([q, rho, rho])
    return np.array([rho, rho, q])


def approx_straightline_point(g1, g2, Jz: float, t: float) -> WeylPoint:
    g1 = _vector(g1, 'g1')
    norm2 = float(np.dot(g1, g1))
    if norm2 == 0.0:
        raise ContractViolation(_t('error.steer.zero_field'))
    return fold_to_chamber(approx_straightline_ising(g1, g2) * Jz * t / norm2)


def _projected_coupling(g1: np.ndarray, g2: np.ndarray, J: np.ndarray) -> float:
    return float(np.dot(J, g1 * g2) / (np.linalg.norm(g1) * np.linalg.norm(g2)))


def approx_weak_sinusoid(g1, g2, J, t, p: float) -> np.ndarray:
    """[2P·t, p|sin(‖g1‖ − ‖g2‖)t|, same] with P = Σ J_a·g1a·g2a/(‖g1‖‖g2‖)."""
    g1 = _vector(g1, 'g1')
    g2 = _vector(g2, 'g2')
    Jd = _vector(J, 'J')
    ts = np.asarray(t, dtype=float).reshape(-1)
    P = _projected_coupling(g1, g2, Jd)
    D = float(np.linalg.norm(g1) - np.linalg.norm(g2))
    wave = p * np.abs(np.sin(D * ts))
    return np.stack([2.0 * P * ts, wave, wave], axis=1)


def fit_weak_sinusoid_amplitude(trajectory: WeylTrajectory, g1, g2) -> float:
    """Least-squares p fitted to the simulated c2, c3 of a weak-coupling trajectory."""
    g1 = _vector(g1, 'g1')
    g2 = _vector(g2, 'g2')
    D = float(np.linalg.norm(g1) - np.linalg.norm(g2))
    wave = np.abs(np.sin(D * trajectory.times))
    points = trajectory.points
    design = np.concatenate([wave, wave])[:, None]
    observed = np.concatenate([points[:, 1], points[:, 2]])
    solution, *_ = np.linalg.lstsq(design, observed, rcond=None)
    return float(solution[0])


@dataclass(frozen=True, eq=False)
class WeakCouplingTemplate:
    """Affine family g_i(s) = base_i + s·direction_i."""
    base1: np.ndarray
    base2: np.ndarray
    direction1: np.ndarray
    direction2: np.ndarray

    def __post_init__(self):
        for name in ('base1', 'base2', 'direction1', 'direction2'):
            object.__setattr__(self, name, _vector(getattr(self, name), name))

    @classmethod
    def published(cls) -> 'WeakCouplingTemplate':
        """x fields 2.5 and 2, z fields along (1, 7.8177/10.0182)."""
        return cls(
            base1=np.array([2.5, 0.0, 0.0]),
            base2=np.array([2.0, 0.0, 0.0]),
            direction1=np.array([0.0, 0.0, 1.0]),
            direction2=np.array([0.0, 0.0, 7.8177 / 10.0182]),
        )

    def fields(self, s: float) -> tuple[np.ndarray, np.ndarray]:
        return self.base1 + s * self.direction1, self.base2 + s * self.direction2


def plan_weak_cnot(J, template: WeakCouplingTemplate | None = None, m: int = 3) -> SteeringPlan:
    """Scale the template so that 2P·t = π/2 and (‖g1‖ − ‖g2‖)·t = mπ.

    The largest scale s solving ‖g1‖ − ‖g2‖ = 4m·P is used; larger fields keep
    the coupling weaker relative to the local terms.
    """
    Jd = _vector(J, 'J')
    if not np.any(Jd):
        raise ContractViolation(_t('error.steer.zero_coupling'))
    if int(m) != m or m < 1:
        raise ContractViolation(_fmt('error.steer.bad_m', m=m))
    m = int(m)
    template = template or WeakCouplingTemplate.published()

    def projected(s: float) -> float:
        g1, g2 = template.fields(s)
        if np.linalg.norm(g1) == 0.0 or np.linalg.norm(g2) == 0.0:
            return 0.0
        return _projected_coupling(g1, g2, Jd)

    def gap(s: float) -> float:
        g1, g2 = template.fields(s)
        return float(np.linalg.norm(g1) - np.linalg.norm(g2))

    def residual(s: float) -> float:
        return gap(s) - 4.0 * m * projected(s)

    bound = 4.0 * m * float(np.sum(np.abs(Jd)))
    s_max = 1.0
    for _ in range(_WEAK_EXPANSIONS):
        if residual(s_max) > 0.0 and gap(s_max) > bound:
            break
        s_max *= 2.0
    else:
        raise SolverError(_t('error.steer.weak_no_bracket'))

    grid = np.linspace(0.0, s_max, _WEAK_GRID + 1)
    couplings = np.array([projected(s) for s in grid])
    if np.all(np.abs(couplings) <= STRUCTURAL_TOL):
        raise ContractViolation(_t('error.steer.weak_zero_projection'))
    values = np.array([residual(s) for s in grid])
    roots = []
    for i in np.nonzero(values[:-1] * values[1:] <= 0)[0]:
        a, b = float(grid[i]), float(grid[i + 1])
        s = a if values[i] == 0.0 else (b if values[i + 1] == 0.0 else brentq(residual, a, b, xtol=1e-13))
        if projected(s) > 0.0:
            roots.append(s)
    if not roots:
        raise SolverError(_t('error.steer.weak_no_root'))
    s = max(roots)
    g1, g2 = template.fields(s)
    P = projected(s)
    t = math.pi / (4.0 * P)
    ratio = float(np.linalg.norm(Jd) / min(np.linalg.norm(g1), np.linalg.norm(g2)))
    if ratio > WEAK_COUPLING_RATIO:
        debug(_fmt('log.steer.weak_ratio', ratio=ratio, threshold=WEAK_COUPLING_RATIO))
    H = HamiltonianSpec(g1, g2, np.diag(Jd))
    return SteeringPlan(
        segments=(_evolve(H, t),),
        predicted_endpoint=WeylPoint(math.pi / 2, 0.0, 0.0),
        target_class=WeylPoint(math.pi / 2, 0.0, 0.0),
        strategy='weak_cnot',
        tolerance=_WEAK_TOLERANCE,
        parameters={'scale': s, 't': t, 'm': m, 'projected_coupling': P, 'gap': gap(s), 'ratio': ratio},
    )


# ===== Чисто нелокальная ломаная =====

_EVEN_FLIPS = (
    np.array([1.0, 1.0, 1.0]),
    np.array([1.0, -1.0, -1.0]),
    np.array([-1.0, 1.0, -1.0]),
    np.array([-1.0, -1.0, 1.0]),
)


def _polyline_directions(Jd: np.ndarray) -> list[tuple[np.ndarray, np.ndarray]]:
    """(direction, local k) pairs with k·S(J)·k† = S(direction)."""
    out = []
    for perm in itertools.permutations(range(3)):
        Pi = np.eye(3)[list(perm)]
        D2 = np.diag([np.linalg.det(Pi), 1.0, 1.0])
        for signs in _EVEN_FLIPS:
            D1 = np.diag(signs) @ D2
            k = kron(lift_rotation(Pi @ D1), lift_rotation(Pi @ D2))
            out.append((Pi @ (signs * Jd), k))
    return out


def _lattice_targets(c: np.ndarray) -> np.ndarray:
    shifts = np.array(list(itertools.product((-1, 0, 1), repeat=3)), dtype=float)
    return c[None, :] + math.pi * shifts


def _polyline_search(targets: np.ndarray, directions: np.ndarray, count: int):
    """Best (total, indices, times) over index combinations of the given size."""
    best = None
    combos = np.array(list(itertools.combinations(range(len(directions)), count)), dtype=int)
    if count == 1:
        for idx in combos:
            d = 2.0 * directions[idx[0]]
            dd = float(np.dot(d, d))
            if dd == 0.0:
                continue
            for r in targets:
                t = float(np.dot(r, d)) / dd
                if t >= -STRUCTURAL_TOL and np.linalg.norm(t * d - r) <= _POLYLINE_RESIDUAL:
                    if best is None or t < best[0]:
                        best = (max(t, 0.0), idx, np.array([max(t, 0.0)]))
        return best
    if count == 2:
        for idx in combos:
            A = 2.0 * directions[idx].T
            if np.linalg.matrix_rank(A, tol=_POLYLINE_DET) < 2:
                continue
            for r in targets:
                ts, *_ = np.linalg.lstsq(A, r, rcond=None)
                if np.all(ts >= -STRUCTURAL_TOL) and np.linalg.norm(A @ ts - r) <= _POLYLINE_RESIDUAL:
                    ts = np.clip(ts, 0.0, None)
                    total = float(ts.sum())
                    if best is None or total < best[0]:
                        best = (total, idx, ts)
        return best
    A = 2.0 * np.transpose(directions[combos], (0, 2, 1))
    dets = np.linalg.det(A)
    usable = np.abs(dets) > _POLYLINE_DET
    if not np.any(usable):
        return None
    A, combos = A[usable], combos[usable]
    ts = np.linalg.solve(A[:, None, :, :], np.broadcast_to(targets[None, :, :, None], (A.shape[0],) + targets.shape + (1,)))[..., 0]
    ok = np.all(ts >= -STRUCTURAL_TOL, axis=-1)
    if not np.any(ok):
        return None
    totals = np.where(ok, ts.sum(axis=-1), np.inf)
    flat = int(np.argmin(totals))
    i, j = np.unravel_index(flat, totals.shape)
    return float(totals[i, j]), combos[i], np.clip(ts[i, j], 0.0, None)


def plan_nonlocal_polyline(target, J) -> SteeringPlan:
    """At most three coupling evolutions, each conjugated so that it moves along a Weyl image of J."""
    Jd = _vector(J, 'J')
    if not np.any(Jd):
        raise ContractViolation(_t('error.steer.zero_coupling'))
    goal = fold_to_chamber(target)
    H = HamiltonianSpec.nonlocal_only(Jd)
    if np.linalg.norm(goal.as_array()) <= STRUCTURAL_TOL:
        return SteeringPlan(segments=(), predicted_endpoint=goal, target_class=goal, strategy='nonlocal_polyline',
                            parameters={'directions': [], 'times': []})
    pairs = _polyline_directions(Jd)
    directions = np.array([d for d, _ in pairs])
    targets = _lattice_targets(goal.as_array())
    found = None
    for count in range(1, POLYLINE_MAX_SEGMENTS + 1):
        found = _polyline_search(targets, directions, count)
        if found is not None:
            break
    if found is None:
        raise SolverError(_fmt('error.steer.polyline_unreachable', target=goal.as_array().tolist(), J=Jd.tolist()))
    _, indices, times = found
    segments: list[PlanSegment] = []
    for index, duration in zip(indices, times):
        if duration <= 0.0:
            continue
        k = pairs[int(index)][1]
        segments.extend([_local(dagger(k)), _evolve(H, duration), _local(k)])
    segments = _merge_locals(segments)
    debug(_fmt('log.steer.polyline', evolutions=sum(1 for s in segments if s.kind == 'evolve'),
               total=float(np.sum(times))))
    return SteeringPlan(
        segments=tuple(segments),
        predicted_endpoint=goal,
        target_class=goal,
        strategy='nonlocal_polyline',
        parameters={
            'directions': [directions[int(i)].tolist() for i in indices],
            'times': [float(t) for t in times],
        },
    )


def _merge_locals(segments: list[PlanSegment]) -> list[PlanSegment]:
    merged: list[PlanSegment] = []
    for segment in segments:
        if segment.kind == 'local' and merged and merged[-1].kind == 'local':
            merged[-1] = _local(segment.gate @ merged[-1].gate)
        else:
            merged.append(segment)
    return [s for s in merged if not (s.kind == 'local' and gate_fidelity(s.gate, IDENTITY4) >= 1.0 - STRUCTURAL_TOL)]
