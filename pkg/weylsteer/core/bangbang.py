# -*- coding: utf-8 -*-
"""
Bang-Bang synthesis from two fixed Hamiltonians.

H1 and H2 are brought to the standard pair aσz, b(sinα·σz + cosα·σx) by one
conjugation k. |1⟩ is then steered on the Bloch sphere to the target image by
alternating rotations about ẑ and n = (cosα, 0, sinα); a first H1 segment
closes the remaining z-fiber phase.

Durations are chronological: [t1 (H1), s1 (H2), s2 (H1), s3 (H2), ...].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import least_squares
from scipy.spatial.transform import Rotation

from ..constants import (
    BANGBANG_CLOSING_TURNS,
    BANGBANG_MULTISTARTS,
    BANGBANG_RESIDUAL,
    DEFAULT_SEED,
    PHYSICS_TOL,
    STRUCTURAL_TOL,
)
from ..utils import debug
from .bloch import hopf_map, rz, standardize_drift
from .errors import ContractViolation, SolverError
from .localization import translate_runtime
from .qmath import PAULI_X, PAULI_Z, as_hermitian, as_unitary, dagger, expm_hermitian, gate_fidelity

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


@dataclass(frozen=True, eq=False)
class HamiltonianPair:
    """Two traceless single-qubit Hamiltonians switched against each other."""
    H1: np.ndarray
    H2: np.ndarray

    def __post_init__(self):
        for name in ('H1', 'H2'):
            H = as_hermitian(getattr(self, name), name)
            if H.shape != (2, 2):
                raise ContractViolation(_fmt('error.bangbang.not_single_qubit', name=name))
            if abs(np.trace(H)) > STRUCTURAL_TOL * max(1.0, float(np.linalg.norm(H))):
                raise ContractViolation(_fmt('error.bangbang.not_traceless', name=name))
            object.__setattr__(self, name, H)

    @classmethod
    def standard(cls, a: float, b: float, alpha: float) -> 'HamiltonianPair':
        """aσz and b(sinα·σz + cosα·σx)."""
        return cls(a * PAULI_Z, b * (math.sin(alpha) * PAULI_Z + math.cos(alpha) * PAULI_X))


@dataclass(frozen=True, eq=False)
class StandardizedPair:
    """k·H1·k† = aσz, k·H2·k† = b(sinα·σz + cosα·σx), k = e^{iγσz}·k0."""
    k: np.ndarray
    a: float
    b: float
    alpha: float
    gamma: float

    @property
    def axis(self) -> np.ndarray:
        return np.array([math.cos(self.alpha), 0.0, math.sin(self.alpha)])


@dataclass(frozen=True, eq=False)
class SwitchSequence:
    """Alternating H1/H2 durations starting with H1.

    Attributes:
        durations: [t1, s1, s2, ...]; t1 closes the z-fiber, the rest steer |1⟩
        trailing_z: Extra H1 time after the last segment (zero: t1 already closes the fiber)
        global_phase: g with target = g · compose_sequence(...)
        pair: Hamiltonians in the original frame
        standardized: Frame data used by the solver
    """
    durations: tuple[float, ...]
    trailing_z: float
    global_phase: complex
    pair: HamiltonianPair
    standardized: StandardizedPair

    @property
    def segments(self) -> int:
        return len(self.durations)

    @property
    def switches(self) -> int:
        return max(0, len(self.durations) - 1)

    @property
    def total_time(self) -> float:
        return float(sum(self.durations) + self.trailing_z)

    def unitary(self, include_phase: bool = True) -> np.ndarray:
        U = compose_sequence(self.durations, self.pair, self.trailing_z)
        return self.global_phase * U if include_phase else U


def _coefficients(H: np.ndarray) -> tuple[float, float, float]:
    return float(H[1, 0].real), float(H[1, 0].imag), float(0.5 * (H[0, 0] - H[1, 1]).real)


def standardize_pair(pair: HamiltonianPair) -> StandardizedPair:
    """One conjugation taking the pair to aσz and b(sinα·σz + cosα·σx), cosα ≥ 0."""
    drift = standardize_drift(pair.H1)
    k0 = drift.k
    b1, b2, b3 = _coefficients(k0 @ pair.H2 @ dagger(k0))
    bx = math.hypot(b1, b2)
    if bx <= STRUCTURAL_TOL * max(1.0, float(np.linalg.norm(pair.H2))):
        raise ContractViolation(_t('error.bangbang.parallel_pair'))
    gamma = 0.5 * math.atan2(b2, b1)
    # e^{iγσz} = rz(-2γ) turns (b1, b2) onto +x
    k = rz(-2.0 * gamma) @ k0
    return StandardizedPair(k=k, a=drift.a, b=math.hypot(bx, b3), alpha=math.atan2(b3, bx), gamma=gamma)


def max_switches(alpha: float) -> int:
    """Switch-count bound ⌈π/(π/2 − α)⌉; α ∈ (π/2, π] uses the mirrored angle."""
    a = abs(float(alpha))
    if not math.isfinite(a) or a > math.pi + STRUCTURAL_TOL:
        raise ContractViolation(_fmt('error.bangbang.bad_alpha', alpha=alpha))
    gap = HALF_PI - a if a < HALF_PI else a - HALF_PI
    if gap <= STRUCTURAL_TOL:
        raise ContractViolation(_fmt('error.bangbang.parallel_axes', alpha=alpha))
    return int(math.ceil(math.pi / gap - 1e-9))


def annulus_boundary(alpha: float, n: int) -> float:
    """Highest latitude z reachable from the south pole with n H2 rotations (1.0 once the sphere is covered)."""
    if n < 0:
        raise ContractViolation(_fmt('error.bangbang.bad_count', n=n))
    if n == 0:
        return -1.0
    reach = 2.0 * n * (HALF_PI - abs(float(alpha)))
    if reach >= math.pi:
        return 1.0
    alpha_n = HALF_PI + reach
    return -math.sin(alpha_n)


def compose_sequence(durations, pair: HamiltonianPair, trailing_z: float = 0.0) -> np.ndarray:
    """Chronological product of e^{-iH1 t1}, e^{-iH2 s1}, e^{-iH1 s2}, ... in the original frame."""
    U = np.eye(2, dtype=complex)
    for index, duration in enumerate(durations):
        if duration < 0:
            raise ContractViolation(_fmt('error.bangbang.negative_duration', t=duration))
        H = pair.H1 if index % 2 == 0 else pair.H2
        U = expm_hermitian(H, duration) @ U
    if trailing_z:
        U = expm_hermitian(pair.H1, trailing_z) @ U
    return U


def _chain_point(steer: np.ndarray, std: StandardizedPair) -> np.ndarray:
    """Bloch image of |1⟩ after the steering chain H2, H1, H2, ... with durations steer."""
    point = np.array([0.0, 0.0, -1.0])
    z_axis = np.array([0.0, 0.0, 1.0])
    axis = std.axis
    for index, duration in enumerate(steer):
        if index % 2 == 0:
            rotvec = 2.0 * std.b * duration * axis
        else:
            rotvec = 2.0 * std.a * duration * z_axis
        point = Rotation.from_rotvec(rotvec).apply(point)
    return point


def _closed_form(target_point: np.ndarray, std: StandardizedPair) -> list[float] | None:
    """At most one H2 rotation followed by one H1 rotation; None if the latitude is out of reach."""
    z_t = float(target_point[2])
    if z_t <= -1.0 + PHYSICS_TOL:
        return []
    sin2 = math.sin(std.alpha) ** 2
    cos2 = math.cos(std.alpha) ** 2
    if z_t > math.cos(2 * std.alpha) + PHYSICS_TOL:
        return None
    cos_psi = max(-1.0, min(1.0, -(z_t + sin2) / cos2))
    psi = math.acos(cos_psi)
    s1 = psi / (2.0 * std.b)
    point = _chain_point(np.array([s1]), std)
    if math.hypot(point[0], point[1]) <= PHYSICS_TOL:
        return [s1]
    delta = math.atan2(target_point[1], target_point[0]) - math.atan2(point[1], point[0])
    s2 = (delta % TWO_PI) / (2.0 * std.a)
    if s2 >= math.pi / std.a - STRUCTURAL_TOL:
        s2 = 0.0
    return [s1, s2] if s2 > 0.0 else [s1]


def _solve_chain(target_point: np.ndarray, std: StandardizedPair, length: int,
                 rng: np.random.Generator) -> tuple[np.ndarray, float]:
    upper = np.array([math.pi / std.b if i % 2 == 0 else math.pi / std.a for i in range(length)])
    lower = np.zeros(length)

    def residual(x):
        return _chain_point(x, std) - target_point

    best_x, best_r = None, math.inf
    for _ in range(BANGBANG_MULTISTARTS):
        x0 = rng.uniform(0.05, 0.95, size=length) * upper
        result = least_squares(residual, x0, bounds=(lower, upper), xtol=1e-15, ftol=1e-15, gtol=1e-15)
        r = float(np.dot(result.fun, result.fun))
        if r < best_r:
            best_x, best_r = np.asarray(result.x, dtype=float), r
        if best_r <= BANGBANG_RESIDUAL:
            break
    return best_x, best_r


def _closing_time(steer: list[float], V: np.ndarray, std: StandardizedPair,
                  closing_turns: int) -> tuple[float, complex]:
    """H1 time and global phase g with V = g · P · e^{-iaσz·t1}."""
    P = np.eye(2, dtype=complex)
    for index, duration in enumerate(steer):
        if index % 2 == 0:
            H = std.b * (math.sin(std.alpha) * PAULI_Z + math.cos(std.alpha) * PAULI_X)
        else:
            H = std.a * PAULI_Z
        P = expm_hermitian(H, duration) @ P
    angle = float(np.angle(np.linalg.det(V)))
    if angle > math.pi - STRUCTURAL_TOL:
        angle -= TWO_PI
    g = complex(np.exp(0.5j * angle))
    D = dagger(P) @ V / g
    period = TWO_PI / std.a
    t1 = (-float(np.angle(D[0, 0])) / std.a) % period
    if t1 >= period - STRUCTURAL_TOL:
        t1 = 0.0
    if steer:
        t1 += closing_turns * period
    return t1, g


def synthesize_bangbang(target, pair: HamiltonianPair, closing_turns: int = BANGBANG_CLOSING_TURNS,
                        rng: np.random.Generator | None = None) -> SwitchSequence:
    """Alternating H1/H2 durations reproducing target up to global phase.

    Args:
        target: 2×2 unitary
        pair: Hamiltonians to switch between
        closing_turns: Full H1 periods added to t1 when steering is needed
        rng: Generator for multistart seeds

    Returns:
        SwitchSequence with target = global_phase · compose_sequence(durations)
    """
    U = as_unitary(target, 'target')
    if U.shape != (2, 2):
        raise ContractViolation(_t('error.bangbang.not_single_qubit'))
    if closing_turns < 0:
        raise ContractViolation(_fmt('error.bangbang.bad_count', n=closing_turns))
    std = standardize_pair(pair)
    limit = max_switches(std.alpha)
    V = std.k @ U @ dagger(std.k)
    target_point = hopf_map(V).as_array()

    steer = _closed_form(target_point, std)
    if steer is None:
        rng = rng if rng is not None else np.random.default_rng(DEFAULT_SEED)
        best = (None, math.inf)
        for length in range(3, max(3, limit) + 1):
            x, r = _solve_chain(target_point, std, length, rng)
            debug(_fmt('log.bangbang.chain', length=length, residual=r))
            if r < best[1]:
                best = (x, r)
            if r <= BANGBANG_RESIDUAL:
                steer = [float(v) for v in x]
                break
        if steer is None:
            raise SolverError(_fmt('error.bangbang.no_solution', residual=best[1]), best=best[0], residual=best[1])

    t1, g = _closing_time(steer, V, std, closing_turns)
    sequence = SwitchSequence(
        durations=tuple([t1] + list(steer)),
        trailing_z=0.0,
        global_phase=g,
        pair=pair,
        standardized=std,
    )
    fidelity = gate_fidelity(sequence.unitary(include_phase=False), U)
    debug(_fmt('log.bangbang.done', segments=sequence.segments, fidelity=fidelity))
    if fidelity < 1.0 - PHYSICS_TOL:
        raise SolverError(_fmt('error.bangbang.low_fidelity', fidelity=fidelity), best=sequence,
                          residual=1.0 - fidelity)
    return sequence
