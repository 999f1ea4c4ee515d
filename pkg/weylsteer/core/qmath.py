# -*- coding: utf-8 -*-
"""
Small dense complex linear algebra for one and two qubits.

Pauli algebra, tensor products, Hermitian exponentials, time-dependent
propagation and fidelity. Every other module verifies its closed forms
against this one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.stats import unitary_group

from ..constants import INPUT_UNITARY_TOL, PROPAGATION_CHUNK, STEPS_PER_RADIAN, STRUCTURAL_TOL
from .errors import ContractViolation
from .localization import translate_runtime


def _t(key: str) -> str:
    return translate_runtime(key, key)


def _fmt(key: str, **kwargs) -> str:
    text = _t(key)
    try:
        return text.format(**kwargs)
    except Exception:
        return text


IDENTITY2 = np.eye(2, dtype=complex)
IDENTITY4 = np.eye(4, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (PAULI_X, PAULI_Y, PAULI_Z)

_PAULI_BY_NAME = {
    'I': IDENTITY2,
    'X': PAULI_X,
    'Y': PAULI_Y,
    'Z': PAULI_Z,
}


def pauli(name: str) -> np.ndarray:
    """Return a fresh copy of the Pauli matrix ``I``, ``X``, ``Y`` or ``Z``."""
    key = str(name or '').strip().upper()
    if key not in _PAULI_BY_NAME:
        raise ContractViolation(_fmt('error.qmath.unknown_pauli', name=name))
    return _PAULI_BY_NAME[key].copy()


def dagger(M: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(M, -1, -2))


def as_matrix(M, name: str = 'matrix') -> np.ndarray:
    """Validate a square complex matrix of dimension 2 or 4 with finite entries."""
    A = np.asarray(M, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] not in (2, 4):
        raise ContractViolation(_fmt('error.qmath.bad_shape', name=name, shape=tuple(A.shape)))
    if not np.all(np.isfinite(A)):
        raise ContractViolation(_fmt('error.qmath.not_finite', name=name))
    return A


def is_hermitian(H, tol: float = STRUCTURAL_TOL) -> bool:
    A = np.asarray(H, dtype=complex)
    scale = max(1.0, float(np.linalg.norm(A)))
    return float(np.linalg.norm(A - dagger(A))) <= tol * scale


def is_unitary(U, tol: float = STRUCTURAL_TOL) -> bool:
    A = np.asarray(U, dtype=complex)
    return float(np.linalg.norm(A @ dagger(A) - np.eye(A.shape[0]))) <= tol


def as_hermitian(H, name: str = 'H') -> np.ndarray:
    A = as_matrix(H, name)
    if not is_hermitian(A):
        raise ContractViolation(_fmt('error.qmath.not_hermitian', name=name))
    return A


def as_unitary(U, name: str = 'U', tol: float = INPUT_UNITARY_TOL) -> np.ndarray:
    A = as_matrix(U, name)
    if not is_unitary(A, tol):
        raise ContractViolation(_fmt('error.qmath.not_unitary', name=name))
    return A


def kron(A, B) -> np.ndarray:
    """Tensor product of two single-qubit operators."""
    a = np.asarray(A, dtype=complex)
    b = np.asarray(B, dtype=complex)
    if a.shape != (2, 2) or b.shape != (2, 2):
        raise ContractViolation(_fmt('error.qmath.kron_shape', left=a.shape, right=b.shape))
    return np.kron(a, b)


def pauli_vector(v: Sequence[float]) -> np.ndarray:
    """v·σ for a real 3-vector."""
    x, y, z = (float(c) for c in v)
    return x * PAULI_X + y * PAULI_Y + z * PAULI_Z


def _expm_stack(Hs: np.ndarray, dts: np.ndarray) -> np.ndarray:
    """e^{-i H_k dt_k} for a stack of Hermitian matrices."""
    Hs = np.asarray(Hs, dtype=complex)
    dts = np.asarray(dts, dtype=float)
    if Hs.shape[-1] == 2:
        h0 = 0.5 * (Hs[:, 0, 0] + Hs[:, 1, 1]).real
        hx = Hs[:, 1, 0].real
        hy = Hs[:, 1, 0].imag
        hz = 0.5 * (Hs[:, 0, 0] - Hs[:, 1, 1]).real
        norm = np.sqrt(hx * hx + hy * hy + hz * hz)
        angle = norm * dts
        c = np.cos(angle)
        s = dts * np.sinc(angle / np.pi)
        phase = np.exp(-1j * h0 * dts)
        out = np.empty(Hs.shape, dtype=complex)
        out[:, 0, 0] = c - 1j * s * hz
        out[:, 0, 1] = -1j * s * (hx - 1j * hy)
        out[:, 1, 0] = -1j * s * (hx + 1j * hy)
        out[:, 1, 1] = c + 1j * s * hz
        return out * phase[:, None, None]
    w, V = np.linalg.eigh(Hs)
    phases = np.exp(-1j * w * dts[:, None])
    return (V * phases[:, None, :]) @ dagger(V)


def expm_hermitian(H, t: float) -> np.ndarray:
    """e^{-iHt} for Hermitian H (closed form for 2×2, eigendecomposition for 4×4)."""
    A = as_hermitian(H)
    if not math.isfinite(float(t)):
        raise ContractViolation(_fmt('error.qmath.bad_time', t=t))
    A = 0.5 * (A + dagger(A))
    return _expm_stack(A[None], np.array([float(t)]))[0]


def expm_hermitian_series(H, times) -> np.ndarray:
    """e^{-iHt} for many t with a single decomposition; returns shape (N, d, d)."""
    A = as_hermitian(H)
    A = 0.5 * (A + dagger(A))
    ts = np.asarray(times, dtype=float).reshape(-1)
    if A.shape[0] == 2:
        return _expm_stack(np.broadcast_to(A, (ts.size, 2, 2)), ts)
    w, V = np.linalg.eigh(A)
    phases = np.exp(-1j * np.outer(ts, w))
    return (V[None] * phases[:, None, :]) @ dagger(V)[None]


@dataclass(eq=False)
class TimeDependentField:
    """H(t) = static + Σ_k f_k(t)·O_k with vectorized scalar coefficients f_k.

    Attributes:
        static: Constant Hermitian part
        terms: Pairs (f_k, O_k); f_k maps an array of times to real coefficients
    """
    static: np.ndarray
    terms: tuple[tuple[Callable[[np.ndarray], np.ndarray], np.ndarray], ...] = ()

    def __post_init__(self):
        self.static = as_hermitian(self.static, 'static')
        checked = []
        for coef, op in self.terms:
            O = as_hermitian(op, 'term')
            if O.shape != self.static.shape:
                raise ContractViolation(_fmt('error.qmath.field_dim', expected=self.static.shape, got=O.shape))
            checked.append((coef, O))
        self.terms = tuple(checked)

    @property
    def dim(self) -> int:
        return self.static.shape[0]

    def sample(self, ts) -> np.ndarray:
        ts = np.asarray(ts, dtype=float).reshape(-1)
        Hs = np.broadcast_to(self.static, (ts.size, self.dim, self.dim)).copy()
        for coef, O in self.terms:
            values = np.broadcast_to(np.asarray(coef(ts), dtype=float), ts.shape)
            Hs += values[:, None, None] * O[None]
        return Hs

    def __call__(self, t: float) -> np.ndarray:
        return self.sample(np.array([t]))[0]


def _sample_field(field, ts: np.ndarray) -> np.ndarray:
    if isinstance(field, TimeDependentField):
        return field.sample(ts)
    if callable(field):
        return np.stack([as_hermitian(field(float(t))) for t in ts])
    A = as_hermitian(field)
    return np.broadcast_to(A, (ts.size,) + A.shape)


def _ordered_product(Us: np.ndarray) -> np.ndarray:
    """U_{n-1} ··· U_1 U_0 by pairwise tree reduction."""
    eye = np.eye(Us.shape[-1], dtype=complex)
    while Us.shape[0] > 1:
        if Us.shape[0] % 2:
            Us = np.concatenate([Us, eye[None]])
        Us = Us[1::2] @ Us[0::2]
    return Us[0]


def propagate_timedep(field, t_f: float, steps: int | None = None, t0: float = 0.0) -> np.ndarray:
    """Propagator of a time-dependent Hamiltonian by midpoint exponential stepping.

    Each step is an exact exponential of H at the step midpoint, so the result is
    unitary for any step count.

    Args:
        field: TimeDependentField, callable t -> H(t), or a constant Hermitian matrix
        t_f: Duration (≥ 0)
        steps: Number of steps; default ceil(STEPS_PER_RADIAN · t_f · max‖H‖)
        t0: Start time

    Returns:
        U(t0 + t_f, t0)
    """
    t_f = float(t_f)
    if not math.isfinite(t_f) or t_f < 0:
        raise ContractViolation(_fmt('error.qmath.negative_duration', t=t_f))
    if steps is not None and int(steps) < 1:
        raise ContractViolation(_fmt('error.qmath.bad_steps', steps=steps))
    first = _sample_field(field, np.array([float(t0)]))
    dim = first.shape[-1]
    if t_f == 0.0:
        return np.eye(dim, dtype=complex)
    if steps is None:
        grid = float(t0) + np.linspace(0.0, t_f, 65)
        norm = float(np.max(np.linalg.norm(_sample_field(field, grid), ord=2, axis=(1, 2))))
        steps = max(1, math.ceil(STEPS_PER_RADIAN * t_f * norm))
    steps = int(steps)
    dt = t_f / steps
    total = np.eye(dim, dtype=complex)
    for start in range(0, steps, PROPAGATION_CHUNK):
        idx = np.arange(start, min(steps, start + PROPAGATION_CHUNK))
        mids = float(t0) + (idx + 0.5) * dt
        Us = _expm_stack(_sample_field(field, mids), np.full(idx.size, dt))
        total = _ordered_product(Us) @ total
    return total


def gate_fidelity(U, V) -> float:
    """|tr(U†V)| / d: phase-insensitive closeness in [0, 1]."""
    A = as_matrix(U, 'U')
    B = as_matrix(V, 'V')
    if A.shape != B.shape:
        raise ContractViolation(_fmt('error.qmath.dim_mismatch', left=A.shape[0], right=B.shape[0]))
    value = abs(np.trace(dagger(A) @ B)) / A.shape[0]
    return float(min(1.0, value))


def operator_distance(U, V) -> float:
    return float(np.linalg.norm(np.asarray(U) - np.asarray(V)))


def normalize_su(U) -> np.ndarray:
    """Divide by det(U)^{1/d} (principal branch) so the result has unit determinant."""
    A = np.asarray(U, dtype=complex)
    det = complex(np.linalg.det(A))
    return A / (det ** (1.0 / A.shape[0]))


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary of dimension 2 or 4."""
    if dim not in (2, 4):
        raise ContractViolation(_fmt('error.qmath.bad_shape', name='dim', shape=(dim, dim)))
    return np.asarray(unitary_group.rvs(dim, random_state=rng), dtype=complex)


def random_local_unitary(rng: np.random.Generator) -> np.ndarray:
    return kron(random_unitary(2, rng), random_unitary(2, rng))
