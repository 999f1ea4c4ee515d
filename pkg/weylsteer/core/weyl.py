# -*- coding: utf-8 -*-
"""
Локальная эквивалентность двухкубитных гейтов.

Инварианты в магическом базисе, координаты камеры Вейля, канонический
гейт и приведение матрицы связи к диагональному виду локальным поворотом.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial.transform import Rotation

from ..constants import PHYSICS_TOL, STRUCTURAL_TOL
from .errors import ContractViolation
from .localization import translate_runtime
from .qmath import (
    IDENTITY2,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    PAULIS,
    as_unitary,
    dagger,
    expm_hermitian,
    kron,
    normalize_su,
    pauli_vector,
)


def _t(key: str) -> str:
    return translate_runtime(key, key)


def _fmt(key: str, **kwargs) -> str:
    text = _t(key)
    try:
        return text.format(**kwargs)
    except Exception:
        return text


_SQRT_HALF = 1.0 / math.sqrt(2.0)
_MAGIC = _SQRT_HALF * np.array([
    [1, 0, 0, 1j],
    [0, 1j, 1, 0],
    [0, 1j, -1, 0],
    [1, 0, 0, -1j],
], dtype=complex)

# σ_a ⊗ σ_a, a = x, y, z
_XX = np.kron(PAULI_X, PAULI_X)
_YY = np.kron(PAULI_Y, PAULI_Y)
_ZZ = np.kron(PAULI_Z, PAULI_Z)

_SNAP = STRUCTURAL_TOL


@dataclass(frozen=True)
class WeylPoint:
    """Point [c1, c2, c3] of the Weyl chamber, π − c2 ≥ c1 ≥ c2 ≥ c3 ≥ 0."""
    c1: float
    c2: float
    c3: float

    def as_array(self) -> np.ndarray:
        return np.array([self.c1, self.c2, self.c3], dtype=float)

    def __iter__(self):
        return iter((self.c1, self.c2, self.c3))

    def in_chamber(self, tol: float = PHYSICS_TOL) -> bool:
        c1, c2, c3 = self.c1, self.c2, self.c3
        return (math.pi - c2 + tol >= c1) and (c1 + tol >= c2) and (c2 + tol >= c3) and (c3 >= -tol)

    def distance(self, other) -> float:
        return float(np.linalg.norm(self.as_array() - _triple(other)))


@dataclass(frozen=True)
class InvariantTriple:
    """Local invariants in both normalizations.

    Attributes:
        chamber_form: (g1, g2, g3), identity ↦ (4, 0, 3)
        makhlin_form: (Re G1, Im G1, G2), identity ↦ (1, 0, 3)
    """
    chamber_form: tuple[float, float, float]
    makhlin_form: tuple[float, float, float]

    @property
    def G1(self) -> complex:
        return complex(self.makhlin_form[0], self.makhlin_form[1])

    @property
    def G2(self) -> float:
        return self.makhlin_form[2]


@dataclass(frozen=True, eq=False)
class CouplingCanonicalForm:
    """k·S(J)·k† = Jx·XX + Jy·YY + Jz·ZZ with J = O1·diag(Jx, Jy, Jz)·O2ᵀ."""
    k: np.ndarray
    Jx: float
    Jy: float
    Jz: float
    O1: np.ndarray
    O2: np.ndarray

    @property
    def diagonal(self) -> np.ndarray:
        return np.array([self.Jx, self.Jy, self.Jz], dtype=float)

    def __iter__(self):
        return iter((self.k, self.Jx, self.Jy, self.Jz))


def _triple(c) -> np.ndarray:
    if isinstance(c, WeylPoint):
        return c.as_array()
    arr = np.asarray(c, dtype=float).reshape(-1)
    if arr.size != 3 or not np.all(np.isfinite(arr)):
        raise ContractViolation(_fmt('error.weyl.bad_triple', value=c))
    return arr


def magic_basis() -> np.ndarray:
    """Columns are the magic (phased Bell) basis vectors."""
    return _MAGIC.copy()


def canonical_gate(c) -> np.ndarray:
    """exp(i/2·(c1·XX + c2·YY + c3·ZZ)) for any real triple."""
    c1, c2, c3 = _triple(c)
    H = c1 * _XX + c2 * _YY + c3 * _ZZ
    # e^{+iH/2} = e^{-i·H·(-1/2)}
    return expm_hermitian(H, -0.5)


_NAMED_1Q = {
    'I': IDENTITY2,
    'X': PAULI_X,
    'Y': PAULI_Y,
    'Z': PAULI_Z,
    'H': _SQRT_HALF * np.array([[1, 1], [1, -1]], dtype=complex),
    'S': np.diag([1, 1j]).astype(complex),
    'T': np.diag([1, np.exp(0.25j * math.pi)]).astype(complex),
}

_NAMED_2Q = {
    'I4': np.eye(4, dtype=complex),
    'CNOT': np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex),
    'CZ': np.diag([1, 1, 1, -1]).astype(complex),
    'SWAP': np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex),
    'ISWAP': np.array([[1, 0, 0, 0], [0, 0, 1j, 0], [0, 1j, 0, 0], [0, 0, 0, 1]], dtype=complex),
    'SQRT_SWAP': np.array([
        [1, 0, 0, 0],
        [0, 0.5 + 0.5j, 0.5 - 0.5j, 0],
        [0, 0.5 - 0.5j, 0.5 + 0.5j, 0],
        [0, 0, 0, 1],
    ], dtype=complex),
}


def named_gate(name: str) -> np.ndarray:
    """Matrix of a named gate: I X Y Z H S T for one qubit, I4 CNOT CZ SWAP ISWAP SQRT_SWAP B for two."""
    key = str(name or '').strip().upper().replace('-', '_')
    if key in _NAMED_1Q:
        return _NAMED_1Q[key].copy()
    if key in _NAMED_2Q:
        return _NAMED_2Q[key].copy()
    if key == 'B':
        return canonical_gate([math.pi / 2, math.pi / 4, 0.0])
    raise ContractViolation(_fmt('error.weyl.unknown_gate', name=name))


def named_gate_names() -> list[str]:
    return list(_NAMED_1Q) + list(_NAMED_2Q) + ['B']


def fold_to_chamber(c) -> WeylPoint:
    """Canonical chamber representative of a raw triple.

    Uses the local-equivalence symmetries: each coordinate mod π, permutations,
    simultaneous sign flips of two coordinates. On the base plane c3 = 0 the
    representative with c1 ≤ π/2 is returned.
    """
    v = np.mod(_triple(c), math.pi)
    v = np.where(v > math.pi - _SNAP, v - math.pi, v)
    v = np.clip(v, 0.0, None)
    v = np.sort(v)[::-1]
    if v[0] + v[1] > math.pi + _SNAP:
        v[0], v[1] = math.pi - v[0], math.pi - v[1]
        v = np.sort(v)[::-1]
    if v[2] < _SNAP and v[0] > math.pi / 2:
        v[0] = math.pi - v[0]
        v = np.sort(v)[::-1]
    return WeylPoint(float(v[0]), float(v[1]), float(v[2]))


def invariants_from_weyl(c1, c2=None, c3=None) -> InvariantTriple:
    """Chamber-form invariants g1, g2, g3 of a triple and their Makhlin form."""
    if c2 is None and c3 is None:
        c1, c2, c3 = _triple(c1)
    c1, c2, c3 = float(c1), float(c2), float(c3)
    g1 = 4.0 * math.cos(c1) * math.cos(c2) * math.cos(c3)
    g2 = 4.0 * math.sin(c1) * math.sin(c2) * math.sin(c3)
    g3 = math.cos(2 * c1) + math.cos(2 * c2) + math.cos(2 * c3)
    return _from_chamber(g1, g2, g3)


def _from_chamber(g1: float, g2: float, g3: float) -> InvariantTriple:
    G1 = ((g1 + 1j * g2) / 4.0) ** 2
    return InvariantTriple(
        chamber_form=(float(g1), float(g2), float(g3)),
        makhlin_form=(float(G1.real), float(G1.imag), float(g3)),
    )


def chamber_from_makhlin(G1: complex, G2: float) -> InvariantTriple:
    """Makhlin form → chamber form on the branch with g1 ≥ 0 (g2 ≥ 0 when g1 = 0)."""
    root = 4.0 * np.sqrt(complex(G1))
    if root.real < -_SNAP or (abs(root.real) <= _SNAP and root.imag < 0):
        root = -root
    return InvariantTriple(
        chamber_form=(float(root.real), float(root.imag), float(G2)),
        makhlin_form=(float(complex(G1).real), float(complex(G1).imag), float(G2)),
    )


def _gram(U) -> np.ndarray:
    A = as_unitary(U, 'U')
    if A.shape != (4, 4):
        raise ContractViolation(_fmt('error.weyl.not_two_qubit', dim=A.shape[0]))
    UB = dagger(_MAGIC) @ normalize_su(A) @ _MAGIC
    return UB.T @ UB


def makhlin_invariants(U) -> tuple[float, float, float]:
    """(Re G1, Im G1, G2) with G1 = tr(m)²/16, G2 = (tr(m)² − tr(m²))/4."""
    m = _gram(U)
    tr = complex(np.trace(m))
    tr2 = complex(np.trace(m @ m))
    G1 = tr * tr / 16.0
    G2 = (tr * tr - tr2) / 4.0
    return float(G1.real), float(G1.imag), float(G2.real)


def weyl_coordinates(U) -> WeylPoint:
    """Chamber coordinates of a two-qubit unitary."""
    m = _gram(U)
    theta = np.sort(np.angle(np.linalg.eigvals(m)))[::-1]
    # det m = 1: the eigenphases sum to a multiple of 2π
    turns = int(round(float(np.sum(theta)) / (2 * math.pi)))
    if turns > 0:
        theta[:turns] -= 2 * math.pi
    elif turns < 0:
        theta[len(theta) + turns:] += 2 * math.pi
    h = np.sort(theta)[::-1]
    raw = [0.5 * (h[0] + h[2]), 0.5 * (h[1] + h[2]), 0.5 * (h[0] + h[1])]
    return fold_to_chamber(raw)


def invariants_from_unitary(U) -> InvariantTriple:
    """Both invariant forms of U; the chamber form follows the canonical chamber point."""
    makhlin = makhlin_invariants(U)
    chamber = invariants_from_weyl(weyl_coordinates(U)).chamber_form
    return InvariantTriple(chamber_form=chamber, makhlin_form=makhlin)


def is_locally_equivalent(U, V, tol: float = PHYSICS_TOL) -> bool:
    a = np.asarray(makhlin_invariants(U))
    b = np.asarray(makhlin_invariants(V))
    return bool(np.max(np.abs(a - b)) <= tol)


def coupling_operator(J) -> np.ndarray:
    """S = Σ J_ab σ_a ⊗ σ_b."""
    M = _coupling(J)
    S = np.zeros((4, 4), dtype=complex)
    for a, sa in enumerate(PAULIS):
        for b, sb in enumerate(PAULIS):
            if M[a, b] != 0.0:
                S += M[a, b] * np.kron(sa, sb)
    return S


def _coupling(J) -> np.ndarray:
    M = np.asarray(J, dtype=float)
    if M.shape != (3, 3) or not np.all(np.isfinite(M)):
        raise ContractViolation(_fmt('error.weyl.bad_coupling', shape=tuple(M.shape)))
    return M


def lift_rotation(R) -> np.ndarray:
    """u ∈ SU(2) with u·σ_a·u† = Σ_b R_ba σ_b for R ∈ SO(3)."""
    R = np.asarray(R, dtype=float)
    if R.shape != (3, 3) or abs(np.linalg.det(R) - 1.0) > 1e-9:
        raise ContractViolation(_t('error.weyl.not_rotation'))
    rotvec = Rotation.from_matrix(R).as_rotvec()
    return expm_hermitian(0.5 * pauli_vector(rotvec), 1.0)


def canonicalize_coupling(J) -> CouplingCanonicalForm:
    """Local k diagonalizing the coupling: k·S(J)·k† = Jx·XX + Jy·YY + Jz·ZZ.

    A local conjugation (u1⊗u2)·S·(u1⊗u2)† turns J into R1·J·R2ᵀ, so with the
    real SVD J = O1·D·O2ᵀ (O1, O2 ∈ SO(3)) the lifts of O1ᵀ and O2ᵀ give k.
    """
    M = _coupling(J)
    O1, s, O2t = np.linalg.svd(M)
    O2 = O2t.T
    d = s.astype(float).copy()
    if np.linalg.det(O1) < 0:
        O1 = O1.copy()
        O1[:, 2] *= -1
        d[2] *= -1
    if np.linalg.det(O2) < 0:
        O2 = O2.copy()
        O2[:, 2] *= -1
        d[2] *= -1
    k = kron(lift_rotation(O1.T), lift_rotation(O2.T))
    return CouplingCanonicalForm(k=k, Jx=float(d[0]), Jy=float(d[1]), Jz=float(d[2]), O1=O1, O2=O2)
