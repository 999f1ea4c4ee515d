# -*- coding: utf-8 -*-
"""
Single-qubit quotient geometry.

Standard-form reduction of a drift Hamiltonian, the Hopf map SU(2) → S²
(right multiplication by z-rotations does not move the image), Euler ZXZ
angles and the off-resonance reachability cap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..constants import PHYSICS_TOL, STRUCTURAL_TOL
from .errors import ContractViolation
from .localization import translate_runtime
from .qmath import PAULI_X, IDENTITY2, as_hermitian, as_unitary, dagger, normalize_su

TWO_PI = 2.0 * math.pi
FOUR_PI = 4.0 * math.pi
_POLE_TOL = 1e-14


def _t(key: str) -> str:
    return translate_runtime(key, key)


def _fmt(key: str, **kwargs) -> str:
    text = _t(key)
    try:
        return text.format(**kwargs)
    except Exception:
        return text


@dataclass(frozen=True)
class BlochPoint:
    """Point on the unit sphere; θ is the colatitude, φ the azimuth in [0, 2π)."""
    x: float
    y: float
    z: float

    @classmethod
    def from_angles(cls, theta: float, phi: float) -> 'BlochPoint':
        return cls(math.sin(theta) * math.cos(phi), math.sin(theta) * math.sin(phi), math.cos(theta))

    @property
    def theta(self) -> float:
        return math.acos(max(-1.0, min(1.0, self.z)))

    @property
    def phi(self) -> float:
        value = math.atan2(self.y, self.x) % TWO_PI
        return 0.0 if value >= TWO_PI else value

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])


@dataclass(frozen=True)
class EulerZXZ:
    """Angles of U = Rz(φ − π/2)·Rx(π − θ)·Rz(γ), θ ∈ [0, π], φ ∈ [0, 2π), γ ∈ [0, 4π)."""
    theta: float
    phi: float
    gamma: float

    def to_unitary(self) -> np.ndarray:
        return euler_to_unitary(self)


@dataclass(frozen=True, eq=False)
class DriftStandardization:
    """k with k·H_d·k† = a·σz."""
    k: np.ndarray
    a: float


def rz(angle: float) -> np.ndarray:
    """e^{-i·angle/2·σz}."""
    half = 0.5 * float(angle)
    return np.array([[np.exp(-1j * half), 0], [0, np.exp(1j * half)]], dtype=complex)


def rx(angle: float) -> np.ndarray:
    """e^{-i·angle/2·σx}."""
    half = 0.5 * float(angle)
    c, s = math.cos(half), math.sin(half)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def euler_to_unitary(angles: EulerZXZ) -> np.ndarray:
    return rz(angles.phi - math.pi / 2) @ rx(math.pi - angles.theta) @ rz(angles.gamma)


def _single_qubit(U, name: str = 'U') -> np.ndarray:
    A = as_unitary(U, name)
    if A.shape != (2, 2):
        raise ContractViolation(_fmt('error.bloch.not_single_qubit', name=name, dim=A.shape[0]))
    return A


def hopf_map(U) -> BlochPoint:
    """Bloch image of U|1⟩."""
    A = _single_qubit(U)
    z1, z2 = A[0, 1], A[1, 1]
    norm = abs(z1) ** 2 + abs(z2) ** 2
    z = (abs(z1) ** 2 - abs(z2) ** 2) / norm
    w = 2.0 * np.conj(z1) * z2 / norm
    return BlochPoint(float(w.real), float(w.imag), float(z))


def is_rz_equivalent(U, V, tol: float = PHYSICS_TOL) -> bool:
    """True iff V = U·e^{-iσz t} up to global phase."""
    W = dagger(_single_qubit(U, 'U')) @ _single_qubit(V, 'V')
    return bool(abs(W[0, 1]) <= tol and abs(W[1, 0]) <= tol)


def standardize_drift(H_d) -> DriftStandardization:
    """Find k with k·H_d·k† = a·σz for a traceless 2×2 Hermitian H_d."""
    H = as_hermitian(H_d, 'H_d')
    if H.shape != (2, 2):
        raise ContractViolation(_fmt('error.bloch.not_single_qubit', name='H_d', dim=H.shape[0]))
    scale = max(1.0, float(np.linalg.norm(H)))
    if abs(np.trace(H)) > STRUCTURAL_TOL * scale:
        raise ContractViolation(_t('error.bloch.drift_not_traceless'))
    a1 = float(H[1, 0].real)
    a2 = float(H[1, 0].imag)
    a3 = float(0.5 * (H[0, 0] - H[1, 1]).real)
    a = math.sqrt(a1 * a1 + a2 * a2 + a3 * a3)
    if a == 0.0:
        raise ContractViolation(_t('error.bloch.zero_drift'))
    r2 = a1 * a1 + a2 * a2
    if r2 <= (_POLE_TOL * a) ** 2:
        k = IDENTITY2.copy() if a3 > 0 else PAULI_X.copy()
        return DriftStandardization(k=k, a=a)
    # a ∓ a3 without cancellation near the poles
    if a3 >= 0:
        a_plus = a + a3
        a_minus = r2 / a_plus
    else:
        a_minus = a - a3
        a_plus = r2 / a_minus
    c = complex(a1, -a2)
    printed = np.array([
        [c / math.sqrt(2 * a * a_minus), -c / math.sqrt(2 * a * a_plus)],
        [math.sqrt(a_minus / (2 * a)), math.sqrt(a_plus / (2 * a))],
    ], dtype=complex)
    # the printed matrix maps aσz back onto H_d; its adjoint standardizes
    return DriftStandardization(k=dagger(printed), a=a)


def euler_zxz(U) -> EulerZXZ:
    """Euler ZXZ angles whose (θ, φ) equal hopf_map(U); γ makes the SU(2) product exact."""
    A = normalize_su(_single_qubit(U))
    u, v = A[0, 0], A[1, 0]
    beta = 2.0 * math.atan2(abs(v), abs(u))
    theta = math.pi - beta
    if abs(v) <= _POLE_TOL:
        phi = math.pi / 2
        gamma = -2.0 * float(np.angle(u))
    elif abs(u) <= _POLE_TOL:
        phi = math.pi / 2
        gamma = -2.0 * float(np.angle(v)) - math.pi
    else:
        plus = -2.0 * float(np.angle(u))
        minus = 2.0 * float(np.angle(v)) + math.pi
        shift = 0.5 * (plus + minus)
        gamma = 0.5 * (plus - minus)
        phi = shift + math.pi / 2
        turns = math.floor(phi / TWO_PI)
        phi -= TWO_PI * turns
        gamma += TWO_PI * turns
        if phi >= TWO_PI:
            phi -= TWO_PI
    gamma = gamma % FOUR_PI
    if gamma >= FOUR_PI:
        gamma -= FOUR_PI
    return EulerZXZ(theta=theta, phi=phi, gamma=gamma)


def unreachable_cap(A: float, omega0: float, omega: float) -> float:
    """z-threshold above which no off-resonant perpendicular pulse can steer |1⟩."""
    if A < 0:
        raise ContractViolation(_fmt('error.bloch.negative_amplitude', A=A))
    half = 0.5 * float(A)
    detuning = float(omega0) - float(omega)
    denom = half * half + detuning * detuning
    if denom == 0.0:
        raise ContractViolation(_t('error.bloch.cap_undefined'))
    return (half * half - detuning * detuning) / denom
