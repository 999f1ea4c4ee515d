from __future__ import annotations

# The test suite is runnable both from the package directory and its parent.
# ruff: noqa: E402

import math
import sys
import unittest
from pathlib import Path

import numpy as np

PACKAGE_PARENT = Path(__file__).resolve().parents[2]
if str(PACKAGE_PARENT) not in sys.path:
    sys.path.insert(0, str(PACKAGE_PARENT))

from weylsteer.core.errors import ContractViolation
from weylsteer.core.qmath import (
    PAULI_X,
    PAULI_Z,
    TimeDependentField,
    expm_hermitian,
    expm_hermitian_series,
    gate_fidelity,
    is_unitary,
    kron,
    normalize_su,
    pauli,
    propagate_timedep,
    random_unitary,
)


class ExponentialTests(unittest.TestCase):
    def test_single_qubit_closed_form_matches_scipy(self):
        from scipy.linalg import expm

        rng = np.random.default_rng(1)
        for _ in range(20):
            v = rng.normal(size=4)
            H = v[0] * np.eye(2) + v[1] * PAULI_X + v[2] * pauli('Y') + v[3] * PAULI_Z
            t = float(rng.uniform(-3, 3))
            np.testing.assert_allclose(expm_hermitian(H, t), expm(-1j * H * t), atol=1e-12)

    def test_two_qubit_matches_scipy(self):
        from scipy.linalg import expm

        rng = np.random.default_rng(2)
        M = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        H = M + M.conj().T
        np.testing.assert_allclose(expm_hermitian(H, 0.37), expm(-0.37j * H), atol=1e-11)

    def test_series_agrees_with_pointwise(self):
        H = kron(PAULI_X, PAULI_X) + 0.3 * kron(PAULI_Z, np.eye(2))
        times = np.linspace(0.0, 2.0, 7)
        series = expm_hermitian_series(H, times)
        for t, U in zip(times, series):
            np.testing.assert_allclose(U, expm_hermitian(H, t), atol=1e-12)

    def test_non_hermitian_rejected(self):
        with self.assertRaises(ContractViolation):
            expm_hermitian(np.array([[0, 1], [0, 0]]), 1.0)

    def test_non_finite_time_rejected(self):
        with self.assertRaises(ContractViolation):
            expm_hermitian(PAULI_Z, math.inf)


class PropagationTests(unittest.TestCase):
    def test_constant_field_is_exact(self):
        H = 0.7 * PAULI_X + 0.2 * PAULI_Z
        U = propagate_timedep(H, 1.3, steps=5)
        np.testing.assert_allclose(U, expm_hermitian(H, 1.3), atol=1e-12)

    def test_zero_duration_is_identity(self):
        np.testing.assert_allclose(propagate_timedep(PAULI_X, 0.0), np.eye(2))

    def test_commuting_time_dependence_integrates_phase(self):
        # H(t) = cos(t)·σz commutes with itself: U = e^{-i sin(T) σz}
        field = TimeDependentField(np.zeros((2, 2)), ((np.cos, PAULI_Z),))
        U = propagate_timedep(field, 1.1, steps=4000)
        self.assertGreater(gate_fidelity(U, expm_hermitian(PAULI_Z, math.sin(1.1))), 1 - 1e-10)
        self.assertTrue(is_unitary(U, tol=1e-10))

    def test_negative_duration_rejected(self):
        with self.assertRaises(ContractViolation):
            propagate_timedep(PAULI_X, -1.0)

    def test_bad_steps_rejected(self):
        with self.assertRaises(ContractViolation):
            propagate_timedep(PAULI_X, 1.0, steps=0)


class FidelityTests(unittest.TestCase):
    def test_global_phase_is_ignored(self):
        U = random_unitary(4, np.random.default_rng(3))
        self.assertAlmostEqual(gate_fidelity(U, np.exp(0.4j) * U), 1.0, places=12)

    def test_dimension_mismatch(self):
        with self.assertRaises(ContractViolation):
            gate_fidelity(np.eye(2), np.eye(4))

    def test_normalize_su_has_unit_determinant(self):
        U = random_unitary(2, np.random.default_rng(4))
        self.assertAlmostEqual(abs(np.linalg.det(normalize_su(U)) - 1.0), 0.0, places=12)

    def test_kron_rejects_non_qubit_factors(self):
        with self.assertRaises(ContractViolation):
            kron(np.eye(4), np.eye(2))


if __name__ == '__main__':
    unittest.main()
