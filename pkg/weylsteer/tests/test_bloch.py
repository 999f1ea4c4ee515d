from __future__ import annotations

# ruff: noqa: E402

import math
import sys
import unittest
from pathlib import Path

import numpy as np

PACKAGE_PARENT = Path(__file__).resolve().parents[2]
if str(PACKAGE_PARENT) not in sys.path:
    sys.path.insert(0, str(PACKAGE_PARENT))

from weylsteer.core.bloch import (
    BlochPoint,
    EulerZXZ,
    euler_to_unitary,
    euler_zxz,
    hopf_map,
    is_rz_equivalent,
    rz,
    standardize_drift,
    unreachable_cap,
)
from weylsteer.core.errors import ContractViolation
from weylsteer.core.pulse1q import OscillatingFieldSpec, rwa_propagator_perp
from weylsteer.core.qmath import PAULI_X, PAULI_Y, PAULI_Z, dagger, gate_fidelity, random_unitary


class EulerTests(unittest.TestCase):
    def test_random_unitaries_round_trip(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            U = random_unitary(2, rng)
            e = euler_zxz(U)
            self.assertGreaterEqual(e.theta, 0.0)
            self.assertLessEqual(e.theta, math.pi)
            self.assertGreaterEqual(e.phi, 0.0)
            self.assertLess(e.phi, 2 * math.pi)
            self.assertGreaterEqual(e.gamma, 0.0)
            self.assertLess(e.gamma, 4 * math.pi)
            self.assertGreater(gate_fidelity(euler_to_unitary(e), U), 1 - 1e-12)

    def test_angles_match_hopf_image(self):
        rng = np.random.default_rng(12)
        for _ in range(50):
            U = random_unitary(2, rng)
            e = euler_zxz(U)
            p = hopf_map(U)
            self.assertAlmostEqual(p.theta, e.theta, places=9)
            if 1e-6 < e.theta < math.pi - 1e-6:
                diff = (p.phi - e.phi + math.pi) % (2 * math.pi) - math.pi
                self.assertAlmostEqual(diff, 0.0, places=9)

    def test_identity_sits_on_the_south_pole(self):
        e = euler_zxz(np.eye(2))
        self.assertAlmostEqual(e.theta, math.pi, places=12)
        self.assertGreater(gate_fidelity(e.to_unitary(), np.eye(2)), 1 - 1e-12)

    def test_pauli_x_sits_on_the_north_pole(self):
        e = euler_zxz(PAULI_X)
        self.assertAlmostEqual(e.theta, 0.0, places=12)
        self.assertGreater(gate_fidelity(e.to_unitary(), PAULI_X), 1 - 1e-12)

    def test_two_qubit_input_rejected(self):
        with self.assertRaises(ContractViolation):
            euler_zxz(np.eye(4))


class HopfTests(unittest.TestCase):
    def test_right_rz_does_not_move_the_image(self):
        rng = np.random.default_rng(13)
        U = random_unitary(2, rng)
        V = U @ rz(1.234)
        np.testing.assert_allclose(hopf_map(U).as_array(), hopf_map(V).as_array(), atol=1e-12)
        self.assertTrue(is_rz_equivalent(U, V))
        self.assertFalse(is_rz_equivalent(U, U @ PAULI_X))

    def test_from_angles(self):
        p = BlochPoint.from_angles(math.pi / 2, math.pi / 2)
        np.testing.assert_allclose(p.as_array(), [0.0, 1.0, 0.0], atol=1e-15)
        self.assertAlmostEqual(p.phi, math.pi / 2)


class DriftTests(unittest.TestCase):
    def test_random_drift_is_standardized(self):
        rng = np.random.default_rng(14)
        for _ in range(100):
            v = rng.normal(size=3)
            H = v[0] * PAULI_X + v[1] * PAULI_Y + v[2] * PAULI_Z
            std = standardize_drift(H)
            self.assertAlmostEqual(std.a, float(np.linalg.norm(v)), places=12)
            np.testing.assert_allclose(std.k @ H @ dagger(std.k), std.a * PAULI_Z, atol=1e-10)
            np.testing.assert_allclose(std.k @ dagger(std.k), np.eye(2), atol=1e-12)

    def test_poles(self):
        for sign in (1.0, -1.0):
            std = standardize_drift(sign * 0.5 * PAULI_Z)
            np.testing.assert_allclose(std.k @ (sign * 0.5 * PAULI_Z) @ dagger(std.k), 0.5 * PAULI_Z, atol=1e-12)

    def test_zero_and_traced_drifts_rejected(self):
        with self.assertRaises(ContractViolation):
            standardize_drift(np.zeros((2, 2)))
        with self.assertRaises(ContractViolation):
            standardize_drift(np.eye(2) + PAULI_X)


class CapTests(unittest.TestCase):
    def test_resonance_has_no_cap(self):
        self.assertEqual(unreachable_cap(1.0, 10.0, 10.0), 1.0)

    def test_off_resonant_pulses_stay_below_the_cap(self):
        rng = np.random.default_rng(15)
        for _ in range(10_000):
            A = float(rng.uniform(0.1, 2.0))
            omega0 = 10.0
            omega = omega0 + float(rng.uniform(-1.5, 1.5))
            spec = OscillatingFieldSpec(omega0=omega0, A=A, omega=omega, delta=float(rng.uniform(0, 2 * math.pi)))
            U = rwa_propagator_perp(spec, float(rng.uniform(0, 30)), float(rng.uniform(0, 3)))
            self.assertLessEqual(hopf_map(U).z, unreachable_cap(A, omega0, omega) + 1e-9)

    def test_negative_amplitude_rejected(self):
        with self.assertRaises(ContractViolation):
            unreachable_cap(-1.0, 1.0, 1.0)


class EulerZXZTypeTests(unittest.TestCase):
    def test_to_unitary_matches_function(self):
        e = EulerZXZ(1.0, 2.0, 3.0)
        np.testing.assert_allclose(e.to_unitary(), euler_to_unitary(e))


if __name__ == '__main__':
    unittest.main()
