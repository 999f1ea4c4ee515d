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

from scipy.spatial.transform import Rotation

from weylsteer.core.bangbang import (
    HamiltonianPair,
    annulus_boundary,
    compose_sequence,
    max_switches,
    standardize_pair,
    synthesize_bangbang,
)
from weylsteer.core.errors import ContractViolation
from weylsteer.core.qmath import PAULI_X, PAULI_Y, PAULI_Z, dagger, expm_hermitian, gate_fidelity, random_unitary
from weylsteer.core.weyl import named_gate


class SwitchBoundTests(unittest.TestCase):
    def test_bounds(self):
        self.assertEqual(max_switches(0.0), 2)
        self.assertEqual(max_switches(math.pi / 6), 3)
        self.assertEqual(max_switches(math.pi / 4), 4)

    def test_parallel_axes_rejected(self):
        with self.assertRaises(ContractViolation):
            max_switches(math.pi / 2)

    def test_annulus_grows_with_rotations(self):
        alpha = math.pi / 6
        self.assertEqual(annulus_boundary(alpha, 0), -1.0)
        self.assertAlmostEqual(annulus_boundary(alpha, 1), math.cos(2 * alpha), places=12)
        self.assertEqual(annulus_boundary(alpha, 2), 1.0)
        with self.assertRaises(ContractViolation):
            annulus_boundary(alpha, -1)

    def test_one_rotation_stays_inside_annulus(self):
        alpha = math.pi / 5
        axis = np.array([math.cos(alpha), 0.0, math.sin(alpha)])
        cap = annulus_boundary(alpha, 1)
        for angle in np.linspace(0.0, 2 * math.pi, 97):
            z = Rotation.from_rotvec(angle * axis).apply([0.0, 0.0, -1.0])[2]
            self.assertLessEqual(z, cap + 1e-12)


class StandardizeTests(unittest.TestCase):
    def test_random_pair_standardized(self):
        rng = np.random.default_rng(41)
        for _ in range(30):
            v, w = rng.normal(size=3), rng.normal(size=3)
            H1 = v[0] * PAULI_X + v[1] * PAULI_Y + v[2] * PAULI_Z
            H2 = w[0] * PAULI_X + w[1] * PAULI_Y + w[2] * PAULI_Z
            std = standardize_pair(HamiltonianPair(H1, H2))
            expected2 = std.b * (math.sin(std.alpha) * PAULI_Z + math.cos(std.alpha) * PAULI_X)
            np.testing.assert_allclose(std.k @ H1 @ dagger(std.k), std.a * PAULI_Z, atol=1e-9)
            np.testing.assert_allclose(std.k @ H2 @ dagger(std.k), expected2, atol=1e-9)
            self.assertGreaterEqual(math.cos(std.alpha), 0.0)

    def test_parallel_pair_rejected(self):
        with self.assertRaises(ContractViolation):
            standardize_pair(HamiltonianPair(PAULI_Z, 2.0 * PAULI_Z))

    def test_traced_hamiltonian_rejected(self):
        with self.assertRaises(ContractViolation):
            HamiltonianPair(np.eye(2), PAULI_X)


class SynthesisTests(unittest.TestCase):
    def test_hadamard_in_three_segments(self):
        pair = HamiltonianPair.standard(1.0, 2.0, math.pi / 6)
        seq = synthesize_bangbang(named_gate('H'), pair)
        self.assertEqual(seq.segments, 3)
        self.assertEqual(seq.switches, 2)
        self.assertEqual(seq.trailing_z, 0.0)
        self.assertAlmostEqual(seq.durations[0], 9.9025, places=3)
        self.assertAlmostEqual(seq.durations[1], 0.47766, places=4)
        self.assertAlmostEqual(seq.durations[2], 0.47766, places=4)
        np.testing.assert_allclose(seq.unitary(), named_gate('H'), atol=1e-9)

    def test_pure_drift_target_is_one_segment(self):
        pair = HamiltonianPair.standard(1.0, 2.0, math.pi / 6)
        seq = synthesize_bangbang(expm_hermitian(PAULI_Z, 0.7), pair)
        self.assertEqual(seq.segments, 1)
        self.assertAlmostEqual(seq.durations[0], 0.7, places=9)

    def test_random_targets_respect_switch_bound(self):
        rng = np.random.default_rng(42)
        for alpha in (math.pi / 6, math.pi / 4):
            pair = HamiltonianPair.standard(1.0, 2.0, alpha)
            bound = max_switches(alpha)
            for _ in range(50):
                U = random_unitary(2, rng)
                seq = synthesize_bangbang(U, pair, rng=rng)
                self.assertLessEqual(seq.switches, bound)
                self.assertTrue(all(d >= 0.0 for d in seq.durations))
                self.assertGreaterEqual(gate_fidelity(seq.unitary(), U), 1 - 1e-9)

    def test_general_pair_in_original_frame(self):
        rng = np.random.default_rng(43)
        H1 = 0.8 * PAULI_X + 0.3 * PAULI_Y - 0.5 * PAULI_Z
        H2 = -0.2 * PAULI_X + 1.1 * PAULI_Y + 0.4 * PAULI_Z
        pair = HamiltonianPair(H1, H2)
        U = random_unitary(2, rng)
        seq = synthesize_bangbang(U, pair, rng=rng)
        np.testing.assert_allclose(compose_sequence(seq.durations, pair) * seq.global_phase, U, atol=1e-8)

    def test_negative_duration_rejected(self):
        with self.assertRaises(ContractViolation):
            compose_sequence([1.0, -0.1], HamiltonianPair.standard(1.0, 1.0, 0.0))


if __name__ == '__main__':
    unittest.main()
