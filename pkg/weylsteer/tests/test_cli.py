from __future__ import annotations

# ruff: noqa: E402

import contextlib
import io
import json
import math
import os
import sys
import tempfile
import unittest
from pathlib import Path
from unittest.mock import patch

PACKAGE_PARENT = Path(__file__).resolve().parents[2]
if str(PACKAGE_PARENT) not in sys.path:
    sys.path.insert(0, str(PACKAGE_PARENT))

import weylsteer.cli as cli
from weylsteer.constants import EXIT_CONFIG, EXIT_OK, EXIT_SOLVER, EXIT_VERIFICATION
from weylsteer.core.errors import SolverError
from weylsteer.core.matrix_io import write_matrix_file
from weylsteer.core.run_config import RunConfig
from weylsteer.core.steer2q import PlanVerification
from weylsteer.core.weyl import WeylPoint, named_gate
from weylsteer.main import main


def _run(doc: dict) -> tuple[int, str, str]:
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(RunConfig.from_mapping(doc), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


class InvariantCommandTests(unittest.TestCase):
    def test_cnot_invariants_line(self):
        code, out, _ = _run({'command': 'invariants', 'target': 'CNOT'})
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(out, '0,0,1\n')

    def test_weyl_json(self):
        code, out, _ = _run({'command': 'weyl', 'target': 'ISWAP', 'output': {'format': 'json'}})
        self.assertEqual(code, EXIT_OK)
        report = json.loads(out)
        self.assertAlmostEqual(report['c1'], math.pi / 2, places=7)
        self.assertAlmostEqual(report['c3'], 0.0, places=7)

    def test_equivalence(self):
        code, out, _ = _run({'command': 'equiv', 'target': ['CNOT', 'CZ']})
        self.assertEqual((code, out), (EXIT_OK, 'true\n'))
        code, out, _ = _run({'command': 'equiv', 'target': ['CNOT', 'SWAP']})
        self.assertEqual((code, out), (EXIT_OK, 'false\n'))

    def test_matrix_file_target(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = write_matrix_file(os.path.join(tmp, 'cz.txt'), named_gate('CZ'))
            code, out, _ = _run({'command': 'invariants', 'target': {'matrix_file': path}})
        self.assertEqual((code, out), (EXIT_OK, '0,0,1\n'))


class DesignCommandTests(unittest.TestCase):
    def test_identity_design(self):
        code, out, _ = _run({'command': 'design1q', 'target': 'I', 'field': {'omega0': 10, 'A': 1}})
        self.assertEqual(code, EXIT_OK)
        report = json.loads(out)
        self.assertEqual(report['durations']['t_f'], 0.0)
        self.assertTrue(report['verified'])

    def test_euler_target_design(self):
        doc = {
            'command': 'design1q',
            'strategy': 'rotframe',
            'target': {'euler': {'theta': 1.0, 'phi': 2.0, 'gamma': 0.5}},
            'field': {'omega0': 10, 'A': 1},
        }
        code, out, _ = _run(doc)
        self.assertEqual(code, EXIT_OK)
        self.assertGreaterEqual(json.loads(out)['fidelity'], 1 - 1e-9)

    def test_missing_field_section(self):
        code, out, err = _run({'command': 'design1q', 'target': 'H'})
        self.assertEqual(code, EXIT_CONFIG)
        self.assertEqual(out, '')
        self.assertIn('field', err)

    def test_hadamard_bangbang(self):
        doc = {'command': 'bangbang', 'target': 'H', 'pair': {'a': 1, 'b': 2, 'alpha': math.pi / 6}}
        code, out, _ = _run(doc)
        self.assertEqual(code, EXIT_OK)
        report = json.loads(out)
        self.assertEqual(report['segments'], 3)
        self.assertEqual(report['parameters']['max_switches'], 3)

    def test_solver_failure_exit_code(self):
        doc = {'command': 'bangbang', 'target': 'H', 'pair': {'a': 1, 'b': 2, 'alpha': math.pi / 6}}
        with patch.object(cli, 'synthesize_bangbang', side_effect=SolverError('stuck', residual=0.1)):
            code, _, err = _run(doc)
        self.assertEqual(code, EXIT_SOLVER)
        self.assertIn('stuck', err)


class SteeringCommandTests(unittest.TestCase):
    def test_isotropic_ratio_report(self):
        doc = {
            'command': 'steer2q',
            'strategy': 'isotropic_ratio',
            'hamiltonian': {'g2': [4, 4, 4], 'J': 0.1},
            'options': {'m': 4},
        }
        code, out, _ = _run(doc)
        self.assertEqual(code, EXIT_OK)
        report = json.loads(out)
        self.assertTrue(report['verified'])
        self.assertAlmostEqual(report['parameters']['lambda'], 0.7709, places=4)
        self.assertAlmostEqual(report['coupling_time'], 2.5 * math.pi, places=9)

    def test_failed_verification_still_writes_report(self):
        failed = PlanVerification(fidelity=0.5, invariant_residual=1.0, endpoint=WeylPoint(0.0, 0.0, 0.0),
                                  passed=False)
        doc = {'command': 'steer2q', 'strategy': 'isotropic_equal', 'hamiltonian': {'g': [0, 0, 1], 'J': 1}}
        with patch.object(cli, 'verify_plan', return_value=failed):
            code, out, _ = _run(doc)
        self.assertEqual(code, EXIT_VERIFICATION)
        self.assertFalse(json.loads(out)['verified'])

    def test_unknown_strategy(self):
        code, _, _ = _run({'command': 'steer2q', 'strategy': 'teleport', 'hamiltonian': {'J': 1}})
        self.assertEqual(code, EXIT_CONFIG)

    def test_trajectory_csv(self):
        doc = {
            'command': 'traj',
            'hamiltonian': {'J': [0, 0, 1]},
            'options': {'t_max': 0.5, 'samples': 5, 'chunk': 2, 'workers': 2},
        }
        code, out, _ = _run(doc)
        self.assertEqual(code, EXIT_OK)
        lines = out.splitlines()
        self.assertEqual(lines[0], 't,c1,c2,c3,G1_re,G1_im,G2')
        self.assertEqual(len(lines), 6)
        self.assertEqual(lines[1].split(',')[:4], ['0', '0', '0', '0'])

    def test_trajectory_of_plan(self):
        doc = {
            'command': 'traj',
            'strategy': 'polyline',
            'target': [math.pi / 2, 0, 0],
            'hamiltonian': {'J': [1, 0, 0]},
            'options': {'samples_per_segment': 8},
            'output': {'format': 'json'},
        }
        code, out, _ = _run(doc)
        self.assertEqual(code, EXIT_OK)
        report = json.loads(out)
        self.assertEqual(report['samples'], 9)
        self.assertAlmostEqual(report['endpoint_over_pi'][0], 0.5, places=6)

    def test_output_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'nested', 'inv.txt')
            code, out, _ = _run({'command': 'invariants', 'target': 'B', 'output': {'path': path}})
            self.assertEqual((code, out), (EXIT_OK, ''))
            with open(path, encoding='utf-8') as fh:
                self.assertEqual(fh.read(), '0,0,0\n')


class ValidateCommandTests(unittest.TestCase):
    def test_selected_checks(self):
        doc = {'command': 'validate', 'options': {'checks': ['named_invariants', 'hadamard_bangbang']}}
        code, out, _ = _run(doc)
        self.assertEqual(code, EXIT_OK)
        report = json.loads(out)
        self.assertTrue(report['passed'])
        self.assertEqual(len(report['checks']), 2)


class MainTests(unittest.TestCase):
    def test_flags_build_config(self):
        buffer = io.StringIO()
        with contextlib.redirect_stdout(buffer):
            code = main(['invariants', '--target', 'CNOT'])
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(buffer.getvalue(), '0,0,1\n')

    def test_document_command_must_match(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'run.json')
            with open(path, 'w', encoding='utf-8') as fh:
                json.dump({'command': 'weyl', 'target': 'CNOT'}, fh)
            err = io.StringIO()
            with contextlib.redirect_stderr(err):
                code = main(['invariants', path])
        self.assertEqual(code, EXIT_CONFIG)

    def test_two_targets_from_flags(self):
        buffer = io.StringIO()
        with contextlib.redirect_stdout(buffer):
            code = main(['equiv', '--target', 'CNOT', '--target', 'CZ'])
        self.assertEqual((code, buffer.getvalue()), (EXIT_OK, 'true\n'))

    def test_bad_flag_value_is_a_config_error(self):
        err = io.StringIO()
        with contextlib.redirect_stderr(err):
            code = main(['design1q', '--format', 'xml'])
        self.assertEqual(code, EXIT_CONFIG)
        self.assertIn('xml', err.getvalue())

    def test_missing_or_unknown_command_is_a_config_error(self):
        for argv in ([], ['teleport'], ['invariants', '--bogus']):
            with self.subTest(argv=argv):
                with contextlib.redirect_stderr(io.StringIO()):
                    self.assertEqual(main(argv), EXIT_CONFIG)


if __name__ == '__main__':
    unittest.main()
