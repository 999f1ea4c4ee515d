from __future__ import annotations

# ruff: noqa: E402

import json
import math
import os
import sys
import tempfile
import unittest
from pathlib import Path
from unittest.mock import patch

import numpy as np

PACKAGE_PARENT = Path(__file__).resolve().parents[2]
if str(PACKAGE_PARENT) not in sys.path:
    sys.path.insert(0, str(PACKAGE_PARENT))

from weylsteer.constants import DEFAULT_SEED, SEED_ENV_VAR
from weylsteer.core.errors import ConfigError
from weylsteer.core.localization import get_runtime_ui_language, runtime_text, set_runtime_ui_language
from weylsteer.core.matrix_io import format_matrix, parse_matrix_text, read_matrix_file, write_matrix_file
from weylsteer.core.run_config import (
    RunConfig,
    check_schema_version,
    resolve_euler,
    resolve_matrix,
    resolve_targets,
    resolve_weyl,
)
from weylsteer.core.weyl import named_gate
from weylsteer.utils import format_number, format_row


class MatrixFormatTests(unittest.TestCase):
    def test_parse_real_and_complex_entries(self):
        text = '# Hadamard-like\n2\n1 0,1\n0,-1 1  # trailing comment\n'
        M = parse_matrix_text(text)
        np.testing.assert_allclose(M, [[1, 1j], [-1j, 1]])

    def test_written_file_reads_back(self):
        U = named_gate('ISWAP')
        with tempfile.TemporaryDirectory() as tmp:
            path = write_matrix_file(os.path.join(tmp, 'iswap.txt'), U, comment='iSWAP')
            with open(path, encoding='utf-8') as fh:
                self.assertTrue(fh.readline().startswith('# iSWAP'))
            np.testing.assert_allclose(read_matrix_file(path), U, atol=1e-12)

    def test_format_is_twelve_significant_digits(self):
        self.assertIn('0.707106781187,0', format_matrix(named_gate('H')))

    def test_malformed_inputs(self):
        cases = [
            '',
            'two\n1 0\n0 1\n',
            '3\n1 0 0\n0 1 0\n0 0 1\n',
            '2\n1 0\n',
            '2\n1 0 0\n0 1\n',
            '2\n1 x\n0 1\n',
            '2\n1 0,1,2\n0 1\n',
        ]
        for text in cases:
            with self.subTest(text=text):
                with self.assertRaises(ConfigError):
                    parse_matrix_text(text)

    def test_missing_file(self):
        with self.assertRaises(ConfigError):
            read_matrix_file('/nonexistent/weylsteer/matrix.txt')


class NumberFormatTests(unittest.TestCase):
    def test_tiny_values_print_as_zero(self):
        self.assertEqual(format_number(1e-14), '0')
        self.assertEqual(format_number(-1e-13), '0')
        self.assertEqual(format_number(-0.0), '0')

    def test_row(self):
        self.assertEqual(format_row([0.0, 1e-17, 1.0]), '0,0,1')
        self.assertEqual(format_number(math.pi), '3.14159265359')


class RunConfigTests(unittest.TestCase):
    def test_minimal_document(self):
        config = RunConfig.from_mapping({'command': 'weyl', 'target': 'CNOT'})
        self.assertEqual(config.command, 'weyl')
        self.assertIsNone(config.output_format)
        self.assertEqual(config.options, {})

    def test_full_document_from_file(self):
        doc = {
            'schema_version': '1.2',
            'command': 'steer2q',
            'strategy': 'isotropic_ratio',
            'hamiltonian': {'g2': [4, 4, 4], 'J': 0.1},
            'options': {'m': 4},
            'seed': 7,
            'output': {'path': 'out.json', 'format': 'JSON'},
        }
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'run.json')
            with open(path, 'w', encoding='utf-8') as fh:
                json.dump(doc, fh)
            config = RunConfig.from_file(path)
        self.assertEqual(config.output_format, 'json')
        self.assertEqual(config.option('m'), 4)
        self.assertEqual(config.base_dir, os.path.dirname(os.path.abspath(path)))
        self.assertEqual(config.resolve_path('a.txt'), os.path.join(config.base_dir, 'a.txt'))

    def test_rejected_documents(self):
        cases = [
            [],
            {'command': 'weyl', 'surprise': 1},
            {'command': 'teleport'},
            {'command': 'weyl', 'options': [1]},
            {'command': 'weyl', 'hamiltonian': 'strong'},
            {'command': 'weyl', 'output': {'format': 'xml'}},
            {'command': 'weyl', 'seed': 'lucky'},
            {'command': 'weyl', 'schema_version': '2.0'},
            {'command': 'weyl', 'schema_version': 'latest'},
        ]
        for doc in cases:
            with self.subTest(doc=doc):
                with self.assertRaises(ConfigError):
                    RunConfig.from_mapping(doc)

    def test_file_errors(self):
        with self.assertRaises(ConfigError):
            RunConfig.from_file('/nonexistent/weylsteer/run.json')
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'broken.json')
            with open(path, 'w', encoding='utf-8') as fh:
                fh.write('{"command": ')
            with self.assertRaises(ConfigError):
                RunConfig.from_file(path)

    def test_schema_versions(self):
        check_schema_version('1.0')
        check_schema_version('1.9.3')
        with self.assertRaises(ConfigError):
            check_schema_version('0.9')

    def test_seed_precedence(self):
        config = RunConfig.from_mapping({'command': 'bangbang', 'seed': 11})
        with patch.dict(os.environ, {SEED_ENV_VAR: ''}):
            self.assertEqual(config.resolved_seed(), 11)
            self.assertEqual(RunConfig(command='bangbang').resolved_seed(), DEFAULT_SEED)
        with patch.dict(os.environ, {SEED_ENV_VAR: '99'}):
            self.assertEqual(config.resolved_seed(), 99)
        with patch.dict(os.environ, {SEED_ENV_VAR: 'abc'}):
            with self.assertRaises(ConfigError):
                config.resolved_seed()

    def test_require_section(self):
        config = RunConfig(command='design1q')
        with self.assertRaises(ConfigError):
            config.require('field')


class TargetResolutionTests(unittest.TestCase):
    def test_named_and_inline_targets(self):
        np.testing.assert_allclose(resolve_matrix('cnot'), named_gate('CNOT'))
        inline = resolve_matrix({'matrix': [[0, 1], [1, 0]]})
        np.testing.assert_allclose(inline, named_gate('X'))
        pairs = resolve_matrix({'matrix': [[[0, 0], [0, -1]], [[0, 1], [0, 0]]]})
        np.testing.assert_allclose(pairs, named_gate('Y'))

    def test_euler_and_weyl_targets(self):
        e = resolve_euler({'euler': {'theta': 1.0, 'phi': 2.0, 'gamma': 3.0}})
        self.assertEqual((e.theta, e.phi, e.gamma), (1.0, 2.0, 3.0))
        self.assertAlmostEqual(resolve_euler('I').theta, math.pi)
        np.testing.assert_allclose(resolve_weyl([3 * math.pi / 2, 0, 0]).as_array(), [math.pi / 2, 0, 0],
                                   atol=1e-12)
        np.testing.assert_allclose(resolve_weyl('B').as_array(), [math.pi / 2, math.pi / 4, 0], atol=1e-7)

    def test_matrix_file_is_relative_to_document(self):
        with tempfile.TemporaryDirectory() as tmp:
            write_matrix_file(os.path.join(tmp, 'x.txt'), named_gate('X'))
            config = RunConfig(command='bangbang', base_dir=tmp)
            np.testing.assert_allclose(resolve_matrix({'matrix_file': 'x.txt'}, config), named_gate('X'))

    def test_bad_targets(self):
        for spec in ('NOPE', {'unknown': 1}, {'euler': {'theta': 1.0}}, {'matrix': [['a']]}):
            with self.subTest(spec=spec):
                with self.assertRaises(ConfigError):
                    resolve_euler(spec)

    def test_target_count(self):
        config = RunConfig(command='equiv', target='CNOT')
        with self.assertRaises(ConfigError):
            resolve_targets(config, 2)
        with self.assertRaises(ConfigError):
            resolve_targets(RunConfig(command='weyl'), 1)


class LocalizationTests(unittest.TestCase):
    def tearDown(self):
        set_runtime_ui_language('en')

    def test_switching_language(self):
        set_runtime_ui_language('ru-RU')
        self.assertEqual(get_runtime_ui_language(), 'ru')
        ru = runtime_text('error.config.missing_file', path='x')
        set_runtime_ui_language('en')
        en = runtime_text('error.config.missing_file', path='x')
        self.assertIn('x', ru)
        self.assertIn('x', en)
        self.assertNotEqual(ru, en)

    def test_unknown_key_falls_back_to_key(self):
        self.assertEqual(runtime_text('no.such.key'), 'no.such.key')


if __name__ == '__main__':
    unittest.main()
