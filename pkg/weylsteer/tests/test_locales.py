from __future__ import annotations

# ruff: noqa: E402

import importlib.util
import json
import sys
import tempfile
import unittest
from pathlib import Path

PACKAGE_ROOT = Path(__file__).resolve().parents[1]
PACKAGE_PARENT = PACKAGE_ROOT.parent
if str(PACKAGE_PARENT) not in sys.path:
    sys.path.insert(0, str(PACKAGE_PARENT))


def _load_checker():
    path = PACKAGE_ROOT / 'tools' / 'check_locale_keys.py'
    spec = importlib.util.spec_from_file_location('check_locale_keys', path)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


checker = _load_checker()


class LocaleCoverageTests(unittest.TestCase):
    def test_package_keys_present_in_both_catalogs(self):
        self.assertEqual(checker.find_problems(PACKAGE_ROOT), [])

    def test_collects_known_keys(self):
        keys = {key for _, _, key in checker.collect_used_keys(PACKAGE_ROOT)}
        self.assertIn('error.qmath.bad_time', keys)

    def test_reports_missing_and_disagreeing_keys(self):
        with tempfile.TemporaryDirectory() as tmp:
            root = Path(tmp)
            (root / 'locales').mkdir()
            (root / 'mod.py').write_text(
                "def _t(k):\n    return k\n\n_t('error.demo.one')\n_t('other.ignored')\n",
                encoding='utf-8',
            )
            (root / 'locales' / 'ru-RU.json').write_text(json.dumps({'error.demo.one': 'x'}), encoding='utf-8')
            (root / 'locales' / 'en-US.json').write_text(json.dumps({'log.extra': 'y'}), encoding='utf-8')
            problems = checker.find_problems(root)
        self.assertEqual(len(problems), 3)
        self.assertTrue(problems[0].endswith('error.demo.one missing in en-US'))
        self.assertEqual(problems[1:], ['catalogs disagree on error.demo.one', 'catalogs disagree on log.extra'])


if __name__ == '__main__':
    unittest.main()
