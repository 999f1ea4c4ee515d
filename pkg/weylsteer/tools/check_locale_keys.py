#!/usr/bin/env python3
"""
Check that every message key used in the package exists in both locales.

The script scans literal first arguments of _t/_fmt/runtime_text/translate_runtime
calls and asserts that each key is present in ru-RU.json and en-US.json, and
that both catalogs define the same keys.
"""

from __future__ import annotations

import ast
import json
from pathlib import Path


KEY_CALL_TARGETS = {
    "_t",
    "_fmt",
    "runtime_text",
    "translate_runtime",
}

KEY_PREFIXES = ("error.", "log.")


def _call_name(node: ast.AST) -> str:
    if isinstance(node, ast.Name):
        return node.id
    if isinstance(node, ast.Attribute):
        return node.attr
    return ""


def collect_used_keys(root: Path) -> list[tuple[str, int, str]]:
    files = [p for p in root.rglob("*.py") if not {"tests", "tools"} & set(p.relative_to(root).parts)]
    out: list[tuple[str, int, str]] = []
    for path in sorted(files):
        try:
            tree = ast.parse(path.read_text(encoding="utf-8", errors="ignore"))
        except Exception:
            continue
        for node in ast.walk(tree):
            if not isinstance(node, ast.Call) or _call_name(node.func) not in KEY_CALL_TARGETS:
                continue
            if not node.args:
                continue
            arg = node.args[0]
            if isinstance(arg, ast.Constant) and isinstance(arg.value, str) and arg.value.startswith(KEY_PREFIXES):
                out.append((str(path).replace("\\", "/"), getattr(arg, "lineno", 0), arg.value))
    return out


def load_catalogs(root: Path) -> tuple[dict, dict]:
    ru_map = json.loads((root / "locales" / "ru-RU.json").read_text(encoding="utf-8"))
    en_map = json.loads((root / "locales" / "en-US.json").read_text(encoding="utf-8"))
    return ru_map, en_map


def find_problems(root: Path) -> list[str]:
    ru_map, en_map = load_catalogs(root)
    problems = []
    for file_path, line_no, key in collect_used_keys(root):
        for name, catalog in (("ru-RU", ru_map), ("en-US", en_map)):
            if key not in catalog:
                problems.append(f"{file_path}:{line_no}: {key} missing in {name}")
    for key in sorted(set(ru_map) ^ set(en_map)):
        problems.append(f"catalogs disagree on {key}")
    return problems


def main() -> int:
    root = Path(__file__).resolve().parents[1]
    problems = find_problems(root)
    if problems:
        print(f"Locale key coverage: {len(problems)} problems")
        for line in problems:
            print(line)
        return 1
    print("Locale key coverage: OK")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
