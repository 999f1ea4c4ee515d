# -*- coding: utf-8 -*-
"""
Entry-point to run WeylSteer via `python -m weylsteer` or directly.
"""

import os
import sys as _sys

# Всегда добавляем корень проекта (родитель каталога пакета) в sys.path ПЕРЕД импортами,
# чтобы абсолютный импорт гарантированно подтянул локальный пакет, а не установленный.
try:
    _project_root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
    if _project_root and _project_root not in _sys.path:
        _sys.path.insert(0, _project_root)
except Exception:
    pass

try:
    # Предпочитаем относительный импорт, если модуль запущен как пакет
    from .main import main  # type: ignore
except Exception:
    from weylsteer.main import main  # type: ignore


if __name__ == "__main__":
    raise SystemExit(main())
