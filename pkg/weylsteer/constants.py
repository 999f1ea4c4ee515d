# -*- coding: utf-8 -*-
"""
Константы для WeylSteer.

Этот модуль содержит все глобальные константы, используемые в пакете:
- Версия пакета и схемы конфигурации
- Допуски (структурные, физические, сравнение с опубликованными значениями)
- Параметры интегратора и поисковых процедур
- Настройки экспорта и CLI
"""

# ===== Версия пакета и схема конфигурации =====
APP_VERSION = "1.0.0"
CONFIG_SCHEMA_VERSION = "1.0"
CONFIG_SCHEMA_MIN = "1.0"
CONFIG_SCHEMA_NEXT_MAJOR = "2.0"

# ===== Допуски =====
STRUCTURAL_TOL = 1e-12
PHYSICS_TOL = 1e-9
PLAN_TOL = 1e-6
INPUT_UNITARY_TOL = 1e-8
PRINT_ZERO_TOL = 1e-12

# ===== Интегратор =====
# шагов на единицу t_f·‖H‖
STEPS_PER_RADIAN = 200
PROPAGATION_CHUNK = 1 << 16

# ===== Одиночный кубит: целочисленный поиск =====
LATTICE_SEARCH_LIMIT = 64
SCHEDULE_RESTARTS = 20
SCHEDULE_BUDGET = 10_000
SCHEDULE_FIDELITY = 1.0 - 1e-4
SCHEDULE_QUBIT1_AMPLITUDE_SHARE = 0.5
SCHEDULE_EXTRA_PERIODS = 8

# ===== Bang-Bang =====
BANGBANG_MULTISTARTS = 32
BANGBANG_RESIDUAL = 1e-11
BANGBANG_CLOSING_TURNS = 1

# ===== Двухкубитные стратегии =====
YY_FIELD_MAX = 3.0
YY_FIELD_STEP = 2.5e-4
YY_TIME_STEP = 0.005
YY_TIME_MAX = 12.6
YY_MIN_FIELD = 1.2e-3
YY_SHARED_MISS = 1e-8
WEAK_COUPLING_RATIO = 0.2
POLYLINE_MAX_SEGMENTS = 3

# ===== Потоки =====
MAX_WORKERS = 8
TRAJECTORY_CHUNK = 64

# ===== Экспорт и CLI =====
SIGNIFICANT_DIGITS = 12
TRAJECTORY_CSV_HEADER = ('t', 'c1', 'c2', 'c3', 'G1_re', 'G1_im', 'G2')
SEED_ENV_VAR = 'WEYLSTEER_SEED'
LANG_ENV_VAR = 'WEYLSTEER_LANG'
DEFAULT_SEED = 20240601

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_SOLVER = 2
EXIT_VERIFICATION = 3

# ===== Форматирование логов =====
LOG_TIMESTAMP_FORMAT = '%H:%M:%S'
