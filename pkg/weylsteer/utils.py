"""
Утилитарные функции для WeylSteer.

Содержит:
- Систему логирования и отладки (буфер сообщений с временными метками)
- Функции для работы с путями и ресурсами
- Форматирование чисел для текстового вывода
- Атомарную запись файлов
"""

import os
import sys
import tempfile
from datetime import datetime
from threading import Lock, local

from .constants import LOG_TIMESTAMP_FORMAT, PRINT_ZERO_TOL, SIGNIFICANT_DIGITS

# Глобальные переменные для системы логирования
DEBUG_BUFFER = []
_DEBUG_ECHO = False

# Блокировка для записи в файлы
write_lock = Lock()
_DBG_TLS = local()


def resource_path(relative: str) -> str:
    """Возвращает абсолютный путь к ресурсу внутри пакета (работает и для PyInstaller onefile)."""
    try:
        base_path = getattr(sys, '_MEIPASS', None)
        if base_path and os.path.exists(os.path.join(base_path, relative)):
            return os.path.join(base_path, relative)
    except Exception:
        pass
    try:
        base = os.path.dirname(__file__)
    except Exception:
        base = os.getcwd()
    return os.path.join(base, relative)


def set_debug_echo(enabled: bool) -> None:
    """Включает дублирование debug-сообщений в stderr (режим --verbose)."""
    global _DEBUG_ECHO
    _DEBUG_ECHO = bool(enabled)


def debug(msg: str):
    """Добавляет сообщение в буфер отладки с временной меткой."""
    ts = datetime.now().strftime(LOG_TIMESTAMP_FORMAT)
    formatted_msg = f"[{ts}] {msg}"
    DEBUG_BUFFER.append(formatted_msg)
    if not _DEBUG_ECHO:
        return
    # Защита от реэнтрантности (например, при ошибках вывода stderr)
    if getattr(_DBG_TLS, 'in_debug', False):
        return
    _DBG_TLS.in_debug = True
    try:
        stream = getattr(sys, 'stderr', None)
        if stream is not None:
            stream.write(formatted_msg + '\n')
    except Exception:
        pass
    finally:
        _DBG_TLS.in_debug = False


def get_debug_buffer():
    """Возвращает текущий буфер отладки."""
    return DEBUG_BUFFER


def clear_debug_buffer():
    """Очищает буфер отладки."""
    DEBUG_BUFFER.clear()


def format_number(value: float, digits: int = SIGNIFICANT_DIGITS) -> str:
    """Форматирует число с заданным числом значащих цифр.

    Значения по модулю меньше PRINT_ZERO_TOL печатаются как 0, отрицательный ноль
    не появляется.
    """
    x = float(value)
    if abs(x) < PRINT_ZERO_TOL:
        x = 0.0
    return f"{x + 0.0:.{digits}g}"


def format_row(values) -> str:
    """Строка CSV из чисел в формате format_number."""
    return ','.join(format_number(v) for v in values)


def atomic_write_text(path: str, text: str, encoding: str = 'utf-8') -> str:
    """Записывает файл атомарно: временный файл в той же папке, затем os.replace.

    Args:
        path: Путь к итоговому файлу
        text: Содержимое
        encoding: Кодировка

    Returns:
        Абсолютный путь записанного файла.
    """
    target = os.path.abspath(path)
    directory = os.path.dirname(target) or os.getcwd()
    os.makedirs(directory, exist_ok=True)
    with write_lock:
        fd, tmp_path = tempfile.mkstemp(prefix='.weylsteer-', suffix='.tmp', dir=directory)
        try:
            with os.fdopen(fd, 'w', encoding=encoding, newline='') as fh:
                fh.write(text)
                fh.flush()
                os.fsync(fh.fileno())
            os.replace(tmp_path, target)
        except BaseException:
            try:
                os.unlink(tmp_path)
            except OSError:
                pass
            raise
    return target
