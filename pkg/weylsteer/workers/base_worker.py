"""
Base worker class for long-running WeylSteer computations.
"""

import threading
from typing import Callable

from ..core.localization import translate_runtime
from ..utils import debug


class BaseWorker(threading.Thread):
    """
    Базовый класс для всех worker'ов.

    Обеспечивает:
    - Колбэки progress (текст) и item_processed (шаг прогресса)
    - Корректную остановку по request_stop
    - Флаг failed/failure_message для правдивого итогового статуса
    """

    def __init__(self, on_progress: Callable[[str], None] | None = None,
                 on_item: Callable[[int, int], None] | None = None):
        super().__init__(daemon=True)
        self._on_progress = on_progress
        self._on_item = on_item
        self._stop_flag = False
        self._stop_event = threading.Event()
        self.failed = False
        self.failure_message = ''
        self.result = None
        self.error = None

    def _t(self, key: str) -> str:
        return translate_runtime(key, key)

    def _fmt(self, key: str, **kwargs) -> str:
        text = self._t(key)
        try:
            return text.format(**kwargs)
        except Exception:
            return text

    def request_stop(self):
        """Запрос на корректную остановку операции."""
        self._stop_flag = True
        self._stop_event.set()

    @property
    def stop_requested(self) -> bool:
        return self._stop_flag or self._stop_event.is_set()

    def _set_failure(self, error) -> None:
        """Marks a fatal worker failure for a truthful final status."""
        self.failed = True
        self.failure_message = str(error or '')
        self.error = error

    def _emit_progress(self, message: str) -> None:
        debug(message)
        if self._on_progress is None:
            return
        try:
            self._on_progress(message)
        except Exception:
            pass

    def _emit_item(self, done: int, total: int) -> None:
        if self._on_item is None:
            return
        try:
            self._on_item(done, total)
        except Exception:
            pass

    def graceful_stop(self, timeout: float = 7.0) -> bool:
        """Корректно останавливает поток и ждёт завершения."""
        try:
            self.request_stop()
        except Exception:
            pass
        if self.is_alive():
            self.join(timeout)
        return not self.is_alive()

    def run(self):
        try:
            self.result = self.work()
        except Exception as e:
            self._set_failure(e)
            self._emit_progress(self._fmt('log.worker.failed', worker=type(self).__name__, error=e))

    def work(self):
        raise NotImplementedError
