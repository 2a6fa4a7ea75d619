"""Logging del paquete: stderr por defecto, fichero en cola si PATHCOVER_LOG_TO_FILE.

stdout queda libre para la salida de los comandos (JSON de soluciones, CSV del banco).
"""

from __future__ import annotations

import atexit
import logging
from contextlib import suppress
from logging.handlers import QueueHandler, QueueListener
from pathlib import Path
from queue import Queue
from threading import Lock
from typing import TYPE_CHECKING, Any, MutableMapping, NamedTuple, Optional

from pathcover.config import REPO_ROOT, PathCoverSettings

_ROOT_LOGGER = "pathcover"
_OFF = logging.CRITICAL + 10
_FORMAT = "%(asctime)s | %(levelname)s | %(name)s | %(message)s"
_TRACE_FORMAT = "%(asctime)s | %(levelname)s | %(name)s:%(lineno)d | %(threadName)s | %(message)s"
_DATE_FORMAT = "%H:%M:%S"


class LogSetup(NamedTuple):
    enabled: bool
    debug: bool
    file_path: str  # "" -> stderr

    @classmethod
    def from_settings(cls, cfg: PathCoverSettings, debug_override: bool) -> "LogSetup":
        path = str(log_file_path(cfg.log_file_name)) if cfg.log_to_file else ""
        return cls(cfg.log_enabled, cfg.log_debug or debug_override, path)


_lock = Lock()
_active: Optional[LogSetup] = None
_debug_override = False
_listener: Optional[QueueListener] = None


def log_file_path(file_name: str | Path) -> Path:
    path = Path(str(file_name).strip() or "pathcover.log")
    return path if path.is_absolute() else (REPO_ROOT / "logs" / path).resolve()


def _shutdown_listener() -> None:
    global _listener
    if _listener is None:
        return
    _listener.stop()
    for handler in _listener.handlers:
        with suppress(Exception):
            handler.close()
    _listener = None


atexit.register(_shutdown_listener)


def _build_handler(setup: LogSetup, level: int) -> logging.Handler:
    global _listener
    formatter = logging.Formatter(_TRACE_FORMAT if setup.debug else _FORMAT, _DATE_FORMAT)
    if not setup.file_path:
        stream = logging.StreamHandler()
        stream.setLevel(level)
        stream.setFormatter(formatter)
        return stream
    # bench workers log from several threads; one listener thread owns the file
    target = Path(setup.file_path)
    target.parent.mkdir(parents=True, exist_ok=True)
    file_handler = logging.FileHandler(target, encoding="utf-8", delay=True)
    file_handler.setLevel(level)
    file_handler.setFormatter(formatter)
    queue: Queue[logging.LogRecord] = Queue(-1)
    _listener = QueueListener(queue, file_handler, respect_handler_level=True)
    _listener.start()
    queued = QueueHandler(queue)
    queued.setLevel(level)
    return queued


def configure_logging(force: bool = False, debug: bool | None = None) -> None:
    """Aplica la config de logging actual (entorno + .env.pathcover).

    Solo reconstruye los handlers si cambia la configuracion efectiva o con `force`.
    `debug=True` fuerza DEBUG aunque PATHCOVER_LOG_DEBUG sea false (`--trace`).
    """
    global _active, _debug_override
    with _lock:
        if debug is not None:
            _debug_override = debug
        setup = LogSetup.from_settings(PathCoverSettings(), _debug_override)
        if not force and setup == _active:
            return
        _active = setup

        root = logging.getLogger(_ROOT_LOGGER)
        _shutdown_listener()
        for handler in list(root.handlers):
            root.removeHandler(handler)
            with suppress(Exception):
                handler.close()
        root.propagate = False

        if not setup.enabled:
            root.disabled = True
            root.setLevel(_OFF)
            root.addHandler(logging.NullHandler())
            return

        level = logging.DEBUG if setup.debug else logging.INFO
        root.disabled = False
        root.setLevel(level)
        root.addHandler(_build_handler(setup, level))


if TYPE_CHECKING:
    _AdapterBase = logging.LoggerAdapter[logging.Logger]
else:
    _AdapterBase = logging.LoggerAdapter


class ContextAdapter(_AdapterBase):
    """Antepone el contexto fijo (instancia, nivel de recursion...) a cada mensaje."""

    def process(
        self, msg: Any, kwargs: MutableMapping[str, Any]
    ) -> tuple[Any, MutableMapping[str, Any]]:
        if not self.extra:
            return msg, kwargs
        prefix = " ".join(f"{key}={value}" for key, value in self.extra.items())
        return f"[{prefix}] {msg}", kwargs


def get_logger(name: str | None = None, **context: object) -> ContextAdapter:
    if _active is None:
        configure_logging()
    return ContextAdapter(logging.getLogger(name or _ROOT_LOGGER), context)
