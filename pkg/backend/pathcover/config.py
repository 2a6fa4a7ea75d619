"""Configuracion del solver (se carga desde el entorno y .env.pathcover)."""

from __future__ import annotations

import logging
import os
from pathlib import Path

from dotenv import dotenv_values
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

# Paths
PACKAGE_DIR = Path(__file__).resolve().parent
if PACKAGE_DIR.parent.name == "backend":
    REPO_ROOT = PACKAGE_DIR.parent.parent
else:
    REPO_ROOT = PACKAGE_DIR.parent

_ENV_DIR_OVERRIDE = os.getenv("PATHCOVER_ENV_DIR", "").strip()
if _ENV_DIR_OVERRIDE:
    _env_dir = Path(_ENV_DIR_OVERRIDE).expanduser()
    if not _env_dir.is_absolute():
        _env_dir = (REPO_ROOT / _env_dir).resolve()
    ENV_DIR = _env_dir
else:
    ENV_DIR = REPO_ROOT

PATHCOVER_ENV_PATH = ENV_DIR / ".env.pathcover"

logger = logging.getLogger(__name__)

_DOTENV_MANAGED_KEYS: set[str] = set()


class PathCoverSettings(BaseSettings):
    """Configuración del solver de path cover (entorno + .env.pathcover)."""

    model_config = SettingsConfigDict(extra="ignore")

    # Logging
    log_enabled: bool = Field(default=True, alias="PATHCOVER_LOG_ENABLED")
    log_to_file: bool = Field(default=False, alias="PATHCOVER_LOG_TO_FILE")
    log_file_name: str = Field(default="pathcover.log", alias="PATHCOVER_LOG_FILE_NAME")
    log_debug: bool = Field(default=False, alias="PATHCOVER_LOG_DEBUG")

    # Exact search
    exact_cap: int = Field(default=20, ge=1, alias="PATHCOVER_EXACT_CAP")
    exact_time_budget: float = Field(default=30.0, gt=0, alias="PATHCOVER_EXACT_TIME_BUDGET")
    base_case_max_n: int = Field(default=8, ge=4, alias="PATHCOVER_BASE_CASE_MAX_N")

    # Audits / pipeline toggles
    strict_audits: bool = Field(default=False, alias="PATHCOVER_STRICT_AUDITS")
    matching_audit_max_n: int = Field(default=250, ge=0, alias="PATHCOVER_MATCHING_AUDIT_MAX_N")
    cover_shortcut: bool = Field(default=True, alias="PATHCOVER_COVER_SHORTCUT")
    trace_moves: bool = Field(default=False, alias="PATHCOVER_TRACE_MOVES")

    # Bench
    bench_workers: int = Field(default=1, ge=1, alias="PATHCOVER_BENCH_WORKERS")


def _load_pathcover_env_to_os() -> None:
    """Carga .env.pathcover en `os.environ` sin pisar variables exportadas."""
    if not PATHCOVER_ENV_PATH.exists():
        for key in list(_DOTENV_MANAGED_KEYS):
            os.environ.pop(key, None)
        _DOTENV_MANAGED_KEYS.clear()
        return

    parsed = dotenv_values(str(PATHCOVER_ENV_PATH))
    allowed_values: dict[str, str] = {}
    for raw_key, raw_value in parsed.items():
        key = str(raw_key or "").strip()
        if not key.startswith("PATHCOVER_"):
            if key:
                logger.debug("Ignoring non-pathcover key %s in %s", key, PATHCOVER_ENV_PATH)
            continue
        allowed_values[key] = "" if raw_value is None else str(raw_value)

    # Clear keys previously managed by dotenv but removed from file.
    for key in list(_DOTENV_MANAGED_KEYS):
        if key not in allowed_values:
            os.environ.pop(key, None)
            _DOTENV_MANAGED_KEYS.discard(key)

    for key, value in allowed_values.items():
        if key in os.environ and key not in _DOTENV_MANAGED_KEYS:
            continue
        os.environ[key] = value
        _DOTENV_MANAGED_KEYS.add(key)


_load_pathcover_env_to_os()

# Singleton de settings
settings = PathCoverSettings()


def reload_settings() -> PathCoverSettings:
    """Recarga settings desde el entorno y .env.pathcover (in place)."""
    _load_pathcover_env_to_os()
    new_settings = PathCoverSettings()
    for field_name in type(settings).model_fields:
        setattr(settings, field_name, getattr(new_settings, field_name))
    return settings
