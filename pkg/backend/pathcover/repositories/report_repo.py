from __future__ import annotations

import json
import logging
import os
from pathlib import Path
from typing import Generic, Optional, TypeVar

from pydantic import BaseModel, ValidationError

logger = logging.getLogger(__name__)

DocT = TypeVar("DocT", bound=BaseModel)


class JsonDocumentRepo(Generic[DocT]):
    """Un documento pydantic por fichero JSON, escrito de forma atomica."""

    def __init__(self, path: Path, model: type[DocT]) -> None:
        self._path = path
        self._model = model

    @property
    def path(self) -> Path:
        return self._path

    def load(self) -> Optional[DocT]:
        if not self._path.exists():
            return None
        try:
            with self._path.open("r", encoding="utf-8") as f:
                data = json.load(f)
        except Exception:
            logger.exception("Failed to parse JSON at %s", self._path)
            return None
        try:
            return self._model.model_validate(data)
        except ValidationError:
            logger.exception("Invalid %s document at %s", self._model.__name__, self._path)
            return None

    def save(self, doc: DocT) -> None:
        self._path.parent.mkdir(parents=True, exist_ok=True)
        tmp_path = self._path.with_name(f"{self._path.name}.tmp")
        with tmp_path.open("w", encoding="utf-8") as f:
            json.dump(doc.model_dump(mode="json"), f, ensure_ascii=False, indent=2)
            f.flush()
            os.fsync(f.fileno())
        tmp_path.replace(self._path)


def write_text_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp_path = path.with_name(f"{path.name}.tmp")
    with tmp_path.open("w", encoding="utf-8") as f:
        f.write(text)
        f.flush()
        os.fsync(f.fileno())
    tmp_path.replace(path)
