"""Пути к входным JSON зоноидов и к файлам отчётов."""

import logging
from pathlib import Path

import config
from src.errors import SchemaError

logger = logging.getLogger(__name__)

ROOT_DIR = Path(__file__).resolve().parents[1]


def data_dir():
    raw = config.DATA_DIR
    if not raw:
        return ROOT_DIR / "data"
    path = Path(raw)
    return path if path.is_absolute() else ROOT_DIR / path


def resolve_data_path(path):
    """
    Путь к входному файлу: абсолютный или существующий относительный берётся как есть,
    иначе ищется в DATA_DIR. Если файла нет нигде - SchemaError со списком мест.
    """
    path = Path(path)
    candidates = [path] if path.is_absolute() else [path, data_dir() / path]
    for candidate in candidates:
        if candidate.is_file():
            return candidate
    tried = ", ".join(str(c) for c in candidates)
    raise SchemaError(f"Входной файл не найден: {tried}")


def prepare_output_path(path):
    """Путь отчёта --output: используется как есть, родительская директория создаётся."""
    path = Path(path)
    if path.parent and not path.parent.exists():
        logger.info(f"[LOG] Создаю директорию {path.parent}")
        path.parent.mkdir(parents=True, exist_ok=True)
    return path
