"""
IsQP Helpers Module
Tətbiq üçün yardımçı funksiyalar.
- Konfiqurasiya oxuma/yazma
- JSON / CSV fayl əməliyyatları
- Vaxt formatlaşdırma
"""
from __future__ import annotations

import csv
import io
import json
import os
from typing import Any, Dict, Iterable, List, Sequence

import numpy as np

from .logger import get_logger

logger = get_logger()


# =============================================================================
# Configuration Functions
# =============================================================================

def get_app_root() -> str:
    """Layihənin kök qovluğunu qaytarır."""
    return os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))


def get_config_path() -> str:
    """Konfiqurasiya qovluğunun yolunu qaytarır."""
    return os.path.join(get_app_root(), 'config')


def load_config(filename: str = 'settings.json') -> Dict[str, Any]:
    """
    JSON konfiqurasiya faylını oxuyur.

    Args:
        filename: Fayl adı (config qovluğunda)

    Returns:
        Konfiqurasiya dictionary-si
    """
    config_path = os.path.join(get_config_path(), filename)

    try:
        with open(config_path, 'r', encoding='utf-8') as f:
            config = json.load(f)
            logger.debug(f"Config loaded: {filename}")
            return config
    except FileNotFoundError:
        logger.error(f"Config file not found: {config_path}")
        return {}
    except json.JSONDecodeError as e:
        logger.error(f"Invalid JSON in config file: {e}")
        return {}


def load_validated_config(filename: str = 'settings.json'):
    """
    Konfiqurasiya faylını Pydantic validation ilə oxuyur.
    Səhv olduqda default dəyərləri istifadə edir.

    Args:
        filename: Fayl adı (config qovluğunda)

    Returns:
        Validated AppConfig
    """
    from .config_models import AppConfig
    from pydantic import ValidationError

    raw_config = load_config(filename)

    try:
        return AppConfig(**raw_config)
    except ValidationError as e:
        logger.error(f"Config validation failed: {e}")
        logger.warning("Using default configuration")
        return AppConfig()


# =============================================================================
# JSON / CSV Functions
# =============================================================================

def to_jsonable(value: Any) -> Any:
    """numpy massivlərini və skalyarlarını JSON-a uyğun tiplərə çevirir."""
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, dict):
        return {k: to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    return value


def read_json(path: str) -> Any:
    """JSON faylını oxuyur (xətaları çağırana ötürür)."""
    with open(path, 'r', encoding='utf-8') as f:
        return json.load(f)


def dumps_json(data: Any) -> str:
    """Deterministic JSON text (same input -> same bytes)."""
    return json.dumps(to_jsonable(data), indent=2, sort_keys=True)


def write_json(data: Any, path: str) -> None:
    """Data-nı JSON faylına yazır."""
    directory = os.path.dirname(os.path.abspath(path))
    ensure_dir(directory)
    with open(path, 'w', encoding='utf-8') as f:
        f.write(dumps_json(data))
        f.write("\n")
    logger.debug(f"JSON written: {path}")


def load_numeric_csv(path: str) -> np.ndarray:
    """Rəqəmsal CSV faylını 2D massiv kimi oxuyur."""
    return np.loadtxt(path, delimiter=',', ndmin=2, dtype=np.float64)


def format_csv(columns: Sequence[str], rows: Iterable[Dict[str, Any]]) -> str:
    """Sətirləri CSV mətninə çevirir (sabit sütun sırası ilə)."""
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=list(columns), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: to_jsonable(row.get(k)) for k in columns})
    return buffer.getvalue()


def write_csv(columns: Sequence[str], rows: Iterable[Dict[str, Any]], path: str) -> None:
    """CSV faylı yazır."""
    ensure_dir(os.path.dirname(os.path.abspath(path)))
    with open(path, 'w', encoding='utf-8', newline='') as f:
        f.write(format_csv(columns, rows))
    logger.debug(f"CSV written: {path}")


# =============================================================================
# Time & Storage Functions
# =============================================================================

def format_seconds(seconds: float) -> str:
    """Saniyələri oxunan formata çevirir (HH:MM:SS)."""
    hours = int(seconds // 3600)
    minutes = int((seconds % 3600) // 60)
    secs = int(seconds % 60)
    return f"{hours:02d}:{minutes:02d}:{secs:02d}"


def ensure_dir(path: str) -> bool:
    """
    Qovluğun mövcudluğunu yoxlayır, yoxdursa yaradır.

    Returns:
        Uğurlu olub-olmadığı
    """
    if not path:
        return True
    try:
        os.makedirs(path, exist_ok=True)
        return True
    except Exception as e:
        logger.error(f"Failed to create directory {path}: {e}")
        return False


def parse_int_list(text: str) -> List[int]:
    """Parse "10,20,50" into [10, 20, 50]."""
    values = [int(part) for part in text.split(',') if part.strip()]
    if not values:
        raise ValueError(f"empty integer list: {text!r}")
    return values


