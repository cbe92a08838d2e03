import csv
import dataclasses
import io
import json
import logging
from fractions import Fraction

import numpy as np

from src.errors import ComputationError, SchemaError
from src.exterior import ExteriorElement, SimpleVector
from src.pi_scalar import PiScalar
from src.zonoid import Atom, VirtualZonoid

logger = logging.getLogger(__name__)


def serialize_for_json(obj):
    """
    Рекурсивно приводит объект к сериализуемому виду (Fraction -> "p/q", PiScalar -> dict, ...).
    """
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    elif isinstance(obj, Fraction):
        return str(obj)
    elif isinstance(obj, (int, float)):
        return obj
    elif isinstance(obj, PiScalar):
        return obj.to_dict()
    elif isinstance(obj, np.generic):
        return obj.item()
    elif isinstance(obj, np.ndarray):
        return serialize_for_json(obj.tolist())
    elif isinstance(obj, VirtualZonoid):
        return zonoid_to_dict(obj)
    elif isinstance(obj, dict):
        return {_key(k): serialize_for_json(v) for k, v in obj.items()}
    elif isinstance(obj, (list, tuple, set)):
        return [serialize_for_json(item) for item in obj]
    elif dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        if hasattr(obj, "parts") and hasattr(obj, "boxes"):
            return str(obj)
        return {f.name: serialize_for_json(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    elif hasattr(obj, '__dict__'):
        return serialize_for_json(vars(obj))
    else:
        return str(obj)


def _key(k):
    if isinstance(k, str):
        return k
    if isinstance(k, tuple):
        return ",".join(str(x) for x in k)
    return str(k)


def parse_rational(value):
    """Число JSON или строка "p/q" -> Fraction (float остаётся float)."""
    if isinstance(value, bool):
        raise SchemaError(f"Ожидалось число, получено {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, float):
        return value
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise SchemaError(f"Не рациональное число: {value!r}") from e
    raise SchemaError(f"Ожидалось число или 'p/q', получено {type(value).__name__}")


def _load_json(path):
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except FileNotFoundError as e:
        raise SchemaError(f"Файл {path} не найден") from e
    except json.JSONDecodeError as e:
        raise SchemaError(f"Некорректный JSON в {path}: {e}") from e


def _save_json(path, data):
    with open(path, "w", encoding="utf-8") as f:
        json.dump(serialize_for_json(data), f, ensure_ascii=False, indent=2)


def dumps(data):
    return json.dumps(serialize_for_json(data), ensure_ascii=False, indent=2)


def _require(data, key, kind):
    if key not in data:
        raise SchemaError(f"Нет обязательного поля '{key}'")
    value = data[key]
    if not isinstance(value, kind) or isinstance(value, bool):
        raise SchemaError(f"Поле '{key}' должно быть {kind}, получено {value!r}")
    return value


def _center_from_dict(raw, ambient, degree):
    if not isinstance(raw, dict) or not isinstance(raw.get("coords", []), list):
        raise SchemaError("center должен иметь вид {\"coords\": [[[индексы], значение], ...]}")
    coords = {}
    for entry in raw.get("coords", []):
        if not (isinstance(entry, list) and len(entry) == 2 and isinstance(entry[0], list)):
            raise SchemaError(f"Некорректная координата центра: {entry!r}")
        indices, value = entry
        if any(not isinstance(i, int) or i < 1 or i > ambient for i in indices):
            raise SchemaError(f"Индексы центра должны быть в 1..{ambient}: {indices}")
        coords[tuple(i - 1 for i in indices)] = parse_rational(value)
    return ExteriorElement(ambient, degree, coords)


def zonoid_from_dict(data):
    """
    {"ambient": N, "degree": d, "atoms": [{"w": ..., "v": [[...], ...]}], "center": {...}}.

    Индексы координат центра во входе 1-базные.
    """
    if not isinstance(data, dict):
        raise SchemaError("Зоноид должен быть JSON-объектом")
    ambient = _require(data, "ambient", int)
    degree = data.get("degree", 1)
    if not isinstance(degree, int) or isinstance(degree, bool):
        raise SchemaError(f"degree должен быть целым, получено {degree!r}")
    atoms = []
    for raw in data.get("atoms", []):
        if not isinstance(raw, dict) or "v" not in raw:
            raise SchemaError(f"Атом должен иметь поле 'v': {raw!r}")
        factors = raw["v"]
        if not isinstance(factors, list) or any(not isinstance(f, list) for f in factors):
            raise SchemaError(f"'v' - список векторов-факторов, получено {factors!r}")
        try:
            vector = SimpleVector(ambient, [[parse_rational(x) for x in f] for f in factors])
            atoms.append(Atom(parse_rational(raw.get("w", 1)), vector))
        except SchemaError:
            raise
        except ComputationError as e:
            raise SchemaError(f"Некорректный атом: {e}") from e
    center = None
    if data.get("center") is not None:
        center = _center_from_dict(data["center"], ambient, degree)
    try:
        return VirtualZonoid(ambient, degree, tuple(atoms), center)
    except ComputationError as e:
        raise SchemaError(f"Некорректный зоноид: {e}") from e


def zonoid_to_dict(z):
    data = {
        "ambient": z.ambient_dim,
        "degree": z.degree,
        "atoms": [
            {"w": serialize_for_json(a.weight), "v": serialize_for_json(a.vector.factors)}
            for a in z.atoms
        ],
    }
    if z.center is not None:
        data["center"] = {
            "coords": [[[i + 1 for i in key], serialize_for_json(value)] for key, value in z.center.coords.items()]
        }
    return data


def load_zonoid(path):
    return zonoid_from_dict(_load_json(path))


def _flatten(prefix, value, out):
    if isinstance(value, dict):
        for k, v in value.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), v, out)
    else:
        out.append((prefix, value if not isinstance(value, list) else json.dumps(value, ensure_ascii=False)))


def to_csv(report):
    """
    Табличный отчёт (поле "rows" - список словарей) -> строки таблицы; иначе пары key,value.
    """
    data = serialize_for_json(report)
    buffer = io.StringIO()
    rows = data.get("rows") if isinstance(data, dict) else None
    if isinstance(rows, list) and rows and all(isinstance(r, dict) for r in rows):
        flat_rows = []
        for row in rows:
            pairs = []
            _flatten("", row, pairs)
            flat_rows.append(dict(pairs))
        header = list(dict.fromkeys(k for r in flat_rows for k in r))
        writer = csv.DictWriter(buffer, fieldnames=header, lineterminator="\n")
        writer.writeheader()
        writer.writerows(flat_rows)
    else:
        pairs = []
        _flatten("", data, pairs)
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["key", "value"])
        writer.writerows(pairs)
    return buffer.getvalue()
