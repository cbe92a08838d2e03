import os
from pathlib import Path

try:
    from dotenv import load_dotenv
except ImportError:
    load_dotenv = None

ENV_PATH = Path(__file__).resolve().parent / ".env"
if load_dotenv is not None and ENV_PATH.exists():
    load_dotenv(dotenv_path=ENV_PATH)


def _get_env(key, default=None):
    value = os.getenv(key)
    if value is None or value == "":
        return default
    return value


def _to_bool(value, default=False):
    if value is None:
        return default
    if isinstance(value, bool):
        return value
    return str(value).strip().lower() in {"1", "true", "yes", "y", "on"}


def _parse_int(value, default=None):
    if value is None or value == "":
        return default
    try:
        return int(str(value).replace("_", ""))
    except (TypeError, ValueError):
        return default


def _parse_float(value, default=None):
    if value is None or value == "":
        return default
    try:
        return float(value)
    except (TypeError, ValueError):
        return default


# Монте-Карло
ZONOID_SEED = _parse_int(_get_env("ZONOID_SEED"), 0)
MC_SAMPLES = _parse_int(_get_env("MC_SAMPLES"), 100_000)
MC_WORKERS = _parse_int(_get_env("MC_WORKERS"), 1)
MC_BLOCK_SIZE = _parse_int(_get_env("MC_BLOCK_SIZE"), 4096)
CI_Z = _parse_float(_get_env("CI_Z"), 3.0)

# Численные допуски и лимиты
RANK_REL_TOL = _parse_float(_get_env("RANK_REL_TOL"), 1e-9)
ATOM_PRUNE_TOL = _parse_float(_get_env("ATOM_PRUNE_TOL"), 1e-14)
COORDINATE_CAP = _parse_int(_get_env("COORDINATE_CAP"), 1_000_000)

OUTPUT_FORMAT = _get_env("OUTPUT_FORMAT", "json")
DATA_DIR = _get_env("DATA_DIR", "data")
LOG_LEVEL = _get_env("LOG_LEVEL", "INFO")
DEBUG_MODE = _to_bool(_get_env("DEBUG_MODE"), default=False)


# Optional local overrides (keep machine-specific settings out of git)
try:
    from config_local import *  # type: ignore  # noqa: F401,F403
except Exception:
    pass
