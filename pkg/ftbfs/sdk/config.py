import os
import yaml
from pathlib import Path
from typing import Any

CALIBRATION_PATH = Path(__file__).parent / "calibration.yaml"

# --- Environment overrides ---

def get_worker_count() -> int:
    """
    Default worker count for parallel build/verify.
    Priority: FTBFS_WORKERS env var > 1 (sequential)
    """
    value = os.environ.get("FTBFS_WORKERS")
    if not value: return 1
    try:
        workers = int(value)
    except ValueError:
        raise ValueError(f"FTBFS_WORKERS must be an integer, got '{value}'")
    return max(1, workers)

def get_oracle_max_n() -> int:
    """Vertex guard for the exhaustive preferred-path oracle (FTBFS_ORACLE_MAX_N, default 14)."""
    value = os.environ.get("FTBFS_ORACLE_MAX_N")
    return int(value) if value else 14

def get_log_level() -> str:
    return os.environ.get("FTBFS_LOG_LEVEL", "WARNING").upper()

def get_calibration_path() -> Path:
    """
    Calibration file location.
    Priority: FTBFS_CALIBRATION env var > packaged calibration.yaml
    """
    path_str = os.environ.get("FTBFS_CALIBRATION")
    if path_str:
        return Path(path_str)
    return CALIBRATION_PATH

# --- Calibration constants ---

def load_calibration() -> dict:
    path = get_calibration_path()
    if not path.exists():
        raise FileNotFoundError(f"Calibration file not found: {path}")
    with open(path, "r") as f: return yaml.safe_load(f) or {}

def calibration_value(dot_path: str) -> Any:
    curr = load_calibration()
    for part in dot_path.split("."):
        if isinstance(curr, dict) and part in curr: curr = curr[part]
        else: raise KeyError(f"Calibration key not found: {dot_path}")
    return curr
