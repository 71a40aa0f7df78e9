"""
report.py

Deterministic JSON / CSV serialization and atomic file writes.

- Every float is printed with `precision` significant digits ("%.{p}g"), so
  the same inputs give byte-identical files on any locale.
- JSON keys are sorted; non-finite floats become null.
- Files are written to a temp file in the target directory, then os.replace'd
  into place: a failed run never leaves a partial output.
"""

from __future__ import annotations

import json
import math
import os
import tempfile
from dataclasses import asdict, is_dataclass
from pathlib import Path

import numpy as np
import pandas as pd

from .errors import ValidationError


MIN_PRECISION = 6
MAX_PRECISION = 17
DEFAULT_PRECISION = 10


def check_precision(precision: int) -> int:
    if isinstance(precision, bool) or int(precision) != precision:
        raise ValidationError(f"precision must be an integer (got {precision!r})")
    if not MIN_PRECISION <= precision <= MAX_PRECISION:
        raise ValidationError(f"precision must lie in [{MIN_PRECISION}, {MAX_PRECISION}] (got {precision})")
    return int(precision)


def round_float(x: float, precision: int) -> float | None:
    x = float(x)
    if not math.isfinite(x):
        return None
    return float(f"{x:.{precision}g}")


def _clean(obj, precision: int):
    if is_dataclass(obj) and not isinstance(obj, type):
        obj = obj.to_dict() if hasattr(obj, "to_dict") else asdict(obj)
    if isinstance(obj, dict):
        return {str(k): _clean(v, precision) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v, precision) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_clean(v, precision) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return round_float(obj, precision)
    return obj


def to_json(obj, precision: int = DEFAULT_PRECISION) -> str:
    return json.dumps(_clean(obj, check_precision(precision)), sort_keys=True, indent=2) + "\n"


def to_csv(df: pd.DataFrame, precision: int = DEFAULT_PRECISION) -> str:
    p = check_precision(precision)
    return df.to_csv(index=False, float_format=f"%.{p}g", lineterminator="\n")


def atomic_write(path: Path | str, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
            f.flush()
            os.fsync(f.fileno())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def write_json(path: Path | str, obj, precision: int = DEFAULT_PRECISION) -> Path:
    return atomic_write(path, to_json(obj, precision))


def write_csv(path: Path | str, df: pd.DataFrame, precision: int = DEFAULT_PRECISION) -> Path:
    return atomic_write(path, to_csv(df, precision))
