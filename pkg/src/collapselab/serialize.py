"""Deterministic artifact serialization.

Every artifact goes through these helpers so that repeated runs with the
same config produce byte-identical files: floats are always printed with
13 significant digits, dict keys are sorted, and no timestamps or absolute
paths ever enter an artifact.
"""
from __future__ import annotations

import hashlib
import math
from pathlib import Path
from typing import Any, Iterable

import numpy as np

FLOAT_FMT = ".12e"


def fmt_float(x: float) -> str:
    x = float(x)
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return format(x, FLOAT_FMT)


def _json_fragments(obj: Any) -> Iterable[str]:
    # Hand-rolled writer: stdlib json offers no hook to control float
    # precision, and the artifact contract pins >= 12 significant digits.
    if obj is None:
        yield "null"
    elif obj is True:
        yield "true"
    elif obj is False:
        yield "false"
    elif isinstance(obj, (int, np.integer)):
        yield str(int(obj))
    elif isinstance(obj, (float, np.floating)):
        yield fmt_float(obj)
    elif isinstance(obj, str):
        yield '"' + obj.replace("\\", "\\\\").replace('"', '\\"') + '"'
    elif isinstance(obj, dict):
        yield "{"
        for i, key in enumerate(sorted(obj)):
            if i:
                yield ", "
            yield from _json_fragments(str(key))
            yield ": "
            yield from _json_fragments(obj[key])
        yield "}"
    elif isinstance(obj, (list, tuple, np.ndarray)):
        seq = obj.tolist() if isinstance(obj, np.ndarray) else obj
        yield "["
        for i, item in enumerate(seq):
            if i:
                yield ", "
            yield from _json_fragments(item)
        yield "]"
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def json_dumps(obj: Any) -> str:
    return "".join(_json_fragments(obj))


def dump_json(obj: Any, path: str | Path) -> Path:
    path = Path(path)
    path.write_text(json_dumps(obj) + "\n")
    return path


def load_json(path: str | Path) -> Any:
    import json

    return json.loads(Path(path).read_text())


def write_csv(path: str | Path, header: list[str], columns: list[np.ndarray]) -> Path:
    """Write aligned columns as CSV with full float precision."""
    if len(header) != len(columns):
        raise ValueError("header/column count mismatch")
    n = len(columns[0])
    rows = [",".join(header)]
    for i in range(n):
        rows.append(",".join(fmt_float(col[i]) for col in columns))
    path = Path(path)
    path.write_text("\n".join(rows) + "\n")
    return path


def read_csv(path: str | Path) -> tuple[list[str], np.ndarray]:
    """Read a CSV written by write_csv; returns (header, columns)."""
    lines = Path(path).read_text().strip().splitlines()
    header = lines[0].split(",")
    data = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
    return header, data.T


def write_matrix_csv(path: str | Path, matrix: np.ndarray) -> Path:
    rows = [",".join(fmt_float(v) for v in row) for row in np.asarray(matrix)]
    path = Path(path)
    path.write_text("\n".join(rows) + "\n")
    return path


def read_matrix_csv(path: str | Path) -> np.ndarray:
    lines = Path(path).read_text().strip().splitlines()
    return np.array([[float(v) for v in ln.split(",")] for ln in lines])


def sha256_of(path: str | Path) -> str:
    h = hashlib.sha256()
    h.update(Path(path).read_bytes())
    return h.hexdigest()
