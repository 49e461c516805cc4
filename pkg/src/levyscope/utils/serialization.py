"""src/levyscope/utils/serialization.py

Serialization utilities for Levyscope (JSON reports, CSV tables).

Every artifact embeds the resolved configuration that produced it, and
floats are written with 17 significant digits so reruns are byte-identical.
"""

import csv
import json
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Iterable, Mapping, Optional, Sequence, Union

import numpy as np

__all__ = ["to_json", "to_jsonable", "write_json", "write_csv", "format_float"]


def format_float(value: float) -> str:
    """Full-precision scientific notation (17 significant digits)."""
    return f"{float(value):.16e}"


def to_jsonable(data: Any) -> Any:
    """Convert numpy scalars/arrays, tuples and enums into JSON types."""
    if isinstance(data, Mapping):
        return {str(k): to_jsonable(v) for k, v in data.items()}
    if isinstance(data, (list, tuple)):
        return [to_jsonable(v) for v in data]
    if isinstance(data, np.ndarray):
        return to_jsonable(data.tolist())
    if isinstance(data, (np.bool_, bool)):
        return bool(data)
    if isinstance(data, np.integer):
        return int(data)
    if isinstance(data, (np.floating, float)):
        value = float(data)
        if value != value or value in (float("inf"), float("-inf")):
            return str(value)
        return value
    if isinstance(data, Enum):
        return data.value
    return data


def to_json(data: Any) -> str:
    """Serializes data to a deterministic JSON string."""
    return json.dumps(to_jsonable(data), sort_keys=True, indent=2)


def write_json(
    path: Union[str, Path], report: Mapping[str, Any], config: Mapping[str, Any]
) -> Path:
    """Write ``report`` with the resolved ``config`` embedded as provenance."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    payload: Dict[str, Any] = dict(report)
    payload["config"] = dict(config)
    target.write_text(to_json(payload) + "\n", encoding="utf-8")
    return target


def write_csv(
    path: Union[str, Path],
    header: Sequence[str],
    rows: Iterable[Sequence[Union[float, int, str]]],
    config: Optional[Mapping[str, Any]] = None,
) -> Path:
    """
    Write a comma-separated table with a header row.

    Args:
        path: Output file.
        header: Column names.
        rows: Row values; floats are written with 17 significant digits.
        config: Resolved configuration, embedded as a leading ``#`` comment.

    Returns:
        The written path.
    """
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    with target.open("w", encoding="utf-8", newline="") as handle:
        if config is not None:
            comment = json.dumps(to_jsonable(config), sort_keys=True)
            handle.write(f"# config: {comment}\n")
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(
                format_float(cell) if isinstance(cell, (float, np.floating)) else cell
                for cell in row
            )
    return target
