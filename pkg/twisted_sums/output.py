# Copyright (C) 2024 twyleg
"""
CSV and JSON emission. Files are written to ``<path>.part`` and renamed on success so a
failed run never leaves a truncated artifact behind.
"""
import contextlib
import csv
import dataclasses
import json
import logging
import sys
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Iterable, Iterator, Sequence, TextIO

import numpy as np


logm = logging.getLogger(__name__)

FLOAT_FORMAT = ".15g"


def format_value(value: Any) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), FLOAT_FORMAT)
    if isinstance(value, Fraction):
        return str(value)
    if value is None:
        return ""
    return str(value)


def json_safe(obj: Any) -> Any:
    """Plain JSON types for dataclasses, numpy values, complex numbers, fractions and paths."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        obj = {f.name: getattr(obj, f.name) for f in dataclasses.fields(obj) if f.repr}
    if isinstance(obj, dict):
        return {str(k): json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [json_safe(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return json_safe(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(format(float(obj), FLOAT_FORMAT))
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": json_safe(obj.real), "im": json_safe(obj.imag)}
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, Path):
        return str(obj)
    return obj


@contextlib.contextmanager
def atomic_output(path: Path | str) -> Iterator[TextIO]:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    part = path.with_name(path.name + ".part")
    try:
        with open(part, "w", newline="", encoding="utf-8") as f:
            yield f
        part.replace(path)
    except BaseException:
        part.unlink(missing_ok=True)
        logm.debug("Removed partial output %s", part)
        raise
    logm.info("Wrote %s", path)


def _csv_to_stream(f: TextIO, header: Sequence[str], rows: Iterable[Sequence[Any]], config: Dict[str, Any]) -> None:
    f.write(f"# config: {json.dumps(json_safe(config), sort_keys=True)}\n")
    writer = csv.writer(f, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_value(v) for v in row])


def write_csv(path: Path | str, header: Sequence[str], rows: Iterable[Sequence[Any]], config: Dict[str, Any]) -> None:
    """CSV with a leading ``# config: {...}`` provenance line and a header row."""
    with atomic_output(path) as f:
        _csv_to_stream(f, header, rows, config)


def print_csv(header: Sequence[str], rows: Iterable[Sequence[Any]], config: Dict[str, Any], stream: TextIO | None = None) -> None:
    _csv_to_stream(stream or sys.stdout, header, rows, config)


def write_json(path: Path | str, result: Any, config: Dict[str, Any]) -> None:
    with atomic_output(path) as f:
        json.dump({"config": json_safe(config), "result": json_safe(result)}, f, indent=2, sort_keys=True)
        f.write("\n")


def dump_json(result: Any, config: Dict[str, Any]) -> str:
    return json.dumps({"config": json_safe(config), "result": json_safe(result)}, indent=2, sort_keys=True)
