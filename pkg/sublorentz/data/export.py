"""
CSV and JSON emission of command records.

CSV: header row, comma separated, LF line endings, floats with 17
significant digits. JSON: {"meta": {...}, "data": [...]} with the same
float formatting, so parsing and re-serializing a document reproduces it
byte for byte.
"""

import io
import json
import math
import sys
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd

from sublorentz.constants import TOOL_NAME, VERSION
from sublorentz.utils import convert_to_native

FLOAT_FORMAT = "%.17g"


def format_float(value: float) -> str:
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return FLOAT_FORMAT % value


def to_csv(records: Sequence[Dict[str, Any]], columns: Optional[Sequence[str]] = None) -> str:
    frame = pd.DataFrame(convert_to_native(list(records)), columns=columns)
    buffer = io.StringIO()
    frame.to_csv(buffer, index=False, float_format=FLOAT_FORMAT, lineterminator="\n", na_rep="nan")
    return buffer.getvalue()


def _json_value(value) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        # JSON has no nan/inf literals
        return "null" if not math.isfinite(value) else FLOAT_FORMAT % value
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, dict):
        items = ", ".join(f"{json.dumps(str(k))}: {_json_value(v)}" for k, v in value.items())
        return "{" + items + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_json_value(v) for v in value) + "]"
    raise TypeError(f"cannot serialize {type(value).__name__} to JSON")


def dumps_json(document: Dict[str, Any]) -> str:
    """Serialize a document with 17-significant-digit floats."""
    return _json_value(convert_to_native(document)) + "\n"


def to_json(command: str, parameters: Dict[str, Any], records: Sequence[Dict[str, Any]],
            extra: Optional[Dict[str, Any]] = None) -> str:
    meta = {"command": command, "parameters": parameters, "tool": TOOL_NAME, "version": VERSION}
    meta.update(extra or {})
    return dumps_json({"meta": meta, "data": list(records)})


def render(command: str, parameters: Dict[str, Any], records: List[Dict[str, Any]],
           fmt: str = "csv", columns: Optional[Sequence[str]] = None,
           extra: Optional[Dict[str, Any]] = None) -> str:
    if fmt == "csv":
        return to_csv(records, columns)
    if fmt == "json":
        return to_json(command, parameters, records, extra)
    raise ValueError(f"format must be 'csv' or 'json', got {fmt!r}")


def write_output(text: str, out: Optional[str] = None) -> None:
    """Write to `out`, or stdout when out is None or '-'."""
    if out is None or out == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(out, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)
