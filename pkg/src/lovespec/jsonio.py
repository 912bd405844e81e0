"""Deterministic JSON writing: fixed key order, floats at 17 significant digits.

17 significant digits round-trip any double exactly, so identical inputs
produce byte-identical artifacts.
"""

from __future__ import annotations

import json
import math

from .errors import IngestionError


def _format_value(obj, parts, indent, level):
    pad = " " * (indent * level)
    pad_in = " " * (indent * (level + 1))
    if isinstance(obj, dict):
        if not obj:
            parts.append("{}")
            return
        parts.append("{\n")
        for i, (key, val) in enumerate(obj.items()):
            parts.append(f'{pad_in}"{key}": ')
            _format_value(val, parts, indent, level + 1)
            parts.append(",\n" if i < len(obj) - 1 else "\n")
        parts.append(pad + "}")
    elif isinstance(obj, (list, tuple)):
        seq = list(obj)
        if not seq:
            parts.append("[]")
            return
        flat = all(isinstance(v, (int, float, bool)) or v is None for v in seq)
        if flat:
            parts.append("[" + ", ".join(_scalar(v) for v in seq) + "]")
            return
        parts.append("[\n")
        for i, val in enumerate(seq):
            parts.append(pad_in)
            _format_value(val, parts, indent, level + 1)
            parts.append(",\n" if i < len(seq) - 1 else "\n")
        parts.append(pad + "]")
    else:
        parts.append(_scalar(obj))


def _scalar(obj):
    if hasattr(obj, "item") and type(obj).__module__ == "numpy":
        obj = obj.item()
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            raise IngestionError("non-finite float in JSON output")
        return format(obj, ".17g")
    if isinstance(obj, str):
        return json.dumps(obj)
    raise IngestionError(f"unsupported JSON value type {type(obj)!r}")


def dumps_canonical(obj, indent: int = 2) -> str:
    parts: list[str] = []
    _format_value(obj, parts, indent, 0)
    parts.append("\n")
    return "".join(parts)


def dump_canonical(obj, path, indent: int = 2):
    with open(path, "w") as fh:
        fh.write(dumps_canonical(obj, indent))


def load(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise IngestionError(f"cannot read JSON file {path}: {exc}") from exc
