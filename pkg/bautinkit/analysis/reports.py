"""
Report documents of the ``bautin`` command.

Reports are JSON trees. Complex numbers become ``[re, im]`` pairs, floats are
written with 17 significant digits and non-finite floats become ``null``.
Apart from the timestamp, a report depends only on the run configuration and
the seed.
"""

import dataclasses
import json
import math
from collections.abc import Mapping
from pathlib import Path
from typing import Any

import numpy as np
from django.utils import timezone

import bautinkit

from .catalog import Check

TOOLKIT_NAME = "bautinkit"


def to_tree(value: Any) -> Any:
    """Plain JSON-compatible tree of dataclasses, numpy values and containers."""
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        tree = {f.name: to_tree(getattr(value, f.name)) for f in dataclasses.fields(value)}
        passed = getattr(type(value), "passed", None)
        if isinstance(passed, property):
            tree["passed"] = bool(value.passed)
        return tree
    if isinstance(value, Mapping):
        return {str(k): to_tree(v) for k, v in value.items()}
    if isinstance(value, np.ndarray):
        return [to_tree(v) for v in value.tolist()]
    if isinstance(value, list | tuple):
        return [to_tree(v) for v in value]
    if isinstance(value, bool | np.bool_):
        return bool(value)
    if isinstance(value, int | np.integer):
        return int(value)
    if isinstance(value, complex | np.complexfloating):
        return [to_tree(float(value.real)), to_tree(float(value.imag))]
    if isinstance(value, float | np.floating):
        value = float(value)
        return value if math.isfinite(value) else None
    if value is None or isinstance(value, str):
        return value
    return str(value)


def render(tree: Any, indent: int = 2, level: int = 0) -> str:
    pad = " " * (indent * (level + 1))
    closing = " " * (indent * level)
    if tree is None:
        return "null"
    if isinstance(tree, bool):
        return "true" if tree else "false"
    if isinstance(tree, int):
        return str(tree)
    if isinstance(tree, float):
        return format(tree, ".17g") if math.isfinite(tree) else "null"
    if isinstance(tree, str):
        return json.dumps(tree, ensure_ascii=False)
    if isinstance(tree, dict):
        if not tree:
            return "{}"
        items = [f"{pad}{json.dumps(k, ensure_ascii=False)}: {render(v, indent, level + 1)}" for k, v in tree.items()]
        return "{\n" + ",\n".join(items) + f"\n{closing}}}"
    if not tree:
        return "[]"
    if all(not isinstance(v, dict | list) for v in tree):
        return "[" + ", ".join(render(v, indent, level + 1) for v in tree) + "]"
    items = [f"{pad}{render(v, indent, level + 1)}" for v in tree]
    return "[\n" + ",\n".join(items) + f"\n{closing}]"


def build_report(
    command: str,
    config: dict,
    result: Any,
    checks: list[Check] | None = None,
    errors: list[str] | None = None,
) -> dict:
    checks = checks or []
    errors = errors or []
    status = 0 if not errors and all(c.passed for c in checks) else 1
    return {
        "toolkit": {"name": TOOLKIT_NAME, "version": bautinkit.__version__},
        "timestamp": timezone.now().isoformat(),
        "command": command,
        "config": to_tree(config),
        "result": to_tree(result),
        "checks": [to_tree(c) for c in checks],
        "errors": list(errors),
        "status": status,
    }


def write_report(report: dict, out=None) -> str:
    text = render(report) + "\n"
    if out is not None:
        Path(out).write_text(text, encoding="utf-8")
    return text
