"""Deterministic JSON: reals with 17 significant digits, fixed key order."""
from __future__ import annotations

import json
import math

import numpy as np

SCHEMA = 1


def _encode(obj):
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return "null"
        s = "%.17g" % x
        if "e" not in s and "." not in s:
            s += ".0"
        return s
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_encode(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_encode(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(payload: dict) -> str:
    """Serialize with a leading ``"schema": 1``; non-finite reals become null."""
    return _encode({"schema": SCHEMA, **payload})
