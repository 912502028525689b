"""Deterministic JSON writer.

The standard library encoder is close, but reports must be byte-identical
across runs and floats must carry 17 significant digits (exact round-trip for
doubles). Infinities are emitted as the strings "inf"/"-inf" since JSON has
no literal for them.
"""

import math

import numpy as np


def _format_float(x):
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    if math.isnan(x):
        return '"nan"'
    if x == int(x) and abs(x) < 1e16:
        return f"{x:.1f}"
    return f"{x:.17g}"


def _escape(s):
    out = []
    for ch in s:
        if ch == '"':
            out.append('\\"')
        elif ch == "\\":
            out.append("\\\\")
        elif ord(ch) < 0x20:
            out.append(f"\\u{ord(ch):04x}")
        else:
            out.append(ch)
    return "".join(out)


def format_json(obj, sort_keys=False):
    """Serialize nested dicts/lists/scalars to deterministic JSON text."""
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, str):
        return f'"{_escape(obj)}"'
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _format_float(float(obj))
    if isinstance(obj, np.ndarray):
        return format_json(obj.tolist(), sort_keys=sort_keys)
    if isinstance(obj, dict):
        keys = sorted(obj, key=str) if sort_keys else list(obj)
        items = (f'"{_escape(str(k))}": {format_json(obj[k], sort_keys=sort_keys)}' for k in keys)
        return "{" + ", ".join(items) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(format_json(v, sort_keys=sort_keys) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")
