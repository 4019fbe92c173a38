"""Deterministic writers for CSV matrices, JSON reports and plain PGM heatmaps.

Floats are written as their shortest round-trip representation, so outputs
are locale-free and parse back to the same double.
"""
import json
import math
import os
import tempfile

import numpy as np


def fmt(x) -> str:
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if x == 0.0:
        x = 0.0  # drop the sign of negative zero
    return repr(x)


def _json(obj, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None or isinstance(obj, bool):
        return {None: "null", True: "true", False: "false"}[obj]
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt(obj) if math.isfinite(obj) else f'"{fmt(obj)}"'
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{_json(str(k), indent, 0)}: {_json(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        items = [f"{pad}{_json(v, indent, level + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps_json(obj, indent=2) -> str:
    return _json(obj, indent, 0) + "\n"


def matrix_csv(rows_axis, cols_axis, values, corner="row\\col") -> str:
    lines = [",".join([corner] + [fmt(c) for c in cols_axis])]
    for r, row in zip(rows_axis, values):
        lines.append(",".join([fmt(r)] + [fmt(v) for v in row]))
    return "\n".join(lines) + "\n"


def pgm(values, comment=None) -> str:
    """Plain (P2) 8-bit graymap, linear scale, normalised to the maximum.

    Negative values are clipped to black. Row 0 of ``values`` is the top row.
    """
    v = np.clip(np.asarray(values, dtype=float), 0.0, None)
    peak = float(v.max()) if v.size else 0.0
    levels = np.zeros(v.shape, dtype=int) if peak == 0 else np.rint(255.0 * v / peak).astype(int)
    out = ["P2"]
    if comment:
        out.append(f"# {comment}")
    out += [f"{v.shape[1]} {v.shape[0]}", "255"]
    for row in levels:
        line = ""
        for x in row:
            token = str(x)
            if line and len(line) + 1 + len(token) > 70:
                out.append(line)
                line = token
            else:
                line = f"{line} {token}" if line else token
        out.append(line)
    return "\n".join(out) + "\n"


def _default_mode():
    umask = os.umask(0)
    os.umask(umask)
    return 0o666 & ~umask


def write_atomic(path, text):
    """Write ``text`` to ``path`` through a temporary file and a rename."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tfqm-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        # mkstemp creates 0600 files; give the result ordinary permissions
        os.chmod(tmp, _default_mode())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
