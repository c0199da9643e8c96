"""JSON/CSV writing helpers.

Floats are written with 17 significant digits so that every binary64 value
round-trips bit-exactly; the stdlib encoder only emits the shortest repr.
"""

import json
import math
import os
import tempfile

import numpy as np


def _fmt_float(x):
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"non-finite float {x!r} cannot be serialised")
    return format(x, ".16e")


def _encode(obj, indent, level):
    pad = " " * (indent * (level + 1)) if indent else ""
    end = ("\n" + " " * (indent * level)) if indent else ""
    sep = ",\n" if indent else ", "
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{pad}{_encode(str(k), 0, 0)}: {_encode(v, indent, level + 1)}' for k, v in obj.items()]
        nl = "\n" if indent else ""
        return "{" + nl + sep.join(items) + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        # keep short numeric pairs such as [re, im] on one line
        if all(isinstance(v, (int, float, np.integer, np.floating)) for v in seq):
            return "[" + ", ".join(_encode(v, 0, 0) for v in seq) + "]"
        items = [pad + _encode(v, indent, level + 1) for v in seq]
        nl = "\n" if indent else ""
        return "[" + nl + sep.join(items) + end + "]"
    raise TypeError(f"cannot serialise object of type {type(obj).__name__}")


def dumps(obj, indent=2):
    """Serialise plain Python/numpy data to JSON text with full float precision."""
    return _encode(obj, indent, 0)


def atomic_write(path, text):
    """Write ``text`` to ``path`` via a temporary file and rename."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def complex_pair(z):
    z = complex(z)
    return [z.real, z.imag]


def parse_complex(pair):
    if isinstance(pair, (int, float)):
        return complex(pair)
    if not isinstance(pair, (list, tuple)) or len(pair) != 2:
        raise ValueError(f"expected [re, im], got {pair!r}")
    return complex(float(pair[0]), float(pair[1]))
