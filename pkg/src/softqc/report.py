"""Experiment records and their canonical JSON / CSV serialization.

JSON output sorts keys, indents by two spaces and writes every float with 17
significant digits, so identical runs produce identical bytes. Complex
numbers become ``[re, im]`` pairs.
"""

import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__


@dataclass
class ExperimentResult:
    command: str
    inputs: dict
    outputs: dict
    tolerances: dict
    seed: int
    version: str = __version__
    rows: list = field(default_factory=list)

    def as_dict(self):
        return {
            "command": self.command,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "tolerances": self.tolerances,
            "seed": self.seed,
            "version": self.version,
        }


def format_float(x):
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite value {x}")
    if x == 0:
        return "0.0"
    s = format(x, ".17g")
    if not any(c in s for c in ".en"):
        s += ".0"
    return s


def jsonable(obj):
    """Convert numpy values and complex numbers into plain JSON types."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    return obj


def _write(obj, out, indent):
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for k, key in enumerate(sorted(obj)):
            out.append(f"{pad}  {json.dumps(key)}: ")
            _write(obj[key], out, indent + 1)
            out.append(",\n" if k < len(obj) - 1 else "\n")
        out.append(pad + "}")
    elif isinstance(obj, list):
        if not obj:
            out.append("[]")
        elif all(not isinstance(v, (dict, list)) for v in obj):
            out.append("[" + ", ".join(_scalar(v) for v in obj) + "]")
        else:
            out.append("[\n")
            for k, v in enumerate(obj):
                out.append(pad + "  ")
                _write(v, out, indent + 1)
                out.append(",\n" if k < len(obj) - 1 else "\n")
            out.append(pad + "]")
    else:
        out.append(_scalar(obj))


def _scalar(v):
    if v is None or isinstance(v, (bool, str)):
        return json.dumps(v)
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return format_float(v)
    raise TypeError(f"cannot serialize {type(v).__name__}")


def dumps_canonical(obj):
    out = []
    _write(jsonable(obj), out, 0)
    return "".join(out) + "\n"


def _csv_cell(v):
    v = jsonable(v)
    if isinstance(v, float):
        return format_float(v)
    if v is None:
        return ""
    return str(v)


def dumps_csv(rows):
    buf = io.StringIO()
    if rows:
        header = list(rows[0])
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_csv_cell(row.get(col)) for col in header])
    return buf.getvalue()


def emit(result, fmt="json", path=None):
    """Write ``result`` as JSON or CSV to ``path`` (stdout when None or '-')."""
    if fmt == "json":
        text = dumps_canonical(result.as_dict())
    elif fmt == "csv":
        text = dumps_csv(result.rows)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return text
