"""Deterministic CSV/JSON writers for field maps and spectra.

Numbers are written with a fixed count of significant digits using Python's
locale-independent ``format``; the resolved configuration is echoed into
every file (``# section.key = value`` lines in CSV, a ``config`` object in
JSON).
"""
import csv
import io
import json
import math
from fractions import Fraction

import numpy as np


def fmt(x, precision: int) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if not math.isfinite(x):
            return str(x)
        if x == 0:
            return "0"
        return format(x, f".{precision}g")
    return str(x)


def rounded(x, precision: int):
    """JSON-ready copy of ``x`` with floats rounded to ``precision`` significant digits."""
    if isinstance(x, dict):
        return {str(k): rounded(v, precision) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [rounded(v, precision) for v in x]
    if isinstance(x, np.ndarray):
        return [rounded(v, precision) for v in x.tolist()]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return float(format(x, f".{precision}g")) if math.isfinite(x) else str(x)
    if isinstance(x, Fraction):
        return str(x)
    return x


def to_csv(config_items, columns, rows, precision: int) -> str:
    buf = io.StringIO()
    for key, value in config_items:
        buf.write(f"# {key} = {'none' if value is None else value}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([fmt(v, precision) for v in row])
    return buf.getvalue()


def to_json(config: dict, columns, rows, summaries: dict, precision: int) -> str:
    doc = {
        "config": rounded(config, 17),
        "columns": list(columns),
        "rows": [rounded(list(r), precision) for r in rows],
        "summaries": rounded(summaries, precision),
    }
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def read_csv(text: str):
    """Parse a CSV written by :func:`to_csv` into (config dict, columns, float rows)."""
    config, body = {}, []
    for line in text.splitlines():
        if line.startswith("# "):
            key, _, value = line[2:].partition(" = ")
            config[key] = value
        else:
            body.append(line)
    reader = csv.reader(body)
    columns = next(reader)
    return config, columns, [[float(v) for v in row] for row in reader]


def column_summary(columns, rows, skip=("r", "theta")):
    """min/max/mean of every numeric column not in ``skip``."""
    data = np.asarray(rows, dtype=float)
    out = {}
    for j, name in enumerate(columns):
        if name in skip:
            continue
        col = data[:, j]
        out[name] = {"min": float(col.min()), "max": float(col.max()), "mean": float(col.mean())}
    return out
