import json
from fractions import Fraction

import numpy as np

from mobius_dirac.serialize import column_summary, fmt, read_csv, rounded, to_csv, to_json


def test_fmt():
    assert fmt(0.0, 6) == "0"
    assert fmt(-0.0, 6) == "0"
    assert fmt(1 / 3, 4) == "0.3333"
    assert fmt(np.float64(2.5e-20), 3) == "2.5e-20"
    assert fmt(np.int64(7), 3) == "7"
    assert fmt(True, 3) == "true"
    assert fmt(float("nan"), 3) == "nan"
    assert fmt("x", 3) == "x"


def test_rounded_nested():
    x = {"a": [np.float64(1 / 3), np.int32(2)], "b": Fraction(1, 2), "c": np.array([0.1234567])}
    assert rounded(x, 3) == {"a": [0.333, 2], "b": "1/2", "c": [0.123]}
    assert rounded(float("inf"), 3) == "inf"


def test_csv_round_trip():
    text = to_csv([("grid.n_r", 8), ("physics.emax", None)], ["a", "b"], [[1.0, 2.0], [0.5, -3.25]], 10)
    assert text.startswith("# grid.n_r = 8\n# physics.emax = none\na,b\n")
    config, cols, rows = read_csv(text)
    assert config == {"grid.n_r": "8", "physics.emax": "none"}
    assert cols == ["a", "b"] and rows == [[1.0, 2.0], [0.5, -3.25]]


def test_json_sorted_and_stable():
    a = to_json({"z": 1, "a": 2}, ["c"], [[0.1]], {"k": 1 / 3}, 5)
    b = to_json({"a": 2, "z": 1}, ["c"], [[0.1]], {"k": 1 / 3}, 5)
    assert a == b and a.endswith("\n")
    doc = json.loads(a)
    assert doc["summaries"]["k"] == 0.33333


def test_column_summary():
    s = column_summary(["r", "x"], [[0, 1.0], [1, 3.0]])
    assert s == {"x": {"min": 1.0, "max": 3.0, "mean": 2.0}}
