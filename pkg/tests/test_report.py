import csv
import json

import numpy as np
import pytest

from hodgekit.report import dumps, plot_table, write_experiment, write_table_csv


def test_dumps_sorted_and_nonfinite():
    text = dumps({"b": np.float64(1.5), "a": [np.int64(2), float("inf")], "c": np.bool_(True)})
    assert list(json.loads(text)) == ["a", "b", "c"]
    assert json.loads(text)["a"] == [2, "inf"]


def test_csv_roundtrip_exact(tmp_path):
    path = write_table_csv({"t": [1, 2], "Q": [0.1, 1 / 3]}, tmp_path / "x.csv")
    rows = list(csv.reader(path.open()))
    assert rows[0] == ["t", "Q"]
    assert float(rows[2][1]) == 1 / 3


@pytest.mark.parametrize("table", [{"t": [1, 2]}, {"t": [1, 2], "y": [0.0, -1.0]}, {"name": ["a"], "v": [1.0]}])
def test_plot_skips_unplottable(tmp_path, table):
    assert plot_table(table, tmp_path / "f.png") is None
    assert not (tmp_path / "f.png").exists()


def test_write_experiment_files(tmp_path):
    report = {"tables": {"Q": {"t": [1, 2, 4], "Q": [1.0, 0.5, 0.25]}}, "fitted": {"exponent": -1.0}}
    written = {p.name for p in write_experiment(report, 0.5, tmp_path, "demo")}
    assert written == {"demo.json", "demo.timing.json", "demo.Q.csv", "demo.Q.png"}
    assert "runtime" not in (tmp_path / "demo.json").read_text()
