import numpy as np
import pytest

from hdtail import ConfigError, DataError, PointCloud
from hdtail.config import ExperimentConfig, apply_overrides, load_config, parse_config
from hdtail.io import read_cloud, read_columns, read_table, write_cloud, write_rows
from hdtail.svg import line_chart, polygon_plot


def test_cloud_round_trip_bit_identical(tmp_path):
    X = np.random.default_rng(0).normal(size=(100, 3)) * 1e-7 + np.pi
    write_cloud(tmp_path / "x.csv", PointCloud(X))
    assert np.array_equal(read_cloud(tmp_path / "x.csv").points, X)


def test_headerless_and_column_selection(tmp_path):
    (tmp_path / "a.csv").write_text("1,2,3\n4,5,6\n")
    assert read_cloud(tmp_path / "a.csv").d == 3
    (tmp_path / "b.csv").write_text("u,v,w\n1,2,3\n4,5,6\n")
    c = read_cloud(tmp_path / "b.csv", ["w", "0"])
    assert c.points.tolist() == [[3.0, 1.0], [6.0, 4.0]]


@pytest.mark.parametrize("text", ["", "a,b\n", "1,2\n3\n", "1,x\n", "1,nan\n"])
def test_bad_inputs(tmp_path, text):
    p = tmp_path / "bad.csv"
    p.write_text(text)
    with pytest.raises(DataError):
        read_cloud(p)


def test_missing_file(tmp_path):
    with pytest.raises(DataError):
        read_cloud(tmp_path / "nope.csv")


def test_write_rows_and_columns(tmp_path):
    write_rows(tmp_path / "r.csv", ["a", "b", "c"], [[1, 0.5, "x"], [2, float("nan"), None]])
    assert (tmp_path / "r.csv").read_text() == "a,b,c\n1,0.5,x\n2,,\n"
    cols = read_columns(tmp_path / "r.csv")
    assert cols["a"].tolist() == [1.0, 2.0] and np.isnan(cols["b"][1])
    header, rows = read_table(tmp_path / "r.csv")
    assert header == ["a", "b", "c"] and len(rows) == 2


def test_config_grammar():
    cfg = parse_config("""
# comment
seed = 3
out = run1   # trailing comment
[schedule]
N = 1000
t_family = linear
[distribution]
builtin = gauss
""")
    assert cfg.get_int("seed") == 3 and cfg.get("out") == "run1"
    assert cfg.get("N", section="schedule") == "1000"
    assert cfg.get("builtin", section="distribution") == "gauss"


def test_config_round_trip_and_overrides(tmp_path):
    cfg = parse_config("a = 1\n[s]\nb = x, y\n")
    apply_overrides(cfg, ["a=2", "s.b=3,4", "t.c = q"])
    assert cfg.get("a") == "2" and cfg.get_list("b", section="s", cast=int) == [3, 4]
    cfg.write(tmp_path / "c.txt")
    back = load_config(tmp_path / "c.txt")
    assert back.to_text() == cfg.to_text()


def test_config_errors(tmp_path):
    with pytest.raises(ConfigError):
        parse_config("just words\n")
    with pytest.raises(ConfigError):
        parse_config("x = y").get_float("x")
    with pytest.raises(ConfigError):
        apply_overrides(ExperimentConfig(), ["noequals"])
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.txt")


def test_svg_documents():
    s = line_chart([("a", [1, 2, 3], [1, 4, float("nan")]), ("b", [1, 3], [2, 2])], "t", "x", "y", markers=True)
    assert s.startswith("<svg") and s.count("<polyline") == 2 and ">a<" in s and ">b<" in s
    p = polygon_plot([np.array([[0, 0], [1, 0], [0, 1]], float)], np.zeros((3, 2)), "p", ["one"])
    assert "<polygon" in p and p.rstrip().endswith("</svg>")
