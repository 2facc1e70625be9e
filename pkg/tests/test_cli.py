import numpy as np
import pytest

from hdtail import depth_exact_2d
from hdtail.cli import main
from hdtail.config import load_config
from hdtail.io import read_cloud, read_columns


@pytest.fixture
def out(tmp_path):
    return tmp_path / "out"


def test_simulate_rotated_full_size(out):
    assert main(["simulate", "--builtin", "rotated-3d", "--n", "100000", "--out", str(out)]) == 0
    c = read_cloud(out / "sample.csv")
    assert (c.n, c.d) == (100_000, 3)


def test_simulate_single_row(out):
    assert main(["simulate", "--builtin", "gauss", "--n", "1", "--out", str(out)]) == 0
    assert read_cloud(out / "sample.csv").points.shape == (1, 2)


def test_simulate_deterministic_and_replayable(tmp_path):
    a, b, c = tmp_path / "a", tmp_path / "b", tmp_path / "c"
    args = ["simulate", "--builtin", "laplace", "--n", "500", "--seed", "11"]
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert (a / "sample.csv").read_bytes() == (b / "sample.csv").read_bytes()
    assert main(["simulate", "--config", str(a / "config.txt"), "--out", str(c)]) == 0
    assert (a / "sample.csv").read_bytes() == (c / "sample.csv").read_bytes()
    assert load_config(a / "config.txt").get("seed") == "11"


def test_simulate_custom_family(tmp_path, out):
    cfg = tmp_path / "c.txt"
    cfg.write_text("n = 50\n[distribution]\nfamily = pareto\nd = 2\nalpha = 2.2 3.2\n")
    assert main(["simulate", "--config", str(cfg), "--out", str(out)]) == 0
    assert read_cloud(out / "sample.csv").points.min() >= 1.0


def test_simulate_bad_spec_exit_code(out, capsys):
    assert main(["simulate", "--builtin", "banana", "--out", str(out)]) == 2
    assert "banana" in capsys.readouterr().err
    assert main(["simulate", "--out", str(out)]) == 2


def test_depth_triangle_and_far_point(tmp_path, out):
    tri = tmp_path / "tri.csv"
    tri.write_text("0,0\n1,0\n0,1\n")
    assert main(["depth", "--input", str(tri), "--query", "0 0; 1 0; 50 50", "--out", str(out)]) == 0
    cols = read_columns(out / "depth.csv")
    assert cols["count"].tolist() == [1, 1, 0]
    assert cols["depth"][0] == pytest.approx(1 / 3)


def test_depth_exact_below_approx(tmp_path):
    X = np.random.default_rng(0).normal(size=(300, 2))
    src = tmp_path / "x.csv"
    np.savetxt(src, X, delimiter=",")
    qs = tmp_path / "q.csv"
    np.savetxt(qs, np.random.default_rng(1).normal(size=(40, 2)), delimiter=",")
    for mode in ("exact", "approx"):
        assert main(["depth", "--input", str(src), "--queries", str(qs), f"--{mode}", "--K", "50",
                     "--out", str(tmp_path / mode)]) == 0
    e = read_columns(tmp_path / "exact" / "depth.csv")
    a = read_columns(tmp_path / "approx" / "depth.csv")
    assert np.all(e["count"] <= a["count"])
    assert e["count"][0] == depth_exact_2d(X, np.loadtxt(qs, delimiter=",")[0]).count


def test_depth_3d_exact_brute_cap(tmp_path, out):
    src = tmp_path / "x.csv"
    np.savetxt(src, np.random.default_rng(2).normal(size=(300, 3)), delimiter=",")
    assert main(["depth", "--input", str(src), "--query", "0 0 0", "--exact", "--out", str(out)]) == 4


def test_contour_figure_replication(out):
    assert main(["contour", "--builtin", "gauss-elongated", "--n", "1000", "--out", str(out)]) == 0
    cols = read_columns(out / "contour.csv")
    levels = np.unique(cols["level"])
    assert len(levels) == 6
    assert (out / "contour.svg").read_text().count("<polygon") == 6


def test_contour_hull_level(tmp_path, out):
    X = np.random.default_rng(3).normal(size=(200, 2))
    src = tmp_path / "x.csv"
    np.savetxt(src, X, delimiter=",")
    assert main(["contour", "--input", str(src), "--levels", str(1 / 200), "--out", str(out)]) == 0
    from scipy.spatial import ConvexHull

    cols = read_columns(out / "contour.csv")
    V = np.column_stack([cols["x1"], cols["x2"]])
    assert ConvexHull(V).volume == pytest.approx(ConvexHull(X).volume, rel=1e-9)


def test_contour_empty_region(tmp_path, out):
    src = tmp_path / "x.csv"
    np.savetxt(src, np.random.default_rng(4).exponential(size=(400, 2)), delimiter=",")
    assert main(["contour", "--input", str(src), "--levels", "0.6", "--out", str(out)]) == 0
    assert (out / "contour.csv").read_text() == "level,k,vertex,x1,x2\n"


def test_tailscan_rotated_builtin(out):
    argv = ["tailscan", "--builtin", "rotated-3d", "--n", "100000", "--unsigned", "--out", str(out),
            "--set", "schedule.M=100", "--set", "schedule.t_family=linear", "--set", "schedule.t_c=1000"]
    assert main(argv) == 0
    for name in ("pos_e1", "pos_e2", "pos_e3"):
        assert read_columns(out / f"curve_{name}.csv")["k"].shape == (100,)
    report = (out / "verdict.txt").read_text()
    assert report.startswith("overall: ")
    assert (out / "y.svg").exists() and (out / "w.svg").exists()


def test_tailscan_gaussian_light(out):
    assert main(["tailscan", "--builtin", "gauss", "--n", "20000", "--out", str(out)]) == 0
    assert (out / "verdict.txt").read_text().splitlines()[0] == "overall: light-along-some-direction"
    cols = read_columns(out / "verdicts.csv")
    assert len(cols["direction"]) == 5  # four signed axes plus the overall row


def test_tailscan_two_rows(tmp_path, out):
    src = tmp_path / "two.csv"
    src.write_text("1,2\n3,4\n")
    assert main(["tailscan", "--input", str(src), "--out", str(out)]) == 0
    assert read_columns(out / "verdicts.csv")["label"].tolist() == ["inconclusive"] * 4 + ["inconclusive"]


@pytest.mark.parametrize("cmd", ["tailscan", "qq", "depth"])
def test_empty_input_fails(tmp_path, out, cmd, capsys):
    src = tmp_path / "empty.csv"
    src.write_text("")
    argv = [cmd, "--input", str(src), "--out", str(out)]
    if cmd == "depth":
        argv += ["--query", "0 0"]
    assert main(argv) == 3
    assert "no data rows" in capsys.readouterr().err


def test_unknown_command_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_convergence_deterministic_and_ordered(tmp_path):
    args = ["convergence", "--n", "20000", "--seed", "5", "--set", "schedule.M=10", "--set", "schedule.t_c=2000",
            "--set", "schedule.t_offset=1.8", "--set", "schedule.t_family=linear"]
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    for f in ("convergence_fixed.csv", "convergence_growing.csv", "convergence_fixed.svg"):
        assert (a / f).read_bytes() == (b / f).read_bytes()
    cols = read_columns(a / "convergence_fixed.csv")
    assert np.all(cols["gauss-2"] < cols["pareto-1.9"])


def test_ratio_command(tmp_path, out):
    argv = ["ratio", "--seeds", "0,1", "--out", str(out), "--set", "schedule.N=20000", "--set", "schedule.M=8",
            "--min-population-depth", "0.05", "--set", "spacing=0.25"]
    assert main(argv) == 0
    cols = read_columns(out / "ratio.csv")
    assert sorted(set(cols["seed"].tolist())) == [0.0, 1.0]
    first = cols["sup_ratio"][cols["n"] == cols["n"].min()]
    last = cols["sup_ratio"][cols["n"] == cols["n"].max()]
    assert np.all(last < first)


def test_qq_laplace(out):
    assert main(["qq", "--builtin", "laplace", "--n", "5000", "--reference", "laplace", "--out", str(out)]) == 0
    cols = read_columns(out / "qq.csv")
    assert cols["reference"].shape == (5000,)
    mid = slice(250, 4750)
    assert np.max(np.abs(cols["sample"][mid] - cols["reference"][mid])) < 0.3


def test_config_errors_exit_2(out):
    assert main(["ratio", "--set", "eps=abc", "--out", str(out)]) == 2
    assert main(["tailscan", "--builtin", "gauss", "--n", "100", "--set", "signed=maybe", "--out", str(out)]) == 2


def test_resource_cap_exit_4(out):
    assert main(["simulate", "--builtin", "gauss", "--n", "1000", "--set", "max_entries=100", "--out", str(out)]) == 4
