"""``hdtail`` command-line front end.

Every command reads an optional ``key = value`` config file, applies flag
values and ``--set section.key=value`` overrides on top, writes the
resolved configuration to ``<out>/config.txt`` and then its outputs.
Re-running with ``--config <out>/config.txt`` reproduces the same bytes.

Exit codes: 0 success (an empty mathematical result is a success),
2 configuration error, 3 data error, 4 resource cap.
"""
from __future__ import annotations

import argparse
import re
import sys
from pathlib import Path

import numpy as np

from . import distributions as dist
from .config import ExperimentConfig, apply_overrides, load_config
from .contour import nested_contours
from .depth import PointCloud, depth, depth_approx, depth_exact_2d, depth_exact_brute, univariate_depth, project
from .diagnostics import ClassifierConfig, convergence_curves, qq_data, ratio_experiment, tailscan
from .directions import default_directions
from .errors import (
    ConfigError,
    DataError,
    InvalidArgumentError,
    ResourceLimitError,
    UnsupportedError,
)
from .io import read_cloud, write_cloud, write_rows
from .rng import substream
from .schedules import Schedule
from .svg import line_chart, polygon_plot, write_svg

EXIT_OK, EXIT_CONFIG, EXIT_DATA, EXIT_RESOURCE = 0, 2, 3, 4
MAX_ENTRIES = 50_000_000  # n * d cap for generated or loaded samples
DEFAULT_LEVELS = "0.01, 0.05, 0.1, 0.2, 0.3, 0.4"
DEFAULT_CLOUDS = "gauss-2, pareto-3.2, pareto-2.2, pareto-1.9"
SCATTER_CAP = 2000


# ---------------------------------------------------------------------------
# config helpers
# ---------------------------------------------------------------------------


def _bool(cfg: ExperimentConfig, key: str, default: bool) -> bool:
    v = cfg.get(key)
    if v is None:
        return default
    s = v.strip().lower()
    if s in ("1", "true", "yes", "on"):
        return True
    if s in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"{key} must be true or false, got {v!r}")


def _vector(text: str, what: str) -> np.ndarray:
    try:
        return np.array([float(s) for s in re.split(r"[,\s]+", text.strip()) if s], dtype=float)
    except ValueError as exc:
        raise ConfigError(f"bad {what}: {text!r}") from exc


def _spec(cfg: ExperimentConfig, default: str | None = None):
    sec = cfg.sections.get("distribution", {})
    if "builtin" in sec:
        return dist.builtin_spec(sec["builtin"])
    if "family" in sec:
        return dist.from_dict(sec)
    return dist.builtin_spec(default) if default else None


def _check_size(n: int, d: int, cfg: ExperimentConfig) -> None:
    cap = cfg.get_int("max_entries", MAX_ENTRIES)
    if n * d > cap:
        raise ResourceLimitError(f"{n} x {d} sample exceeds max_entries = {cap}")


def _cloud(cfg: ExperimentConfig, default_spec: str | None = None) -> PointCloud:
    """The input CSV if given, otherwise a sample from the ``[distribution]`` block."""
    path = cfg.get("input")
    if path:
        cols = cfg.get_list("columns")
        cloud = read_cloud(path, cols)
        _check_size(cloud.n, cloud.d, cfg)
        return cloud
    spec = _spec(cfg, default_spec)
    if spec is None:
        raise ConfigError("give input = <csv> or a [distribution] block")
    n = cfg.get_int("n", 1000)
    if n < 1:
        raise ConfigError("n must be at least 1")
    _check_size(n, spec.d, cfg)
    return PointCloud(dist.draw(spec, n, substream(cfg.get_int("seed", 0), 0)))


def _schedule(cfg: ExperimentConfig, N: int | None = None, default: dict | None = None) -> Schedule | None:
    sec = dict(cfg.sections.get("schedule", {}))
    if not sec:
        if default is None:
            return None
        sec = dict(default)
    if "N" not in sec:
        if N is None:
            raise ConfigError("schedule needs N")
        sec["N"] = str(N)
    return Schedule.from_dict(sec)


def _seeds(cfg: ExperimentConfig) -> list[int]:
    s = cfg.get_list("seeds", cast=int)
    return s if s else [cfg.get_int("seed", 0)]


def _out(cfg: ExperimentConfig) -> Path:
    out = Path(cfg.get("out", "hdtail-out"))
    out.mkdir(parents=True, exist_ok=True)
    return out


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_simulate(cfg: ExperimentConfig) -> int:
    if _spec(cfg) is None:
        raise ConfigError("simulate needs a [distribution] block (builtin = <name> or family = ...)")
    cloud = _cloud(cfg)
    path = write_cloud(_out(cfg) / "sample.csv", cloud)
    print(f"wrote {cloud.n} x {cloud.d} sample to {path}")
    return EXIT_OK


def _queries(cfg: ExperimentConfig, d: int) -> np.ndarray:
    if cfg.get("queries"):
        return read_cloud(cfg.get("queries")).points
    if cfg.get("query"):
        rows = [_vector(r, "query") for r in cfg.get("query").split(";") if r.strip()]
        Q = np.array(rows)
        if Q.ndim != 2 or Q.shape[1] != d:
            raise ConfigError(f"query points must have {d} coordinates")
        return Q
    raise ConfigError("depth needs queries = <csv> or query = x1 x2 ...; more ...")


def cmd_depth(cfg: ExperimentConfig) -> int:
    cloud = _cloud(cfg)
    Q = _queries(cfg, cloud.d)
    if Q.shape[1] != cloud.d:
        raise DataError(f"queries have {Q.shape[1]} columns, sample has {cloud.d}")
    mode = cfg.get("mode", "auto")
    dirs = None
    if mode == "approx" or (mode == "auto" and cloud.d > 2):
        dirs = default_directions(cloud.d, cfg.get_int("K"), cfg.get_int("seed", 0))
    rows = []
    for q in Q:
        if mode == "exact":
            if cloud.d == 1:
                dv = univariate_depth(project(cloud, np.ones(1)), float(q[0]))
            elif cloud.d == 2:
                dv = depth_exact_2d(cloud, q)
            else:
                dv = depth_exact_brute(cloud, q)
            method = "exact"
        elif mode == "approx":
            dv, method = depth_approx(cloud, q, dirs), f"approx-K{len(dirs)}"
        elif mode == "auto":
            dv = depth(cloud, q, dirs)
            method = "exact" if cloud.d <= 2 else f"approx-K{len(dirs)}"
        else:
            raise ConfigError(f"mode must be exact, approx or auto, got {mode!r}")
        rows.append([*q.tolist(), dv.count, dv.n, dv.value, method])
    header = [f"q{i + 1}" for i in range(cloud.d)] + ["count", "n", "depth", "method"]
    path = write_rows(_out(cfg) / "depth.csv", header, rows)
    print(f"wrote {len(rows)} depths to {path}")
    return EXIT_OK


def cmd_contour(cfg: ExperimentConfig) -> int:
    cloud = _cloud(cfg, "gauss-elongated")
    if cloud.d != 2:
        raise DataError(f"contours need 2 columns, got {cloud.d}")
    levels = cfg.get_list("levels", cast=float) or [float(v) for v in DEFAULT_LEVELS.split(",")]
    contours = nested_contours(cloud, levels, cfg.get_int("n_angles", 720))
    rows = []
    for c in contours:
        rows.extend([c.level, c.k, i, x, y] for i, (x, y) in enumerate(c.vertices))
        print(f"level {c.level!r}: " + ("empty" if c.empty else f"{len(c.vertices)} vertices, area {c.area:.6g}"))
    out = _out(cfg)
    write_rows(out / "contour.csv", ["level", "k", "vertex", "x1", "x2"], rows)
    drawn = [c for c in contours if not c.empty]
    step = max(1, cloud.n // SCATTER_CAP)
    svg = polygon_plot([c.vertices for c in drawn], cloud.points[::step], title="depth contours",
                       labels=[f"depth {c.level:g}" for c in drawn])
    write_svg(out / "contour.svg", svg)
    return EXIT_OK


def _file_label(name: str) -> str:
    return name.replace("+", "pos_").replace("-", "neg_").replace("(", "").replace(")", "").replace(",", "_")


def cmd_tailscan(cfg: ExperimentConfig) -> int:
    cloud = _cloud(cfg, "rotated-3d")
    sch = _schedule(cfg, cloud.n)
    ccfg = ClassifierConfig.from_dict(cfg.sections.get("classifier", {}))
    dirs = None
    if cloud.d > 2:
        dirs = default_directions(cloud.d, cfg.get_int("K"), cfg.get_int("seed", 0))
    scan = tailscan(cloud, signed=_bool(cfg, "signed", True), center=cfg.get("center", "median"),
                    schedule=sch, M=cfg.get_int("M", 100), tail_points=cfg.get_int("tail_points", 25),
                    dirs=dirs, config=ccfg, threads=cfg.get_int("threads", 1))
    out = _out(cfg)
    report = scan.verdict.report()
    (out / "verdict.txt").write_text(report)
    scan.verdict.to_csv(out / "verdicts.csv")
    ys, ws = [], []
    for v, curve in zip(scan.verdicts, scan.curves):
        if curve is None:
            continue
        curve.to_csv(out / f"curve_{_file_label(v.name)}.csv")
        ys.append((v.name, curve.t, curve.y))
        ws.append((v.name, np.log(np.where(curve.t > 0, curve.t, np.nan)), curve.w))
    if ys:
        write_svg(out / "y.svg", line_chart(ys, "y = log(1/depth) / t", "t", "y", markers=True))
        write_svg(out / "w.svg", line_chart(ws, "w = log(1/depth) / log t", "log t", "w", markers=True))
    sys.stdout.write(report)
    return EXIT_OK


CONVERGENCE_SCHEDULE = {"N": "100000", "M": "50", "t_family": "linear", "t_c": "10000", "t_offset": "1.8"}


def cmd_convergence(cfg: ExperimentConfig) -> int:
    names = cfg.get_list("clouds") or [s.strip() for s in DEFAULT_CLOUDS.split(",")]
    sch = _schedule(cfg, cfg.get_int("n"), CONVERGENCE_SCHEDULE)
    x = _vector(cfg.get("x", "1 1"), "x")
    seed = cfg.get_int("seed", 0)
    clouds = {}
    for i, name in enumerate(names):
        spec = dist.builtin_spec(name)
        if spec.d != x.size:
            raise ConfigError(f"{name} has dimension {spec.d}, x has {x.size}")
        _check_size(sch.N, spec.d, cfg)
        clouds[name] = PointCloud(dist.draw(spec, sch.N, substream(seed, 2, i)))
    mode = cfg.get("mode", "both")
    if mode not in ("fixed", "growing", "both"):
        raise ConfigError(f"mode must be fixed, growing or both, got {mode!r}")
    out = _out(cfg)
    for kind in ("fixed", "growing"):
        if mode not in (kind, "both"):
            continue
        res = convergence_curves(clouds, x, sch, nested=(kind == "growing"))
        rows = [[k, n, t, *[res[nm][j] for nm in names]] for j, (k, n, t) in enumerate(sch.rows())]
        write_rows(out / f"convergence_{kind}.csv", ["k", "n", "t", *names], rows)
        series = [(nm, sch.ts, res[nm]) for nm in names]
        write_svg(out / f"convergence_{kind}.svg", line_chart(series, f"depth of t x, {kind} sample", "t", "depth"))
        print(f"{kind}: " + ", ".join(f"{nm} {res[nm][0]:.4g} -> {res[nm][-1]:.4g}" for nm in names))
    return EXIT_OK


RATIO_SCHEDULE = {"N": "100000", "M": "20", "t_family": "gaussian", "t_beta": "0.5"}


def cmd_ratio(cfg: ExperimentConfig) -> int:
    spec = _spec(cfg, "gauss")
    sch = _schedule(cfg, cfg.get_int("n"), RATIO_SCHEDULE)
    _check_size(sch.N, spec.d, cfg)
    res = ratio_experiment(spec, cfg.get_float("eps", 1.0), sch, cfg.get_float("spacing"), _seeds(cfg),
                           cfg.get_float("min_population_depth", 0.0), cfg.get_int("threads", 1))
    res = sorted(res, key=lambda r: r.seed)
    rows = [r for s in res for r in s.rows()]
    out = _out(cfg)
    write_rows(out / "ratio.csv", ["seed", "n", "t", "sup_ratio", "used", "excluded"], rows)
    write_svg(out / "ratio.svg", line_chart([(f"seed {r.seed}", r.n, r.sup_ratio) for r in res],
                                            "sup |empirical / population depth - 1|", "n", "sup ratio"))
    for r in res:
        print(f"seed {r.seed}: final {r.sup_ratio[-1]:.4g}, trailing slope {r.trailing_slope():+.3g}")
    return EXIT_OK


def cmd_qq(cfg: ExperimentConfig) -> int:
    cloud = _cloud(cfg, "laplace")
    col = cfg.get_int("column", 0)
    if not 0 <= col < cloud.d:
        raise ConfigError(f"column must lie in [0, {cloud.d - 1}]")
    values = cloud.points[:, col]
    if cfg.get("reference_input"):
        ref_vals = read_cloud(cfg.get("reference_input")).points[:, cfg.get_int("reference_column", 0)]
        ref = lambda p: np.quantile(ref_vals, p)  # noqa: E731
    else:
        ref = dist.Marginal.from_text(cfg.get("reference", "laplace"))
    qq = qq_data(values, ref)
    out = _out(cfg)
    write_rows(out / "qq.csv", ["reference", "sample"], qq.tolist())
    lo, hi = float(qq.min()), float(qq.max())
    write_svg(out / "qq.svg", line_chart([("sample", qq[:, 0], qq[:, 1]), ("diagonal", [lo, hi], [lo, hi])],
                                         "QQ plot", "reference quantile", "sample quantile"))
    ks = float(np.max(np.abs(np.sort(values) - qq[:, 0])))
    print(f"wrote {qq.shape[0]} QQ pairs; largest gap from the diagonal {ks:.4g}")
    return EXIT_OK


COMMANDS = {
    "simulate": cmd_simulate,
    "depth": cmd_depth,
    "contour": cmd_contour,
    "tailscan": cmd_tailscan,
    "convergence": cmd_convergence,
    "ratio": cmd_ratio,
    "qq": cmd_qq,
}

HELP = {
    "simulate": "draw a sample from a distribution spec",
    "depth": "halfspace depth of query points",
    "contour": "nested depth contours of a 2-D sample",
    "tailscan": "classify tails along signed basis directions",
    "convergence": "depth along t x for fixed and growing samples",
    "ratio": "empirical / population depth ratio series",
    "qq": "QQ data of one column against a reference",
}

# flag -> (section.key in the config, argparse kwargs)
FLAGS = {
    "simulate": [("--builtin", "distribution.builtin", {}), ("--n", "n", {"type": int})],
    "depth": [("--input", "input", {}), ("--query", "query", {}), ("--queries", "queries", {}),
              ("--K", "K", {"type": int})],
    "contour": [("--input", "input", {}), ("--builtin", "distribution.builtin", {}), ("--n", "n", {"type": int}),
                ("--levels", "levels", {})],
    "tailscan": [("--input", "input", {}), ("--builtin", "distribution.builtin", {}), ("--n", "n", {"type": int}),
                 ("--columns", "columns", {}), ("--M", "M", {"type": int}), ("--center", "center", {})],
    "convergence": [("--clouds", "clouds", {}), ("--n", "n", {"type": int}), ("--x", "x", {}),
                    ("--mode", "mode", {})],
    "ratio": [("--builtin", "distribution.builtin", {}), ("--eps", "eps", {"type": float}),
              ("--seeds", "seeds", {}), ("--min-population-depth", "min_population_depth", {"type": float})],
    "qq": [("--input", "input", {}), ("--builtin", "distribution.builtin", {}), ("--n", "n", {"type": int}),
           ("--column", "column", {"type": int}), ("--reference", "reference", {})],
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value config file")
    common.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="override a config key (section.key=value); repeatable")
    common.add_argument("--seed", type=int)
    common.add_argument("--threads", type=int)
    common.add_argument("--out", help="output directory")
    p = argparse.ArgumentParser(prog="hdtail", description="Halfspace depth and tail diagnostics.")
    sub = p.add_subparsers(dest="command", required=True)
    for name, fn in COMMANDS.items():
        sp = sub.add_parser(name, parents=[common], help=HELP[name])
        for flag, key, kw in FLAGS.get(name, []):
            sp.add_argument(flag, dest="opt_" + key.replace(".", "__"), **kw)
        if name == "depth":
            g = sp.add_mutually_exclusive_group()
            g.add_argument("--exact", dest="opt_mode", action="store_const", const="exact")
            g.add_argument("--approx", dest="opt_mode", action="store_const", const="approx")
        if name == "tailscan":
            sp.add_argument("--unsigned", dest="opt_signed", action="store_const", const="false")
    return p


def resolve_config(args: argparse.Namespace) -> ExperimentConfig:
    """Config file, then flag values, then ``--set`` overrides."""
    cfg = load_config(args.config) if args.config else ExperimentConfig()
    cfg.set("command", args.command)
    for attr in ("seed", "threads", "out"):
        v = getattr(args, attr)
        if v is not None:
            cfg.set(attr, v)
    for attr, v in vars(args).items():
        if attr.startswith("opt_") and v is not None:
            section, _, key = attr[4:].rpartition("__")
            cfg.set(key, v, section)
    return apply_overrides(cfg, args.set)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        cfg.write(_out(cfg) / "config.txt")
        return COMMANDS[args.command](cfg)
    except (ConfigError, InvalidArgumentError, UnsupportedError) as exc:
        code, msg = EXIT_CONFIG, f"configuration error: {exc}"
    except DataError as exc:
        code, msg = EXIT_DATA, f"data error: {exc}"
    except (ResourceLimitError, MemoryError) as exc:
        code, msg = EXIT_RESOURCE, f"resource limit: {exc}"
    print(f"hdtail: {msg}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
