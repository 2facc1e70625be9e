"""Depth-decay curves along a fixed direction.

For each schedule row ``(k, n_k, t_k)`` the depth of ``t_k * u`` is taken
with respect to the first ``n_k`` rows of the cloud.  Two transforms of
``L = log(1 / depth)`` are attached:

* ``y = L / t`` stabilizes at a positive level for exponential decay;
* ``w = L / log t`` stabilizes at a positive level for polynomial decay.

``L`` is stored directly so that synthetic curves with astronomically small
depth do not underflow.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..depth import _as_query, _check_unit, _depth_count_2d, _direction_array, as_cloud
from ..directions import default_directions
from ..errors import InvalidArgumentError
from ..io import write_rows

FLAG_OUT_OF_HULL = "out-of-hull"
FLAG_W_UNDEFINED = "w-undefined"
CURVE_COLUMNS = ["k", "n", "t", "count", "depth", "y", "w", "flags"]


@dataclass(frozen=True, eq=False)
class HDCurve:
    direction: np.ndarray
    k: np.ndarray
    n: np.ndarray
    t: np.ndarray
    log_inv_depth: np.ndarray  # +inf where depth is 0
    count: np.ndarray | None = None
    label: str = ""

    def __post_init__(self):
        m = self.t.shape[0]
        for name in ("k", "n", "log_inv_depth"):
            if getattr(self, name).shape[0] != m:
                raise InvalidArgumentError(f"curve column {name} has the wrong length")

    @classmethod
    def from_log_depth(cls, t, log_inv_depth, direction=(1.0,), label="synthetic") -> "HDCurve":
        """Curve from given ``t`` and ``log(1/depth)`` values (no sample behind it)."""
        t = np.asarray(t, dtype=float)
        L = np.asarray(log_inv_depth, dtype=float)
        k = np.arange(1, t.shape[0] + 1)
        return cls(np.asarray(direction, dtype=float), k, np.zeros_like(k), t, L, None, label)

    @classmethod
    def from_depth(cls, t, depth, **kw) -> "HDCurve":
        depth = np.asarray(depth, dtype=float)
        with np.errstate(divide="ignore"):
            return cls.from_log_depth(t, -np.log(depth), **kw)

    def __len__(self) -> int:
        return self.t.shape[0]

    @property
    def depth(self) -> np.ndarray:
        if self.count is not None:
            return self.count / self.n
        return np.exp(-self.log_inv_depth)

    @property
    def out_of_hull(self) -> np.ndarray:
        return ~np.isfinite(self.log_inv_depth)

    @property
    def y(self) -> np.ndarray:
        ok = ~self.out_of_hull & (self.t > 0)
        out = np.full(len(self), np.nan)
        out[ok] = self.log_inv_depth[ok] / self.t[ok]
        return out

    @property
    def w(self) -> np.ndarray:
        ok = ~self.out_of_hull & (self.t > 1)
        out = np.full(len(self), np.nan)
        out[ok] = self.log_inv_depth[ok] / np.log(self.t[ok])
        return out

    def usable(self) -> np.ndarray:
        """Boolean mask of rows before the first zero depth, with ``t > 0``."""
        hit = np.flatnonzero(self.out_of_hull)
        stop = hit[0] if hit.size else len(self)
        mask = np.zeros(len(self), dtype=bool)
        mask[:stop] = True
        return mask & (self.t > 0)

    def flags(self) -> list[str]:
        out = []
        for o, t in zip(self.out_of_hull, self.t):
            f = []
            if o:
                f.append(FLAG_OUT_OF_HULL)
            if t <= 1:
                f.append(FLAG_W_UNDEFINED)
            out.append(";".join(f))
        return out

    def table(self):
        cnt = self.count if self.count is not None else [None] * len(self)
        return list(zip(self.k, self.n, self.t, cnt, self.depth, self.y, self.w, self.flags()))

    def to_csv(self, path):
        return write_rows(path, CURVE_COLUMNS, self.table())


def _approx_counts_rows(points, qs, ns, dirs, chunk: int | None = None) -> np.ndarray:
    """Direction-set depth counts of query ``qs[j]`` within the prefix ``points[:ns[j]]``.

    Projections of the full cloud are formed once per block of directions
    and reused by every row, so each row costs only comparisons.  A row
    whose count reaches 0 is final and skipped by later blocks.
    """
    N = int(ns.max())
    pts = points[:N]
    if chunk is None:
        chunk = max(1, min(128, (1 << 23) // max(1, N)))
    best = np.full(qs.shape[0], np.iinfo(np.int64).max, dtype=np.int64)
    for start in range(0, dirs.shape[0], chunk):
        active = np.flatnonzero(best > 0)
        if active.size == 0:
            break
        block = dirs[start:start + chunk]
        n_act = int(ns[active].max())
        proj = pts[:n_act] @ block.T
        thr = qs @ block.T
        for j in active:
            n = ns[j]
            pj = proj[:n]
            ge = np.count_nonzero(pj >= thr[j], axis=0)
            le = n - np.count_nonzero(pj > thr[j], axis=0)
            best[j] = min(best[j], int(np.minimum(ge, le).min()))
    return best


def depth_counts_along(cloud, queries, ns, dirs=None) -> np.ndarray:
    """Depth counts of ``queries[j]`` within the first ``ns[j]`` rows of ``cloud``.

    Exact when ``d <= 2``; direction-set minimum otherwise.
    """
    cloud = as_cloud(cloud)
    qs = np.atleast_2d(np.asarray(queries, dtype=float))
    ns = np.asarray(ns, dtype=np.int64)
    if qs.shape != (ns.shape[0], cloud.d):
        raise InvalidArgumentError("queries and prefix sizes do not line up")
    if ns.size and (ns.min() < 1 or ns.max() > cloud.n):
        raise InvalidArgumentError(f"prefix sizes must lie in [1, {cloud.n}]")
    pts = cloud.points
    if cloud.d == 1:
        out = np.empty(ns.shape[0], dtype=np.int64)
        for j, (n, q) in enumerate(zip(ns, qs[:, 0])):
            p = pts[:n, 0]
            out[j] = min(np.count_nonzero(p <= q), np.count_nonzero(p >= q))
        return out
    if cloud.d == 2:
        return np.array([_depth_count_2d(pts[:n], q) for n, q in zip(ns, qs)], dtype=np.int64)
    arr = _direction_array(default_directions(cloud.d) if dirs is None else dirs, cloud.d)
    return _approx_counts_rows(pts, qs, ns, arr)


def hd_curve(cloud, direction, schedule, dirs=None, nested: bool = True, label: str = "") -> HDCurve:
    """Depth of ``t_k * direction`` within prefix ``n_k`` for every schedule row.

    With ``nested=False`` the whole cloud is used for every row (fixed sample).
    """
    cloud = as_cloud(cloud)
    u = _as_query(direction, cloud.d)
    _check_unit(u)
    ks, ns, ts = schedule.ks, schedule.ns, schedule.ts
    if ns.size and ns.max() > cloud.n:
        raise InvalidArgumentError(f"schedule needs {ns.max()} rows, cloud has {cloud.n}")
    use_n = ns if nested else np.full_like(ns, cloud.n)
    use_n = np.maximum(use_n, 1)
    counts = depth_counts_along(cloud, ts[:, None] * u[None, :], use_n, dirs)
    with np.errstate(divide="ignore"):
        L = np.log(use_n) - np.log(counts)
    return HDCurve(u, ks.copy(), use_n, ts.astype(float), L, counts, label)


def direction_label(u) -> str:
    u = np.asarray(u, dtype=float)
    nz = np.flatnonzero(u)
    if nz.size == 1 and abs(abs(u[nz[0]]) - 1.0) < 1e-12:
        return f"{'+' if u[nz[0]] > 0 else '-'}e{nz[0] + 1}"
    return "(" + ",".join(f"{v:.3g}" for v in u) + ")"


def transform_error(curve: HDCurve) -> float:
    """Largest relative error of ``exp(-y t)`` and ``t**-w`` against the stored depth."""
    d = curve.depth
    # rows whose depth underflows to 0.0 in floating point carry nothing to compare
    ok = ~curve.out_of_hull & (d > 0)
    worst = 0.0
    if ok.any():
        wy = ok & (curve.t > 0)
        if wy.any():
            rec = np.exp(-curve.y[wy] * curve.t[wy])
            worst = max(worst, float(np.max(np.abs(rec - d[wy]) / d[wy])))
        ww = ok & (curve.t > 1)
        if ww.any():
            rec = curve.t[ww] ** -curve.w[ww]
            worst = max(worst, float(np.max(np.abs(rec - d[ww]) / d[ww])))
    return worst if math.isfinite(worst) else math.inf
