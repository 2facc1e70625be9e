"""Monte-Carlo experiments built on the depth engines.

Each experiment is a pure function of its inputs and seeds; sub-streams
are derived with :func:`hdtail.rng.substream` so runs with several seeds
can be distributed over threads without changing any number.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..depth import _as_query, _check_unit, as_cloud
from ..distributions import Marginal, population_depth_many, sample
from ..errors import InvalidArgumentError
from ..rng import substream
from ..schedules import ball_grid
from .curves import depth_counts_along, hd_curve


def parallel_map(fn, items, threads: int = 1):
    """``[fn(x) for x in items]``, optionally on a thread pool; order is preserved."""
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, items))


# ---------------------------------------------------------------------------
# ratio of empirical to population depth
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class RatioSeries:
    seed: int
    n: np.ndarray
    t: np.ndarray
    sup_ratio: np.ndarray  # NaN when every grid point was excluded
    used: np.ndarray
    excluded: np.ndarray

    def rows(self):
        return list(zip([self.seed] * len(self.n), self.n, self.t, self.sup_ratio, self.used, self.excluded))

    def trailing_slope(self, window: float = 0.4) -> float:
        ok = np.flatnonzero(np.isfinite(self.sup_ratio))
        m = max(3, int(math.ceil(window * ok.size)))
        idx = ok[-m:]
        if idx.size < 2:
            return math.nan
        return float(np.polyfit(self.n[idx].astype(float), self.sup_ratio[idx], 1)[0])


def ratio_series(cloud, spec, eps: float, schedule, spacing=None, min_population_depth: float = 0.0,
                 seed: int = 0, dirs=None) -> RatioSeries:
    """``max |HD(t x, P_n) / HD(t x, P) - 1|`` over an ``eps``-ball grid, per schedule row."""
    cloud = as_cloud(cloud)
    grid = ball_grid(cloud.d, eps, spacing)
    sup, used, excl = [], [], []
    for n, t in zip(schedule.ns, schedule.ts):
        q = float(t) * grid
        pop = population_depth_many(spec, q)
        keep = pop >= max(min_population_depth, 1e-300)
        used.append(int(keep.sum()))
        excl.append(int((~keep).sum()))
        if not keep.any():
            sup.append(math.nan)
            continue
        qk = q[keep]
        cnt = depth_counts_along(cloud, qk, np.full(qk.shape[0], n), dirs)
        sup.append(float(np.max(np.abs(cnt / n / pop[keep] - 1.0))))
    return RatioSeries(seed, schedule.ns.copy(), schedule.ts.copy(), np.array(sup), np.array(used), np.array(excl))


def ratio_experiment(spec, eps: float, schedule, spacing=None, seeds=(0,), min_population_depth: float = 0.0,
                     threads: int = 1, dirs=None) -> list[RatioSeries]:
    """One :class:`RatioSeries` per seed, each on a fresh sample of size ``schedule.N``."""

    def run(seed):
        cloud = sample(spec, schedule.N, substream(seed, 0))
        return ratio_series(cloud, spec, eps, schedule, spacing, min_population_depth, seed, dirs)

    return parallel_map(run, seeds, threads)


# ---------------------------------------------------------------------------
# elliptical symmetry probe
# ---------------------------------------------------------------------------


def ellipse_pairs(sigma, radius: float = 1.0, m: int = 8, seed: int = 0) -> list[tuple[np.ndarray, np.ndarray]]:
    """Pairs ``(x, y)`` with ``|sigma x| = |sigma y| = radius`` (points of one ellipse)."""
    S = np.asarray(sigma, dtype=float)
    d = S.shape[0]
    rng = substream(seed, 1)
    g = rng.standard_normal((2 * m, d))
    u = radius * g / np.linalg.norm(g, axis=1, keepdims=True)
    pts = np.linalg.solve(S, u.T).T
    return [(pts[2 * i], pts[2 * i + 1]) for i in range(m)]


@dataclass(frozen=True, eq=False)
class SymmetrySeries:
    t: np.ndarray
    max_dev: np.ndarray  # NaN when every pair was dropped
    dropped: np.ndarray

    def rows(self):
        return list(zip(self.t, self.max_dev, self.dropped))


def symmetry_probe(cloud, sigma, t_grid, pairs, min_depth: float = 0.0, dirs=None) -> SymmetrySeries:
    """For each ``t``, the largest ``|HD(t x)/HD(t y) - 1|`` over the pairs.

    Pairs where either depth is zero, or below ``min_depth``, are dropped
    at that ``t`` and counted.
    """
    cloud = as_cloud(cloud)
    S = np.asarray(sigma, dtype=float)
    if S.shape != (cloud.d, cloud.d) or not np.allclose(S, S.T):
        raise InvalidArgumentError("sigma must be a symmetric d x d matrix")
    if np.any(np.linalg.eigvalsh(S) <= 0):
        raise InvalidArgumentError("sigma must be positive definite")
    xs = np.array([_as_query(p[0], cloud.d) for p in pairs])
    ys = np.array([_as_query(p[1], cloud.d) for p in pairs])
    nx = np.linalg.norm(xs @ S.T, axis=1)
    ny = np.linalg.norm(ys @ S.T, axis=1)
    if np.any(np.abs(nx - ny) > 1e-8 * np.maximum(1.0, nx)):
        raise InvalidArgumentError("pairs must satisfy |sigma x| = |sigma y|")
    n = cloud.n
    devs, drops = [], []
    for t in np.asarray(t_grid, dtype=float):
        q = np.vstack([t * xs, t * ys])
        cnt = depth_counts_along(cloud, q, np.full(q.shape[0], n), dirs)
        a, b = cnt[: len(pairs)], cnt[len(pairs):]
        floor = max(1, math.ceil(min_depth * n - 1e-9))
        ok = (a >= floor) & (b >= floor)
        drops.append(int((~ok).sum()))
        devs.append(float(np.max(np.abs(a[ok] / b[ok] - 1.0))) if ok.any() else math.nan)
    return SymmetrySeries(np.asarray(t_grid, dtype=float), np.array(devs), np.array(drops))


# ---------------------------------------------------------------------------
# regular-variation normalization
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class MRVSeries:
    n: np.ndarray
    t: np.ndarray
    depth: np.ndarray
    radial_sf: np.ndarray
    value: np.ndarray  # NaN where flagged
    flagged: np.ndarray

    def rows(self):
        return list(zip(self.n, self.t, self.depth, self.radial_sf, self.value, self.flagged.astype(int)))

    def trailing_spread(self, window: float = 0.4) -> float:
        """Coefficient of variation of the unflagged values in the trailing window."""
        ok = np.flatnonzero(~self.flagged)
        if ok.size < 2:
            return math.inf
        m = max(2, int(math.ceil(window * ok.size)))
        v = self.value[ok[-m:]]
        mu = float(v.mean())
        return float(v.std(ddof=1) / mu) if mu > 0 else math.inf


def mrv_normalized_curve(cloud, x, schedule, dirs=None) -> MRVSeries:
    """``HD(t_n x, P_n) / S_n(t_n)`` with ``S_n(t)`` the fraction of the prefix with norm > t."""
    cloud = as_cloud(cloud)
    u = _as_query(x, cloud.d)
    _check_unit(u)
    curve = hd_curve(cloud, u, schedule, dirs)
    norms = np.linalg.norm(cloud.points, axis=1)
    sf = np.array([np.count_nonzero(norms[:n] > t) / n for n, t in zip(curve.n, curve.t)])
    depth = curve.depth
    flagged = (sf == 0) | (depth == 0)
    with np.errstate(divide="ignore", invalid="ignore"):
        val = np.where(flagged, np.nan, depth / sf)
    return MRVSeries(curve.n, curve.t, depth, sf, val, flagged)


# ---------------------------------------------------------------------------
# QQ data
# ---------------------------------------------------------------------------


def qq_data(values, reference) -> np.ndarray:
    """Sorted sample against reference quantiles at plotting positions ``(i - 1/2) / n``.

    ``reference`` is a :class:`Marginal` or any callable mapping probabilities to quantiles.
    Returns an ``n x 2`` array ``(reference quantile, sample value)``.
    """
    v = np.sort(np.asarray(values, dtype=float).ravel())
    n = v.shape[0]
    if n < 2:
        raise InvalidArgumentError("QQ data needs at least 2 values")
    p = (np.arange(1, n + 1) - 0.5) / n
    q = reference.quantile(p) if isinstance(reference, Marginal) else np.asarray(reference(p), dtype=float)
    return np.column_stack([q, v])


# ---------------------------------------------------------------------------
# fixed vs growing sample
# ---------------------------------------------------------------------------


def convergence_curves(clouds: dict, x, schedule, nested: bool, dirs=None) -> dict:
    """Depth of ``t_k x`` for several named clouds; ``x`` need not be a unit vector."""
    x = np.asarray(x, dtype=float)
    out = {}
    for name, cloud in clouds.items():
        cloud = as_cloud(cloud)
        q = schedule.ts[:, None] * x[None, :]
        ns = schedule.ns if nested else np.full(len(schedule), cloud.n)
        cnt = depth_counts_along(cloud, q, ns, dirs)
        out[name] = cnt / ns
    return out
