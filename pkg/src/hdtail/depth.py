"""Halfspace (Tukey) depth of query points with respect to finite samples.

All depths use *closed* halfspaces: a sample point lying on the boundary of a
halfspace counts as inside it.  Empirical depth is therefore an integer count
divided by the sample size, and is returned as a :class:`DepthValue`.

Three engines are provided:

``depth_exact_2d``
    Exact bivariate depth by an angular sweep around the query, O(n log n).
``depth_exact_brute``
    Exhaustive enumeration of hyperplanes through the query, used as an
    oracle for small samples (d <= 4).
``depth_approx``
    Minimum over a finite direction set of the univariate depth of the
    projections.  Never smaller than the exact depth.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InvalidArgumentError, ResourceLimitError

UNIT_TOL = 1e-12
BRUTE_CAP = 200


@dataclass(frozen=True, eq=False)
class PointCloud:
    """An ``n x d`` sample of finite coordinates defining an empirical measure."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
            raise InvalidArgumentError(
                f"a point cloud needs shape (n, d) with n, d >= 1, got {pts.shape}"
            )
        if not np.all(np.isfinite(pts)):
            raise InvalidArgumentError("point cloud contains NaN or infinite coordinates")
        pts = np.ascontiguousarray(pts)
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return self.n

    def prefix(self, n: int) -> "PointCloud":
        """The cloud formed by the first ``n`` rows."""
        if not 1 <= n <= self.n:
            raise InvalidArgumentError(f"prefix size {n} outside [1, {self.n}]")
        return PointCloud(self.points[:n])

    def centered(self, how: str = "median") -> "PointCloud":
        """Translate the cloud so its coordinatewise median (or mean) is 0."""
        if how == "median":
            c = np.median(self.points, axis=0)
        elif how == "mean":
            c = self.points.mean(axis=0)
        elif how == "none":
            return self
        else:
            raise InvalidArgumentError(f"unknown centering {how!r}")
        return PointCloud(self.points - c)


@dataclass(frozen=True, eq=False)
class ProjectedSample:
    """Sorted inner products of a cloud with one unit direction."""

    values: np.ndarray

    @property
    def n(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class DepthValue:
    """Empirical depth ``count / n``."""

    count: int
    n: int

    def __post_init__(self):
        if not 0 <= self.count <= self.n:
            raise InvalidArgumentError(f"depth count {self.count} outside [0, {self.n}]")

    @property
    def value(self) -> float:
        return self.count / self.n

    def as_fraction(self) -> Fraction:
        return Fraction(self.count, self.n)

    def __float__(self) -> float:
        return self.value

    def __repr__(self) -> str:
        return f"DepthValue({self.count}/{self.n})"


def as_cloud(data) -> PointCloud:
    if isinstance(data, PointCloud):
        return data
    return PointCloud(np.asarray(data, dtype=float))


def _as_query(x, d: int) -> np.ndarray:
    q = np.atleast_1d(np.asarray(x, dtype=float))
    if q.shape != (d,):
        raise InvalidArgumentError(f"query must have shape ({d},), got {q.shape}")
    return q


def _check_unit(h: np.ndarray) -> None:
    norms = np.linalg.norm(np.atleast_2d(h), axis=1)
    if np.any(np.abs(norms - 1.0) > UNIT_TOL):
        raise InvalidArgumentError("directions must have unit Euclidean norm")


def project(cloud, h) -> ProjectedSample:
    """Project a cloud on the unit direction ``h`` and sort the result."""
    cloud = as_cloud(cloud)
    h = _as_query(h, cloud.d)
    _check_unit(h)
    return ProjectedSample(np.sort(cloud.points @ h))


def univariate_depth(sample: ProjectedSample, x: float) -> DepthValue:
    """Depth of ``x`` within a sorted univariate sample, closed half-lines."""
    values = sample.values
    n = values.shape[0]
    if n == 0:
        raise InvalidArgumentError("empty sample")
    below = int(np.searchsorted(values, x, side="right"))
    above = n - int(np.searchsorted(values, x, side="left"))
    return DepthValue(min(below, above), n)


def _direction_array(dirs, d: int) -> np.ndarray:
    arr = getattr(dirs, "dirs", dirs)
    arr = np.atleast_2d(np.asarray(arr, dtype=float))
    if arr.shape[0] == 0 or arr.size == 0:
        raise InvalidArgumentError("direction set is empty")
    if arr.shape[1] != d:
        raise InvalidArgumentError(f"directions have dimension {arr.shape[1]}, cloud has {d}")
    _check_unit(arr)
    return arr


def approx_counts(points: np.ndarray, q: np.ndarray, dirs: np.ndarray, chunk: int | None = None) -> np.ndarray:
    """Per-direction closed-halfspace counts ``min(#<=, #>=)`` for one query.

    Differences ``X_i - q`` are projected, so a data point equal to the query
    projects to exactly zero and is counted on both sides.
    """
    v = points - q
    if chunk is None:
        # keep the projection block near 2**22 entries
        chunk = max(1, min(256, (1 << 22) // max(1, v.shape[0])))
    out = np.empty(dirs.shape[0], dtype=np.int64)
    for start in range(0, dirs.shape[0], chunk):
        block = dirs[start:start + chunk]
        proj = v @ block.T
        ge = np.count_nonzero(proj >= 0.0, axis=0)
        le = np.count_nonzero(proj <= 0.0, axis=0)
        out[start:start + chunk] = np.minimum(ge, le)
    return out


def depth_approx(cloud, x, dirs) -> DepthValue:
    """Depth restricted to a finite direction set (an upper bound on exact depth)."""
    cloud = as_cloud(cloud)
    q = _as_query(x, cloud.d)
    arr = _direction_array(dirs, cloud.d)
    counts = approx_counts(cloud.points, q, arr)
    return DepthValue(int(counts.min()), cloud.n)


def _depth_count_2d(points: np.ndarray, q: np.ndarray) -> int:
    v = points - q
    vx = v[:, 0]
    vy = v[:, 1]
    zero = (vx == 0.0) & (vy == 0.0)
    z = int(np.count_nonzero(zero))
    m = points.shape[0] - z
    if m == 0:
        return z
    # Each nonzero v is folded into the upper half-plane; `upper` marks the
    # ones that were already there.  The key -vx/vy is invariant under the fold
    # and increases with the angle of the supporting line, so exactly
    # collinear vectors share a key.
    upper = (vy > 0.0) | ((vy == 0.0) & (vx > 0.0))
    lower = ~upper & ~zero
    with np.errstate(divide="ignore", invalid="ignore"):
        key = np.where(vy != 0.0, -vx / np.where(vy != 0.0, vy, 1.0), -np.inf)
    ka = np.sort(key[upper])
    kb = np.sort(key[lower])
    total_a = ka.shape[0]
    cand = np.concatenate((ka, kb))
    # For a directed line just past angle `cand`, left-side count is
    # (#upper with larger key) + (#lower with key <= cand).
    left = total_a - np.searchsorted(ka, cand, side="right") + np.searchsorted(kb, cand, side="right")
    best = int(np.minimum(left, m - left).min())
    best = min(best, total_a, m - total_a)
    return z + best


def depth_exact_2d(cloud, x) -> DepthValue:
    """Exact bivariate halfspace depth via an angular sweep around ``x``."""
    cloud = as_cloud(cloud)
    if cloud.d != 2:
        raise InvalidArgumentError("depth_exact_2d needs d = 2")
    q = _as_query(x, 2)
    return DepthValue(_depth_count_2d(cloud.points, q), cloud.n)


def depth_counts_2d(points, queries) -> np.ndarray:
    """Exact bivariate depth counts for each row of ``queries``."""
    pts = as_cloud(points).points
    qs = np.atleast_2d(np.asarray(queries, dtype=float))
    return np.array([_depth_count_2d(pts, q) for q in qs], dtype=np.int64)


# --------------------------------------------------------------------------
# brute-force oracle
# --------------------------------------------------------------------------

def _open_depth_1d(v: np.ndarray) -> int:
    return min(int(np.count_nonzero(v > 0)), int(np.count_nonzero(v < 0)))


def _open_depth_2d(v: np.ndarray) -> int:
    # Lines through the origin and each vector, rotated infinitesimally: the
    # adjacent open cells see min(strict sides) + min(forward, backward ray).
    vx = v[:, 0]
    vy = v[:, 1]
    cross = vx[:, None] * vy[None, :] - vy[:, None] * vx[None, :]
    dot = vx[:, None] * vx[None, :] + vy[:, None] * vy[None, :]
    on = cross == 0.0
    plus = np.count_nonzero(cross > 0, axis=1)
    minus = np.count_nonzero(cross < 0, axis=1)
    fwd = np.count_nonzero(on & (dot > 0), axis=1)
    bwd = np.count_nonzero(on & (dot < 0), axis=1)
    return int((np.minimum(plus, minus) + np.minimum(fwd, bwd)).min())


def _open_depth(v: np.ndarray, tol: float) -> int:
    """Minimum over open halfspaces through 0 of the number of vectors inside.

    ``v`` holds nonzero vectors in R^k.  The minimum over the cells of the
    hyperplane arrangement is found at cell vertices: every hyperplane
    spanned by k-1 independent vectors, with the vectors lying on it resolved
    recursively one dimension down.
    """
    m, k = v.shape
    if m == 0:
        return 0
    if k == 1:
        return _open_depth_1d(v[:, 0])
    scale = np.linalg.norm(v, axis=1)
    _, s, vt = np.linalg.svd(v, full_matrices=False)
    rank = int(np.count_nonzero(s > tol * s[0]))
    if rank < k:
        return _open_depth(v @ vt[:rank].T, tol)
    if k == 2:
        return _open_depth_2d(v)
    best = m
    for combo in itertools.combinations(range(m), k - 1):
        sub = v[list(combo)]
        _, s2, vt2 = np.linalg.svd(sub, full_matrices=True)
        if s2[-1] <= tol * s2[0]:
            continue
        u = vt2[-1]
        proj = v @ u
        on = np.abs(proj) <= tol * scale
        plus = int(np.count_nonzero((proj > 0) & ~on))
        minus = int(np.count_nonzero((proj < 0) & ~on))
        lower = min(plus, minus)
        if lower >= best:
            continue
        w = v[on]
        basis = vt2[:-1]
        best = min(best, lower + _open_depth(w @ basis.T, tol))
    return best


def depth_exact_brute(cloud, x, cap: int = BRUTE_CAP, tol: float = 1e-10) -> DepthValue:
    """Exact depth by exhaustive hyperplane enumeration (oracle, d <= 4)."""
    cloud = as_cloud(cloud)
    if cloud.n > cap:
        raise ResourceLimitError(f"brute-force depth capped at n = {cap}, got {cloud.n}")
    if cloud.d > 4:
        raise ResourceLimitError("brute-force depth supports d <= 4")
    q = _as_query(x, cloud.d)
    v = cloud.points - q
    zero = np.all(v == 0.0, axis=1)
    z = int(np.count_nonzero(zero))
    rest = v[~zero]
    if cloud.d == 2:
        count = z + (_open_depth_2d(rest) if rest.shape[0] else 0)
    else:
        count = z + _open_depth(rest, tol)
    return DepthValue(count, cloud.n)


def depth(cloud, x, dirs=None) -> DepthValue:
    """Exact depth for ``d <= 2``, direction-set approximation otherwise."""
    cloud = as_cloud(cloud)
    if cloud.d == 1:
        q = _as_query(x, 1)
        return univariate_depth(ProjectedSample(np.sort(cloud.points[:, 0])), float(q[0]))
    if cloud.d == 2:
        return depth_exact_2d(cloud, x)
    if dirs is None:
        from .directions import default_directions

        dirs = default_directions(cloud.d)
    return depth_approx(cloud, x, dirs)
