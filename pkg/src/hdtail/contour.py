"""Bivariate depth regions as convex polygons.

The region ``{x : depth(x) >= tau}`` equals the intersection, over unit
``u``, of ``{x : <u, x> <= q_k(u)}`` where ``q_k(u)`` is the k-th largest
projection and ``k = ceil(tau n)``.  Sweeping a finite set of ``u`` gives an
outer approximation; the outward normals of the hull edges are always added
so that the lowest level reproduces the convex hull exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .depth import as_cloud
from .errors import InvalidArgumentError

DEFAULT_ANGLES = 720


@dataclass(frozen=True, eq=False)
class DepthContour:
    level: float
    k: int
    vertices: np.ndarray  # counter-clockwise, shape (m, 2); m == 0 when empty

    @property
    def empty(self) -> bool:
        return self.vertices.shape[0] == 0

    @property
    def area(self) -> float:
        if self.empty:
            return 0.0
        x, y = self.vertices[:, 0], self.vertices[:, 1]
        return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))

    def contains(self, pts, tol: float = 1e-9) -> np.ndarray:
        """Point-in-polygon test for a convex counter-clockwise polygon."""
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        if self.empty:
            return np.zeros(pts.shape[0], dtype=bool)
        a = self.vertices
        e = np.roll(a, -1, axis=0) - a
        rel = pts[:, None, :] - a[None, :, :]
        cross = e[None, :, 0] * rel[:, :, 1] - e[None, :, 1] * rel[:, :, 0]
        scale = np.linalg.norm(e, axis=1)[None, :]
        return np.all(cross >= -tol * np.maximum(scale, 1.0), axis=1)


def _clip(poly: np.ndarray, u: np.ndarray, b: float) -> np.ndarray:
    """Keep the part of a convex polygon with ``<u, x> <= b``."""
    if poly.shape[0] == 0:
        return poly
    s = poly @ u - b
    inside = s <= 0.0
    if inside.all():
        return poly
    if not inside.any():
        return poly[:0]
    nxt = np.roll(poly, -1, axis=0)
    s_nxt = np.roll(s, -1)
    cross = inside != np.roll(inside, -1)
    # non-crossing slots may hold NaN; they are discarded below
    with np.errstate(divide="ignore", invalid="ignore"):
        lam = s / (s - s_nxt)
        inter = poly + lam[:, None] * (nxt - poly)
    slots = np.stack([poly, inter], axis=1).reshape(-1, 2)
    keep = np.stack([inside, cross], axis=1).reshape(-1)
    return slots[keep]


def _hull_normals(pts: np.ndarray) -> np.ndarray:
    try:
        hull = ConvexHull(pts)
    except (QhullError, ValueError):
        return np.empty((0, 2))
    normals = hull.equations[:, :2]
    return normals / np.linalg.norm(normals, axis=1, keepdims=True)


def depth_contour_2d(cloud, level: float, n_angles: int = DEFAULT_ANGLES) -> DepthContour:
    """Convex polygon approximating the depth region at ``level``; empty if unattainable."""
    cloud = as_cloud(cloud)
    if cloud.d != 2:
        raise InvalidArgumentError("depth_contour_2d needs d = 2")
    if not 0 < level <= 1:
        raise InvalidArgumentError("level must lie in (0, 1]")
    pts = cloud.points
    n = cloud.n
    k = max(1, math.ceil(level * n - 1e-9))
    ang = 2.0 * np.pi * np.arange(n_angles) / n_angles
    dirs = np.vstack([np.column_stack([np.cos(ang), np.sin(ang)]), _hull_normals(pts)])
    proj = pts @ dirs.T
    # k-th largest projection per direction
    bounds = -np.partition(-proj, k - 1, axis=0)[k - 1]
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    pad = 1.0 + float(np.max(hi - lo))
    poly = np.array([[lo[0] - pad, lo[1] - pad], [hi[0] + pad, lo[1] - pad],
                     [hi[0] + pad, hi[1] + pad], [lo[0] - pad, hi[1] + pad]])
    for u, b in zip(dirs, bounds):
        poly = _clip(poly, u, b)
        if poly.shape[0] == 0:
            break
    poly = _dedupe(poly)
    contour = DepthContour(level, k, poly)
    span = float(np.max(hi - lo)) or 1.0
    if contour.empty or contour.area <= 1e-12 * span * span:
        return DepthContour(level, k, np.empty((0, 2)))
    return contour


def _dedupe(poly: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    if poly.shape[0] < 2:
        return poly
    step = np.linalg.norm(poly - np.roll(poly, 1, axis=0), axis=1)
    scale = max(1.0, float(np.abs(poly).max()))
    return poly[step > tol * scale]


def nested_contours(cloud, levels, n_angles: int = DEFAULT_ANGLES) -> list[DepthContour]:
    return [depth_contour_2d(cloud, t, n_angles) for t in sorted(levels)]
