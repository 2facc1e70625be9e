"""End-to-end tail scan: centre, build curves along basis directions, classify."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..depth import PointCloud, as_cloud
from ..directions import canonical_directions
from ..schedules import Schedule, TMap
from .classify import ClassifierConfig, DatasetVerdict, TailVerdict, classify_dataset, classify_direction
from .curves import direction_label, hd_curve
from .experiments import parallel_map

TAIL_POINTS = 25


def auto_schedule(cloud, direction, M: int = 100, tail_points: int = TAIL_POINTS) -> Schedule | None:
    """Linear schedule reaching the empirical ``1 - tail_points/N`` quantile of the projection at ``n = N``.

    ``None`` when that quantile is not positive (nothing to scan).
    """
    cloud = as_cloud(cloud)
    N = cloud.n
    proj = cloud.points @ np.asarray(direction, dtype=float)
    p = min(1.0, max(0.5, 1.0 - tail_points / N))
    t_max = float(np.quantile(proj, p))
    if not t_max > 0:
        return None
    return Schedule(N, min(M, N), TMap("linear", c=N / t_max))


@dataclass(frozen=True, eq=False)
class TailScan:
    center: np.ndarray
    directions: np.ndarray
    curves: tuple  # HDCurve or None per direction
    verdict: DatasetVerdict

    @property
    def verdicts(self) -> tuple:
        return self.verdict.verdicts


def tailscan(cloud, signed: bool = True, center: str = "median", schedule: Schedule | None = None,
             M: int = 100, tail_points: int = TAIL_POINTS, dirs=None, config: ClassifierConfig | None = None,
             threads: int = 1, directions=None) -> TailScan:
    """Classify the tail along each basis direction and combine the verdicts.

    ``schedule`` applies to every direction; without it each direction gets
    :func:`auto_schedule`.  Curves are computed on the centred cloud.
    """
    cloud = as_cloud(cloud)
    if center == "median":
        c = np.median(cloud.points, axis=0)
    elif center == "mean":
        c = cloud.points.mean(axis=0)
    else:
        c = np.zeros(cloud.d)
    work = PointCloud(cloud.points - c)
    U = canonical_directions(cloud.d, signed).dirs if directions is None else np.atleast_2d(directions)

    def one(u):
        name = direction_label(u)
        sch = schedule if schedule is not None else auto_schedule(work, u, M, tail_points)
        if sch is None or len(sch) == 0:
            return None, TailVerdict(u, "inconclusive", reason="no positive tail range along this direction", name=name)
        curve = hd_curve(work, u, sch, dirs, label=name)
        return curve, classify_direction(curve, config)

    results = parallel_map(one, list(U), threads)
    curves = tuple(r[0] for r in results)
    verdict = classify_dataset([r[1] for r in results])
    return TailScan(c, U, curves, verdict)
