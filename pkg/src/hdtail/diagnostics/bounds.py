"""Checks of depth against analytic upper and lower bounds."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..depth import DepthValue, _as_query, as_cloud
from ..directions import RotationMatrix
from ..distributions import tail_lower_bound
from ..errors import InsufficientRangeError, InvalidArgumentError
from .curves import hd_curve


def marginal_upper_bound(cloud, basis, x, t: float = 1.0, tol: float = 1e-10) -> DepthValue:
    """Smallest closed-halfline depth of ``t x`` over the coordinate projections on ``basis``.

    Each row of ``basis`` gives a halfspace through ``t x``, so the result is
    never below the exact depth.  ``basis`` may be a :class:`RotationMatrix`, whose
    own tolerance then applies.
    """
    cloud = as_cloud(cloud)
    if isinstance(basis, RotationMatrix):
        tol = max(tol, basis.tol)
        basis = basis.basis()
    B = np.atleast_2d(np.asarray(basis, dtype=float))
    if B.shape[1] != cloud.d:
        raise InvalidArgumentError("basis dimension does not match the cloud")
    if np.max(np.abs(B @ B.T - np.eye(B.shape[0]))) > tol:
        raise InvalidArgumentError("basis is not orthonormal within tolerance")
    q = t * _as_query(x, cloud.d)
    # differences keep a data point equal to the query on both sides
    proj = (cloud.points - q) @ B.T
    ge = np.count_nonzero(proj >= 0.0, axis=0)
    le = np.count_nonzero(proj <= 0.0, axis=0)
    return DepthValue(int(np.minimum(ge, le).min()), cloud.n)


@dataclass(frozen=True, eq=False)
class SandwichReport:
    t: np.ndarray
    n: np.ndarray
    depth: np.ndarray
    g: np.ndarray
    lower_const: float
    upper_const: float
    fit_rows: np.ndarray  # boolean mask
    below: int
    above: int

    @property
    def n_validation(self) -> int:
        return int((~self.fit_rows).sum())

    @property
    def inside_fraction(self) -> float:
        m = self.n_validation
        return 1.0 if m == 0 else 1.0 - (self.below + self.above) / m

    def rows(self):
        lo = self.lower_const * self.g
        hi = self.upper_const * self.g
        return list(zip(self.n, self.t, self.depth, lo, hi, self.fit_rows.astype(int)))


def sandwich_check(cloud, spec, x, schedule, dirs=None, width: float = 3.0, curve=None) -> SandwichReport:
    """Fit ``c g(t |x|) <= depth <= C g(t |x|)`` on the first half of the rows and test the second half.

    ``log(depth / g)`` is fitted by its mean on the first half; the band is
    ``width`` residual standard deviations either side of it.
    """
    g_form = tail_lower_bound(spec)
    x = np.asarray(x, dtype=float)
    if curve is None:
        norm = float(np.linalg.norm(x))
        if norm == 0:
            raise InvalidArgumentError("x must be nonzero")
        curve = hd_curve(cloud, x / norm, _scaled(schedule, norm), dirs)
    t = curve.t
    r = t  # curve t already includes |x|
    depth = curve.depth
    g = g_form(r)
    m = len(curve)
    half = m // 2
    if half < 2:
        raise InsufficientRangeError("need at least 4 schedule rows")
    fit = np.zeros(m, dtype=bool)
    fit[:half] = True
    if np.any(depth[:half] == 0):
        raise InsufficientRangeError("depth reaches 0 on the fitting half")
    resid = np.log(depth[:half]) - g_form.log(r[:half])
    centre = float(resid.mean())
    spread = float(resid.std(ddof=1)) if half > 1 else 0.0
    lo_c = float(np.exp(centre - width * spread))
    hi_c = float(np.exp(centre + width * spread))
    val = ~fit
    below = int(np.count_nonzero(depth[val] < lo_c * g[val]))
    above = int(np.count_nonzero(depth[val] > hi_c * g[val]))
    return SandwichReport(t, curve.n, depth, g, lo_c, hi_c, fit, below, above)


class _ScaledT:
    def __init__(self, t, s):
        self.t, self.s = t, s
        self.increasing = getattr(t, "increasing", True)

    def __call__(self, n):
        return self.s * np.asarray(self.t(n), dtype=float)


def _scaled(schedule, s: float):
    """The schedule with every ``t`` multiplied by ``s`` (for non-unit query points)."""
    if s == 1.0:
        return schedule
    from dataclasses import replace

    t_max = None if schedule.t_max is None else schedule.t_max
    out = replace(schedule, t=_ScaledT(schedule.t, s), t_max=None if t_max is None else s * t_max)
    return out
