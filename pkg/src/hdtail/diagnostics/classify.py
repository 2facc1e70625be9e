"""Numeric decision rules turning a depth-decay curve into a tail verdict.

On the trailing window of usable rows:

1. mean ``y`` at most ``eps_y``, or ``y`` falling -> look at ``w``:
   ``w`` rising -> ``light-subexp``; ``w`` flat above ``eps_w`` -> ``heavy``
   (index fitted); anything else -> ``inconclusive``.
2. ``y`` rising -> ``light-superexp``.
3. ``y`` flat   -> ``light-exp`` (rate fitted).

Trends are measured against ``log t``.  A series "rises" when its slope
exceeds ``sigma`` standard errors *and* its elasticity (slope divided by
the window mean) exceeds ``rho``; "falls" symmetrically; otherwise it is
flat.  The first condition guards against noise, the second against drifts
too slow to matter; noiseless curves have zero standard error.  Measuring
against ``log t`` makes the thresholds independent of how the t grid is
spaced.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..io import write_rows
from .curves import HDCurve, direction_label

LABELS = ("light-superexp", "light-exp", "light-subexp", "heavy", "inconclusive")
LIGHT = ("light-superexp", "light-exp", "light-subexp")
OVERALL = ("heavy-tailed", "light-along-some-direction", "inconclusive")


@dataclass(frozen=True)
class ClassifierConfig:
    window: float = 0.4
    min_rows: int = 10
    eps_y: float = 0.05
    eps_w: float = 0.05
    sigma: float = 2.0
    rho: float = 0.20
    correction_gain: float = 0.01  # keep a correction term only if it cuts the RSS to this fraction

    @classmethod
    def from_dict(cls, d: dict) -> "ClassifierConfig":
        kw = {}
        for f in ("window", "eps_y", "eps_w", "sigma", "rho", "correction_gain"):
            if f in d:
                kw[f] = float(d[f])
        if "min_rows" in d:
            kw["min_rows"] = int(d["min_rows"])
        return cls(**kw)

    def to_dict(self) -> dict:
        return {k: repr(v) if isinstance(v, float) else str(v) for k, v in self.__dict__.items()}


@dataclass(frozen=True)
class Trend:
    slope: float
    se: float
    mean: float
    change: float  # elasticity: d(value)/d(log t) relative to |mean|
    sign: int

    @property
    def word(self) -> str:
        return {1: "rising", 0: "flat", -1: "falling"}[self.sign]


def _ols(X: np.ndarray, v: np.ndarray):
    coef, *_ = np.linalg.lstsq(X, v, rcond=None)
    resid = v - X @ coef
    rss = float(resid @ resid)
    dof = X.shape[0] - X.shape[1]
    if dof > 0:
        s2 = rss / dof
        cov = s2 * np.linalg.pinv(X.T @ X)
        se = np.sqrt(np.maximum(np.diag(cov), 0.0))
    else:
        se = np.full(X.shape[1], math.nan)
    return coef, se, rss


def trend(t, v, sigma: float = 2.0, rho: float = 0.20) -> Trend:
    """Least-squares trend of ``v`` against ``log t``."""
    x = np.log(np.asarray(t, dtype=float))
    v = np.asarray(v, dtype=float)
    X = np.column_stack([np.ones_like(x), x])
    coef, se, _ = _ols(X, v)
    slope = float(coef[1])
    s = float(se[1]) if math.isfinite(se[1]) else 0.0
    mean = float(v.mean())
    change = slope / max(abs(mean), 1e-300)
    sign = 0
    if slope > sigma * s and change > rho:
        sign = 1
    elif slope < -sigma * s and change < -rho:
        sign = -1
    return Trend(slope, s, mean, change, sign)


def _fit_slope(x, L, extra, gain: float):
    """Slope of ``L`` on ``x``, with ``extra`` as a nuisance regressor when it pays off."""
    base = np.column_stack([np.ones_like(x), x])
    c0, se0, rss0 = _ols(base, L)
    if extra is None or x.shape[0] < 4:
        return float(c0[1]), float(se0[1])
    aug = np.column_stack([base, extra])
    c1, se1, rss1 = _ols(aug, L)
    scale = max(float(L @ L), 1e-300)
    if rss0 > 1e-24 * scale and rss1 <= gain * rss0:
        return float(c1[1]), float(se1[1])
    return float(c0[1]), float(se0[1])


@dataclass(frozen=True, eq=False)
class TailVerdict:
    direction: np.ndarray
    label: str
    rate: float | None = None
    rate_se: float | None = None
    window: float = 0.4
    reason: str = ""
    n_usable: int = 0
    y_trend: Trend | None = None
    w_trend: Trend | None = None
    cross_check: float | None = None  # trailing mean of y (light-exp) or w (heavy)
    name: str = ""

    def __post_init__(self):
        if self.label not in LABELS:
            raise ValueError(f"unknown label {self.label!r}")
        has_rate = self.label in ("light-exp", "heavy")
        if has_rate != (self.rate is not None):
            raise ValueError("rate must be present exactly for light-exp and heavy verdicts")

    @property
    def is_light(self) -> bool:
        return self.label in LIGHT

    def summary(self) -> str:
        name = self.name or direction_label(self.direction)
        parts = [f"{name}: {self.label}"]
        if self.rate is not None:
            what = "rate" if self.label == "light-exp" else "index"
            parts.append(f"{what} {self.rate:.4g} +/- {self.rate_se:.2g}")
        if self.y_trend is not None:
            parts.append(f"y {self.y_trend.word} (mean {self.y_trend.mean:.4g}, elasticity {self.y_trend.change:+.3f})")
        if self.w_trend is not None:
            parts.append(f"w {self.w_trend.word} (mean {self.w_trend.mean:.4g}, elasticity {self.w_trend.change:+.3f})")
        parts.append(f"{self.n_usable} usable rows")
        if self.reason:
            parts.append(self.reason)
        return "; ".join(parts)


def classify_direction(curve: HDCurve, config: ClassifierConfig | None = None) -> TailVerdict:
    cfg = config or ClassifierConfig()
    name = curve.label or direction_label(curve.direction)
    mask = curve.usable()
    idx = np.flatnonzero(mask)
    common = dict(direction=curve.direction, window=cfg.window, n_usable=int(idx.size), name=name)
    if idx.size < cfg.min_rows:
        return TailVerdict(label="inconclusive", reason=f"only {idx.size} usable rows (< {cfg.min_rows})", **common)
    m = max(3, int(math.ceil(cfg.window * idx.size)))
    win = idx[-m:]
    t = curve.t[win]
    L = curve.log_inv_depth[win]
    y = L / t
    ty = trend(t, y, cfg.sigma, cfg.rho)
    light = ty.mean > cfg.eps_y
    if light and ty.sign > 0:
        return TailVerdict(label="light-superexp", y_trend=ty, **common)
    if light and ty.sign == 0:
        rate, se = _fit_slope(t, L, np.log(t), cfg.correction_gain)
        if rate > 0:
            return TailVerdict(label="light-exp", rate=rate, rate_se=se, y_trend=ty, cross_check=ty.mean, **common)
        return TailVerdict(label="inconclusive", y_trend=ty, reason="flat y but non-positive fitted rate", **common)
    wmask = t > 1
    if wmask.sum() < 3:
        return TailVerdict(label="inconclusive", y_trend=ty, reason="w undefined on the window (t <= 1)", **common)
    tw, Lw = t[wmask], L[wmask]
    lt = np.log(tw)
    ww = Lw / lt
    tr_w = trend(tw, ww, cfg.sigma, cfg.rho)
    if tr_w.sign > 0:
        return TailVerdict(label="light-subexp", y_trend=ty, w_trend=tr_w, **common)
    if tr_w.sign == 0 and tr_w.mean > cfg.eps_w:
        extra = np.log(lt) if np.all(lt > 0) else None
        theta, se = _fit_slope(lt, Lw, extra, cfg.correction_gain)
        if theta > 0:
            return TailVerdict(label="heavy", rate=theta, rate_se=se, y_trend=ty, w_trend=tr_w,
                               cross_check=tr_w.mean, **common)
    why = "w falling" if tr_w.sign < 0 else ("w flat near 0" if tr_w.sign == 0 else "w not flat")
    return TailVerdict(label="inconclusive", y_trend=ty, w_trend=tr_w, reason=why, **common)


@dataclass(frozen=True, eq=False)
class DatasetVerdict:
    verdicts: tuple
    overall: str
    warnings: tuple = field(default_factory=tuple)

    def report(self) -> str:
        lines = [f"overall: {self.overall}"]
        lines += [f"warning: {w}" for w in self.warnings]
        lines += ["  " + v.summary() for v in self.verdicts]
        return "\n".join(lines) + "\n"

    def to_csv(self, path):
        rows = []
        for v in self.verdicts:
            rows.append([
                v.name or direction_label(v.direction), v.label, v.rate, v.rate_se, v.n_usable,
                v.y_trend.mean if v.y_trend else None, v.y_trend.slope if v.y_trend else None,
                v.w_trend.mean if v.w_trend else None, v.w_trend.slope if v.w_trend else None,
                v.cross_check, v.reason,
            ])
        rows.append(["overall", self.overall, None, None, None, None, None, None, None, None,
                     " | ".join(self.warnings)])
        header = ["direction", "label", "rate", "rate_se", "n_usable", "y_mean", "y_slope",
                  "w_mean", "w_slope", "cross_check", "note"]
        return write_rows(path, header, rows)


def classify_dataset(verdicts) -> DatasetVerdict:
    verdicts = tuple(verdicts)
    if not verdicts:
        raise ValueError("at least one verdict is required")
    labels = [v.label for v in verdicts]
    warnings = []
    if any(lab in LIGHT for lab in labels):
        overall = "light-along-some-direction"
    elif all(lab == "inconclusive" for lab in labels):
        overall = "inconclusive"
        warnings.append("every direction is inconclusive")
    else:
        overall = "heavy-tailed"
        k = labels.count("inconclusive")
        if k:
            warnings.append(f"{k} of {len(labels)} directions inconclusive; heavy verdict rests on the rest")
    return DatasetVerdict(verdicts, overall, tuple(warnings))
