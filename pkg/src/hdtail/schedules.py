"""Sample-size schedules ``(n_k, t_{n_k}, gamma_{n_k})`` and their checks.

A :class:`Schedule` partitions a sample of size ``N`` into ``M`` nested
prefixes ``n_k = floor(k N / M)`` and attaches a growth map ``t`` and an
optional mass floor ``gamma``.  The asymptotic conditions on ``gamma`` are
checked numerically on a log-spaced grid: a ratio "is o(1)" when it is
below a tolerance at the top of the grid and non-increasing over the upper
half of it.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import InvalidArgumentError

GAMMA_KINDS = ("power", "log-power", "constant", "table")
T_FAMILIES = ("gaussian", "mrv", "linear", "constant")
CAPACITY_FAMILIES = ("gaussian-halfspaces", "mrv-halfspaces", "generic")


@dataclass(frozen=True, eq=False)
class GammaSequence:
    """Mass floor ``gamma_n``.

    ``power``: ``n**-beta``; ``log-power``: ``log(n)**p / n``;
    ``constant``: ``value``; ``table``: log-log interpolation of ``(ns, values)``.
    """

    kind: str
    beta: float = 0.5
    p: float = 2.0
    value: float = 0.1
    ns: np.ndarray | None = None
    values: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in GAMMA_KINDS:
            raise InvalidArgumentError(f"unknown gamma kind {self.kind!r}")
        if self.kind == "power" and not 0 < self.beta < 1:
            raise InvalidArgumentError("power gamma needs beta in (0, 1)")
        if self.kind == "log-power" and not self.p > 1:
            raise InvalidArgumentError("log-power gamma needs p > 1")
        if self.kind == "constant" and not 0 < self.value < 1:
            raise InvalidArgumentError("constant gamma must lie in (0, 1)")
        if self.kind == "table":
            ns = np.asarray(self.ns, dtype=float)
            vals = np.asarray(self.values, dtype=float)
            if ns.ndim != 1 or ns.shape != vals.shape or ns.size < 2:
                raise InvalidArgumentError("table gamma needs matching 1-D arrays of length >= 2")
            if np.any(np.diff(ns) <= 0) or np.any(vals <= 0) or np.any(vals >= 1):
                raise InvalidArgumentError("table gamma needs increasing n and values in (0, 1)")
            object.__setattr__(self, "ns", ns)
            object.__setattr__(self, "values", vals)

    def __call__(self, n):
        n = np.asarray(n, dtype=float)
        if self.kind == "power":
            return n ** -self.beta
        if self.kind == "log-power":
            return np.log(n) ** self.p / n
        if self.kind == "constant":
            return np.full_like(n, self.value)
        return np.exp(np.interp(np.log(n), np.log(self.ns), np.log(self.values)))

    def valid_from(self) -> int:
        """Smallest ``n >= 3`` beyond which ``gamma`` is in (0,1) and non-increasing."""
        if self.kind != "log-power":
            return 3
        # log(n)^p / n peaks at n = e^p, then decreases
        n0 = max(3, math.ceil(math.exp(self.p)))
        while self(n0) >= 1.0:
            n0 = int(n0 * 1.1) + 1
        return n0

    def check(self, ns) -> bool:
        g = self(np.asarray(ns, dtype=float))
        return bool(np.all((g > 0) & (g < 1)) and np.all(np.diff(g) <= 0))


def gamma_sequence(kind: str, **params) -> GammaSequence:
    return GammaSequence(kind, **params)


@dataclass(frozen=True)
class TMap:
    """Growth map ``n -> t_n``, optionally clamped at ``cap``."""

    family: str
    beta: float = 0.5
    alpha: float = 2.0
    c: float = 1000.0
    offset: float = 0.0
    value: float = 1.0
    cap: float | None = None

    def __post_init__(self):
        if self.family not in T_FAMILIES:
            raise InvalidArgumentError(f"unknown t family {self.family!r}")
        if self.family == "mrv" and not self.alpha > 0:
            raise InvalidArgumentError("mrv schedule needs alpha > 0")
        if self.family in ("gaussian", "mrv") and not self.beta > 0:
            raise InvalidArgumentError("beta must be > 0")
        if self.family == "linear" and not self.c > 0:
            raise InvalidArgumentError("linear schedule needs c > 0")

    def __call__(self, n):
        t = self._raw(np.asarray(n, dtype=float))
        return t if self.cap is None else np.minimum(t, self.cap)

    def _raw(self, n):
        if self.family == "gaussian":
            return np.sqrt(2.0 * self.beta * np.log(n))
        if self.family == "mrv":
            return n ** (self.beta / self.alpha)
        if self.family == "linear":
            return self.offset + n / self.c
        return np.full_like(n, self.value)

    @property
    def increasing(self) -> bool:
        return self.family != "constant"


def t_schedule(family: str, beta: float = 0.5, alpha: float = 2.0, c: float = 1000.0, **kw) -> TMap:
    return TMap(family, beta=beta, alpha=alpha, c=c, **kw)


@dataclass(frozen=True, eq=False)
class Schedule:
    """Nested prefixes ``n_k = floor(k N / M)`` for ``k = k_min..M``.

    Rows with ``t_{n_k} > t_max`` are dropped, so a cap shortens the range
    instead of flattening ``t``.
    """

    N: int
    M: int
    t: TMap
    gamma: GammaSequence | None = None
    k_min: int = 1
    t_max: float | None = None
    ks: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.N < 1 or self.M < 1:
            raise InvalidArgumentError("N and M must be >= 1")
        if self.M > self.N:
            raise InvalidArgumentError("M cannot exceed N")
        if not 1 <= self.k_min <= self.M:
            raise InvalidArgumentError("k_min must lie in [1, M]")
        ks = np.arange(self.k_min, self.M + 1)
        if self.t_max is not None:
            ks = ks[self.t((ks * self.N) // self.M) <= self.t_max]
        object.__setattr__(self, "ks", ks)

    @property
    def ns(self) -> np.ndarray:
        return (self.ks * self.N) // self.M

    @property
    def ts(self) -> np.ndarray:
        return np.asarray(self.t(self.ns), dtype=float)

    @property
    def gammas(self) -> np.ndarray | None:
        return None if self.gamma is None else self.gamma(self.ns)

    def __len__(self) -> int:
        return self.ks.shape[0]

    def rows(self):
        return list(zip(self.ks.tolist(), self.ns.tolist(), self.ts.tolist()))

    def capped(self, t_max: float) -> "Schedule":
        return replace(self, t_max=t_max)

    def validate(self) -> None:
        """Raise unless ``n_k`` is non-decreasing, ``t`` strictly increasing and ``gamma`` non-increasing."""
        if np.any(np.diff(self.ns) < 0):
            raise InvalidArgumentError("n_k must be non-decreasing")
        ts = self.ts
        cap = getattr(self.t, "cap", None)
        if cap is not None:
            ts = ts[ts < cap]  # clamped rows are constant by construction
        if self.t.increasing and np.any(np.diff(ts) <= 0):
            raise InvalidArgumentError("t_n must be strictly increasing over the range")
        if self.gamma is not None:
            g = self.gammas
            if np.any(np.diff(g) > 0) or np.any((g <= 0) | (g >= 1)):
                raise InvalidArgumentError("gamma_n must be non-increasing in (0, 1)")

    def to_dict(self) -> dict:
        t = self.t
        out = {"N": str(self.N), "M": str(self.M), "k_min": str(self.k_min), "t_family": t.family}
        out.update({"t_beta": repr(t.beta), "t_alpha": repr(t.alpha), "t_c": repr(t.c),
                    "t_offset": repr(t.offset), "t_value": repr(t.value)})
        if self.t_max is not None:
            out["t_max"] = repr(float(self.t_max))
        if t.cap is not None:
            out["t_cap"] = repr(float(t.cap))
        if self.gamma is not None and self.gamma.kind != "table":
            g = self.gamma
            out.update({"gamma_kind": g.kind, "gamma_beta": repr(g.beta), "gamma_p": repr(g.p),
                        "gamma_value": repr(g.value)})
        return out

    @classmethod
    def from_dict(cls, cfg: dict) -> "Schedule":
        try:
            t = TMap(
                cfg.get("t_family", "linear"),
                beta=float(cfg.get("t_beta", 0.5)),
                alpha=float(cfg.get("t_alpha", 2.0)),
                c=float(cfg.get("t_c", 1000.0)),
                offset=float(cfg.get("t_offset", 0.0)),
                value=float(cfg.get("t_value", 1.0)),
                cap=float(cfg["t_cap"]) if "t_cap" in cfg else None,
            )
            gamma = None
            if "gamma_kind" in cfg:
                gamma = GammaSequence(
                    cfg["gamma_kind"],
                    beta=float(cfg.get("gamma_beta", 0.5)),
                    p=float(cfg.get("gamma_p", 2.0)),
                    value=float(cfg.get("gamma_value", 0.1)),
                )
            t_max = float(cfg["t_max"]) if "t_max" in cfg else None
            return cls(int(cfg["N"]), int(cfg.get("M", 100)), t, gamma, int(cfg.get("k_min", 1)), t_max)
        except (KeyError, ValueError) as exc:
            if isinstance(exc, InvalidArgumentError):
                raise
            raise InvalidArgumentError(f"malformed schedule block: {exc}") from exc


@dataclass(frozen=True)
class CapacityEstimate:
    """Capacity-function surrogate ``g_c(t)``, clipped so that ``g_c(t) <= 1/t``."""

    family: str
    d: int
    K: float = 1.0

    def __post_init__(self):
        if self.family not in CAPACITY_FAMILIES:
            raise InvalidArgumentError(f"unknown capacity family {self.family!r}")
        if self.d < 1:
            raise InvalidArgumentError("d must be >= 1")

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        inv = 1.0 / t
        if self.family == "gaussian-halfspaces":
            raw = self.K * np.log(inv) ** (0.5 * (self.d - 1))
        elif self.family == "mrv-halfspaces":
            raw = np.full_like(t, self.K)
        else:
            return inv
        return np.minimum(raw, inv)


def capacity_estimate(family: str, d: int, K: float = 1.0) -> CapacityEstimate:
    aliases = {"gaussian": "gaussian-halfspaces", "mrv": "mrv-halfspaces"}
    return CapacityEstimate(aliases.get(family, family), d, K)


@dataclass(frozen=True, eq=False)
class ConditionReport:
    ns: np.ndarray
    gamma: np.ndarray
    r_a: np.ndarray
    r_b: np.ndarray
    c1a: bool
    c1b: bool
    n_gamma_diverges: bool
    tol: float

    def rows(self):
        return zip(self.ns, self.gamma, self.r_a, self.r_b)


def _vanishes(r: np.ndarray, tol: float) -> bool:
    tail = r[r.shape[0] // 2:]
    return bool(r[-1] < tol and np.all(np.diff(tail) <= 1e-15 * np.maximum(1.0, tail[:-1])))


def check_conditions(gamma: GammaSequence, cap: CapacityEstimate, n_range=(1e3, 1e8), num: int = 60,
                     tol: float = 1e-3) -> ConditionReport:
    """Grid surrogate for ``log g_c(gamma_n) / (n gamma_n) -> 0`` and ``log log n / (n gamma_n) -> 0``."""
    lo, hi = n_range
    if lo < gamma.valid_from():
        raise InvalidArgumentError(f"range starts below the sequence domain n >= {gamma.valid_from()}")
    ns = np.geomspace(lo, hi, num)
    g = gamma(ns)
    ng = ns * g
    r_a = np.abs(np.log(cap(g))) / ng
    r_b = np.log(np.log(ns)) / ng
    diverges = bool(np.all(np.diff(ng) > 0) and ng[-1] > 1.0 / tol)
    return ConditionReport(ns, g, r_a, r_b, _vanishes(r_a, tol), _vanishes(r_b, tol), diverges, tol)


def ball_grid(d: int, eps: float, spacing: float | None = None) -> np.ndarray:
    """Points of the cubic lattice with the given spacing inside the closed ``eps``-ball."""
    if eps < 0:
        raise InvalidArgumentError("eps must be >= 0")
    if eps == 0:
        return np.zeros((1, d))
    h = 0.1 * eps if spacing is None else spacing
    m = int(math.floor(eps / h + 1e-9))
    axis = h * np.arange(-m, m + 1)
    grid = np.stack(np.meshgrid(*([axis] * d), indexing="ij"), axis=-1).reshape(-1, d)
    return grid[np.linalg.norm(grid, axis=1) <= eps * (1 + 1e-12)]


@dataclass(frozen=True, eq=False)
class C2Report:
    ns: np.ndarray
    ts: np.ndarray
    gamma: np.ndarray
    min_depth: np.ndarray
    holds: np.ndarray

    @property
    def passed(self) -> bool:
        return bool(np.all(self.holds))


def check_c2(spec, schedule: Schedule, eps: float, spacing: float | None = None) -> C2Report:
    """Check ``population_depth(t_n x) > gamma_n`` over a grid of the ``eps``-ball."""
    from .distributions import population_depth_many

    if schedule.gamma is None:
        raise InvalidArgumentError("schedule has no gamma sequence")
    grid = ball_grid(spec.d, eps, spacing)
    mins = np.array([population_depth_many(spec, t * grid).min() for t in schedule.ts])
    g = schedule.gammas
    return C2Report(schedule.ns, schedule.ts, g, mins, mins > g)


def write_schedule_csv(path, schedule: Schedule, cap: CapacityEstimate | None = None) -> None:
    """Columns ``n, t_n, gamma_n, r_a, r_b`` (the last three empty without ``gamma``)."""
    ns = schedule.ns
    ts = schedule.ts
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["n", "t_n", "gamma_n", "r_a", "r_b"])
        for n, t in zip(ns, ts):
            if schedule.gamma is None:
                w.writerow([int(n), repr(float(t)), "", "", ""])
                continue
            g = float(schedule.gamma(n))
            ra = abs(math.log(float(cap(g)))) / (n * g) if cap is not None else ""
            rb = math.log(math.log(n)) / (n * g) if n > 2 else ""
            w.writerow([int(n), repr(float(t)), repr(g), repr(ra) if ra != "" else "", repr(rb) if rb != "" else ""])
