"""Sampling laws, their marginals, population depth and tail lower bounds.

Every sampler draws from a single Philox stream, so a ``(spec, n, seed)``
triple always yields the same cloud.  Population depth is closed-form when
the law is elliptical or spherically symmetric, and Monte-Carlo otherwise.
"""
from __future__ import annotations

import math
import re
import warnings
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import integrate, special

from .depth import PointCloud, _depth_count_2d, approx_counts
from .directions import RotationMatrix, default_directions, paper_rotation_3d
from .errors import InvalidArgumentError, PrecisionWarning, UnsupportedError
from .rng import make_rng

MARGINAL_KINDS = ("normal", "laplace", "student_t", "pareto", "exponential")
FAMILIES = (
    "gaussian",
    "product-laplace",
    "product-exponential-shifted",
    "radial-exponential",
    "student-t",
    "pareto",
    "rotated-product",
)
MC_SIZE = 10**6


def _check_p(p):
    p = np.asarray(p, dtype=float)
    if np.any(~((p > 0.0) & (p < 1.0))):
        raise InvalidArgumentError("probabilities must lie strictly inside (0, 1)")
    return p


@dataclass(frozen=True)
class Marginal:
    """A univariate law.  ``a`` and ``b`` are location/scale except where noted.

    ``student_t``: ``df`` degrees of freedom, location ``a``, scale ``b``.
    ``pareto``: survival ``t**-alpha`` on ``[1, inf)``; ``a``/``b`` unused.
    ``exponential``: rate ``b``, shifted by ``a``.
    """

    kind: str
    a: float = 0.0
    b: float = 1.0
    df: float = 3.0
    alpha: float = 2.0

    def __post_init__(self):
        if self.kind not in MARGINAL_KINDS:
            raise InvalidArgumentError(f"unknown marginal kind {self.kind!r}")
        if not self.b > 0:
            raise InvalidArgumentError("scale/rate must be > 0")
        if self.kind == "student_t" and not self.df > 0:
            raise InvalidArgumentError("degrees of freedom must be > 0")
        if self.kind == "pareto" and not self.alpha > 0:
            raise InvalidArgumentError("Pareto index must be > 0")

    # -- distribution functions ------------------------------------------

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        k = self.kind
        if k == "pareto":
            return np.where(x <= 1.0, 0.0, -np.expm1(-self.alpha * np.log(np.maximum(x, 1.0))))
        z = (x - self.a) / self.b if k != "exponential" else (x - self.a) * self.b
        if k == "normal":
            return special.ndtr(z)
        if k == "laplace":
            return np.where(z < 0, 0.5 * np.exp(np.minimum(z, 0.0)), 1.0 - 0.5 * np.exp(-np.maximum(z, 0.0)))
        if k == "student_t":
            return special.stdtr(self.df, z)
        return np.where(z <= 0, 0.0, -np.expm1(-np.maximum(z, 0.0)))

    def sf(self, x):
        """Survival ``P(X > x)``, accurate far in the upper tail."""
        x = np.asarray(x, dtype=float)
        k = self.kind
        if k == "pareto":
            return np.where(x <= 1.0, 1.0, np.maximum(x, 1.0) ** -self.alpha)
        z = (x - self.a) / self.b if k != "exponential" else (x - self.a) * self.b
        if k == "normal":
            return special.ndtr(-z)
        if k == "laplace":
            return np.where(z > 0, 0.5 * np.exp(-np.maximum(z, 0.0)), 1.0 - 0.5 * np.exp(np.minimum(z, 0.0)))
        if k == "student_t":
            return special.stdtr(self.df, -z)
        return np.where(z <= 0, 1.0, np.exp(-np.maximum(z, 0.0)))

    def quantile(self, p):
        p = _check_p(p)
        k = self.kind
        if k == "pareto":
            return (1.0 - p) ** (-1.0 / self.alpha)
        if k == "exponential":
            return self.a - np.log1p(-p) / self.b
        if k == "normal":
            z = special.ndtri(p)
        elif k == "laplace":
            z = np.where(p < 0.5, np.log(2.0 * p), -np.log(2.0 * (1.0 - p)))
        else:
            z = special.stdtrit(self.df, p)
        return self.a + self.b * z

    # -- sampling ----------------------------------------------------------

    def draw(self, rng: np.random.Generator, n: int) -> np.ndarray:
        k = self.kind
        if k == "normal":
            return self.a + self.b * rng.standard_normal(n)
        if k == "laplace":
            return self.a + self.b * (rng.standard_exponential(n) - rng.standard_exponential(n))
        if k == "student_t":
            z = rng.standard_normal(n)
            chi2 = rng.chisquare(self.df, n)
            return self.a + self.b * z / np.sqrt(chi2 / self.df)
        if k == "pareto":
            u = rng.random(n)
            return (1.0 - u) ** (-1.0 / self.alpha)
        return self.a + rng.standard_exponential(n) / self.b

    # -- moments -------------------------------------------------------------

    def mean(self) -> float:
        k = self.kind
        if k in ("normal", "laplace"):
            return self.a
        if k == "student_t":
            return self.a if self.df > 1 else math.nan
        if k == "pareto":
            return self.alpha / (self.alpha - 1.0) if self.alpha > 1 else math.inf
        return self.a + 1.0 / self.b

    def var(self) -> float:
        k = self.kind
        if k == "normal":
            return self.b**2
        if k == "laplace":
            return 2.0 * self.b**2
        if k == "student_t":
            if self.df > 2:
                return self.b**2 * self.df / (self.df - 2.0)
            return math.inf
        if k == "pareto":
            a = self.alpha
            return a / ((a - 1.0) ** 2 * (a - 2.0)) if a > 2 else math.inf
        return 1.0 / self.b**2

    def symmetric_about(self) -> float | None:
        if self.kind in ("normal", "laplace", "student_t"):
            return self.a
        return None

    def to_text(self) -> str:
        if self.kind == "student_t":
            return f"student_t(df={self.df!r}, a={self.a!r}, b={self.b!r})"
        if self.kind == "pareto":
            return f"pareto(alpha={self.alpha!r})"
        return f"{self.kind}(a={self.a!r}, b={self.b!r})"

    @classmethod
    def from_text(cls, text: str) -> "Marginal":
        m = re.fullmatch(r"\s*([a-z_]+)\s*(?:\((.*)\))?\s*", text)
        if not m:
            raise InvalidArgumentError(f"cannot parse marginal {text!r}")
        kwargs = {}
        for part in filter(None, (s.strip() for s in (m.group(2) or "").split(","))):
            key, _, val = part.partition("=")
            if key.strip() not in ("a", "b", "df", "alpha"):
                raise InvalidArgumentError(f"unknown marginal parameter {key!r}")
            kwargs[key.strip()] = float(val)
        return cls(m.group(1), **kwargs)


def marginal_cdf(spec1d: Marginal, x):
    return spec1d.cdf(x)


def marginal_quantile(spec1d: Marginal, p):
    return spec1d.quantile(p)


# ---------------------------------------------------------------------------
# multivariate laws
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class DistributionSpec:
    """A sampling law in ``R^d``.

    Construct through the helpers (:func:`gaussian`, :func:`product`, ...)
    rather than directly; they validate the per-family parameters.
    """

    family: str
    d: int
    marginals: tuple = ()
    mean: np.ndarray | None = None
    cov: np.ndarray | None = None
    df: float = 3.0
    spherical: bool = False
    rotation: RotationMatrix | None = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvalidArgumentError(f"unknown family {self.family!r}")
        if self.d < 1:
            raise InvalidArgumentError("d must be >= 1")
        if self.marginals and len(self.marginals) != self.d:
            raise InvalidArgumentError("marginal count must equal d")
        if self.rotation is not None and self.rotation.d != self.d:
            raise InvalidArgumentError("rotation dimension must equal d")

    @property
    def center(self) -> np.ndarray | None:
        """Centre of central symmetry, when there is one."""
        if self.family == "gaussian":
            return self.mean.copy()
        if self.family in ("radial-exponential",) or (self.family == "student-t" and self.spherical):
            return np.zeros(self.d)
        if self.marginals:
            cs = [m.symmetric_about() for m in self.marginals]
            if any(c is None for c in cs):
                return None
            c = np.array(cs, dtype=float)
            if self.rotation is not None:
                c = self.rotation.A.T @ c
            return c
        return None

    def key(self) -> str:
        return to_text(self)


def gaussian(mean=None, cov=None, d: int | None = None) -> DistributionSpec:
    """Gaussian law; ``cov`` is a vector (diagonal) or a full SPD matrix."""
    if d is None:
        d = len(mean) if mean is not None else (np.atleast_1d(cov).shape[0] if cov is not None else 2)
    mu = np.zeros(d) if mean is None else np.asarray(mean, dtype=float).reshape(d)
    if cov is None:
        C = np.eye(d)
    else:
        c = np.asarray(cov, dtype=float)
        C = np.diag(c) if c.ndim <= 1 else c
        if C.shape != (d, d):
            raise InvalidArgumentError("covariance shape does not match mean")
        if not np.allclose(C, C.T) or np.any(np.linalg.eigvalsh(C) <= 0):
            raise InvalidArgumentError("covariance must be symmetric positive definite")
    return DistributionSpec("gaussian", d, mean=mu, cov=C)


def product_laplace(d: int = 2, scale: float = 1.0) -> DistributionSpec:
    return DistributionSpec("product-laplace", d, marginals=tuple(Marginal("laplace", 0.0, scale) for _ in range(d)))


def product_exponential(d: int = 1, rate: float = 1.0, shift: float = 0.0) -> DistributionSpec:
    """Independent ``shift + Exp(rate)`` coordinates."""
    return DistributionSpec(
        "product-exponential-shifted", d, marginals=tuple(Marginal("exponential", shift, rate) for _ in range(d))
    )


def radial_exponential(d: int = 2) -> DistributionSpec:
    """Density proportional to ``exp(-|x|)``: radius ``Gamma(d)``, uniform direction."""
    return DistributionSpec("radial-exponential", d)


def student_t(d: int = 2, df: float = 3.0, spherical: bool = False) -> DistributionSpec:
    """Product of ``t_df`` coordinates, or the spherical multivariate ``t_df``."""
    if not df > 0:
        raise InvalidArgumentError("degrees of freedom must be > 0")
    margs = () if spherical else tuple(Marginal("student_t", df=df) for _ in range(d))
    return DistributionSpec("student-t", d, marginals=margs, df=float(df), spherical=spherical)


def pareto(d: int = 2, alpha=2.0) -> DistributionSpec:
    alphas = np.broadcast_to(np.asarray(alpha, dtype=float), (d,))
    return DistributionSpec("pareto", d, marginals=tuple(Marginal("pareto", alpha=float(a)) for a in alphas))


def rotated_product(rotation: RotationMatrix, marginals) -> DistributionSpec:
    """``X = A^T Y`` with independent coordinates ``Y_i``, so ``Y = A X``."""
    margs = tuple(m if isinstance(m, Marginal) else Marginal.from_text(m) for m in marginals)
    return DistributionSpec("rotated-product", rotation.d, marginals=margs, rotation=rotation)


def product(marginals, family: str = "rotated-product") -> DistributionSpec:
    """Independent coordinates with arbitrary marginals (no rotation)."""
    margs = tuple(m if isinstance(m, Marginal) else Marginal.from_text(m) for m in marginals)
    d = len(margs)
    return DistributionSpec(family, d, marginals=margs, rotation=RotationMatrix(np.eye(d)))


BUILTINS = {
    "rotated-3d": lambda: rotated_product(
        paper_rotation_3d(), [Marginal("normal"), Marginal("laplace"), Marginal("student_t", df=3.0)]
    ),
    "gauss-elongated": lambda: gaussian(cov=[1.0, 100.0]),
    "gauss-2": lambda: gaussian(cov=[2.0, 2.0]),
    "gauss": lambda: gaussian(d=2),
    "radial-exp": lambda: radial_exponential(2),
    "laplace": lambda: product_laplace(2),
    "pareto-1.9": lambda: pareto(2, 1.9),
    "pareto-2.2": lambda: pareto(2, 2.2),
    "pareto-3": lambda: pareto(2, 3.0),
    "pareto-3.2": lambda: pareto(2, 3.2),
    "t3": lambda: student_t(2, 3.0),
}


def builtin_spec(name: str) -> DistributionSpec:
    if name not in BUILTINS:
        raise InvalidArgumentError(f"unknown builtin spec {name!r}; known: {', '.join(sorted(BUILTINS))}")
    return BUILTINS[name]()


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------


def _uniform_sphere(rng, n, d):
    g = rng.standard_normal((n, d))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def draw(spec: DistributionSpec, n: int, rng) -> np.ndarray:
    """Raw ``n x d`` array of draws from ``rng``."""
    if n < 1:
        raise InvalidArgumentError("n must be >= 1")
    rng = make_rng(rng)
    d = spec.d
    f = spec.family
    if f == "gaussian":
        L = np.linalg.cholesky(spec.cov)
        return spec.mean + rng.standard_normal((n, d)) @ L.T
    if f == "radial-exponential":
        r = rng.standard_gamma(d, n)
        if d == 1:
            return (r * np.where(rng.random(n) < 0.5, -1.0, 1.0))[:, None]
        return r[:, None] * _uniform_sphere(rng, n, d)
    if f == "student-t" and spec.spherical:
        z = rng.standard_normal((n, d))
        chi2 = rng.chisquare(spec.df, n)
        return z / np.sqrt(chi2 / spec.df)[:, None]
    if not spec.marginals:
        raise InvalidArgumentError(f"family {f!r} needs marginals")
    # column-major draws keep each coordinate's stream contiguous
    Y = np.column_stack([m.draw(rng, n) for m in spec.marginals])
    if spec.rotation is not None:
        return Y @ spec.rotation.A  # rows are (A^T y)^T
    return Y


def sample(spec: DistributionSpec, n: int, seed=0) -> PointCloud:
    """``n`` i.i.d. draws as a :class:`PointCloud`."""
    return PointCloud(draw(spec, n, make_rng(seed)))


# ---------------------------------------------------------------------------
# population depth
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PopulationDepth:
    value: float
    stderr: float
    method: str

    def __float__(self) -> float:
        return self.value


def _radial_exp_sf(s: float, d: int) -> float:
    """``P(<h, X> > s)`` for the radial-exponential law and a unit ``h``."""
    s = abs(float(s))
    if d == 1:
        return 0.5 * math.exp(-s)
    if s == 0.0:
        return 0.5
    a = 0.5 * (d - 1)
    logc = -special.gammaln(d)

    def integrand(r):
        return 0.5 * special.betainc(a, 0.5, 1.0 - (s / r) ** 2) * math.exp(logc + (d - 1) * math.log(r) - r)

    # substituting r = s + u spreads the Gamma tail over [0, inf)
    val, _ = integrate.quad(lambda u: integrand(s + u), 0.0, np.inf, epsabs=1e-13, epsrel=1e-10, limit=200)
    return val


@lru_cache(maxsize=4)
def _mc_cloud(key: str, seed: int, size: int) -> np.ndarray:
    spec = from_text(key)
    pts = draw(spec, size, make_rng(seed))
    pts.flags.writeable = False
    return pts


def population_depth_estimate(
    spec: DistributionSpec, x, budget: int = 1000, seed: int = 12345, tol: float | None = None, mc_size: int = MC_SIZE
) -> PopulationDepth:
    """Population halfspace depth of ``x`` with an error estimate.

    Closed forms cover every Gaussian, the spherical ``t`` and the
    radial-exponential law.  Other laws use a Monte-Carlo cloud of
    ``mc_size`` draws: exact bivariate depth when ``d = 2``, otherwise a
    minimum over ``budget`` random directions plus the signed axes.  When ``tol`` is given and the standard error exceeds it a
    :class:`PrecisionWarning` is emitted; the estimate is still returned.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.shape != (spec.d,):
        raise InvalidArgumentError(f"query must have shape ({spec.d},)")
    f = spec.family
    if f == "gaussian":
        L = np.linalg.cholesky(spec.cov)
        r = np.linalg.norm(np.linalg.solve(L, x - spec.mean))
        return PopulationDepth(float(special.ndtr(-r)), 0.0, "closed-form")
    if f == "student-t" and spec.spherical:
        return PopulationDepth(float(special.stdtr(spec.df, -np.linalg.norm(x))), 0.0, "closed-form")
    if f == "radial-exponential":
        return PopulationDepth(_radial_exp_sf(np.linalg.norm(x), spec.d), 0.0, "quadrature")
    c = spec.center
    if c is not None and np.array_equal(x, c):
        return PopulationDepth(0.5, 0.0, "symmetry")
    if spec.d == 1:
        m = spec.marginals[0]
        v = float(min(m.cdf(x[0]), m.sf(x[0])))
        return PopulationDepth(v, 0.0, "closed-form")
    pts = _mc_cloud(to_text(spec), seed, mc_size)
    m = pts.shape[0]
    if spec.d == 2:
        # exact infimum over all lines for the Monte-Carlo measure
        p = _depth_count_2d(pts, x) / m
    else:
        dirs = default_directions(spec.d, K=budget, seed=seed).dirs
        p = float(approx_counts(pts, x, dirs).min()) / m
    se = math.sqrt(max(p * (1.0 - p), 1.0 / m) / m)
    if tol is not None and se > tol:
        warnings.warn(f"Monte-Carlo depth standard error {se:.2e} exceeds {tol:.2e}", PrecisionWarning, stacklevel=2)
    return PopulationDepth(p, se, "monte-carlo")


def population_depth(spec: DistributionSpec, x, budget: int = 1000, **kw) -> float:
    """Population halfspace depth of ``x``; see :func:`population_depth_estimate`."""
    return population_depth_estimate(spec, x, budget, **kw).value


def population_depth_many(spec: DistributionSpec, X, budget: int = 1000, **kw) -> np.ndarray:
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if spec.family == "gaussian":
        L = np.linalg.cholesky(spec.cov)
        r = np.linalg.norm(np.linalg.solve(L, (X - spec.mean).T), axis=0)
        return special.ndtr(-r)
    return np.array([population_depth(spec, x, budget, **kw) for x in X])


# ---------------------------------------------------------------------------
# tail lower bound g
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TailBoundG:
    """Positive, strictly decreasing lower-bound shape ``g(R)``."""

    form: str
    alpha: float | None = None

    def __post_init__(self):
        if self.form not in ("gauss", "exp", "power"):
            raise InvalidArgumentError(f"unknown g form {self.form!r}")
        if self.form == "power" and not (self.alpha and self.alpha > 0):
            raise InvalidArgumentError("power form needs alpha > 0")

    def __call__(self, R):
        R = np.asarray(R, dtype=float)
        if self.form == "gauss":
            return np.exp(-0.5 * R**2)
        if self.form == "exp":
            return np.exp(-R)
        return R ** (-self.alpha)

    def log(self, R):
        R = np.asarray(R, dtype=float)
        if self.form == "gauss":
            return -0.5 * R**2
        if self.form == "exp":
            return -R
        return -self.alpha * np.log(R)


def tail_lower_bound(spec: DistributionSpec) -> TailBoundG:
    if spec.family == "radial-exponential":
        return TailBoundG("exp")
    if spec.family == "gaussian":
        return TailBoundG("gauss")
    if spec.family == "pareto":
        return TailBoundG("power", alpha=min(m.alpha for m in spec.marginals))
    raise UnsupportedError(f"no known tail lower bound for family {spec.family!r}")


# ---------------------------------------------------------------------------
# key = value serialization
# ---------------------------------------------------------------------------


def _fmt_vec(v) -> str:
    return " ".join(repr(float(a)) for a in np.ravel(v))


def _parse_vec(s: str) -> np.ndarray:
    return np.array([float(t) for t in s.replace(",", " ").split()], dtype=float)


def to_dict(spec: DistributionSpec) -> dict:
    out = {"family": spec.family, "d": str(spec.d)}
    if spec.family == "gaussian":
        out["mean"] = _fmt_vec(spec.mean)
        out["cov"] = _fmt_vec(spec.cov)
    elif spec.family == "student-t":
        out["df"] = repr(spec.df)
        out["spherical"] = "true" if spec.spherical else "false"
    if spec.marginals and spec.family != "student-t":
        out["marginals"] = "; ".join(m.to_text() for m in spec.marginals)
    if spec.rotation is not None:
        out["rotation"] = _fmt_vec(spec.rotation.A)
        out["rotation_tol"] = repr(spec.rotation.tol)
    return out


def from_dict(cfg: dict) -> DistributionSpec:
    try:
        fam = cfg["family"].strip()
        if fam in BUILTINS:
            return builtin_spec(fam)
        d = int(cfg.get("d", "2"))
        if fam == "gaussian":
            mean = _parse_vec(cfg["mean"]) if "mean" in cfg else np.zeros(d)
            cov = _parse_vec(cfg["cov"]) if "cov" in cfg else np.ones(d)
            if cov.size == d * d and d > 1:
                cov = cov.reshape(d, d)
            return gaussian(mean, cov, d=d)
        if fam == "radial-exponential":
            return radial_exponential(d)
        if fam == "student-t":
            return student_t(d, float(cfg.get("df", "3")), cfg.get("spherical", "false").strip().lower() == "true")
        margs = tuple(Marginal.from_text(s) for s in cfg["marginals"].split(";")) if "marginals" in cfg else None
        if fam == "product-laplace":
            return DistributionSpec(fam, d, marginals=margs) if margs else product_laplace(d, float(cfg.get("scale", 1)))
        if fam == "product-exponential-shifted":
            if margs:
                return DistributionSpec(fam, d, marginals=margs)
            return product_exponential(d, float(cfg.get("rate", 1)), float(cfg.get("shift", 0)))
        if fam == "pareto":
            if margs:
                return DistributionSpec(fam, d, marginals=margs)
            return pareto(d, _parse_vec(cfg.get("alpha", "2")))
        if fam == "rotated-product":
            rot = cfg.get("rotation", "").strip()
            if rot in ("", "paper", "fixed"):
                R = paper_rotation_3d()
            elif rot == "identity":
                R = RotationMatrix(np.eye(d))
            else:
                A = _parse_vec(rot)
                k = int(round(math.sqrt(A.size)))
                R = RotationMatrix(A.reshape(k, k), tol=float(cfg.get("rotation_tol", "1e-10")))
            return rotated_product(R, margs)
    except (KeyError, ValueError, TypeError) as exc:
        if isinstance(exc, InvalidArgumentError):
            raise
        raise InvalidArgumentError(f"malformed distribution block: {exc}") from exc
    raise InvalidArgumentError(f"unknown family {fam!r}")


def to_text(spec: DistributionSpec) -> str:
    return "\n".join(f"{k} = {v}" for k, v in to_dict(spec).items())


def from_text(text: str) -> DistributionSpec:
    cfg = {}
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        k, sep, v = line.partition("=")
        if not sep:
            raise InvalidArgumentError(f"expected key = value, got {line!r}")
        cfg[k.strip()] = v.strip()
    return from_dict(cfg)
