"""Direction sets on the unit sphere and rotation matrices.

A :class:`DirectionSet` discretizes the infimum over the sphere in the
projection form of halfspace depth.  Every generator is deterministic in its
``(scheme, K, d, seed)`` arguments.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError
from .rng import make_rng

SCHEMES = ("canonical", "random-uniform", "grid-2d", "mixed")

# Printed to four decimals; orthogonal only to about 1e-4.
PAPER_ROTATION = np.array(
    [
        [0.3536, -0.4189, 0.8364],
        [0.3536, 0.8876, 0.2952],
        [-0.8660, 0.1913, 0.4619],
    ]
)


@dataclass(frozen=True, eq=False)
class DirectionSet:
    """``K x d`` array of unit row vectors plus its provenance."""

    dirs: np.ndarray
    seed: int | None = None
    scheme: str = "canonical"

    def __post_init__(self):
        arr = np.atleast_2d(np.asarray(self.dirs, dtype=float))
        if arr.shape[0] < 1:
            raise InvalidArgumentError("a direction set needs at least one direction")
        norms = np.linalg.norm(arr, axis=1)
        if np.any(np.abs(norms - 1.0) > 1e-12):
            raise InvalidArgumentError("direction rows must have unit norm")
        if self.scheme not in SCHEMES:
            raise InvalidArgumentError(f"unknown scheme {self.scheme!r}")
        arr = np.ascontiguousarray(arr)
        arr.flags.writeable = False
        object.__setattr__(self, "dirs", arr)

    @property
    def K(self) -> int:
        return self.dirs.shape[0]

    @property
    def d(self) -> int:
        return self.dirs.shape[1]

    def __len__(self) -> int:
        return self.K

    def __iter__(self):
        return iter(self.dirs)

    def union(self, other: "DirectionSet") -> "DirectionSet":
        if other.d != self.d:
            raise InvalidArgumentError("cannot merge direction sets of different dimension")
        return DirectionSet(np.vstack([self.dirs, other.dirs]), seed=other.seed, scheme="mixed")

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow([f"h{i + 1}" for i in range(self.d)])
            for row in self.dirs:
                writer.writerow([repr(float(v)) for v in row])


def canonical_directions(d: int, signed: bool = True) -> DirectionSet:
    """``{e_1, ..., e_d}``, or ``{+e_1, -e_1, ..., +e_d, -e_d}`` when signed."""
    if d < 1:
        raise InvalidArgumentError("d must be >= 1")
    eye = np.eye(d)
    if signed:
        rows = np.empty((2 * d, d))
        rows[0::2] = eye
        rows[1::2] = -eye
    else:
        rows = eye
    return DirectionSet(rows, scheme="canonical")


def sphere_sample(d: int, K: int, seed: int = 0) -> DirectionSet:
    """``K`` i.i.d. uniform directions from normalized Gaussian draws."""
    if K < 1:
        raise InvalidArgumentError("K must be >= 1")
    if d < 1:
        raise InvalidArgumentError("d must be >= 1")
    rng = make_rng(seed)
    g = rng.standard_normal((K, d))
    norms = np.linalg.norm(g, axis=1)
    # a zero draw has probability zero but would break normalization
    while np.any(norms == 0.0):
        bad = norms == 0.0
        g[bad] = rng.standard_normal((int(bad.sum()), d))
        norms = np.linalg.norm(g, axis=1)
    return DirectionSet(g / norms[:, None], seed=seed, scheme="random-uniform")


def grid_2d(K: int, offset: float = 0.0) -> DirectionSet:
    """``K`` equally spaced directions on the unit circle."""
    if K < 1:
        raise InvalidArgumentError("K must be >= 1")
    ang = offset + 2.0 * np.pi * np.arange(K) / K
    return DirectionSet(np.column_stack([np.cos(ang), np.sin(ang)]), scheme="grid-2d")


def default_K(d: int) -> int:
    return 1000 if d <= 3 else 10 * d * d


def default_directions(d: int, K: int | None = None, seed: int = 0) -> DirectionSet:
    """Signed canonical directions together with ``K`` random ones."""
    K = default_K(d) if K is None else K
    base = canonical_directions(d, signed=True)
    if K == 0:
        return base
    return base.union(sphere_sample(d, K, seed))


@dataclass(frozen=True, eq=False)
class RotationMatrix:
    """A (near-)orthogonal ``d x d`` matrix with determinant +1."""

    A: np.ndarray
    tol: float = 1e-10

    def __post_init__(self):
        A = np.asarray(self.A, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise InvalidArgumentError("rotation must be a square matrix")
        d = A.shape[0]
        if np.max(np.abs(A.T @ A - np.eye(d))) > self.tol:
            raise InvalidArgumentError("matrix is not orthogonal within tolerance")
        if abs(np.linalg.det(A) - 1.0) > self.tol:
            raise InvalidArgumentError("matrix determinant is not +1 within tolerance")
        A = A.copy()
        A.flags.writeable = False
        object.__setattr__(self, "A", A)

    @property
    def d(self) -> int:
        return self.A.shape[0]

    def basis(self) -> np.ndarray:
        """Rows ``f_i = A^T e_i``; the rotated basis in which ``Y = A X``."""
        return self.A.copy()


def haar_rotation(d: int, seed: int = 0) -> RotationMatrix:
    """Haar-distributed element of SO(d): sign-fixed QR of a Gaussian matrix."""
    if d < 2:
        raise InvalidArgumentError("d must be >= 2")
    rng = make_rng(seed)
    q, r = np.linalg.qr(rng.standard_normal((d, d)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return RotationMatrix(q)


def paper_rotation_3d() -> RotationMatrix:
    """The fixed 3 x 3 rotation of the rotated-product benchmark, four decimals."""
    return RotationMatrix(PAPER_ROTATION, tol=1e-3)
