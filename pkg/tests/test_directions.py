import numpy as np
import pytest

from hdtail import (
    DirectionSet,
    InvalidArgumentError,
    RotationMatrix,
    canonical_directions,
    default_directions,
    grid_2d,
    haar_rotation,
    paper_rotation_3d,
    sphere_sample,
)
from hdtail.directions import default_K


def test_canonical_signed_2d():
    assert canonical_directions(2, True).dirs.tolist() == [[1, 0], [-1, 0], [0, 1], [0, -1]]


def test_canonical_unsigned_1d():
    assert canonical_directions(1, False).dirs.tolist() == [[1.0]]


def test_canonical_signed_3d_distinct():
    D = canonical_directions(3, True).dirs
    assert D.shape == (6, 3)
    assert len({tuple(r) for r in D}) == 6


def test_sphere_sample_unit_single():
    s = sphere_sample(4, 1, seed=123)
    assert s.dirs.shape == (1, 4)
    assert abs(np.linalg.norm(s.dirs[0]) - 1) < 1e-12


def test_sphere_sample_deterministic():
    a, b = sphere_sample(3, 50, seed=9), sphere_sample(3, 50, seed=9)
    assert np.array_equal(a.dirs, b.dirs)
    assert not np.array_equal(a.dirs, sphere_sample(3, 50, seed=10).dirs)


def test_sphere_sample_mean_small():
    s = sphere_sample(2, 10_000, seed=0)
    assert np.linalg.norm(s.dirs.mean(axis=0)) < 0.05


def test_all_rows_unit():
    for ds in (sphere_sample(5, 200, 1), grid_2d(37), default_directions(4), canonical_directions(3)):
        assert np.max(np.abs(np.linalg.norm(ds.dirs, axis=1) - 1)) <= 1e-12


def test_direction_set_rejects_non_unit():
    with pytest.raises(InvalidArgumentError):
        DirectionSet(np.array([[1.0, 1.0]]))


def test_default_sizes():
    assert default_K(2) == 1000 and default_K(3) == 1000 and default_K(5) == 250
    ds = default_directions(3, seed=4)
    assert len(ds) == 6 + 1000
    assert np.array_equal(ds.dirs[:6], canonical_directions(3, True).dirs)


def test_to_csv_round_trip(tmp_path):
    ds = sphere_sample(3, 7, seed=2)
    ds.to_csv(tmp_path / "d.csv")
    from hdtail.io import read_cloud

    assert np.array_equal(read_cloud(tmp_path / "d.csv").points, ds.dirs)


def test_haar_rotation_properties():
    R = haar_rotation(3, seed=5)
    A = R.A
    assert np.max(np.abs(A.T @ A - np.eye(3))) < 1e-10
    assert abs(np.linalg.det(A) - 1) < 1e-10
    assert np.array_equal(A, haar_rotation(3, seed=5).A)
    F = R.basis()
    assert np.allclose(F @ F.T, np.eye(3), atol=1e-10)
    # f_i = A^T e_i
    assert np.allclose(F[1], A.T @ np.eye(3)[1])


def test_haar_rotation_is_roughly_uniform():
    # first column of a Haar rotation is uniform on the sphere: E[a_11^2] = 1/d
    vals = [haar_rotation(3, seed=s).A[0, 0] ** 2 for s in range(400)]
    assert abs(np.mean(vals) - 1 / 3) < 0.05


def test_paper_rotation_verbatim():
    A = paper_rotation_3d().A
    assert A[0, 0] == 0.3536 and A[2, 0] == -0.8660
    assert A[1, 1] == 0.8876 and A[0, 2] == 0.8364
    assert np.max(np.abs(A.T @ A - np.eye(3))) < 1e-3
    assert abs(np.linalg.det(A) - 1) < 1e-3


def test_rotation_validation():
    with pytest.raises(InvalidArgumentError):
        RotationMatrix(np.diag([1.0, -1.0]))
    with pytest.raises(InvalidArgumentError):
        RotationMatrix(np.array([[1.0, 0.1], [0.0, 1.0]]))
