import math

import numpy as np
import pytest

from hdtail import InvalidArgumentError, Schedule, TMap, check_conditions, gamma_sequence, t_schedule
from hdtail import distributions as D
from hdtail.io import read_columns
from hdtail.schedules import (
    CapacityEstimate,
    GammaSequence,
    ball_grid,
    capacity_estimate,
    check_c2,
    write_schedule_csv,
)


def test_power_gamma_value():
    assert gamma_sequence("power", beta=0.5)(100) == pytest.approx(0.1, rel=1e-15)


def test_log_power_gamma_formula():
    g = gamma_sequence("log-power", p=2.0)
    n = np.array([100.0, 1e4, 1e6])
    assert np.allclose(g(n), np.log(n) ** 2 / n, rtol=1e-15)


@pytest.mark.parametrize("g", [GammaSequence("power", beta=0.3), GammaSequence("log-power", p=1.5),
                               GammaSequence("constant", value=0.2),
                               GammaSequence("table", ns=np.array([10.0, 1e6]), values=np.array([0.5, 1e-3]))])
def test_gamma_non_increasing(g):
    lo = max(10, g.valid_from())
    assert g.check(np.geomspace(lo, 1e6, 200))


@pytest.mark.parametrize("kw", [dict(kind="power", beta=1.0), dict(kind="power", beta=0.0),
                                dict(kind="log-power", p=1.0), dict(kind="constant", value=1.0),
                                dict(kind="wiggle")])
def test_gamma_invalid(kw):
    with pytest.raises(InvalidArgumentError):
        GammaSequence(**kw)


def test_t_maps_plug_in():
    assert t_schedule("gaussian", beta=0.5)(math.e**2) == pytest.approx(math.sqrt(2), rel=1e-15)
    assert t_schedule("mrv", beta=0.5, alpha=2.0)(1e4) == pytest.approx(10.0, rel=1e-12)
    assert t_schedule("linear", c=1000.0)(1e5) == pytest.approx(100.0, rel=1e-15)


def test_t_map_invalid():
    with pytest.raises(InvalidArgumentError):
        t_schedule("mrv", alpha=0.0)
    with pytest.raises(InvalidArgumentError):
        t_schedule("linear", c=-1.0)


def test_schedule_partition():
    s = Schedule(100_000, 100, TMap("linear", c=1000.0))
    assert len(s) == 100
    assert s.ns[0] == 1000 and s.ns[-1] == 100_000
    assert np.array_equal(s.ns, (np.arange(1, 101) * 100_000) // 100)
    assert s.ts[-1] == pytest.approx(100.0)
    s.validate()


def test_schedule_floor_division_uneven():
    s = Schedule(10, 3, TMap("linear", c=1.0))
    assert s.ns.tolist() == [3, 6, 10]


def test_schedule_truncation_and_clamp():
    t = TMap("linear", c=1000.0)
    cut = Schedule(100_000, 100, t, t_max=7.0)
    assert cut.ts.max() <= 7.0 and len(cut) == 7
    clamp = Schedule(100_000, 100, TMap("linear", c=1000.0, cap=7.0))
    assert len(clamp) == 100 and clamp.ts.max() == 7.0
    clamp.validate()


def test_schedule_invalid():
    with pytest.raises(InvalidArgumentError):
        Schedule(10, 20, TMap("linear"))
    with pytest.raises(InvalidArgumentError):
        Schedule(0, 1, TMap("linear"))
    with pytest.raises(InvalidArgumentError):
        Schedule(100, 10, TMap("linear"), k_min=11)


def test_schedule_gamma_must_decrease():
    bad = GammaSequence("table", ns=np.array([1.0, 1e6]), values=np.array([0.01, 0.5]))
    with pytest.raises(InvalidArgumentError):
        Schedule(1000, 10, TMap("linear"), gamma=bad).validate()


def test_schedule_dict_round_trip():
    s = Schedule(5000, 25, TMap("gaussian", beta=0.4, cap=3.0), GammaSequence("power", beta=0.4), k_min=2)
    back = Schedule.from_dict(s.to_dict())
    assert back.rows() == s.rows()
    assert np.array_equal(back.gammas, s.gammas)


def test_schedule_from_dict_malformed():
    with pytest.raises(InvalidArgumentError):
        Schedule.from_dict({"M": "10"})
    with pytest.raises(InvalidArgumentError):
        Schedule.from_dict({"N": "abc"})


def test_capacity_examples():
    assert capacity_estimate("gaussian", 2)(math.exp(-1)) == pytest.approx(1.0)
    assert capacity_estimate("mrv", 3)(0.3) == 1.0
    assert capacity_estimate("generic", 2)(0.01) <= 100.0


@pytest.mark.parametrize("fam", ["gaussian-halfspaces", "mrv-halfspaces", "generic"])
def test_capacity_below_inverse(fam):
    t = np.geomspace(1e-8, 0.999, 300)
    for K in (1.0, 50.0):
        assert np.all(CapacityEstimate(fam, 5, K)(t) <= 1 / t)


def test_conditions_power_passes():
    rep = check_conditions(GammaSequence("power", beta=0.5), capacity_estimate("gaussian", 2))
    assert rep.c1a and rep.c1b and rep.n_gamma_diverges
    # analytic r_b = n^{-1/2} log log n
    assert np.allclose(rep.r_b, np.log(np.log(rep.ns)) / np.sqrt(rep.ns), rtol=1e-12)


def test_conditions_one_over_n_log_n_fails():
    ns = np.geomspace(10, 1e9, 50)
    g = GammaSequence("table", ns=ns, values=1 / (ns * np.log(ns)))
    rep = check_conditions(g, capacity_estimate("generic", 2))
    assert not rep.c1b
    assert np.allclose(rep.r_b, np.log(np.log(rep.ns)) * np.log(rep.ns), rtol=0.02)  # table is log-log interpolated


def test_conditions_constant_passes():
    rep = check_conditions(GammaSequence("constant", value=0.1), capacity_estimate("gaussian", 2))
    assert rep.c1a and rep.c1b


def test_conditions_reject_range_below_domain():
    with pytest.raises(InvalidArgumentError):
        check_conditions(GammaSequence("log-power", p=3.0), capacity_estimate("generic", 2), n_range=(3, 1e6))


def test_ball_grid():
    g = ball_grid(2, 1.0)
    assert np.all(np.linalg.norm(g, axis=1) <= 1 + 1e-12)
    assert [0.0, 0.0] in g.tolist() and [1.0, 0.0] in g.tolist()
    # lattice points of spacing 0.1 in the unit disc: count by brute force
    k = np.arange(-10, 11)
    brute = sum(1 for a in k for b in k if a * a + b * b <= 100)
    assert g.shape[0] == brute
    assert ball_grid(3, 0.0).tolist() == [[0.0, 0.0, 0.0]]


def test_check_c2_gaussian():
    s = Schedule(10_000, 20, TMap("gaussian", beta=0.5), GammaSequence("power", beta=0.5))
    rep = check_c2(D.gaussian(d=2), s, eps=0.5)
    # Phi(-a) ~ exp(-a^2/2) / (a sqrt(2 pi)) with a = 0.5 sqrt(log n) beats n^{-1/2} for all n here
    assert np.all(rep.min_depth > s.ns**-0.5)
    assert rep.passed
    rep = check_c2(D.gaussian(d=2), s, eps=2.0)
    assert not rep.passed


def test_write_schedule_csv(tmp_path):
    s = Schedule(1000, 10, TMap("linear", c=100.0), GammaSequence("power", beta=0.5))
    write_schedule_csv(tmp_path / "s.csv", s, capacity_estimate("gaussian", 2))
    cols = read_columns(tmp_path / "s.csv")
    assert np.array_equal(cols["n"], s.ns)
    assert np.array_equal(cols["t_n"], s.ts)
    assert np.allclose(cols["gamma_n"], s.ns**-0.5)
