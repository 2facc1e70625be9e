"""Property checks over randomly generated inputs."""
import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from hdtail import Marginal, canonical_directions, depth_approx, depth_exact_2d, sphere_sample
from hdtail.diagnostics import TailVerdict, classify_dataset
from hdtail.diagnostics.classify import LABELS, LIGHT

# small integer coordinates make ties and collinearity common and keep translations exact
coords = st.integers(-6, 6).map(float)


def clouds(d=2, max_n=25):
    return st.integers(1, max_n).flatmap(lambda n: arrays(float, (n, d), elements=coords))


points2 = arrays(float, (2,), elements=coords)


@settings(max_examples=150, deadline=None)
@given(clouds(), points2, st.integers(1, 40), st.integers(0, 10_000))
def test_approx_never_below_exact(X, q, K, seed):
    exact = depth_exact_2d(X, q).count
    assert depth_approx(X, q, sphere_sample(2, K, seed)).count >= exact
    assert depth_approx(X, q, canonical_directions(2)).count >= exact


@settings(max_examples=150, deadline=None)
@given(clouds(), points2, arrays(float, (2,), elements=st.integers(-50, 50).map(float)))
def test_translation_invariance(X, q, shift):
    assert depth_exact_2d(X + shift, q + shift).count == depth_exact_2d(X, q).count


@settings(max_examples=150, deadline=None)
@given(clouds(), points2)
def test_depth_is_a_count_over_n(X, q):
    v = depth_exact_2d(X, q)
    assert v.n == X.shape[0] and 0 <= v.count <= v.n
    assert v.as_fraction() * v.n == v.count
    # a data point is contained in its own closed halfspace
    assert depth_exact_2d(X, X[0]).count >= 1


@settings(max_examples=100, deadline=None)
@given(clouds(), points2, st.integers(-3, 3).map(float))
def test_scaling_invariance(X, q, a):
    if a == 0:
        a = 2.0
    assert depth_exact_2d(a * X, a * q).count == depth_exact_2d(X, q).count


def _verdict(label):
    rate = 1.0 if label in ("light-exp", "heavy") else None
    return TailVerdict(np.array([1.0, 0.0]), label, rate=rate, rate_se=0.1 if rate else None)


label_lists = st.lists(st.sampled_from(LABELS), min_size=1, max_size=8)


@given(label_lists)
def test_dataset_rule(labels):
    overall = classify_dataset([_verdict(lab) for lab in labels]).overall
    if any(lab in LIGHT for lab in labels):
        assert overall == "light-along-some-direction"
    elif set(labels) == {"inconclusive"}:
        assert overall == "inconclusive"
    else:
        assert overall == "heavy-tailed"


@given(label_lists, st.sampled_from(LIGHT))
def test_one_light_direction_decides(labels, light):
    assert classify_dataset([_verdict(lab) for lab in labels + [light]]).overall == "light-along-some-direction"


marginals = st.one_of(
    st.builds(lambda a, b: Marginal("normal", a, b), st.floats(-5, 5), st.floats(0.1, 5)),
    st.builds(lambda a, b: Marginal("laplace", a, b), st.floats(-5, 5), st.floats(0.1, 5)),
    st.builds(lambda df: Marginal("student_t", df=df), st.floats(0.5, 30)),
    st.builds(lambda al: Marginal("pareto", alpha=al), st.floats(0.5, 6)),
    st.builds(lambda a, r: Marginal("exponential", a, r), st.floats(-5, 5), st.floats(0.1, 5)),
)


@given(marginals, st.floats(1e-6, 1 - 1e-6))
def test_cdf_inverts_quantile(m, p):
    assert abs(float(m.cdf(m.quantile(p))) - p) <= 1e-8
