import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mubest.errors import InputError
from mubest.selection import (
    AVG,
    EAVG,
    HCHAVG,
    STANDARD_RULES,
    SINGLE_BEST,
    TEAVG,
    THCHAVG,
    MuRule,
    RuleKind,
    clip,
    compute_mu,
    rank,
    recommend,
)

ALL_RULES = STANDARD_RULES + (MuRule.parse("ratio:0.3"), MuRule.parse("fixed:7"))


def test_rank_orders_ascending():
    b = rank(np.zeros((3, 1)), [3.0, 1.0, 2.0])
    assert list(b.order) == [1, 2, 0]


def test_rank_ties_keep_input_order():
    b = rank(np.zeros((3, 2)), [1.0, 1.0, 2.0])
    assert list(b.order) == [0, 1, 2]


def test_rank_singleton():
    assert list(rank([[4.0, 2.0]], [0.5]).order) == [0]


def test_rank_rejects_nan_and_shape_mismatch():
    with pytest.raises(InputError):
        rank(np.zeros((2, 2)), [1.0, float("nan")])
    with pytest.raises(InputError):
        rank(np.zeros((3, 2)), [1.0, 2.0])


@pytest.mark.parametrize("args,expected", [((1, 3, 10), 3), ((1, 3, 0), 1), ((1, 3, 2.5), 2.5), ((5, 2, 3), 5)])
def test_clip(args, expected):
    assert clip(*args) == expected


def test_compute_mu_examples():
    assert compute_mu(AVG, 40, 3) == 3
    assert compute_mu(EAVG, 100, 3) == math.floor(100 / 1.1 ** 3) == 75
    assert compute_mu(THCHAVG, 100, 3, h=50) == 25
    assert compute_mu(SINGLE_BEST, 1000, 9) == 1


def test_compute_mu_hull_cap_below_one():
    assert compute_mu(HCHAVG, 2, 3, h=1) == 1
    assert compute_mu(THCHAVG, 3, 1, h=10) == 1


def test_compute_mu_unbounded_rules_clamped_to_lambda():
    assert compute_mu(TEAVG, 50, 1) == 49
    assert compute_mu(EAVG, 5, 0 + 1) == 4


def test_ratio_and_fixed_rules():
    assert compute_mu(MuRule.parse("ratio:0.1"), 1000, 5) == 100
    assert compute_mu(MuRule.parse("ratio:0.1"), 5, 5) == 1
    assert compute_mu(MuRule.parse("fixed:7"), 5, 2) == 5
    assert compute_mu(MuRule.parse("fixed:7"), 50, 2) == 7


def test_hull_rules_need_h():
    with pytest.raises(InputError):
        compute_mu(HCHAVG, 100, 3)


@pytest.mark.parametrize("text", ["best", "avg", "eavg", "hchavg", "teavg", "thchavg", "ratio:0.25", "fixed:3"])
def test_parse_roundtrip(text):
    assert MuRule.parse(text).name == text


@pytest.mark.parametrize("text", ["nope", "ratio:1.5", "ratio:x", "fixed:0", "best:3"])
def test_parse_rejects(text):
    with pytest.raises(InputError):
        MuRule.parse(text)


def test_avg_rule_closed_form():
    for d in range(1, 30):
        for lam in range(4, 300, 7):
            assert compute_mu(AVG, lam, d) == min(d, lam // 4)


@given(st.integers(1, 5000), st.integers(1, 60), st.integers(1, 5000))
@settings(max_examples=300, deadline=None)
def test_mu_in_range_and_monotone_in_lambda(lam, d, h):
    for rule in ALL_RULES:
        mu = compute_mu(rule, lam, d, h)
        assert 1 <= mu <= lam
        assert compute_mu(rule, lam + 1, d, h) >= mu


def test_recommend_examples():
    pts = np.array([[0.0, 0.0], [5.0, 5.0], [2.0, 0.0]])
    b = rank(pts, [0.0, 9.0, 1.0])
    assert np.array_equal(recommend(b, 1).point, [0.0, 0.0])
    assert np.array_equal(recommend(b, 2).point, [1.0, 0.0])
    assert np.allclose(recommend(b, 3).point, pts.mean(axis=0))
    assert recommend(b, 2).mu_used == 2
    with pytest.raises(InputError):
        recommend(b, 0)
    with pytest.raises(InputError):
        recommend(b, 4)


def test_recommend_mu_one_is_argmin_exactly():
    rng = np.random.default_rng(0)
    pts = rng.normal(size=(50, 4))
    f = rng.random(50)
    assert recommend(rank(pts, f), 1).point.tobytes() == pts[np.argmin(f)].tobytes()


@given(st.integers(2, 40), st.integers(1, 5), st.integers(0, 10_000))
@settings(max_examples=60, deadline=None)
def test_permutation_invariance(lam, d, seed):
    rng = np.random.default_rng(seed)
    pts = rng.normal(size=(lam, d))
    f = rng.random(lam)
    perm = rng.permutation(lam)
    for mu in {1, max(1, lam // 2), lam}:
        a = recommend(rank(pts, f), mu).point
        b = recommend(rank(pts[perm], f[perm]), mu).point
        assert a.tobytes() == b.tobytes()


def test_rule_kinds_cover_standard_rules():
    assert {r.kind for r in STANDARD_RULES} == set(RuleKind) - {RuleKind.FIXED, RuleKind.FIXED_RATIO}
