from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import fat_cantor_member
from vitali import instances
from vitali.geometry import OIv
from vitali.represented import captured_at, prefix_union_measure


def test_fat_cantor_first_middles():
    seq = instances.fat_cantor().complement
    assert seq.prefix(3) == [OIv(F(3, 8), F(5, 8)), OIv(F(5, 32), F(7, 32)), OIv(F(25, 32), F(27, 32))]


def test_fat_cantor_removed_measure():
    seq = instances.fat_cantor().complement
    for L in range(1, 9):
        n = 2**L - 1
        assert prefix_union_measure(seq, n) == F(1, 2) * (1 - F(1, 2**L))
        assert sum((iv.diam for iv in seq.prefix(n)), F(0)) == prefix_union_measure(seq, n)


@settings(max_examples=300, deadline=None)
@given(st.fractions(0, 1, max_denominator=4096))
def test_fat_cantor_matches_descent_oracle(x):
    D = 8
    seq = instances.fat_cantor().complement
    removed = any(x in iv for iv in seq.prefix(2**D - 1))
    assert removed == (not fat_cantor_member(x, D))


def test_endpoints_never_removed():
    seq = instances.fat_cantor().complement
    assert not any(F(0) in iv or F(1) in iv for iv in seq.prefix(4000))


def test_unit_rationals_start():
    it = instances.unit_rationals()
    assert [next(it) for _ in range(6)] == [0, 1, F(1, 2), F(1, 3), F(2, 3), F(1, 4)]


@pytest.mark.parametrize("eps", [F(1, 4), F(1, 8)])
def test_rationals_cover_small_and_saturated(eps):
    seq = instances.rationals_cover(eps)
    assert seq.saturated
    assert prefix_union_measure(seq, 3000) <= eps
    assert captured_at(F(1, 2), seq, F(1, 100), 20000).is_yes


def test_rationals_cover_rejects_bad_eps():
    with pytest.raises(ValueError):
        instances.rationals_cover(F(3, 2))


def test_full_cover_meets_unit():
    for iv in instances.full_cover().prefix(2000):
        assert iv.b > 0 and iv.a < 1


def test_dyadic_cover_is_fine_everywhere():
    seq = instances.dyadic_cover()
    for x in (F(0), F(1, 3), F(1)):
        assert captured_at(x, seq, F(1, 50), 2000).is_yes


def test_act_demo_requires_positive_k():
    with pytest.raises(ValueError):
        instances.act_demo(0)
    assert instances.act_demo(2).at(0).b == 0


def test_empty_instance():
    assert all(iv.is_empty for iv in instances.empty().prefix(10))
