from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_measure, brute_normalize, critical_midpoints, in_closed_union
from vitali.geometry import (
    EMPTY,
    UNIT,
    FiniteUnion,
    GeometryError,
    OIv,
    affine_scale,
    affine_unscale,
    clip,
    contained_in_union,
    contains,
    measure,
    normalize,
    overlap_measure,
    rat,
    rat_str,
    subtract_open,
)

small_rat = st.fractions(min_value=-2, max_value=2, max_denominator=12)


@st.composite
def closed_list(draw, max_size=6):
    out = []
    for _ in range(draw(st.integers(0, max_size))):
        l, r = sorted((draw(small_rat), draw(small_rat)))
        out.append((l, r))
    return out


@st.composite
def open_iv(draw):
    return OIv(draw(small_rat), draw(small_rat))


def test_rat_parsing():
    assert rat("3/4") == F(3, 4)
    assert rat("-2") == F(-2)
    assert rat(F(1, 3)) == F(1, 3)
    assert rat_str(F(2)) == "2/1"
    for bad in ("1/x", "1/0", "", "0.5.5"):
        with pytest.raises(GeometryError):
            rat(bad)


def test_open_interval_basics():
    iv = OIv.of("1/4", "1/2")
    assert iv.diam == F(1, 4)
    assert F(1, 3) in iv and F(1, 4) not in iv
    assert OIv(F(1), F(1)).is_empty and OIv(F(2), F(1)).is_empty
    assert OIv.from_json(iv.to_json()) == iv


def test_normalize_examples():
    assert normalize([(0, F(1, 2)), (F(1, 2), 1)]) == UNIT
    assert normalize([(F(1, 2), 1), (0, F(1, 4))]).components == ((0, F(1, 4)), (F(1, 2), 1))
    with pytest.raises(GeometryError):
        normalize([(1, 0)])


def test_subtract_open_examples():
    assert subtract_open(UNIT, OIv(F(1, 4), F(1, 2))).components == ((0, F(1, 4)), (F(1, 2), 1))
    two = subtract_open(subtract_open(UNIT, OIv(F(-1, 4), F(1, 2))), OIv(F(1, 2), F(5, 4)))
    assert measure(two) == 0
    assert subtract_open(UNIT, EMPTY) == UNIT


def test_containment_and_clip():
    assert contains(OIv(F(0), F(1)), OIv(F(0), F(1)))
    assert contains(OIv(F(0), F(1)), EMPTY)
    A = normalize([(0, F(1, 4)), (F(1, 2), 1)])
    assert contained_in_union(OIv(F(1, 2), F(3, 4)), A)
    assert not contained_in_union(OIv(F(1, 8), F(5, 8)), A)
    assert clip(OIv(F(-1), F(1, 2)), OIv(F(0), F(1))) == OIv(F(0), F(1, 2))
    assert clip(OIv(F(2), F(3)), OIv(F(0), F(1))).is_empty


def test_affine_roundtrip():
    target = (F(1, 2), F(3, 4))
    iv = affine_scale(OIv(F(1, 4), F(1, 2)), target, OIv(F(0), F(1)))
    assert iv == OIv(F(9, 16), F(5, 8))
    assert affine_unscale(F(5, 8), target) == F(1, 2)
    with pytest.raises(GeometryError):
        affine_scale(iv, (F(1), F(1)), OIv(F(0), F(1)))


@settings(max_examples=300, deadline=None)
@given(closed_list())
def test_normalize_matches_brute(raw):
    A = normalize(raw)
    assert list(A.components) == brute_normalize(raw)
    assert measure(A) == brute_measure(raw)


@settings(max_examples=300, deadline=None)
@given(closed_list(), open_iv())
def test_subtract_open_pointwise(raw, iv):
    A = normalize(raw)
    R = subtract_open(A, iv)
    assert measure(R) == brute_measure(raw) - brute_measure(
        [(max(l, iv.a), min(r, iv.b)) for l, r in A if min(r, iv.b) > max(l, iv.a)]
    )
    ends = [p for lr in raw for p in lr] + ([iv.a, iv.b] if not iv.is_empty else [])
    for m in critical_midpoints(ends):
        assert in_closed_union(m, list(R)) == (in_closed_union(m, raw) and m not in iv)
    for l, r in R:
        assert contained_in_union(OIv(l, r), A) or l == r


@settings(max_examples=200, deadline=None)
@given(closed_list())
def test_measure_subadditive(raw):
    assert measure(normalize(raw)) <= sum((r - l for l, r in raw), F(0))


@settings(max_examples=200, deadline=None)
@given(open_iv(), open_iv())
def test_overlap_symmetric_and_bounded(i, j):
    m = overlap_measure(i, j)
    assert m == overlap_measure(j, i)
    assert 0 <= m <= min(max(i.diam, 0), max(j.diam, 0))


def test_finite_union_json_roundtrip():
    A = normalize([(0, F(1, 3)), (F(1, 2), F(2, 3))])
    assert FiniteUnion.from_json(A.to_json()) == A
