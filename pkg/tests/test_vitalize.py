from fractions import Fraction as F
from itertools import product

import pytest

from vitali.geometry import EMPTY, OIv, contains
from vitali.instances import rationals_cover_base
from vitali.represented import UNIT_INTERVALS, IntervalSeq, captured_at
from vitali.vitalize import (
    echo_position,
    relative_coords,
    saturated_filler,
    sub_position,
    unit_subinterval,
    vitalize,
)


def test_schedule_positions_are_a_bijection():
    seen = {}
    for m, k in product(range(40), range(40)):
        seen.setdefault(sub_position(m, k), []).append(("sub", m, k))
    for d in range(80):
        seen.setdefault(echo_position(d), []).append(("echo", d))
    assert all(len(v) == 1 for v in seen.values())
    assert set(range(200)) <= set(seen)


def test_contains_subinterval_eventually():
    out = vitalize(IntervalSeq.of([OIv(F(0), F(1, 2))]))
    target = OIv(F(1, 8), F(1, 4))
    k = UNIT_INTERVALS.index_of(relative_coords(OIv(F(0), F(1, 2)), target))
    assert out.at(sub_position(0, k)) == target


def test_never_leaves_input():
    out = vitalize(IntervalSeq.of([OIv(F(0), F(1, 2))]))
    assert OIv(F(1, 4), F(3, 4)) not in out.prefix(5000)


def test_empty_input_is_all_empty():
    assert all(iv.is_empty for iv in vitalize(IntervalSeq.of([])).prefix(500))


def test_saturated_filler_is_vitalize_of_one_interval():
    a, b = F(0), F(1, 2)
    assert saturated_filler(a, b).prefix(400) == vitalize(IntervalSeq.of([OIv(a, b)])).prefix(400)
    assert all(iv.is_empty for iv in saturated_filler(F(1, 2), F(1, 2)).prefix(200))
    for iv in saturated_filler(F(1, 3), F(2, 3)).prefix(2000):
        assert iv.is_empty or contains(OIv(F(1, 3), F(2, 3)), iv)
    assert saturated_filler(F(0), F(1)).saturated


def test_echoes_inputs_verbatim():
    base = rationals_cover_base(F(1, 4))
    out = vitalize(base)
    for d in range(30):
        assert out.at(echo_position(d)) == base.at(d)
        assert out.origin(echo_position(d)) == {"kind": "echo", "parent": d}


def test_output_is_saturated_at_sample_points():
    # the capturing interval sits at a position computable from the schedule
    base = OIv(F(0), F(1))
    out = vitalize(IntervalSeq.of([base]))
    for x in (F(1, 3), F(1, 2), F(5, 7)):
        k = next(k for k in range(10**4) if x in UNIT_INTERVALS.get(k) and UNIT_INTERVALS.get(k).diam < F(1, 8))
        p = sub_position(0, k)
        assert captured_at(x, out, F(1, 8), p + 1).is_yes


@pytest.mark.parametrize("den", [4, 6])
def test_idempotent_up_to_sets_on_grid(den):
    inputs = [OIv(F(0), F(1, 2)), OIv(F(1, 3), F(2, 3)), EMPTY, OIv(F(3, 4), F(1))]
    once = vitalize(IntervalSeq.of(inputs))
    twice = vitalize(once)
    pts = [F(p, den) for p in range(den + 1)]
    for a, b in product(pts, pts):
        J = OIv(a, b)
        if J.is_empty:
            continue
        homes = [m for m, iv in enumerate(inputs) if not iv.is_empty and contains(iv, J)]
        if homes:
            m = homes[0]
            k = UNIT_INTERVALS.index_of(relative_coords(inputs[m], J))
            p = sub_position(m, k)
            assert once.at(p) == J
            # position p of `once` is echoed verbatim by `twice`
            assert twice.at(echo_position(p)) == J
        else:
            assert J not in once.prefix(3000)
            assert J not in twice.prefix(3000)


def test_every_twice_output_inside_an_input():
    inputs = [OIv(F(0), F(1, 2)), OIv(F(1, 3), F(2, 3))]
    twice = vitalize(vitalize(IntervalSeq.of(inputs)))
    for iv in twice.prefix(5000):
        assert iv.is_empty or any(contains(i, iv) for i in inputs)


def test_unit_subinterval_of_empty():
    assert unit_subinterval(EMPTY, 3) == EMPTY


def test_random_access_agrees_with_generation():
    base = rationals_cover_base(F(1, 4))
    sequential = vitalize(base).entries(3000)
    direct = vitalize(base)
    for n in (2999, 0, 17, 1500, 2998):
        assert (n, direct.at(n), direct.origin(n)) == sequential[n]
    assert direct.entries(3000) == sequential
