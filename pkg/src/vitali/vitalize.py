"""Vitalization: saturate an interval stream without changing its union.

Output schedule, by diagonals d = 0, 1, 2, ...::

    position start(d)          echo of input position d
    position start(d) + 1 + m  (m = 0..d)  the k-th unit subinterval of
                               input position m, with k = d - m

where ``start(d) = d (d + 3) / 2`` and the k-th unit subinterval of
(a, b) is (a + s (b - a), a + t (b - a)) for the k-th entry (s, t) of the
frozen unit schedule.  Every rational subinterval of a nonempty input
interval is hit, since its relative endpoints are rationals in [0, 1].
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt

from .geometry import EMPTY, OIv
from .represented import UNIT_INTERVALS, IntervalSeq


def diagonal_start(d: int) -> int:
    return d * (d + 3) // 2


def diagonal_of(n: int) -> int:
    """The diagonal d with start(d) <= n < start(d + 1)."""
    d = (isqrt(8 * n + 9) - 3) // 2
    while diagonal_start(d + 1) <= n:
        d += 1
    while diagonal_start(d) > n:
        d -= 1
    return d


def echo_position(m: int) -> int:
    return diagonal_start(m)


def sub_position(m: int, k: int) -> int:
    return diagonal_start(m + k) + 1 + m


def unit_subinterval(iv: OIv, k: int) -> OIv:
    if iv.is_empty:
        return EMPTY
    u = UNIT_INTERVALS.get(k)
    span = iv.b - iv.a
    return OIv(iv.a + u.a * span, iv.a + u.b * span)


def relative_coords(outer: OIv, inner: OIv) -> OIv:
    span = outer.b - outer.a
    return OIv((inner.a - outer.a) / span, (inner.b - outer.a) / span)


def vitalize(I: IntervalSeq) -> IntervalSeq:
    def gen():
        d = 0
        while True:
            yield I.at(d), {"kind": "echo", "parent": d}
            for m in range(d + 1):
                k = d - m
                yield unit_subinterval(I.at(m), k), {"kind": "sub", "parent": m, "unit": k}
            d += 1

    def lookup(n):
        d = diagonal_of(n)
        off = n - diagonal_start(d)
        if off == 0:
            return I.at(d), {"kind": "echo", "parent": d}
        m = off - 1
        return unit_subinterval(I.at(m), d - m), {"kind": "sub", "parent": m, "unit": d - m}

    return IntervalSeq(gen, name=f"vitalize({I.name})", saturated=True, lookup=lookup)


def saturated_filler(a, b) -> IntervalSeq:
    a, b = Fraction(a), Fraction(b)
    if b <= a:
        base = IntervalSeq(lambda: iter(()), name="empty")
    else:
        base = IntervalSeq.of([OIv(a, b)], name=f"({a},{b})")
    seq = vitalize(base)
    seq.name = f"S({a},{b})"
    return seq
