"""Stock instances with analytically known structure."""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterator

from .geometry import ONE, ZERO, OIv, rat
from .represented import IntervalSeq, NegSet, empty_seq, rational_interval_schedule
from .vitalize import vitalize


def full_cover() -> IntervalSeq:
    """All rational intervals meeting [0, 1], in schedule order (compacted)."""

    def gen():
        for pos, (iv, _) in enumerate(rational_interval_schedule()):
            if iv.b > ZERO and iv.a < ONE:
                yield iv, {"kind": "enum", "src": pos}

    return IntervalSeq(gen, name="full_cover")


def fat_cantor_levels() -> Iterator[tuple[int, OIv]]:
    """Removed middles, breadth first: level k removes 2^k middles of length 2^(-2k-2)."""
    # integer numerators over 2^(2k+4); the half-removal is then always 2
    survivors = [(0, 16)]
    k = 0
    while True:
        den = 2 ** (2 * k + 4)
        nxt = []
        for l, r in survivors:
            m = (l + r) // 2
            yield k, OIv(Fraction(m - 2, den), Fraction(m + 2, den))
            nxt.append((4 * l, 4 * (m - 2)))
            nxt.append((4 * (m + 2), 4 * r))
        survivors = nxt
        k += 1


def fat_cantor() -> NegSet:
    def gen():
        for k, iv in fat_cantor_levels():
            yield iv, {"kind": "middle", "level": k}

    return NegSet("unit", IntervalSeq(gen, name="fat_cantor"))


def unit_rationals() -> Iterator[Fraction]:
    """0, 1, then p/q in lowest terms by increasing q, then p."""
    yield ZERO
    yield ONE
    q = 2
    while True:
        for p in range(1, q):
            if gcd(p, q) == 1:
                yield Fraction(p, q)
        q += 1


def rationals_cover_base(eps) -> IntervalSeq:
    eps = rat(eps)
    if not ZERO < eps < ONE:
        raise ValueError("rationals_cover needs 0 < eps < 1")

    def gen():
        for i, r in enumerate(unit_rationals()):
            half = eps / 2 ** (i + 2)
            yield OIv(r - half, r + half), {"kind": "ball", "i": i, "center": f"{r.numerator}/{r.denominator}"}

    return IntervalSeq(gen, name=f"rationals_base({eps})")


def rationals_cover(eps) -> IntervalSeq:
    seq = vitalize(rationals_cover_base(eps))
    seq.name = f"rationals_cover({rat(eps)})"
    return seq


def dyadic_cover() -> IntervalSeq:
    """Balls of radius (2/3) 2^-L around i / 2^L, level by level.

    A Vitali cover of [0, 1] whose residual gaps are rarely filled exactly,
    so elimination runs through many stages.
    """

    def gen():
        L = 1
        while True:
            r = Fraction(2, 3 * 2**L)
            for i in range(2**L + 1):
                c = Fraction(i, 2**L)
                yield OIv(c - r, c + r), {"kind": "ball", "level": L, "i": i}
            L += 1

    return IntervalSeq(gen, name="dyadic_cover")


def act_demo(k: int) -> IntervalSeq:
    from .reductions import star_to_act_K

    if k < 1:
        raise ValueError("act_demo needs k >= 1")
    seq = star_to_act_K(k, fat_cantor())
    seq.name = f"act_demo({k})"
    return seq


def empty() -> IntervalSeq:
    return empty_seq()


GENERATORS = {
    "full_cover": "Vitali cover of [0,1]: every rational interval meeting [0,1]",
    "dyadic_cover": "Vitali cover of [0,1] by dyadic-centred balls",
    "fat_cantor": "closed set of measure 1/2 (negative information)",
    "rationals_cover:EPS": "saturated cover of the rationals of [0,1], union measure <= EPS",
    "act_demo:K": "valid ACT instance built from fat_cantor",
    "empty": "the all-empty stream",
    "gadget:{A:\"{..}\",inner:SPEC}": "C_N x VCT2 -> VCT2 gadget over an inner instance",
}
