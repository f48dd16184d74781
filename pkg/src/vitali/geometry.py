"""Exact rational geometry on the real line.

Open intervals, canonical finite unions of closed intervals, and the
handful of measure computations the covering algorithms need.  Every
value is a :class:`fractions.Fraction`; no floating point is used.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Tuple, Union

Rat = Fraction
RatLike = Union[Fraction, int, str]

ZERO = Fraction(0)
ONE = Fraction(1)


class GeometryError(ValueError):
    """Malformed geometric input (bad rational, reversed interval, ...)."""


def rat(value: RatLike) -> Fraction:
    """Coerce ``value`` to a Fraction, accepting ``"p/q"`` strings."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise GeometryError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if "/" in text:
            num, _, den = text.partition("/")
            try:
                p, q = int(num), int(den)
            except ValueError:
                raise GeometryError(f"malformed rational: {value!r}") from None
            if q == 0:
                raise GeometryError(f"zero denominator: {value!r}")
            return Fraction(p, q)
        try:
            return Fraction(int(text))
        except ValueError:
            raise GeometryError(f"malformed rational: {value!r}") from None
    raise GeometryError(f"not a rational: {value!r}")


def rat_str(q: Fraction) -> str:
    """Serialize as ``"p/q"`` (reduced, q >= 1, sign on p)."""
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True, slots=True)
class OIv:
    """The open interval (a, b); empty whenever b <= a."""

    a: Fraction
    b: Fraction

    @classmethod
    def of(cls, a: RatLike, b: RatLike) -> "OIv":
        return cls(rat(a), rat(b))

    @property
    def is_empty(self) -> bool:
        return self.b <= self.a

    @property
    def diam(self) -> Fraction:
        return self.b - self.a if self.b > self.a else ZERO

    def __contains__(self, x: Fraction) -> bool:
        return self.a < x < self.b

    def to_json(self) -> dict:
        return {"a": rat_str(self.a), "b": rat_str(self.b)}

    @classmethod
    def from_json(cls, obj: dict) -> "OIv":
        return cls(rat(obj["a"]), rat(obj["b"]))

    def __str__(self) -> str:
        return f"({self.a}, {self.b})"


EMPTY = OIv(ZERO, ZERO)

Closed = Tuple[Fraction, Fraction]


@dataclass(frozen=True, slots=True)
class FiniteUnion:
    """Sorted, pairwise non-touching closed intervals [l, r] with l <= r."""

    components: Tuple[Closed, ...] = ()

    def __iter__(self):
        return iter(self.components)

    def __len__(self) -> int:
        return len(self.components)

    def __bool__(self) -> bool:
        return bool(self.components)

    def to_json(self) -> list:
        return [[rat_str(l), rat_str(r)] for l, r in self.components]

    @classmethod
    def from_json(cls, obj: Sequence[Sequence[str]]) -> "FiniteUnion":
        return normalize((rat(l), rat(r)) for l, r in obj)


UNIT = FiniteUnion(((ZERO, ONE),))


def normalize(raw: Iterable[Sequence[RatLike]]) -> FiniteUnion:
    """Sort and merge overlapping or touching closed intervals."""
    items = []
    for pair in raw:
        l, r = rat(pair[0]), rat(pair[1])
        if l > r:
            raise GeometryError(f"malformed closed interval [{l}, {r}]")
        items.append((l, r))
    items.sort()
    merged: list[list[Fraction]] = []
    for l, r in items:
        if merged and l <= merged[-1][1]:
            if r > merged[-1][1]:
                merged[-1][1] = r
        else:
            merged.append([l, r])
    return FiniteUnion(tuple((l, r) for l, r in merged))


def measure(A: FiniteUnion) -> Fraction:
    return sum((r - l for l, r in A.components), ZERO)


def subtract_open(A: FiniteUnion, I: OIv) -> FiniteUnion:
    """A minus the open interval I; zero-length leftovers are dropped."""
    if I.is_empty:
        return A
    out: list[Closed] = []
    for l, r in A.components:
        if r <= I.a or l >= I.b:
            out.append((l, r))
            continue
        if l < I.a:
            out.append((l, I.a))
        if I.b < r:
            out.append((I.b, r))
    return FiniteUnion(tuple(out))


def overlap_measure(I: OIv, J: OIv) -> Fraction:
    lo = max(I.a, J.a)
    hi = min(I.b, J.b)
    return hi - lo if hi > lo else ZERO


def intersects(I: OIv, J: OIv) -> bool:
    return overlap_measure(I, J) > 0


def contains(outer: OIv, inner: OIv) -> bool:
    if inner.is_empty:
        return True
    return outer.a <= inner.a and inner.b <= outer.b


def contained_in_union(I: OIv, A: FiniteUnion) -> bool:
    """Closed containment of I in a single component of A."""
    if I.is_empty:
        return True
    comps = A.components
    idx = bisect_right(comps, (I.a, I.b)) - 1
    # the only candidate is the last component starting at or before I.a
    for k in (idx, idx + 1):
        if 0 <= k < len(comps):
            l, r = comps[k]
            if l <= I.a and I.b <= r:
                return True
    return False


def clip(I: OIv, window: OIv) -> OIv:
    a, b = max(I.a, window.a), min(I.b, window.b)
    return OIv(a, b) if b > a else EMPTY


def affine_scale(I: OIv, target: Sequence[RatLike], window: OIv) -> OIv:
    """Map I by x -> a + x*(b - a), then intersect with ``window``."""
    a, b = rat(target[0]), rat(target[1])
    if a >= b:
        raise GeometryError(f"degenerate target [{a}, {b}]")
    if I.is_empty:
        return EMPTY
    span = b - a
    return clip(OIv(a + I.a * span, a + I.b * span), window)


def affine_unscale(y: Fraction, target: Sequence[RatLike]) -> Fraction:
    a, b = rat(target[0]), rat(target[1])
    return (y - a) / (b - a)
