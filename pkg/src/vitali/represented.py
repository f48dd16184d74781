"""Represented spaces as deterministic, position-indexed lazy streams.

An :class:`IntervalSeq` is a total sequence of open rational intervals
(finite families are padded with empty intervals).  Closed sets are given
by negative information (:class:`NegSet`), points by fast Cauchy
sequences (:class:`RealApprox`), and subsets of the naturals by an
enumeration of their complement (:class:`NatNeg`).
"""

from __future__ import annotations

import enum
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable, Iterator, Optional

from .geometry import EMPTY, ONE, ZERO, OIv, normalize, measure, rat, rat_str

Origin = Optional[dict]


class FuelExhausted(RuntimeError):
    """A bounded search ran out of budget before reaching a decision."""

    def __init__(self, message: str, fuel: int = 0):
        super().__init__(message)
        self.fuel = fuel


class IntervalSeq:
    """A replay-deterministic stream n -> OIv with optional origin tags.

    ``factory`` returns a fresh iterator yielding either ``OIv`` or
    ``(OIv, origin)`` pairs.  It is consumed lazily and memoized; once it
    is exhausted every later position is the empty interval.

    An optional ``lookup(n) -> (OIv, origin)`` must agree with the factory;
    it serves positions beyond the memoized prefix without generating them.
    """

    def __init__(
        self,
        factory: Callable[[], Iterator[Any]],
        *,
        name: str = "",
        saturated: bool = False,
        lookup: Optional[Callable[[int], tuple[OIv, Origin]]] = None,
    ):
        self._factory = factory
        self._lookup = lookup
        self.name = name
        # every point of the union is captured (used by one-sided validators)
        self.saturated = saturated
        self._ivs: list[OIv] = []
        self._origins: list[Origin] = []
        self._it: Optional[Iterator[Any]] = None
        self._done = False
        self._lock = threading.RLock()

    @classmethod
    def of(cls, intervals: Iterable[Any], *, name: str = "finite", saturated: bool = False) -> "IntervalSeq":
        items = [iv if isinstance(iv, OIv) else OIv.of(*iv) for iv in intervals]
        return cls(lambda: iter(items), name=name, saturated=saturated)

    def _extend(self, n: int) -> None:
        with self._lock:
            if self._it is None and not self._done:
                self._it = iter(self._factory())
            while len(self._ivs) <= n and not self._done:
                try:
                    item = next(self._it)
                except StopIteration:
                    self._done = True
                    self._it = None
                    break
                if isinstance(item, OIv):
                    self._ivs.append(item)
                    self._origins.append(None)
                else:
                    iv, origin = item
                    self._ivs.append(iv)
                    self._origins.append(origin)

    def at(self, n: int) -> OIv:
        if n >= len(self._ivs) and self._lookup is not None:
            return self._lookup(n)[0]
        if n >= len(self._ivs):
            self._extend(n)
            if n >= len(self._ivs):
                return EMPTY
        return self._ivs[n]

    def origin(self, n: int) -> Origin:
        if n >= len(self._ivs) and self._lookup is not None:
            return self._lookup(n)[1]
        if n >= len(self._ivs):
            self._extend(n)
            if n >= len(self._ivs):
                return {"kind": "pad"}
        return self._origins[n]

    def prefix(self, n: int) -> list[OIv]:
        self._extend(n - 1)
        out = self._ivs[:n]
        return out + [EMPTY] * (n - len(out))

    def entries(self, n: int) -> list[tuple[int, OIv, Origin]]:
        return [(i, self.at(i), self.origin(i)) for i in range(n)]

    def __iter__(self) -> Iterator[OIv]:
        n = 0
        while True:
            yield self.at(n)
            n += 1

    def with_origins(self) -> Iterator[tuple[OIv, Origin]]:
        n = 0
        while True:
            yield self.at(n), self.origin(n)
            n += 1

    def truncate(self, length: int) -> "IntervalSeq":
        """The first ``length`` positions, padded with empties afterwards."""
        return IntervalSeq(
            lambda: ((self.at(i), self.origin(i)) for i in range(length)),
            name=f"{self.name}[:{length}]",
        )

    def __repr__(self) -> str:
        return f"IntervalSeq({self.name!r})"


EMPTY_SEQ_NAME = "empty"


def empty_seq() -> IntervalSeq:
    return IntervalSeq(lambda: iter(()), name=EMPTY_SEQ_NAME, saturated=True)


@dataclass(frozen=True)
class NegSet:
    """Closed set ``ambient minus union(complement)``; ambient is unit or line."""

    ambient: str
    complement: IntervalSeq

    def __post_init__(self):
        if self.ambient not in ("unit", "line"):
            raise ValueError(f"unknown ambient space {self.ambient!r}")


class RealApprox:
    """A point x given by rationals q_k with |x - q_k| <= 2^-k.

    ``exact`` is set when x is known to be a specific rational, which lets
    membership tests be decided exactly.
    """

    def __init__(self, fn: Callable[[int], Fraction], exact: Optional[Fraction] = None):
        self._fn = fn
        self.exact = exact
        self._cache: dict[int, Fraction] = {}

    def refine(self, k: int) -> Fraction:
        if k not in self._cache:
            self._cache[k] = rat(self._fn(k))
        return self._cache[k]

    def __repr__(self) -> str:
        if self.exact is not None:
            return f"RealApprox(exact={self.exact})"
        return f"RealApprox(q_0={self.refine(0)})"


def real_of_rat(q) -> RealApprox:
    q = rat(q)
    return RealApprox(lambda k: q, exact=q)


def refine(x: RealApprox, k: int) -> Fraction:
    return x.refine(k)


class NatNeg:
    """A subset of the naturals given by enumerating its complement.

    The factory yields naturals or ``None`` (no information at this step);
    a finite factory is padded with ``None``.
    """

    def __init__(self, factory: Callable[[], Iterator[Optional[int]]], *, name: str = ""):
        self._factory = factory
        self.name = name
        self._items: list[Optional[int]] = []
        self._it: Optional[Iterator[Optional[int]]] = None
        self._done = False
        self._lock = threading.Lock()

    @classmethod
    def from_members(cls, members: Iterable[int]) -> "NatNeg":
        """The finite set ``members``, with complement enumerated in order."""
        keep = frozenset(members)

        def gen():
            n = 0
            while True:
                if n not in keep:
                    yield n
                else:
                    yield None
                n += 1

        return cls(gen, name="{" + ",".join(map(str, sorted(keep))) + "}")

    def at(self, s: int) -> Optional[int]:
        with self._lock:
            if self._it is None and not self._done:
                self._it = iter(self._factory())
            while len(self._items) <= s and not self._done:
                try:
                    self._items.append(next(self._it))
                except StopIteration:
                    self._done = True
            return self._items[s] if s < len(self._items) else None


class VerdictKind(enum.Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Verdict:
    kind: VerdictKind
    fuel: int = 0
    reason: str = ""

    @classmethod
    def yes(cls, reason: str = "", fuel: int = 0) -> "Verdict":
        return cls(VerdictKind.YES, fuel, reason)

    @classmethod
    def no(cls, reason: str = "", fuel: int = 0) -> "Verdict":
        return cls(VerdictKind.NO, fuel, reason)

    @classmethod
    def unknown(cls, fuel: int, reason: str = "") -> "Verdict":
        return cls(VerdictKind.UNKNOWN, fuel, reason)

    @property
    def is_yes(self) -> bool:
        return self.kind is VerdictKind.YES

    @property
    def is_no(self) -> bool:
        return self.kind is VerdictKind.NO

    def to_json(self) -> dict:
        out = {"verdict": self.kind.value, "fuel": self.fuel}
        if self.reason:
            out["reason"] = self.reason
        return out


# ---------------------------------------------------------------------------
# Enumeration of rational intervals
#
# Height h covers every tuple (p1, q1, p2, q2) with q >= 1 and
# max(|p1|, q1, |p2|, q2) == h.  Heights are visited in increasing order;
# within a height tuples are ordered lexicographically by (q1, p1, q2, p2)
# and (p1/q1, p2/q2) is emitted iff p1/q1 < p2/q2.  Non-reduced tuples are
# not skipped, so intervals repeat.  This order is frozen.


def _height_tuples(h: int) -> Iterator[tuple[int, int, int, int]]:
    for q1 in range(1, h + 1):
        for p1 in range(-h, h + 1):
            top1 = max(abs(p1), q1)
            for q2 in range(1, h + 1):
                if max(top1, q2) == h:
                    p2s: Iterable[int] = range(-h, h + 1)
                else:
                    p2s = (-h, h)
                for p2 in p2s:
                    if p1 * q2 < p2 * q1:
                        yield p1, q1, p2, q2


def rational_interval_schedule() -> Iterator[tuple[OIv, dict]]:
    h = 1
    while True:
        for p1, q1, p2, q2 in _height_tuples(h):
            yield OIv(Fraction(p1, q1), Fraction(p2, q2)), {"kind": "enum", "h": h}
        h += 1


def enum_rational_intervals() -> IntervalSeq:
    return IntervalSeq(rational_interval_schedule, name="rational_intervals")


def schedule_bound(B: int) -> int:
    """Number of positions emitted at heights <= B."""
    return sum(1 for h in range(1, B + 1) for _ in _height_tuples(h))


# The same schedule restricted to subintervals of [0, 1] (0 <= p <= q);
# there the height is max(q1, q2).


def _unit_height_tuples(h: int) -> Iterator[tuple[int, int, int, int]]:
    for q1 in range(1, h + 1):
        for p1 in range(0, q1 + 1):
            q2s = range(1, h + 1) if q1 == h else (h,)
            for q2 in q2s:
                for p2 in range(0, q2 + 1):
                    if p1 * q2 < p2 * q1:
                        yield p1, q1, p2, q2


def unit_interval_schedule() -> Iterator[OIv]:
    h = 1
    while True:
        for p1, q1, p2, q2 in _unit_height_tuples(h):
            yield OIv(Fraction(p1, q1), Fraction(p2, q2))
        h += 1


class _UnitIntervals:
    """Shared memo of the unit schedule; ``get(k)`` is the k-th (s, t)."""

    def __init__(self):
        self._items: list[OIv] = []
        self._it = unit_interval_schedule()
        self._lock = threading.Lock()

    def get(self, k: int) -> OIv:
        if k >= len(self._items):
            with self._lock:
                while len(self._items) <= k:
                    self._items.append(next(self._it))
        return self._items[k]

    def index_of(self, iv: OIv, limit: int = 10**6) -> int:
        for k in range(limit):
            if self.get(k) == iv:
                return k
        raise LookupError(f"{iv} not among the first {limit} unit intervals")


UNIT_INTERVALS = _UnitIntervals()


# ---------------------------------------------------------------------------
# Stream operations


def captured_at(x, I: IntervalSeq, eps, fuel: int) -> Verdict:
    """Yes if some position < fuel has diameter < eps and contains x."""
    x, eps = rat(x), rat(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    for n in range(fuel):
        iv = I.at(n)
        if iv.a < x < iv.b and iv.b - iv.a < eps:
            return Verdict.yes(f"position {n}: {iv}", fuel=n + 1)
    return Verdict.unknown(fuel)


def filter_diam(I: IntervalSeq, eps) -> IntervalSeq:
    eps = rat(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")

    def gen():
        for iv, origin in I.with_origins():
            yield (iv if iv.diam < eps and not iv.is_empty else EMPTY), origin

    return IntervalSeq(gen, name=f"filter_diam({I.name},{eps})", saturated=False)


def union_measure(intervals: Iterable[OIv]) -> Fraction:
    """Measure of a finite union of open intervals (sweep over endpoints)."""
    return measure(normalize((iv.a, iv.b) for iv in intervals if not iv.is_empty))


def prefix_union_measure(I: IntervalSeq, n: int) -> Fraction:
    return union_measure(I.prefix(n)) if n > 0 else ZERO


def point_in(x: RealApprox, iv: OIv, max_precision: int = 64) -> Optional[bool]:
    """Decide x in iv by refinement; None if undecided at max_precision."""
    if iv.is_empty:
        return False
    if x.exact is not None:
        return iv.a < x.exact < iv.b
    for k in range(max_precision + 1):
        q = x.refine(k)
        err = Fraction(1, 2**k)
        if iv.a < q - err and q + err < iv.b:
            return True
        if q + err <= iv.a or q - err >= iv.b:
            return False
    return None


def in_unit(x: RealApprox, max_precision: int = 64) -> Optional[bool]:
    if x.exact is not None:
        return ZERO <= x.exact <= ONE
    for k in range(max_precision + 1):
        q = x.refine(k)
        err = Fraction(1, 2**k)
        if ZERO <= q - err and q + err <= ONE:
            return True
        if q + err < ZERO or q - err > ONE:
            return False
    return None


# ---------------------------------------------------------------------------
# JSONL stream records


def stream_record(n: int, iv: OIv, origin: Origin) -> dict:
    rec = {"n": n, "a": rat_str(iv.a), "b": rat_str(iv.b)}
    rec["origin"] = origin
    return rec


def seq_from_records(records: Iterable[dict], *, name: str = "file") -> IntervalSeq:
    items = sorted(records, key=lambda r: r["n"])
    for expected, rec in enumerate(items):
        if rec["n"] != expected:
            raise ValueError(f"stream records are not contiguous at n={expected}")
    pairs = [(OIv(rat(r["a"]), rat(r["b"])), r.get("origin")) for r in items]
    return IntervalSeq(lambda: iter(pairs), name=name)
