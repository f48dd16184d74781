"""The C_N x VCT2 -> VCT2 gadget.

Region n >= 2 sits around x_n = 1 - 1/n.  To its right is one block
[a_n, b_n]; to its left an infinite train of blocks [a_{n,j}, b_{n,j}],
j > n, accumulating at x_n.  Scaled copies of the inner instance go into
every block; everything else in [0, 1] is captured, and blocks whose code
is enumerated out of A are captured as well.

Block geometry::

    a_n, b_n         = x_n + 2^(-2n-2), x_n + 2^(-2n-1)
    a_{n,j}, b_{n,j} = x_n - 2^(-2j),   x_n - 2^(-2j-1)
    eps_n            = 2^(-2n-6)
    tails            (x_n - 2^-j, x_n + 2^-j) for j >= 2n + 2
    copy windows     block widened by eps/2 on both sides

The right block of region n carries code n - 2, left block (n, j) carries
code j - n - 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Optional

from .geometry import EMPTY, ONE, OIv, affine_scale, affine_unscale, rat_str
from .represented import FuelExhausted, IntervalSeq, NatNeg, RealApprox


def pow2(e: int) -> Fraction:
    return Fraction(2) ** e


def x(n: int) -> Fraction:
    return 1 - Fraction(1, n)


def tail_start(n: int) -> int:
    return 2 * n + 2


def eps(n: int) -> Fraction:
    return pow2(-2 * n - 6)


@dataclass(frozen=True)
class Block:
    side: str  # "right" or "left"
    n: int
    j: Optional[int] = None

    @property
    def a(self) -> Fraction:
        if self.side == "right":
            return x(self.n) + pow2(-2 * self.n - 2)
        return x(self.n) - pow2(-2 * self.j)

    @property
    def b(self) -> Fraction:
        if self.side == "right":
            return x(self.n) + pow2(-2 * self.n - 1)
        return x(self.n) - pow2(-2 * self.j - 1)

    @property
    def eps(self) -> Fraction:
        return eps(self.n) if self.side == "right" else eps(self.j)

    @property
    def code(self) -> int:
        return self.n - 2 if self.side == "right" else self.j - self.n - 1

    @property
    def target(self) -> tuple[Fraction, Fraction]:
        return self.a, self.b

    @property
    def window(self) -> OIv:
        return OIv(self.a - self.eps / 2, self.b + self.eps / 2)

    @property
    def padded(self) -> OIv:
        return OIv(self.a - self.eps, self.b + self.eps)

    @property
    def midpoint(self) -> Fraction:
        return (self.a + self.b) / 2

    def tag(self) -> dict:
        out = {"block": self.side, "n": self.n}
        if self.j is not None:
            out["j"] = self.j
        return out


def right(n: int) -> Block:
    return Block("right", n)


def left(n: int, j: int) -> Block:
    if j <= n:
        raise ValueError("left blocks need j > n")
    return Block("left", n, j)


def constraint_suite(n_max: int = 64, j_max: int = 64) -> list[tuple[str, int, int, bool]]:
    """Every ordering inequality the construction relies on, checked exactly."""
    out = []
    for n in range(2, n_max + 1):
        rb = right(n)
        nxt = left(n + 1, n + 2)
        out.append(("x_n < a_n - eps_n", n, 0, x(n) < rb.a - rb.eps))
        out.append(("b_n + eps_n < a_{n+1,n+2} - eps_{n+2}", n, 0, rb.b + rb.eps < nxt.a - nxt.eps))
        out.append(("right window inside padding", n, 0, rb.padded.a < rb.window.a and rb.window.b < rb.padded.b))
        for j in range(n + 1, j_max + 1):
            lb = left(n, j)
            lb1 = left(n, j + 1)
            out.append(("b_{n,j} + eps_j < a_{n,j+1} - eps_{j+1}", n, j, lb.b + lb.eps < lb1.a - lb1.eps))
            out.append(("left window inside padding", n, j, lb.padded.a < lb.window.a and lb.window.b < lb.padded.b))
            out.append(("left block below x_n", n, j, lb.b + lb.eps < x(n)))
            if j >= tail_start(n):
                out.append(("x_n + 2^-j <= a_n", n, j, x(n) + pow2(-j) <= rb.a))
    return out


def block_sequence() -> Iterator[Block]:
    """All blocks, triangularly: round r adds region r+2 and one more left block per region."""
    r = 0
    while True:
        yield right(r + 2)
        for n in range(2, r + 3):
            yield left(n, n + 1 + r - (n - 2))
        r += 1


def gaps_after(block: Block) -> list[tuple[OIv, dict]]:
    """The R-fillers attached to a block (the initial filler is separate)."""
    if block.side == "left":
        nxt = left(block.n, block.j + 1)
        return [(OIv(block.b, nxt.a), {"gap": "left", "n": block.n, "j": block.j})]
    n = block.n
    return [
        (OIv(x(n), block.a), {"gap": "x_n..a_n", "n": n}),
        (OIv(block.b, left(n + 1, n + 2).a), {"gap": "b_n..next", "n": n}),
    ]


def initial_gap() -> OIv:
    return OIv(Fraction(-1, 2), left(2, 3).a)


def dovetail(make: Callable[[int], Iterator], count: Optional[int] = None) -> Iterator:
    """Round r starts component r, then takes one item from every started one."""
    active: list[Iterator] = []
    r = 0
    while True:
        if count is None or r < count:
            active.append(make(r))
        if not active:
            return
        for it in active:
            yield next(it)
        r += 1


def _lazy_list(source: Iterator):
    items: list = []

    def get(i):
        while len(items) <= i:
            items.append(next(source))
        return items[i]

    return get


def _filler(iv: OIv, tag: dict) -> Iterator:
    from .vitalize import saturated_filler

    for sub, origin in saturated_filler(iv.a, iv.b).with_origins():
        yield sub, {**tag, "sat": True, "filler": origin}


def part_P() -> Iterator:
    r = 0
    while True:
        for n in range(2, r + 3):
            t = r - (n - 2)
            if t == 0:
                yield OIv(x(n), 1 + pow2(-n)), {"part": "P", "kind": "cap", "n": n}
            else:
                j = tail_start(n) + t - 1
                yield (
                    OIv(x(n) - pow2(-j), x(n) + pow2(-j)),
                    {"part": "P", "kind": "tail", "n": n, "j": j, "captures": rat_str(x(n))},
                )
        r += 1


def part_I(inner: IntervalSeq) -> Iterator:
    blocks = _lazy_list(block_sequence())
    sat = inner.saturated

    def make(i):
        blk = blocks(i)
        t = 0
        while True:
            iv = affine_scale(inner.at(t), blk.target, blk.window)
            tag = {"part": "I", **blk.tag(), "src": t}
            if sat and not iv.is_empty:
                tag["sat"] = True
            yield iv, tag
            t += 1

    return dovetail(make)


def part_R() -> Iterator:
    blocks = block_sequence()

    def gap_source():
        yield initial_gap(), {"gap": "initial"}
        for blk in blocks:
            yield from gaps_after(blk)

    gaps = _lazy_list(gap_source())

    def make(i):
        iv, tag = gaps(i)
        return _filler(iv, {"part": "R", **tag})

    return dovetail(make)


def code_blocks(c: int) -> Iterator[Block]:
    yield right(c + 2)
    n = 2
    while True:
        yield left(n, n + 1 + c)
        n += 1


def part_A(A: NatNeg) -> Iterator:
    active: list[Iterator] = []
    seen: set[int] = set()
    s = 0
    while True:
        c = A.at(s)
        s += 1
        if c is not None and c not in seen:
            seen.add(c)
            blocks = _lazy_list(code_blocks(c))

            def make(i, blocks=blocks, c=c):
                blk = blocks(i)
                return _filler(blk.padded, {"part": "A", "code": c, **blk.tag()})

            active.append(dovetail(make))
        if not active:
            yield EMPTY, {"part": "A", "idle": True}
            continue
        for it in active:
            yield next(it)


def gadget(A: NatNeg, inner: IntervalSeq) -> IntervalSeq:
    def gen():
        parts = [part_P(), part_I(inner), part_R(), part_A(A)]
        while True:
            for p in parts:
                yield next(p)

    return IntervalSeq(gen, name=f"gadget({A.name},{inner.name})")


def zone_of(origin: dict) -> OIv:
    """The designated zone of a gadget emission, recomputed from its tag."""
    part = origin["part"]
    if part == "P":
        n = origin["n"]
        if origin["kind"] == "cap":
            return OIv(x(n), 1 + pow2(-n))
        j = origin["j"]
        return OIv(x(n) - pow2(-j), x(n) + pow2(-j))
    if part in ("I", "A"):
        if origin.get("idle"):
            return EMPTY
        blk = right(origin["n"]) if origin["block"] == "right" else left(origin["n"], origin["j"])
        return blk.window if part == "I" else blk.padded
    gap = origin["gap"]
    if gap == "initial":
        return initial_gap()
    n = origin["n"]
    if gap == "left":
        return OIv(left(n, origin["j"]).b, left(n, origin["j"] + 1).a)
    if gap == "x_n..a_n":
        return OIv(x(n), right(n).a)
    return OIv(right(n).b, left(n + 1, n + 2).a)


def blocks_meeting(lo: Fraction, hi: Fraction) -> Optional[list[Block]]:
    """Closed blocks meeting [lo, hi]; None when infinitely many do."""
    if lo >= ONE:
        return []
    if hi >= ONE:
        return None
    found = []
    n = 2
    while left(n, n + 1).a <= hi:
        xn = x(n)
        if lo < xn <= hi:
            return None
        if hi < xn:
            j = n + 1
            while left(n, j).a <= hi:
                if left(n, j).b >= lo:
                    found.append(left(n, j))
                j += 1
        rb = right(n)
        if rb.a <= hi and rb.b >= lo:
            found.append(rb)
        n += 1
    return found


def decode(y: RealApprox, max_precision: int = 256) -> tuple[Block, RealApprox]:
    """Locate the unique block an uncaptured gadget point lies in."""
    for k in range(max_precision + 1):
        if y.exact is not None:
            lo = hi = y.exact
        else:
            q = y.refine(k)
            lo, hi = q - pow2(-k), q + pow2(-k)
        found = blocks_meeting(lo, hi)
        if found is not None and len(found) == 1:
            blk = found[0]
            return blk, _rescale(y, blk)
        if y.exact is not None:
            raise FuelExhausted(f"{y.exact} lies in no block", fuel=k)
    raise FuelExhausted(f"no block isolated at precision {max_precision}", fuel=max_precision)


def _rescale(y: RealApprox, blk: Block) -> RealApprox:
    span = blk.b - blk.a
    # span is a power of two, so refining y by log2(1/span) extra bits suffices
    shift = (span.denominator).bit_length() - 1
    if y.exact is not None:
        val = affine_unscale(y.exact, blk.target)
        return RealApprox(lambda k: val, exact=val)
    return RealApprox(lambda k: affine_unscale(y.refine(k + shift), blk.target))
