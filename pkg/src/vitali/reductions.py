"""Strong Weihrauch reduction witnesses and their verification harness.

A witness is a pair (K, H): K transforms an instance of the source problem
into an instance of the target problem, H maps any target solution back
to a source solution without seeing the original instance.  Positive
choice and C_N are not computable, so the harness injects a known-valid
target solution and checks H's output with fuel-bounded, one-sided
validators.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor
from typing import Any, Callable, Iterator, Optional

from . import gadget as G
from .geometry import EMPTY, ONE, ZERO, OIv, clip, contains, overlap_measure, rat_str
from .represented import (
    FuelExhausted,
    IntervalSeq,
    NatNeg,
    NegSet,
    RealApprox,
    Verdict,
    in_unit,
    point_in,
)
from .vitalize import vitalize

# ---------------------------------------------------------------------------
# Problems and validators


def _in_unit_verdict(x: RealApprox) -> Optional[Verdict]:
    inside = in_unit(x)
    if inside is False:
        return Verdict.no("point outside [0,1]")
    return None


def _refute_cover(x: RealApprox, seq: IntervalSeq, fuel: int, *, captured_only: bool = False) -> Verdict:
    """No if x is found in an enumerated interval (or, with ``captured_only``,
    in one that certifies capture); otherwise Unknown."""
    if not captured_only and x.exact is not None:
        p = x.exact
        for n, iv in zip(range(fuel), seq):
            if iv.a < p < iv.b:
                return Verdict.no(f"covered by position {n}: {iv}", fuel=n + 1)
        return Verdict.unknown(fuel)
    for n in range(fuel):
        iv = seq.at(n)
        origin = (seq.origin(n) or {}) if captured_only else {}
        if captured_only and x.exact is not None and origin.get("captures") == rat_str(x.exact):
            return Verdict.no(f"captured: position {n} belongs to a shrinking family around x", fuel=n + 1)
        if iv.is_empty:
            continue
        if captured_only and not (seq.saturated or origin.get("sat")):
            continue
        if point_in(x, iv):
            kind = "captured by" if captured_only else "covered by"
            return Verdict.no(f"{kind} position {n}: {iv}", fuel=n + 1)
    return Verdict.unknown(fuel)


def validate_pc01(A: NegSet, x: RealApprox, fuel: int) -> Verdict:
    return _in_unit_verdict(x) or _refute_cover(x, A.complement, fuel)


def validate_pcr(A: NegSet, x: RealApprox, fuel: int) -> Verdict:
    return _refute_cover(x, A.complement, fuel)


def validate_vct1(I: IntervalSeq, x: RealApprox, fuel: int) -> Verdict:
    return _in_unit_verdict(x) or _refute_cover(x, I, fuel)


def validate_vct2(I: IntervalSeq, x: RealApprox, fuel: int) -> Verdict:
    # capture is only certified by membership in a saturated family
    return _in_unit_verdict(x) or _refute_cover(x, I, fuel, captured_only=True)


def validate_cn(A: NatNeg, n: int, fuel: int) -> Verdict:
    if n < 0:
        return Verdict.no("negative number")
    for s in range(fuel):
        if A.at(s) == n:
            return Verdict.no(f"{n} enumerated out of A at step {s}", fuel=s + 1)
    return Verdict.unknown(fuel)


def validate_cn_vct2(instance, solution, fuel: int) -> Verdict:
    (A, I), (n, x) = instance, solution
    left = validate_cn(A, n, fuel)
    if left.is_no:
        return left
    right = validate_vct2(I, x, fuel)
    if right.is_no:
        return right
    return Verdict.unknown(fuel)


def validate_act(I: IntervalSeq, x: RealApprox, fuel: int) -> Verdict:
    return _in_unit_verdict(x) or _refute_cover(x, I, fuel)


def validate_star(instance, x: RealApprox, fuel: int) -> Verdict:
    _, A = instance
    return validate_pc01(A, x, fuel)


@dataclass(frozen=True)
class Problem:
    name: str
    validate: Callable[[Any, Any, int], Verdict]


PC01 = Problem("PC_[0,1]", validate_pc01)
PCR = Problem("PC_R", validate_pcr)
VCT1 = Problem("VCT1", validate_vct1)
VCT2 = Problem("VCT2", validate_vct2)
CN_VCT2 = Problem("C_N x VCT2", validate_cn_vct2)
ACT = Problem("ACT", validate_act)
STAR_WWKL = Problem("*-WWKL", validate_star)


# ---------------------------------------------------------------------------
# VCT1 <-> PC_[0,1]


def pc01_to_vct1(A: NegSet) -> IntervalSeq:
    return vitalize(A.complement)


def vct1_to_pc01(I: IntervalSeq) -> NegSet:
    return NegSet("unit", I)


# ---------------------------------------------------------------------------
# VCT2 -> PC_R


def block_window(n: int) -> OIv:
    """Where copies for block [2n, 2n+1] may land; the overhang lies in gaps."""
    return OIv(2 * n - Fraction(1, 2), 2 * n + Fraction(3, 2))


def vct2_to_pcr_K(I: IntervalSeq) -> NegSet:
    def rays():
        m = 1
        while True:
            yield OIv(Fraction(-m), ZERO), {"part": "ray", "m": m}
            m += 1

    def gaps():
        n = 0
        while True:
            yield OIv(Fraction(2 * n + 1), Fraction(2 * n + 2)), {"part": "gap", "n": n}
            n += 1

    def block(n):
        limit = Fraction(1, 2**n)
        t = 0
        while True:
            iv = I.at(t)
            tag = {"part": "block", "n": n, "src": t}
            if iv.is_empty or iv.diam >= limit:
                yield EMPTY, tag
            else:
                yield clip(OIv(iv.a + 2 * n, iv.b + 2 * n), block_window(n)), tag
            t += 1

    def gen():
        parts = [rays(), gaps(), G.dovetail(block)]
        while True:
            for p in parts:
                yield next(p)

    return NegSet("line", IntervalSeq(gen, name=f"vct2_to_pcr({I.name})"))


def vct2_to_pcr_H(x: RealApprox) -> RealApprox:
    if x.exact is not None:
        lo = hi = x.exact
    else:
        q = x.refine(2)
        lo, hi = q - Fraction(1, 4), q + Fraction(1, 4)
    blocks = [n for n in range(max(0, ceil((lo - 1) / 2)), floor(hi / 2) + 1) if 2 * n <= hi and lo <= 2 * n + 1]
    if len(blocks) != 1:
        raise FuelExhausted(f"point does not isolate a block (candidates {blocks})", fuel=2)
    shift = 2 * blocks[0]
    if x.exact is not None:
        val = x.exact - shift
        return RealApprox(lambda k: val, exact=val)
    return RealApprox(lambda k: x.refine(k) - shift)


# ---------------------------------------------------------------------------
# C_N x VCT2 -> VCT2


def cn_vct2_K(A: NatNeg, I: IntervalSeq) -> IntervalSeq:
    return G.gadget(A, I)


def cn_vct2_H(y: RealApprox, max_precision: int = 256) -> tuple[int, RealApprox]:
    blk, point = G.decode(y, max_precision)
    return blk.code, point


# ---------------------------------------------------------------------------
# ACT <-> *-WWKL


def overlap_schedule() -> Iterator[tuple[int, int, int]]:
    """All (i, j, k) with i < j, ordered by t = j + k, then j, then i."""
    t = 1
    while True:
        for j in range(1, t + 1):
            k = t - j
            for i in range(j):
                yield i, j, k
        t += 1


def find_overlap(I: IntervalSeq, fuel: int = 10**6) -> tuple[int, int, int]:
    for step, (i, j, k) in enumerate(overlap_schedule()):
        if step >= fuel:
            break
        if overlap_measure(I.at(i), I.at(j)) > Fraction(1, 2**k):
            return i, j, k
    raise FuelExhausted("no overlapping pair found", fuel=fuel)


def act_to_star_K(I: IntervalSeq, fuel: int = 10**6) -> tuple[int, NegSet]:
    _, _, k = find_overlap(I, fuel)
    return k, NegSet("unit", I)


class _OpenCover:
    """Exact union of open intervals as sorted, pairwise disjoint components.

    Touching components stay separate: their shared endpoint is uncovered.
    """

    def __init__(self):
        self.starts: list[Fraction] = []
        self.ends: list[Fraction] = []
        self.measure = ZERO

    def add(self, iv: OIv) -> None:
        if iv.is_empty:
            return
        lo = bisect_right(self.ends, iv.a)
        hi = bisect_left(self.starts, iv.b)
        a, b = iv.a, iv.b
        if lo < hi:
            a = min(a, self.starts[lo])
            b = max(b, self.ends[hi - 1])
        removed = sum((self.ends[i] - self.starts[i] for i in range(lo, hi)), ZERO)
        self.measure += (b - a) - removed
        self.starts[lo:hi] = [a]
        self.ends[lo:hi] = [b]

    def uncovered(self, lo, hi, lo_closed, hi_closed):
        """Maximal uncovered pieces of the interval from lo to hi (ends as flagged)."""
        pieces = []
        cur, cur_closed = lo, lo_closed
        first = bisect_right(self.ends, lo)
        for idx in range(first, len(self.starts)):
            u, v = self.starts[idx], self.ends[idx]
            if u >= hi:
                break
            if cur < u or (cur == u and cur_closed):
                pieces.append((cur, u, cur_closed, True))
            if v > cur or (v == cur and not cur_closed):
                cur, cur_closed = v, True
        if cur < hi or (cur == hi and cur_closed and hi_closed):
            pieces.append((cur, hi, cur_closed, hi_closed))
        return pieces


def slot_budget(k: int, slot: int) -> Fraction:
    return Fraction(1, 2 ** (k + 2 + slot))


def star_to_act_K(k: int, J: NegSet) -> IntervalSeq:
    """Re-cover the complement of J with near-disjoint intervals.

    Slots 0 and 1 are a fixed overlapping pair just left of 0 (outside
    [0, 1], so the closed set is unchanged).  Each later slot s covers one
    maximal new piece of an incoming interval within [0, 1], reaching at
    most budget/2 into already covered ground on each closed side, with
    budget = 2^(-k-2-s).
    """
    if k < 0:
        raise ValueError("k must be non-negative")

    def gen():
        cover = _OpenCover()
        yield OIv(-slot_budget(k, 0), ZERO), {"kind": "overlap", "slot": 0}
        yield OIv(-slot_budget(k, 1), ZERO), {"kind": "overlap", "slot": 1}
        slot = 2
        for t, src in enumerate(J.complement):
            if src.is_empty:
                pieces = []
            else:
                lo, lo_closed = (ZERO, True) if src.a < 0 else (src.a, False)
                hi, hi_closed = (ONE, True) if src.b > 1 else (src.b, False)
                if lo < hi or (lo == hi and lo_closed and hi_closed):
                    pieces = cover.uncovered(lo, hi, lo_closed, hi_closed)
                else:
                    pieces = []
            if not pieces:
                yield EMPTY, {"kind": "idle", "src": t, "slot": slot}
                slot += 1
                continue
            for p_lo, p_hi, p_lo_closed, p_hi_closed in pieces:
                delta = slot_budget(k, slot) / 2
                a = max(src.a, p_lo - delta) if p_lo_closed else p_lo
                b = min(src.b, p_hi + delta) if p_hi_closed else p_hi
                iv = OIv(a, b)
                cover.add(iv)
                yield iv, {"kind": "piece", "src": t, "slot": slot}
                slot += 1

    return IntervalSeq(gen, name=f"star_to_act({k},{J.complement.name})")


# ---------------------------------------------------------------------------
# Witness registry and harness


def _identity(z):
    return z


@dataclass(frozen=True)
class ReductionWitness:
    name: str
    source: Problem
    target: Problem
    K: Callable[[Any], Any]
    H: Callable[[Any], Any]


WITNESSES = {
    "pc01→vct1": ReductionWitness("pc01→vct1", PC01, VCT1, pc01_to_vct1, _identity),
    "vct1→pc01": ReductionWitness("vct1→pc01", VCT1, PC01, vct1_to_pc01, _identity),
    "vct2→pcr": ReductionWitness("vct2→pcr", VCT2, PCR, vct2_to_pcr_K, vct2_to_pcr_H),
    "cn×vct2→vct2": ReductionWitness("cn×vct2→vct2", CN_VCT2, VCT2, lambda inst: cn_vct2_K(*inst), cn_vct2_H),
    "act→star": ReductionWitness("act→star", ACT, STAR_WWKL, act_to_star_K, _identity),
    "star→act": ReductionWitness("star→act", STAR_WWKL, ACT, lambda inst: star_to_act_K(*inst), _identity),
}


ALIASES = {
    "pc01->vct1": "pc01→vct1",
    "vct1->pc01": "vct1→pc01",
    "vct2->pcr": "vct2→pcr",
    "cnxvct2->vct2": "cn×vct2→vct2",
    "cn-vct2": "cn×vct2→vct2",
    "act->star": "act→star",
    "star->act": "star→act",
}


def witness(name: str) -> ReductionWitness:
    key = ALIASES.get(name, name)
    if key not in WITNESSES:
        raise KeyError(f"unknown witness {name!r}; known: {', '.join(WITNESSES)}")
    return WITNESSES[key]


def solution_json(sol) -> Any:
    if isinstance(sol, RealApprox):
        if sol.exact is not None:
            return {"x": rat_str(sol.exact), "exact": True}
        return {"x": rat_str(sol.refine(64)), "precision": 64}
    if isinstance(sol, tuple):
        return [solution_json(s) for s in sol]
    return sol


def verify_reduction(w: ReductionWitness, x, z, fuel: int, oracle_fuel: Optional[int] = None) -> dict:
    """Inject target solution z for K(x), map it with H, validate against x.

    ``oracle_fuel`` bounds the sanity check of z against K(x) itself
    (default: min(fuel, 10^4)).
    """
    if oracle_fuel is None:
        oracle_fuel = min(fuel, 10**4)
    report: dict[str, Any] = {"witness": w.name, "source": w.source.name, "target": w.target.name, "fuel": fuel}
    Kx = w.K(x)
    oracle = w.target.validate(Kx, z, oracle_fuel)
    report["oracle_check"] = oracle.to_json()
    try:
        y = w.H(z)
    except FuelExhausted as exc:
        report["H"] = {"error": str(exc), "fuel": exc.fuel}
        report["solution_check"] = None
        report["refuted"] = True
        return report
    report["H"] = solution_json(y)
    sol = w.source.validate(x, y, fuel)
    report["solution_check"] = sol.to_json()
    report["refuted"] = oracle.is_no or sol.is_no
    return report


# ---------------------------------------------------------------------------
# Structural checks on K outputs (exact, over a prefix)


def check_pc01_to_vct1(A: NegSet, prefix: int) -> list[dict]:
    out = []
    seq = pc01_to_vct1(A)
    for n in range(prefix):
        iv, origin = seq.at(n), seq.origin(n)
        parent = A.complement.at(origin["parent"])
        if not contains(parent, iv):
            out.append({"check": "inside_parent", "n": n})
    return out


def check_vct2_to_pcr(I: IntervalSeq, prefix: int) -> list[dict]:
    out = []
    seq = vct2_to_pcr_K(I).complement
    for pos in range(prefix):
        iv, origin = seq.at(pos), seq.origin(pos)
        if origin["part"] == "block":
            n = origin["n"]
            src = I.at(origin["src"])
            if not iv.is_empty and not (src.diam < Fraction(1, 2**n) and contains(block_window(n), iv)):
                out.append({"check": "block_local", "n": pos})
        elif origin["part"] == "gap":
            m = origin["n"]
            if iv != OIv(Fraction(2 * m + 1), Fraction(2 * m + 2)):
                out.append({"check": "gap", "n": pos})
        elif origin["part"] == "ray":
            if not (iv.b == 0 and iv.a < 0):
                out.append({"check": "ray", "n": pos})
        else:
            out.append({"check": "unknown_part", "n": pos})
    return out


def check_gadget(seq: IntervalSeq, prefix: int) -> list[dict]:
    out = []
    for pos in range(prefix):
        iv, origin = seq.at(pos), seq.origin(pos)
        if origin is None or origin.get("part") not in ("P", "I", "R", "A"):
            out.append({"check": "origin_tag", "n": pos})
        elif not contains(G.zone_of(origin), iv):
            out.append({"check": "zone", "n": pos})
    return out


def check_act_instance(I: IntervalSeq, prefix: int, k: int) -> list[dict]:
    """After every emission N: sum of lengths <= measure(union within [0,1]) + 2^(-k-1) (1 - 2^-N)."""
    out = []
    cover = _OpenCover()
    total = ZERO
    unit = OIv(ZERO, ONE)
    for N in range(1, prefix + 1):
        iv = I.at(N - 1)
        total += iv.diam
        cover.add(clip(iv, unit))
        bound = cover.measure + Fraction(1, 2 ** (k + 1)) * (1 - Fraction(1, 2**N))
        if total > bound:
            out.append({"check": "partial_sum", "n": N, "sum": rat_str(total), "bound": rat_str(bound)})
    return out
