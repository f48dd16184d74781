"""Elimination of [0, 1] from a Vitali cover, stage by stage.

Stage n starts from the closed residual A_n (A_0 = [0, 1]).  Stage 0 may
use any input interval; later stages look only at input intervals
contained in A_n.  Each stage picks finitely many pairwise
disjoint ones until the residual has measure < 2^-(n+1), so the residual
A_{n+1} left by stage n is below 2^-(n+1) (and a fortiori 2^-n).  A residual of
measure exactly zero ends the run early with status ``completed``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .geometry import (
    EMPTY,
    UNIT,
    FiniteUnion,
    OIv,
    contained_in_union,
    measure,
    rat_str,
    subtract_open,
)
from .represented import IntervalSeq

STRATEGIES = ("greedy", "exhaustive", "auto")


class Status(enum.Enum):
    COMPLETED = "completed"
    RUNNING = "running"
    FUEL_EXHAUSTED = "fuel_exhausted"


@dataclass
class Stage:
    index: int
    chosen: list[tuple[int, OIv]]
    residual: FiniteUnion
    residual_measure: Fraction
    closed: bool = True
    strategy: str = ""

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "closed": self.closed,
            "strategy": self.strategy,
            "chosen": [{"n": n, **iv.to_json()} for n, iv in self.chosen],
            "residual": self.residual.to_json(),
            "residual_measure": rat_str(self.residual_measure),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Stage":
        return cls(
            index=obj["index"],
            chosen=[(c["n"], OIv.from_json(c)) for c in obj["chosen"]],
            residual=FiniteUnion.from_json(obj["residual"]),
            residual_measure=Fraction(obj["residual_measure"]),
            closed=obj.get("closed", True),
            strategy=obj.get("strategy", ""),
        )


@dataclass
class EliminationResult:
    stages: list[Stage] = field(default_factory=list)
    status: Status = Status.RUNNING
    failed_stage: Optional[int] = None

    @property
    def chosen(self) -> list[tuple[int, OIv]]:
        return [c for st in self.stages for c in st.chosen]

    @property
    def residual_measure(self) -> Fraction:
        closed = [st for st in self.stages if st.closed]
        return closed[-1].residual_measure if closed else Fraction(1)

    def to_json(self) -> dict:
        return {
            "status": self.status.value,
            "failed_stage": self.failed_stage,
            "stages": [st.to_json() for st in self.stages],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "EliminationResult":
        return cls(
            stages=[Stage.from_json(s) for s in obj["stages"]],
            status=Status(obj["status"]),
            failed_stage=obj.get("failed_stage"),
        )


def stage_bound(n: int) -> Fraction:
    return Fraction(1, 2 ** (n + 1))


def restrict_to(I: IntervalSeq, A: FiniteUnion) -> IntervalSeq:
    def gen():
        for iv, origin in I.with_origins():
            yield (iv if not iv.is_empty and contained_in_union(iv, A) else EMPTY), origin

    return IntervalSeq(gen, name=f"restrict({I.name})", saturated=I.saturated)


def _disjoint_from(iv: OIv, picked: list[OIv]) -> bool:
    return all(iv.b <= p.a or p.b <= iv.a for p in picked)


def _gain(A: FiniteUnion, iv: OIv) -> Fraction:
    return measure(A) - measure(subtract_open(A, iv))


def _greedy_stage(I, A, bound, fuel, restricted):
    residual, mass, chosen = A, measure(A), []
    if mass < bound:
        return chosen, residual, mass
    for pos in range(fuel):
        iv = I.at(pos)
        if iv.is_empty:
            continue
        if restricted:
            if not contained_in_union(iv, residual):
                continue
        elif not _disjoint_from(iv, [c for _, c in chosen]) or _gain(residual, iv) == 0:
            continue
        residual = subtract_open(residual, iv)
        mass = measure(residual)
        chosen.append((pos, iv))
        if mass < bound:
            return chosen, residual, mass
    return None


def max_disjoint_family(cands, weight=lambda iv: iv.diam):
    """Pairwise disjoint subfamily of maximal total weight (interval scheduling)."""
    from bisect import bisect_right

    items = sorted(cands, key=lambda c: (c[1].b, c[1].a))
    ends = [iv.b for _, iv in items]
    best: list[Fraction] = [Fraction(0)]
    take: list[bool] = []
    prev: list[int] = []
    for i, (_, iv) in enumerate(items):
        # items[:p] all end at or before iv.a, so they miss the open interval
        p = bisect_right(ends, iv.a, 0, i)
        prev.append(p)
        with_it = best[p] + weight(iv)
        if with_it > best[i]:
            best.append(with_it)
            take.append(True)
        else:
            best.append(best[i])
            take.append(False)
    family = []
    i = len(items)
    while i > 0:
        if take[i - 1]:
            family.append(items[i - 1])
            i = prev[i - 1]
        else:
            i -= 1
    family.sort(key=lambda c: c[0])
    return best[-1], family


def _exhaustive_stage(I, A, bound, fuel, restricted):
    total = measure(A)
    if total < bound:
        return [], A, total
    seen: dict[OIv, int] = {}
    scanned = 0
    length = 1
    while True:
        length = min(length, fuel)
        for pos in range(scanned, length):
            iv = I.at(pos)
            if iv.is_empty or iv in seen:
                continue
            if contained_in_union(iv, A) if restricted else _gain(A, iv) > 0:
                seen[iv] = pos
        scanned = length
        cands = [(p, iv) for iv, p in seen.items()]
        if restricted:
            gained, family = max_disjoint_family(cands)
        else:
            gained, family = max_disjoint_family(cands, lambda iv: _gain(A, iv))
        if total - gained < bound:
            residual = A
            for _, iv in family:
                residual = subtract_open(residual, iv)
            return family, residual, total - gained
        if length >= fuel:
            return None
        length *= 2


def eliminate(I: IntervalSeq, stages: int, fuel: int, strategy: str = "auto") -> EliminationResult:
    """Run stages 0..stages-1, each with a scan budget of ``fuel`` positions."""
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    if stages < 0 or fuel < 0:
        raise ValueError("stages and fuel must be non-negative")
    result = EliminationResult()
    A = UNIT
    for n in range(stages):
        bound = stage_bound(n)
        outcome, used = None, strategy
        if strategy in ("greedy", "auto"):
            outcome, used = _greedy_stage(I, A, bound, fuel, n > 0), "greedy"
        if outcome is None and strategy in ("exhaustive", "auto"):
            outcome, used = _exhaustive_stage(I, A, bound, fuel, n > 0), "exhaustive"
        if outcome is None:
            result.stages.append(Stage(n, [], A, measure(A), closed=False, strategy=used))
            result.status = Status.FUEL_EXHAUSTED
            result.failed_stage = n
            return result
        chosen, residual, mass = outcome
        result.stages.append(Stage(n, chosen, residual, mass, closed=True, strategy=used))
        A = residual
        if mass == 0:
            result.status = Status.COMPLETED
            return result
    result.status = Status.RUNNING
    return result


def check_elimination(result: EliminationResult, I: IntervalSeq) -> dict:
    """Recheck a (possibly tampered) result exactly; collects every violation."""
    violations: list[dict] = []
    chosen = result.chosen

    for pos, iv in chosen:
        if iv.is_empty:
            violations.append({"check": "nonempty", "n": pos})
        if I.at(pos) != iv:
            violations.append(
                {"check": "provenance", "n": pos, "recorded": iv.to_json(), "input": I.at(pos).to_json()}
            )

    ordered = sorted((iv.a, iv.b, pos) for pos, iv in chosen if not iv.is_empty)
    for (a1, b1, p1), (a2, b2, p2) in zip(ordered, ordered[1:]):
        if a2 < b1:
            violations.append({"check": "disjointness", "positions": [p1, p2]})

    A = UNIT
    for st in result.stages:
        for pos, iv in st.chosen:
            if st.index > 0 and not contained_in_union(iv, A):
                violations.append({"check": "containment", "stage": st.index, "n": pos})
        expected = A
        for _, iv in st.chosen:
            expected = subtract_open(expected, iv)
        if st.closed:
            if expected != st.residual:
                violations.append({"check": "residual_set", "stage": st.index})
            if measure(st.residual) != st.residual_measure:
                violations.append({"check": "residual_measure", "stage": st.index})
            if not st.residual_measure < stage_bound(st.index):
                violations.append(
                    {
                        "check": "residual_bound",
                        "stage": st.index,
                        "residual_measure": rat_str(st.residual_measure),
                        "bound": rat_str(stage_bound(st.index)),
                    }
                )
            for l, r in st.residual:
                if not contained_in_union(OIv(l, r), A) and l != r:
                    violations.append({"check": "nesting", "stage": st.index})
                    break
            A = st.residual

    if result.status is Status.COMPLETED and result.residual_measure != 0:
        violations.append({"check": "completed_status", "residual_measure": rat_str(result.residual_measure)})

    return {
        "ok": not violations,
        "status": result.status.value,
        "stages": len(result.stages),
        "chosen": len(chosen),
        "violations": violations,
    }
