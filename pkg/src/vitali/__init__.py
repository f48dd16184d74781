"""Vitali covers over exact rationals, with elimination and executable reduction witnesses."""

from .geometry import EMPTY, FiniteUnion, OIv, Rat, contains, measure, normalize, overlap_measure, subtract_open
from .represented import (
    FuelExhausted,
    IntervalSeq,
    NatNeg,
    NegSet,
    RealApprox,
    Verdict,
    captured_at,
    enum_rational_intervals,
    filter_diam,
    prefix_union_measure,
    real_of_rat,
)
from .vct0 import EliminationResult, check_elimination, eliminate, restrict_to
from .vitalize import saturated_filler, vitalize

__all__ = [
    "EMPTY",
    "FiniteUnion",
    "OIv",
    "Rat",
    "contains",
    "measure",
    "normalize",
    "overlap_measure",
    "subtract_open",
    "FuelExhausted",
    "IntervalSeq",
    "NatNeg",
    "NegSet",
    "RealApprox",
    "Verdict",
    "captured_at",
    "enum_rational_intervals",
    "filter_diam",
    "prefix_union_measure",
    "real_of_rat",
    "EliminationResult",
    "check_elimination",
    "eliminate",
    "restrict_to",
    "saturated_filler",
    "vitalize",
]
