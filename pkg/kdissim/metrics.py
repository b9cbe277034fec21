"""Similarity indices, dissimilarities and solution-level overlap scores.

Paths are compared as arc sets. Ratios are exact fractions; conversion to
decimals happens only at the reporting boundary (round_half_up).
"""

import math
from collections import Counter
from collections.abc import Callable, Sequence
from decimal import ROUND_HALF_UP, Decimal
from fractions import Fraction
from itertools import combinations

import numpy as np

from kdissim.network import PathSeq

Ratio = Fraction | float


class ArcUsage(Counter[int]):
    """Number of paths containing each arc (arcs with count >= 1 only)."""

    @classmethod
    def of(cls, paths: Sequence[PathSeq]) -> "ArcUsage":
        usage = cls()
        for p in paths:
            usage.update(p.arc_set)
        return usage


def overlap_length(p: PathSeq, q: PathSeq) -> int:
    """OL(p, q): number of arcs common to both paths."""
    return len(p.arc_set & q.arc_set)


def similarity(index: int, p: PathSeq, q: PathSeq) -> Ratio:
    """Similarity index S1..S4 between two paths."""
    if index not in (1, 2, 3, 4):
        raise ValueError(f"Invalid similarity index {index}. Must be 1, 2, 3 or 4")
    lp, lq = len(p.arc_set), len(q.arc_set)
    if lp == 0 or lq == 0:
        raise ValueError("Similarity is undefined for empty paths")
    common = overlap_length(p, q)

    if index == 1:
        return Fraction(1, 2) * (Fraction(common, lp) + Fraction(common, lq))
    if index == 2:
        # sqrt(common^2 / (lp lq)) is rational only when lp * lq is a square.
        root = math.isqrt(lp * lq)
        if root * root == lp * lq:
            return Fraction(common, root)
        return common / math.sqrt(lp * lq)
    if index == 3:
        return Fraction(common, max(lp, lq))
    return Fraction(common, len(p.arc_set | q.arc_set))


def dissimilarity(index: int, p: PathSeq, q: PathSeq) -> Ratio:
    """D_i = 1 - S_i, in [0, 1]: 0 for identical paths, 1 for arc-disjoint ones."""
    return 1 - similarity(index, p, q)


def total_pairwise_overlaps(paths: Sequence[PathSeq]) -> int:
    """Sum of OL over all pairs; equals sum over arcs of C(c_a, 2)."""
    total = sum(overlap_length(p, q) for p, q in combinations(paths, 2))
    assert total == sum(math.comb(c, 2) for c in ArcUsage.of(paths).values())
    return total


def repeated_arc_count(paths: Sequence[PathSeq]) -> int:
    """Number of arcs used by more than one path."""
    return sum(1 for c in ArcUsage.of(paths).values() if c >= 2)


def repeated_occurrences(paths: Sequence[PathSeq]) -> int:
    """RO: total usage of the repeated arcs."""
    return sum(c for c in ArcUsage.of(paths).values() if c >= 2)


def arc_repetitions(paths: Sequence[PathSeq]) -> int:
    """Rep: usage of every arc beyond its first."""
    return sum(c - 1 for c in ArcUsage.of(paths).values() if c >= 2)


def max_presence(paths: Sequence[PathSeq]) -> int:
    """Largest number of paths sharing one arc."""
    return max(ArcUsage.of(paths).values(), default=0)


def _pairwise_d1(paths: Sequence[PathSeq]) -> list[Fraction]:
    if len(paths) < 2:
        raise ValueError(f"Pairwise scores need at least 2 paths, got {len(paths)}")
    return [Fraction(dissimilarity(1, p, q)) for p, q in combinations(paths, 2)]


def avdi(paths: Sequence[PathSeq]) -> Fraction:
    """Average D1 over all pairs of paths."""
    values = _pairwise_d1(paths)
    return sum(values, Fraction(0)) / len(values)


def midi(paths: Sequence[PathSeq]) -> Fraction:
    """Minimum D1 over all pairs of paths."""
    return min(_pairwise_d1(paths))


def d1_sum(paths: Sequence[PathSeq]) -> Fraction:
    return sum(_pairwise_d1(paths), Fraction(0))


OBJECTIVES: dict[str, Callable[[Sequence[PathSeq]], int | Fraction]] = {
    "OL": total_pairwise_overlaps,
    "repeated": repeated_arc_count,
    "RO": repeated_occurrences,
    "Rep": arc_repetitions,
    "D1-sum": d1_sum,
    "max-presence": max_presence,
}


def objective_value(name: str, paths: Sequence[PathSeq]) -> int | Fraction:
    """Evaluate one of the named objectives on a set of paths."""
    if name not in OBJECTIVES:
        raise ValueError(f"Unknown objective '{name}'. Available: {', '.join(OBJECTIVES)}")
    return OBJECTIVES[name](paths)


def index_correlation(paths: Sequence[PathSeq]) -> np.ndarray:
    """Pearson correlation between D1..D4 over all pairs of paths (4x4 matrix).

    Entries are NaN where an index is constant over the pairs.
    """
    pairs = list(combinations(paths, 2))
    if len(pairs) < 2:
        raise ValueError("Index correlation needs at least 3 paths")
    table = np.array(
        [[float(dissimilarity(i, p, q)) for i in (1, 2, 3, 4)] for p, q in pairs]
    )
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.corrcoef(table, rowvar=False)


def round_half_up(value: Ratio, places: int = 3) -> Decimal:
    """Decimal rendering of a ratio, rounding ties away from zero."""
    if isinstance(value, Fraction):
        exact = Decimal(value.numerator) / Decimal(value.denominator)
    else:
        exact = Decimal(repr(value))
    return exact.quantize(Decimal(1).scaleb(-places), rounding=ROUND_HALF_UP)
