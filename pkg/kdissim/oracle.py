"""Exhaustive ground truth for small networks.

All simple s-t paths are enumerated, then every multiset of K of them is
scored. Scores are computed in bulk with numpy: for each (K-1)-prefix of a
non-decreasing index tuple, the last index sweeps a block of incidence rows.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, combinations_with_replacement

import numpy as np

from kdissim import metrics
from kdissim.network import DirectedNetwork, PathSeq, SolutionPaths
from kdissim.shortest import NoPathError

log = logging.getLogger(__name__)

DEFAULT_PATH_CAP = 5000
DEFAULT_MULTISET_CAP = 10**7
OBJECTIVES = ("OL", "repeated", "RO", "Rep", "D1-sum", "max-presence")
TIE_BREAKS = ("index", "midi")
_DECIMALS = 9


class OracleLimitError(RuntimeError):
    """Raised when the path or multiset count exceeds its cap."""


@dataclass(frozen=True)
class OracleResult:
    """Best multiset found: its objective value (exact), paths and path indices."""

    value: int | Fraction
    paths: SolutionPaths
    indices: tuple[int, ...]


def enumerate_simple_paths(net: DirectedNetwork, cap: int = DEFAULT_PATH_CAP) -> list[PathSeq]:
    """All simple s-t paths, in depth-first order over increasing arc indices."""
    if cap < 1:
        raise ValueError(f"Path cap must be at least 1, got {cap}")

    found: list[PathSeq] = []
    arcs: list[int] = []
    on_path = {net.s}

    def extend(u: int) -> None:
        for a in net.out_arcs(u):
            v = net.head(a)
            if v in on_path:
                continue
            arcs.append(a)
            if v == net.t:
                if len(found) >= cap:
                    raise OracleLimitError(f"More than {cap} simple s-t paths")
                found.append(PathSeq.from_arcs(net, arcs))
            else:
                on_path.add(v)
                extend(v)
                on_path.discard(v)
            arcs.pop()

    extend(net.s)
    log.debug("Enumerated %d simple paths", len(found))
    return found


def _scores(objective: str, counts: np.ndarray) -> np.ndarray:
    if objective == "OL":
        return (counts * (counts - 1) // 2).sum(axis=1)
    if objective == "repeated":
        return (counts >= 2).sum(axis=1)
    if objective == "RO":
        return np.where(counts >= 2, counts, 0).sum(axis=1)
    if objective == "Rep":
        return np.maximum(counts - 1, 0).sum(axis=1)
    return counts.max(axis=1)


def brute_force_optimum(
    net: DirectedNetwork,
    K: int,
    objective: str,
    presence_bound: int | None = None,
    path_cap: int = DEFAULT_PATH_CAP,
    multiset_cap: int = DEFAULT_MULTISET_CAP,
    tie_break: str = "index",
) -> OracleResult:
    """Best K-multiset of simple paths for `objective`.

    D1-sum is maximized, every other objective minimized. Ties go to the
    lexicographically smallest index multiset; with tie_break="midi" the
    largest minimum pairwise D1 is preferred first.
    """
    if objective not in OBJECTIVES:
        raise ValueError(f"Unknown objective '{objective}'. Available: {', '.join(OBJECTIVES)}")
    if tie_break not in TIE_BREAKS:
        raise ValueError(f"Unknown tie break '{tie_break}'. Must be one of: {', '.join(TIE_BREAKS)}")
    if K < 1:
        raise ValueError(f"K must be at least 1, got {K}")

    paths = enumerate_simple_paths(net, path_cap)
    if not paths:
        raise NoPathError(f"Target {net.t} is unreachable from source {net.s}")
    count = len(paths)
    multisets = math.comb(count + K - 1, K)
    if multisets > multiset_cap:
        raise OracleLimitError(f"{multisets} multisets of {K} among {count} paths exceed {multiset_cap}")

    incidence = np.zeros((count, net.m), dtype=np.int64)
    for i, p in enumerate(paths):
        incidence[i, list(p.arc_set)] = 1

    need_d1 = objective == "D1-sum" or tie_break == "midi"
    d1 = np.zeros((count, count))
    if need_d1:
        lengths = incidence.sum(axis=1).astype(float)
        common = (incidence @ incidence.T).astype(float)
        d1 = 1.0 - 0.5 * (common / lengths[:, None] + common / lengths[None, :])

    best_key: tuple[float, float] | None = None
    best: tuple[int, ...] | None = None
    for prefix in combinations_with_replacement(range(count), K - 1):
        start = prefix[-1] if prefix else 0
        rows = np.arange(start, count)
        counts = incidence[list(prefix)].sum(axis=0)[None, :] + incidence[start:]

        if objective == "D1-sum":
            inner = sum(d1[i, j] for i, j in combinations(prefix, 2))
            primary = -(inner + d1[list(prefix)][:, start:].sum(axis=0))
        else:
            primary = _scores(objective, counts).astype(float)
        if presence_bound is not None:
            primary = np.where(counts.max(axis=1) <= presence_bound, primary, np.inf)

        secondary = np.zeros(len(rows))
        if tie_break == "midi" and K >= 2:
            inner_min = min((d1[i, j] for i, j in combinations(prefix, 2)), default=np.inf)
            secondary = -np.minimum(inner_min, d1[list(prefix)][:, start:].min(axis=0))

        primary = np.round(primary, _DECIMALS)
        secondary = np.round(secondary, _DECIMALS)
        top = primary.min()
        if not np.isfinite(top):
            continue
        candidates = np.flatnonzero(primary == top)
        k = int(candidates[np.argmin(secondary[candidates])])
        key = (float(top), float(secondary[k]))
        if best_key is None or key < best_key:
            best_key = key
            best = (*prefix, int(rows[k]))

    if best is None:
        raise ValueError(f"No {K} simple paths satisfy presence bound {presence_bound}")

    chosen = tuple(paths[i] for i in best)
    if objective == "D1-sum" and K < 2:
        value: int | Fraction = Fraction(0)
    else:
        value = metrics.objective_value(objective, chosen)
    log.info("Oracle %s K=%d over %d paths: %s at %s", objective, K, count, value, best)
    return OracleResult(value=value, paths=chosen, indices=best)
