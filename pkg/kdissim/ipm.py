"""Iterative penalty method: K shortest paths with growing arc costs."""

import logging
from collections.abc import Iterator
from fractions import Fraction

from kdissim.network import DirectedNetwork, PathSeq, SolutionPaths
from kdissim.shortest import NoPathError, dijkstra

log = logging.getLogger(__name__)

DEFAULT_ALPHA = Fraction(1)
ALPHA_SWEEP = (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(1))


def as_fraction(alpha: Fraction | float | int | str) -> Fraction:
    """Exact penalty from a user value; floats go through their decimal text."""
    value = alpha if isinstance(alpha, Fraction) else Fraction(str(alpha))
    if value < 0:
        raise ValueError(f"Penalty alpha must be non-negative, got {alpha}")
    return value


def ipm_trace(
    net: DirectedNetwork, K: int, alpha: Fraction | float | str = DEFAULT_ALPHA,
) -> Iterator[tuple[PathSeq, tuple[Fraction, ...]]]:
    """Yield each selected path with the arc costs it was selected under.

    Costs start at 1; after every iteration alpha is added to each arc of the
    path just found, so an arc picked r times costs 1 + r * alpha.
    """
    if K < 1:
        raise ValueError(f"K must be at least 1, got {K}")
    penalty = as_fraction(alpha)
    costs = [Fraction(1)] * net.m

    for k in range(K):
        path = dijkstra(net, costs)
        if path is None:
            raise NoPathError(f"Target {net.t} is unreachable from source {net.s}")
        yield path, tuple(costs)
        for a in path.arcs:
            costs[a] += penalty
        log.debug("Iteration %d: path of %d arcs", k, path.length)


def ipm(net: DirectedNetwork, K: int, alpha: Fraction | float | str = DEFAULT_ALPHA) -> SolutionPaths:
    return tuple(path for path, _ in ipm_trace(net, K, alpha))
