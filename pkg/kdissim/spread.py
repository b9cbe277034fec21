"""Reroute single paths of a solution so that its overlaps fall on different pairs.

Optimal solutions are rarely unique. Among those with the same objective, the
ones whose shared arcs are spread over many pairs have a larger MiDi.
"""

import logging
from collections import Counter
from collections.abc import Sequence
from fractions import Fraction
from itertools import combinations

from kdissim import metrics
from kdissim.network import DirectedNetwork, PathSeq, SolutionPaths
from kdissim.shortest import dijkstra

log = logging.getLogger(__name__)

MAX_ROUNDS = 100

Score = tuple[Fraction, int, Fraction]


def _score(paths: Sequence[PathSeq]) -> Score:
    """(MiDi, minus the number of pairs at MiDi, sum of D1); larger is better."""
    values = [Fraction(metrics.dissimilarity(1, p, q)) for p, q in combinations(paths, 2)]
    worst = min(values)
    return worst, -values.count(worst), sum(values, Fraction(0))


def two_phase_network(net: DirectedNetwork) -> DirectedNetwork:
    """Two copies of `net` joined by one switch arc per node.

    Node i is i in the first copy and n + i in the second. Arc a is a in the
    first copy and m + a in the second; arc 2m + i - 1 switches at node i.
    Paths run from s in the first copy to t in the second.
    """
    n = net.n
    arcs = (
        list(net.arcs)
        + [(u + n, v + n) for u, v in net.arcs]
        + [(i, i + n) for i in net.nodes()]
    )
    return DirectedNetwork(n=2 * n, arcs=tuple(arcs), s=net.s, t=net.t + n)


class _Rerouter:
    def __init__(self, net: DirectedNetwork, objective: str, paths: SolutionPaths) -> None:
        self.net = net
        self.phased = two_phase_network(net)
        self.objective = objective
        self.target = metrics.objective_value(objective, paths)
        self.presence = metrics.max_presence(paths)

    def reroute(self, paths: SolutionPaths, k: int, first: int, second: int) -> PathSeq | None:
        """Path k rerouted: arcs of other paths cost one unit per user and dominate;
        below that, arcs of path `first` are avoided before the switch node and arcs
        of path `second` after it."""
        m = self.net.m
        users: Counter[int] = Counter()
        for l, p in enumerate(paths):
            if l != k:
                users.update(p.arc_set)
        heavy = m + 1
        shared = [heavy * users[a] for a in range(m)]
        avoid_first, avoid_second = paths[first].arc_set, paths[second].arc_set
        costs = (
            [c + (a in avoid_first) for a, c in enumerate(shared)]
            + [c + (a in avoid_second) for a, c in enumerate(shared)]
            + [0] * self.net.n
        )
        found = dijkstra(self.phased, costs)
        if found is None:
            return None
        arcs = [a if a < m else a - m for a in found.arcs if a < 2 * m]
        path = PathSeq.from_arcs(self.net, arcs)
        return path if path.simple and path.arcs != paths[k].arcs else None

    def acceptable(self, paths: SolutionPaths) -> bool:
        return (
            metrics.objective_value(self.objective, paths) <= self.target
            and metrics.max_presence(paths) <= self.presence
        )

    def improve(self, paths: SolutionPaths, score: Score) -> tuple[SolutionPaths, Score] | None:
        K = len(paths)
        worst_pairs = [
            (i, j) for i, j in combinations(range(K), 2)
            if metrics.dissimilarity(1, paths[i], paths[j]) == score[0]
        ]
        movable = sorted({k for pair in worst_pairs for k in pair})
        for k in movable:
            others = [l for l in range(K) if l != k]
            for first in others:
                for second in others:
                    path = self.reroute(paths, k, first, second)
                    if path is None:
                        continue
                    trial = paths[:k] + (path,) + paths[k + 1:]
                    if not self.acceptable(trial):
                        continue
                    trial_score = _score(trial)
                    if trial_score > score:
                        return trial, trial_score
        return None


def spread_overlaps(paths: SolutionPaths, net: DirectedNetwork, objective: str) -> SolutionPaths:
    """Reroute paths of the worst pairs while that raises MiDi, then the D1 sum.

    The named objective and the largest arc presence never grow, so optimal and
    presence-bounded solutions stay so. The result is a local optimum: no single
    rerouted path improves it.
    """
    current = tuple(paths)
    if len(current) < 2:
        return current
    rerouter = _Rerouter(net, objective, current)
    score = _score(current)
    for _ in range(MAX_ROUNDS):
        if score[0] == 1:
            break
        better = rerouter.improve(current, score)
        if better is None:
            break
        current, score = better
        log.debug("Rerouted a path: MiDi %s", score[0])
    return current
