"""Fewest-arcs and minimum-cost s-t paths with deterministic tie-breaking."""

import heapq
import logging
from collections import deque
from collections.abc import Collection, Sequence
from fractions import Fraction

from kdissim.network import DirectedNetwork, PathSeq

log = logging.getLogger(__name__)

Cost = int | float | Fraction


class NoPathError(RuntimeError):
    """Raised when a path is required but the target cannot be reached."""


def bfs_shortest_path(
    net: DirectedNetwork, allowed: Collection[int] | None = None,
) -> PathSeq | None:
    """Return a fewest-arcs s-t path using only `allowed` arcs (all arcs if None).

    Among parents at equal distance, the entering arc with the lowest index wins.
    Returns None when t is unreachable.
    """
    usable = None if allowed is None else set(allowed)

    dist: dict[int, int] = {net.s: 0}
    queue = deque([net.s])
    while queue:
        u = queue.popleft()
        if u == net.t:
            break
        for a in net.out_arcs(u):
            if usable is not None and a not in usable:
                continue
            v = net.head(a)
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)

    if net.t not in dist:
        return None

    # Walk back choosing, at every node, the lowest-index arc from the previous layer.
    arcs: list[int] = []
    v = net.t
    while v != net.s:
        parent = min(
            a for a in net.in_arcs(v)
            if (usable is None or a in usable) and dist.get(net.tail(a)) == dist[v] - 1
        )
        arcs.append(parent)
        v = net.tail(parent)
    arcs.reverse()
    return PathSeq.from_arcs(net, arcs)


def hop_distances(net: DirectedNetwork, reverse: bool = False) -> dict[int, int]:
    """Arc count from s to every reachable node, or from every node to t when reversed."""
    start = net.t if reverse else net.s
    dist = {start: 0}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        arcs = net.in_arcs(u) if reverse else net.out_arcs(u)
        for a in arcs:
            v = net.tail(a) if reverse else net.head(a)
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def dijkstra(net: DirectedNetwork, costs: Sequence[Cost]) -> PathSeq | None:
    """Return a minimum-cost s-t path, or None when t is unreachable.

    Ties are broken by fewer arcs, then by the lexicographically smallest arc-index
    sequence. Labels are compared on (cost, arcs, sequence), which is preserved by
    extension, so the usual label-setting argument applies. Sequences live in a
    parent-arc tree and are compared only when cost and arc count tie.
    """
    if len(costs) != net.m:
        raise ValueError(f"Expected {net.m} arc costs, got {len(costs)}")
    for a, c in enumerate(costs):
        if c < 0:
            raise ValueError(f"Arc {a} has negative cost {c}")

    best: dict[int, tuple[Cost, int]] = {net.s: (0, 0)}
    parent: dict[int, int | None] = {net.s: None}
    heap: list[tuple[Cost, int, int, int]] = [(0, 0, 0, net.s)]
    pushed = 1
    settled: set[int] = set()

    def precedes(a: int, b: int) -> bool:
        """Whether the sequence ending in arc a sorts before the one ending in b.

        Both sequences have the same length and settled tails, so walking back in
        step reaches s together; the last difference seen is the one nearest s.
        """
        first: bool = False
        x: int | None = a
        y: int | None = b
        while x != y:
            assert x is not None and y is not None
            first = x < y
            x, y = parent[net.tail(x)], parent[net.tail(y)]
        return first

    while heap:
        cost, hops, _, u = heapq.heappop(heap)
        if u in settled or (cost, hops) != best[u]:
            continue
        settled.add(u)
        if u == net.t:
            arcs: list[int] = []
            v = net.t
            while (a := parent[v]) is not None:
                arcs.append(a)
                v = net.tail(a)
            arcs.reverse()
            return PathSeq.from_arcs(net, arcs)
        for a in net.out_arcs(u):
            v = net.head(a)
            if v in settled:
                continue
            label = (cost + costs[a], hops + 1)
            current = best.get(v)
            if current is None or label < current:
                best[v], parent[v] = label, a
                heapq.heappush(heap, (*label, pushed, v))
                pushed += 1
            elif label == current and precedes(a, parent[v]):  # type: ignore[arg-type]
                parent[v] = a

    return None
