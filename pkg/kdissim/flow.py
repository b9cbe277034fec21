"""Augmenting-path max-flow with a uniform integer capacity on every arc."""

import logging
from collections import deque

from kdissim.network import DirectedNetwork

log = logging.getLogger(__name__)


def max_flow(net: DirectedNetwork, capacity: int = 1, limit: int | None = None) -> int:
    """Maximum s-t flow when every arc has capacity `capacity`.

    Shortest augmenting paths (Edmonds-Karp) over the residual network. With
    `limit` set, stops as soon as the flow reaches it.
    """
    if capacity < 0:
        raise ValueError(f"Capacity must be non-negative, got {capacity}")

    flow = [0] * net.m
    total = 0
    while limit is None or total < limit:
        # parent[v] = (arc, +1 forward | -1 backward)
        parent: dict[int, tuple[int, int]] = {}
        seen = {net.s}
        queue = deque([net.s])
        while queue and net.t not in seen:
            u = queue.popleft()
            for a in net.out_arcs(u):
                v = net.head(a)
                if v not in seen and flow[a] < capacity:
                    seen.add(v)
                    parent[v] = (a, 1)
                    queue.append(v)
            for a in net.in_arcs(u):
                v = net.tail(a)
                if v not in seen and flow[a] > 0:
                    seen.add(v)
                    parent[v] = (a, -1)
                    queue.append(v)

        if net.t not in seen:
            break

        route = []
        v = net.t
        while v != net.s:
            a, direction = parent[v]
            route.append((a, direction))
            v = net.tail(a) if direction == 1 else net.head(a)

        push = min(capacity - flow[a] if d == 1 else flow[a] for a, d in route)
        if limit is not None:
            push = min(push, limit - total)
        for a, d in route:
            flow[a] += d * push
        total += push

    log.debug("Max flow at capacity %d: %d", capacity, total)
    return total


def max_unit_flow(net: DirectedNetwork) -> int:
    """Maximum number of pairwise arc-disjoint s-t paths."""
    return max_flow(net, capacity=1)


def has_k_disjoint(net: DirectedNetwork, k: int) -> bool:
    """True when the network holds at least `k` arc-disjoint s-t paths."""
    if k < 1:
        raise ValueError(f"K must be at least 1, got {k}")
    return max_flow(net, capacity=1, limit=k) >= k
