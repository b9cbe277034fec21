"""Directed networks with a designated source and target, and s-t paths over them.

Nodes are numbered 1..n. Arcs keep the index they were given at construction
(0..m-1); every tie-break in the package is expressed in terms of that index.
"""

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field


@dataclass(frozen=True)
class DirectedNetwork:
    """Immutable directed network (N, A) with source s and target t."""

    n: int
    arcs: tuple[tuple[int, int], ...]
    s: int
    t: int

    _out: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)
    _in: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)
    _index: dict[tuple[int, int], int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "arcs", tuple((int(u), int(v)) for u, v in self.arcs))

        if self.n < 2:
            raise ValueError(f"Network needs at least 2 nodes, got {self.n}")
        if not (1 <= self.s <= self.n and 1 <= self.t <= self.n):
            raise ValueError(f"Source {self.s} and target {self.t} must lie in 1..{self.n}")
        if self.s == self.t:
            raise ValueError(f"Source and target must differ, both are {self.s}")

        out: list[list[int]] = [[] for _ in range(self.n + 1)]
        inc: list[list[int]] = [[] for _ in range(self.n + 1)]
        index: dict[tuple[int, int], int] = {}
        for a, (u, v) in enumerate(self.arcs):
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise ValueError(f"Arc {a} ({u}, {v}) references a node outside 1..{self.n}")
            if u == v:
                raise ValueError(f"Arc {a} is a self-loop on node {u}")
            if (u, v) in index:
                raise ValueError(f"Arc {a} ({u}, {v}) duplicates arc {index[(u, v)]}")
            index[(u, v)] = a
            out[u].append(a)
            inc[v].append(a)

        object.__setattr__(self, "_out", tuple(tuple(arcs) for arcs in out))
        object.__setattr__(self, "_in", tuple(tuple(arcs) for arcs in inc))
        object.__setattr__(self, "_index", index)

    @property
    def m(self) -> int:
        return len(self.arcs)

    def tail(self, arc: int) -> int:
        return self.arcs[arc][0]

    def head(self, arc: int) -> int:
        return self.arcs[arc][1]

    def out_arcs(self, node: int) -> tuple[int, ...]:
        """Arc indices leaving `node`, in increasing index order."""
        return self._out[node]

    def in_arcs(self, node: int) -> tuple[int, ...]:
        """Arc indices entering `node`, in increasing index order."""
        return self._in[node]

    def arc_id(self, tail: int, head: int) -> int | None:
        return self._index.get((tail, head))

    def nodes(self) -> range:
        return range(1, self.n + 1)


@dataclass(frozen=True)
class PathSeq:
    """A contiguous s-t walk, stored both as arc indices and as the visited nodes."""

    arcs: tuple[int, ...]
    nodes: tuple[int, ...]

    @classmethod
    def from_arcs(cls, net: DirectedNetwork, arcs: Iterable[int]) -> "PathSeq":
        """Build a path from arc indices, checking contiguity and both endpoints."""
        arcs = tuple(arcs)
        if not arcs:
            raise ValueError("A path needs at least one arc")
        for a in arcs:
            if not 0 <= a < net.m:
                raise ValueError(f"Arc index {a} out of range 0..{net.m - 1}")
        if net.tail(arcs[0]) != net.s:
            raise ValueError(f"Path starts at node {net.tail(arcs[0])}, not at source {net.s}")
        if net.head(arcs[-1]) != net.t:
            raise ValueError(f"Path ends at node {net.head(arcs[-1])}, not at target {net.t}")

        nodes = [net.s]
        for prev, nxt in zip(arcs, arcs[1:]):
            if net.head(prev) != net.tail(nxt):
                raise ValueError(f"Arcs {prev} and {nxt} are not contiguous")
            nodes.append(net.head(prev))
        nodes.append(net.t)
        return cls(arcs=arcs, nodes=tuple(nodes))

    @classmethod
    def from_nodes(cls, net: DirectedNetwork, nodes: Sequence[int]) -> "PathSeq":
        """Build a path from its node sequence; every consecutive pair must be an arc."""
        arcs = []
        for u, v in zip(nodes, nodes[1:]):
            a = net.arc_id(u, v)
            if a is None:
                raise ValueError(f"({u}, {v}) is not an arc of the network")
            arcs.append(a)
        return cls.from_arcs(net, arcs)

    @property
    def length(self) -> int:
        return len(self.arcs)

    @property
    def simple(self) -> bool:
        return len(set(self.nodes)) == len(self.nodes)

    @property
    def arc_set(self) -> frozenset[int]:
        return frozenset(self.arcs)


# K paths of a solution, in solution order. Duplicates are allowed.
SolutionPaths = tuple[PathSeq, ...]


def flow_imbalance(net: DirectedNetwork, arcs: Iterable[int]) -> dict[int, int]:
    """Nodes whose out-minus-in count differs from a unit s-t flow, with the excess."""
    balance = dict.fromkeys(net.nodes(), 0)
    for a in arcs:
        balance[net.tail(a)] += 1
        balance[net.head(a)] -= 1
    balance[net.s] -= 1
    balance[net.t] += 1
    return {v: b for v, b in balance.items() if b != 0}
