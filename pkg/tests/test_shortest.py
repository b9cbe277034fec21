"""Tests for fewest-arc and minimum-cost paths."""

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from kdissim.instances import gen_grid, gen_random
from kdissim.network import DirectedNetwork
from kdissim.shortest import bfs_shortest_path, dijkstra, hop_distances


class TestBfsShortestPath:
    def test_grid_prefers_lowest_entering_arc(self, g22: DirectedNetwork) -> None:
        # Arcs: 0 (1,2), 1 (3,4), 2 (1,3), 3 (2,4); t is entered by arcs 1 and 3.
        path = bfs_shortest_path(g22)
        assert path is not None
        assert path.arcs == (2, 1)
        assert path.nodes == (1, 3, 4)

    def test_allowed_arcs_restrict_search(self, g22: DirectedNetwork) -> None:
        path = bfs_shortest_path(g22, allowed={0, 3})
        assert path is not None
        assert path.arcs == (0, 3)

    def test_unreachable_returns_none(self, g22: DirectedNetwork) -> None:
        assert bfs_shortest_path(g22, allowed={0, 2}) is None

    def test_fewest_arcs_not_first_found(self) -> None:
        net = DirectedNetwork(n=4, arcs=((1, 2), (2, 3), (3, 4), (1, 4)), s=1, t=4)
        path = bfs_shortest_path(net)
        assert path is not None
        assert path.arcs == (3,)

    def test_grid_path_length(self) -> None:
        path = bfs_shortest_path(gen_grid(6, 6))
        assert path is not None
        assert path.length == 10
        assert path.simple


class TestDijkstra:
    def test_unit_costs_take_lexicographically_smallest(self, g22: DirectedNetwork) -> None:
        path = dijkstra(g22, [1, 1, 1, 1])
        assert path is not None
        assert path.arcs == (0, 3)

    def test_cost_beats_hops(self) -> None:
        net = DirectedNetwork(n=4, arcs=((1, 4), (1, 2), (2, 3), (3, 4)), s=1, t=4)
        path = dijkstra(net, [5, 1, 1, 1])
        assert path is not None
        assert path.arcs == (1, 2, 3)

    def test_hops_break_cost_ties(self) -> None:
        net = DirectedNetwork(n=4, arcs=((1, 2), (2, 3), (3, 4), (1, 4)), s=1, t=4)
        path = dijkstra(net, [1, 1, 1, 3])
        assert path is not None
        assert path.arcs == (3,)

    def test_fraction_costs(self, g22: DirectedNetwork) -> None:
        path = dijkstra(g22, [Fraction(1, 2), 1, 1, Fraction(5, 3)])
        assert path is not None
        assert path.arcs == (2, 1)

    def test_later_settled_parent_wins_sequence_tie(self) -> None:
        # Node 3 is settled first, but (0, 3) sorts before (1, 2) at the same cost and length.
        net = DirectedNetwork(n=4, arcs=((1, 2), (1, 3), (3, 4), (2, 4)), s=1, t=4)
        path = dijkstra(net, [2, 1, 2, 1])
        assert path is not None
        assert path.arcs == (0, 3)

    def test_long_grid_tie_is_lexicographic(self) -> None:
        # Every monotone path ties on unit costs; rightward arcs have the lowest indices.
        net = gen_grid(4, 5)
        path = dijkstra(net, [1] * net.m)
        assert path is not None
        assert path.arcs == (0, 1, 2, 3, 28, 29, 30)

    def test_unreachable_returns_none(self) -> None:
        net = DirectedNetwork(n=3, arcs=((1, 2),), s=1, t=3)
        assert dijkstra(net, [1]) is None

    def test_wrong_cost_count_raises(self, g22: DirectedNetwork) -> None:
        with pytest.raises(ValueError, match="Expected 4 arc costs"):
            dijkstra(g22, [1, 1])

    def test_negative_cost_raises(self, g22: DirectedNetwork) -> None:
        with pytest.raises(ValueError, match="negative cost"):
            dijkstra(g22, [1, -1, 1, 1])

    @given(
        n=st.integers(min_value=3, max_value=12),
        extra=st.integers(min_value=0, max_value=20),
        seed=st.integers(min_value=0, max_value=10_000),
    )
    def test_unit_costs_match_bfs_length(self, n: int, extra: int, seed: int) -> None:
        net = gen_random(n, min(n + extra, n * (n - 1)), seed)
        by_cost = dijkstra(net, [1] * net.m)
        by_hops = bfs_shortest_path(net)
        assert by_cost is not None and by_hops is not None
        assert by_cost.length == by_hops.length
        assert by_cost.simple


class TestHopDistances:
    def test_from_source(self, g22: DirectedNetwork) -> None:
        assert hop_distances(g22) == {1: 0, 2: 1, 3: 1, 4: 2}

    def test_to_target(self, g22: DirectedNetwork) -> None:
        assert hop_distances(g22, reverse=True) == {4: 0, 2: 1, 3: 1, 1: 2}

    def test_unreachable_nodes_are_absent(self) -> None:
        net = DirectedNetwork(n=4, arcs=((1, 2), (3, 4)), s=1, t=4)
        assert hop_distances(net) == {1: 0, 2: 1}
        assert hop_distances(net, reverse=True) == {4: 0, 3: 1}

    def test_grid_layers(self, g66: DirectedNetwork) -> None:
        forward = hop_distances(g66)
        backward = hop_distances(g66, reverse=True)
        assert forward[g66.t] == backward[g66.s] == 10
        assert all(forward[v] + backward[v] == 10 for v in g66.nodes())
