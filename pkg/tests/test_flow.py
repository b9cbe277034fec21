"""Tests for uniform-capacity max flow."""

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from kdissim.flow import has_k_disjoint, max_flow, max_unit_flow
from kdissim.instances import gen_grid, gen_random
from kdissim.network import DirectedNetwork


def _nx_flow(net: DirectedNetwork, capacity: int) -> int:
    graph = nx.DiGraph()
    graph.add_edges_from(net.arcs, capacity=capacity)
    return int(nx.maximum_flow_value(graph, net.s, net.t))


class TestMaxFlow:
    @pytest.mark.parametrize("p, q", [(2, 2), (3, 12), (6, 6), (4, 36)])
    def test_grids_have_two_disjoint_paths(self, p: int, q: int) -> None:
        assert max_unit_flow(gen_grid(p, q)) == 2

    def test_capacity_scales_flow(self, g66: DirectedNetwork) -> None:
        assert max_flow(g66, capacity=3) == 6

    def test_limit_stops_early(self, g66: DirectedNetwork) -> None:
        assert max_flow(g66, capacity=5, limit=7) == 7

    def test_zero_capacity(self, g66: DirectedNetwork) -> None:
        assert max_flow(g66, capacity=0) == 0

    def test_negative_capacity_raises(self, g66: DirectedNetwork) -> None:
        with pytest.raises(ValueError, match="non-negative"):
            max_flow(g66, capacity=-1)

    def test_unreachable_target(self) -> None:
        net = DirectedNetwork(n=3, arcs=((1, 2), (3, 2)), s=1, t=3)
        assert max_unit_flow(net) == 0

    def test_needs_backward_residual_arc(self) -> None:
        # The first BFS path 1-2-3-6 blocks both routes unless flow on (2,3) is cancelled.
        arcs = ((1, 2), (1, 4), (2, 3), (2, 5), (3, 6), (4, 3), (5, 6))
        net = DirectedNetwork(n=6, arcs=arcs, s=1, t=6)
        assert max_unit_flow(net) == 2

    @given(
        n=st.integers(min_value=3, max_value=14),
        density=st.integers(min_value=1, max_value=4),
        seed=st.integers(min_value=0, max_value=10_000),
        capacity=st.integers(min_value=1, max_value=3),
    )
    def test_matches_networkx(self, n: int, density: int, seed: int, capacity: int) -> None:
        net = gen_random(n, min(density * n, n * (n - 1)), seed)
        assert max_flow(net, capacity=capacity) == _nx_flow(net, capacity)


class TestHasKDisjoint:
    def test_grid(self, g66: DirectedNetwork) -> None:
        assert has_k_disjoint(g66, 2)
        assert not has_k_disjoint(g66, 3)

    def test_invalid_k_raises(self, g66: DirectedNetwork) -> None:
        with pytest.raises(ValueError, match="at least 1"):
            has_k_disjoint(g66, 0)
