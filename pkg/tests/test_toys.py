"""Tests for the toy network catalog and the overlap counts it illustrates."""

import pytest

from kdissim import metrics
from kdissim.flow import max_unit_flow
from kdissim.toys import available_toys, load_toy


class TestLoadToy:
    def test_available_toys(self) -> None:
        keys = available_toys()
        assert {"shared-bridge", "two-bridges", "shared-bridge-3", "bridge-with-bypass",
                "looped-pair"} <= set(keys)

    def test_unknown_key_raises(self) -> None:
        with pytest.raises(KeyError, match="Unknown toy network 'nonexistent'"):
            load_toy("nonexistent")

    @pytest.mark.parametrize("key", ["shared-bridge", "two-bridges", "shared-bridge-3",
                                     "bridge-with-bypass", "looped-pair"])
    def test_reference_paths_are_simple(self, key: str) -> None:
        toy = load_toy(key)
        assert toy.paths
        for config in toy.paths.values():
            assert all(p.simple for p in config)

    def test_disjoint_path_counts(self) -> None:
        assert max_unit_flow(load_toy("shared-bridge").network) == 1
        assert max_unit_flow(load_toy("two-bridges").network) == 2

    def test_walks_loaded_as_arc_lists(self) -> None:
        toy = load_toy("looped-pair")
        first, second = toy.walks["loopy"]
        assert len(first) == 4
        assert len(second) == 5


class TestFigureCounts:
    def test_shared_bridge(self) -> None:
        paths = load_toy("shared-bridge").paths["concentrated"]
        assert metrics.total_pairwise_overlaps(paths) == 6
        assert metrics.repeated_arc_count(paths) == 1
        assert metrics.repeated_occurrences(paths) == 4
        assert metrics.arc_repetitions(paths) == 3

    def test_two_bridges_concentrated_vs_spread(self) -> None:
        toy = load_toy("two-bridges")
        concentrated, spread = toy.paths["concentrated"], toy.paths["spread"]
        assert metrics.total_pairwise_overlaps(concentrated) == 6
        assert metrics.total_pairwise_overlaps(spread) == 2
        assert metrics.repeated_arc_count(concentrated) == 1
        assert metrics.repeated_arc_count(spread) == 2
        assert metrics.arc_repetitions(concentrated) == 3
        assert metrics.arc_repetitions(spread) == 2
        assert metrics.repeated_occurrences(concentrated) == 4
        assert metrics.repeated_occurrences(spread) == 4

    def test_three_paths_occurrences(self) -> None:
        assert metrics.repeated_occurrences(load_toy("shared-bridge-3").paths["concentrated"]) == 3
        toy = load_toy("bridge-with-bypass")
        assert metrics.repeated_occurrences(toy.paths["concentrated"]) == 3
        assert metrics.repeated_occurrences(toy.paths["spread"]) == 2

    def test_overlap_per_pair(self) -> None:
        p, q = load_toy("shared-bridge").paths["concentrated"][:2]
        assert metrics.overlap_length(p, q) == 1
