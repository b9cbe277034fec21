"""Tests for similarity indices and solution scores."""

import math
from decimal import Decimal
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kdissim import metrics
from kdissim.instances import gen_grid, gen_random
from kdissim.network import PathSeq
from kdissim.oracle import enumerate_simple_paths

GRID = gen_grid(6, 6)
RANDOM = gen_random(9, 24, 11)
RANDOM_PATHS = enumerate_simple_paths(RANDOM)


def _grid_path(nodes: list[int]) -> PathSeq:
    return PathSeq.from_nodes(GRID, nodes)


# Top row then right column, and left column then bottom row: arc-disjoint, 10 arcs each.
TOP_RIGHT = _grid_path([1, 2, 3, 4, 5, 6, 12, 18, 24, 30, 36])
LEFT_BOTTOM = _grid_path([1, 7, 13, 19, 25, 31, 32, 33, 34, 35, 36])
# Shares only the first arc with TOP_RIGHT.
ONE_SHARED = _grid_path([1, 2, 8, 14, 20, 26, 32, 33, 34, 35, 36])

solutions = st.lists(st.sampled_from(RANDOM_PATHS), min_size=2, max_size=7)


class TestDissimilarity:
    @pytest.mark.parametrize("index", [1, 2, 3, 4])
    def test_identical_paths(self, index: int) -> None:
        assert metrics.dissimilarity(index, TOP_RIGHT, TOP_RIGHT) == 0

    @pytest.mark.parametrize("index", [1, 2, 3, 4])
    def test_disjoint_paths(self, index: int) -> None:
        assert metrics.dissimilarity(index, TOP_RIGHT, LEFT_BOTTOM) == 1

    def test_one_shared_arc_of_ten(self) -> None:
        assert metrics.dissimilarity(1, TOP_RIGHT, ONE_SHARED) == Fraction(9, 10)

    def test_all_indices_on_one_shared_arc(self) -> None:
        assert metrics.similarity(2, TOP_RIGHT, ONE_SHARED) == Fraction(1, 10)
        assert metrics.similarity(3, TOP_RIGHT, ONE_SHARED) == Fraction(1, 10)
        assert metrics.similarity(4, TOP_RIGHT, ONE_SHARED) == Fraction(1, 19)

    def test_s2_irrational_falls_back_to_float(self) -> None:
        short = PathSeq.from_nodes(RANDOM, RANDOM_PATHS[0].nodes)
        longer = next(p for p in RANDOM_PATHS if p.length * short.length != 0
                      and math.isqrt(p.length * short.length) ** 2 != p.length * short.length)
        value = metrics.similarity(2, short, longer)
        common = metrics.overlap_length(short, longer)
        assert value == pytest.approx(common / math.sqrt(short.length * longer.length))

    def test_invalid_index_raises(self) -> None:
        with pytest.raises(ValueError, match="Invalid similarity index 5"):
            metrics.dissimilarity(5, TOP_RIGHT, TOP_RIGHT)

    @given(p=st.sampled_from(RANDOM_PATHS), q=st.sampled_from(RANDOM_PATHS))
    def test_d1_symmetric_and_bounded(self, p: PathSeq, q: PathSeq) -> None:
        d = metrics.dissimilarity(1, p, q)
        assert d == metrics.dissimilarity(1, q, p)
        assert 0 <= d <= 1


class TestSolutionScores:
    def test_disjoint_pair(self) -> None:
        paths = (TOP_RIGHT, LEFT_BOTTOM)
        assert metrics.total_pairwise_overlaps(paths) == 0
        assert metrics.avdi(paths) == 1
        assert metrics.midi(paths) == 1

    def test_identical_paths(self) -> None:
        paths = (TOP_RIGHT,) * 3
        assert metrics.avdi(paths) == 0
        assert metrics.midi(paths) == 0
        assert metrics.total_pairwise_overlaps(paths) == 30
        assert metrics.max_presence(paths) == 3

    def test_grid_two_overlaps(self) -> None:
        paths = (TOP_RIGHT, LEFT_BOTTOM, ONE_SHARED)
        assert metrics.total_pairwise_overlaps(paths) == 5
        assert metrics.avdi(paths) == 1 - Fraction(5, 30)

    def test_pairwise_scores_need_two_paths(self) -> None:
        with pytest.raises(ValueError, match="at least 2 paths"):
            metrics.avdi((TOP_RIGHT,))

    def test_objective_value_by_name(self) -> None:
        paths = (TOP_RIGHT, ONE_SHARED)
        assert metrics.objective_value("OL", paths) == 1
        assert metrics.objective_value("Rep", paths) == 1
        assert metrics.objective_value("D1-sum", paths) == Fraction(9, 10)

    def test_unknown_objective_raises(self) -> None:
        with pytest.raises(ValueError, match="Unknown objective"):
            metrics.objective_value("XYZ", (TOP_RIGHT, ONE_SHARED))

    @settings(max_examples=1000)
    @given(paths=solutions)
    def test_identities(self, paths: list[PathSeq]) -> None:
        usage = metrics.ArcUsage.of(paths)
        repeated = metrics.repeated_arc_count(paths)
        ro = metrics.repeated_occurrences(paths)
        rep = metrics.arc_repetitions(paths)
        assert sum(usage.values()) == sum(len(p.arc_set) for p in paths)
        assert rep == ro - repeated
        assert ro >= 2 * repeated
        assert metrics.total_pairwise_overlaps(paths) == sum(math.comb(c, 2) for c in usage.values())
        assert repeated <= rep <= ro
        assert rep <= metrics.total_pairwise_overlaps(paths)
        assert 0 <= metrics.midi(paths) <= metrics.avdi(paths) <= 1


class TestIndexCorrelation:
    def test_shape_and_diagonal(self) -> None:
        paths = RANDOM_PATHS[:6]
        corr = metrics.index_correlation(paths)
        assert corr.shape == (4, 4)
        finite = np.isfinite(np.diag(corr))
        assert np.allclose(np.diag(corr)[finite], 1.0)

    def test_needs_three_paths(self) -> None:
        with pytest.raises(ValueError, match="at least 3 paths"):
            metrics.index_correlation(RANDOM_PATHS[:2])


class TestRoundHalfUp:
    def test_fraction(self) -> None:
        assert metrics.round_half_up(Fraction(14, 15)) == Decimal("0.933")

    def test_tie_rounds_up(self) -> None:
        assert metrics.round_half_up(Fraction(1, 8), 2) == Decimal("0.13")

    def test_float(self) -> None:
        assert metrics.round_half_up(0.948718, 3) == Decimal("0.949")
