"""Tests for the iterative penalty method."""

from fractions import Fraction

import pytest

from kdissim import metrics
from kdissim.ipm import ALPHA_SWEEP, DEFAULT_ALPHA, as_fraction, ipm, ipm_trace
from kdissim.network import DirectedNetwork
from kdissim.shortest import NoPathError


class TestAsFraction:
    @pytest.mark.parametrize("value, expected", [
        ("0.25", Fraction(1, 4)), (0.1, Fraction(1, 10)), (2, Fraction(2)),
        (Fraction(3, 4), Fraction(3, 4)),
    ])
    def test_exact_values(self, value: object, expected: Fraction) -> None:
        assert as_fraction(value) == expected  # type: ignore[arg-type]

    def test_negative_raises(self) -> None:
        with pytest.raises(ValueError, match="non-negative"):
            as_fraction(-1)

    def test_sweep(self) -> None:
        assert ALPHA_SWEEP[-1] == DEFAULT_ALPHA == 1


class TestIpm:
    def test_grid_three_paths(self, g66: DirectedNetwork) -> None:
        paths = ipm(g66, 3)
        assert [list(p.arcs) for p in paths] == [
            [0, 1, 2, 3, 4, 55, 56, 57, 58, 59],
            [30, 5, 6, 7, 8, 51, 52, 53, 54, 29],
            [0, 35, 36, 11, 12, 47, 48, 23, 24, 59],
        ]
        assert metrics.total_pairwise_overlaps(paths) == 2
        assert metrics.avdi(paths) == Fraction(14, 15)
        assert metrics.midi(paths) == Fraction(4, 5)

    def test_small_grid_disjoint(self, g22: DirectedNetwork) -> None:
        paths = ipm(g22, 2)
        assert metrics.avdi(paths) == 1

    def test_zero_penalty_repeats_first_path(self, g66: DirectedNetwork) -> None:
        paths = ipm(g66, 4, alpha=0)
        assert len({p.arcs for p in paths}) == 1

    def test_costs_grow_by_alpha(self, g66: DirectedNetwork) -> None:
        trace = list(ipm_trace(g66, 3, alpha="0.5"))
        first, initial = trace[0]
        assert set(initial) == {1}
        _, second_costs = trace[1]
        for a in range(g66.m):
            expected = Fraction(3, 2) if a in first.arc_set else Fraction(1)
            assert second_costs[a] == expected

    def test_paths_are_simple(self, g66: DirectedNetwork) -> None:
        assert all(p.simple for p in ipm(g66, 10))

    def test_invalid_k_raises(self, g22: DirectedNetwork) -> None:
        with pytest.raises(ValueError, match="at least 1"):
            ipm(g22, 0)

    def test_unreachable_raises(self) -> None:
        net = DirectedNetwork(n=3, arcs=((1, 2), (3, 2)), s=1, t=3)
        with pytest.raises(NoPathError, match="unreachable"):
            ipm(net, 2)
