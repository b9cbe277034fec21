"""Tests for the presence bound R*."""

import logging
from unittest.mock import patch

import pytest

from kdissim.instances import gen_random
from kdissim.network import DirectedNetwork
from kdissim.rstar import rstar, rstar_flow, rstar_lp


class TestRstarFlow:
    @pytest.mark.parametrize("K, expected", [(1, 1), (2, 1), (3, 2), (10, 5)])
    def test_grid(self, g66: DirectedNetwork, K: int, expected: int) -> None:
        assert rstar_flow(g66, K) == expected

    def test_single_arc(self) -> None:
        net = DirectedNetwork(n=2, arcs=((1, 2),), s=1, t=2)
        assert rstar_flow(net, 4) == 4

    def test_complete_digraph(self) -> None:
        assert rstar_flow(gen_random(5, 20, 1), 3) == 1

    def test_invalid_k_raises(self, g22: DirectedNetwork) -> None:
        with pytest.raises(ValueError, match="at least 1"):
            rstar_flow(g22, 0)

    def test_unreachable_raises(self) -> None:
        net = DirectedNetwork(n=3, arcs=((1, 2), (3, 2)), s=1, t=3)
        with pytest.raises(ValueError, match="unreachable"):
            rstar_flow(net, 2)


class TestRstarLp:
    @pytest.mark.parametrize("K", [2, 3, 7])
    def test_matches_flow_on_grid(self, g66: DirectedNetwork, K: int) -> None:
        assert rstar_lp(g66, K) == rstar_flow(g66, K)

    def test_simplex_backend(self, g22: DirectedNetwork) -> None:
        assert rstar_lp(g22, 3, backend="simplex") == 2


class TestCrossCheck:
    def test_agreement_is_quiet(self, g66: DirectedNetwork, caplog: pytest.LogCaptureFixture) -> None:
        with caplog.at_level(logging.WARNING, logger="kdissim.rstar"):
            assert rstar(g66, 3, cross_check=True) == 2
        assert not caplog.records

    def test_disagreement_logs_warning(self, g66: DirectedNetwork,
                                       caplog: pytest.LogCaptureFixture) -> None:
        with patch("kdissim.rstar.rstar_lp", return_value=7):
            with caplog.at_level(logging.WARNING, logger="kdissim.rstar"):
                assert rstar(g66, 3, cross_check=True) == 2
        assert "flow gives 2, LP gives 7" in caplog.text

    def test_no_cross_check_skips_lp(self, g66: DirectedNetwork) -> None:
        with patch("kdissim.rstar.rstar_lp") as lp:
            rstar(g66, 3)
        lp.assert_not_called()
