"""Tests for the seeded instance generators."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from kdissim.instances import (
    REFERENCE_GRIDS,
    REFERENCE_K_RANGE,
    REFERENCE_RANDOM_SIZES,
    InstanceSpec,
    SplitMix64,
    gen_grid,
    gen_random,
)


class TestSplitMix64:
    def test_reference_outputs_seed_zero(self) -> None:
        rng = SplitMix64(0)
        assert rng.next() == 0xE220A8397B1DCDAF
        assert rng.next() == 0x6E789E6AA1B965F4

    def test_below_stays_in_range(self) -> None:
        rng = SplitMix64(42)
        assert all(0 <= rng.below(7) < 7 for _ in range(1000))

    def test_below_invalid_bound_raises(self) -> None:
        with pytest.raises(ValueError, match="positive"):
            SplitMix64(1).below(0)


class TestGenGrid:
    @pytest.mark.parametrize("p, q, m", [(2, 2, 4), (6, 6, 60), (3, 12, 57), (12, 12, 264)])
    def test_arc_count(self, p: int, q: int, m: int) -> None:
        net = gen_grid(p, q)
        assert net.n == p * q
        assert net.m == m
        assert (net.s, net.t) == (1, p * q)

    def test_arc_order(self) -> None:
        net = gen_grid(2, 3)
        assert net.arcs == ((1, 2), (2, 3), (4, 5), (5, 6), (1, 4), (2, 5), (3, 6))

    def test_too_small_raises(self) -> None:
        with pytest.raises(ValueError, match="at least 2 rows"):
            gen_grid(1, 5)


class TestGenRandom:
    def test_deterministic(self) -> None:
        assert gen_random(20, 60, 7) == gen_random(20, 60, 7)

    def test_seed_changes_network(self) -> None:
        assert gen_random(20, 60, 7).arcs != gen_random(20, 60, 8).arcs

    def test_hamiltonian_cycle_first(self) -> None:
        net = gen_random(10, 30, 3)
        cycle = net.arcs[:10]
        assert sorted(u for u, _ in cycle) == list(range(1, 11))
        for (_, v), (u, _) in zip(cycle, cycle[1:] + cycle[:1]):
            assert v == u

    def test_endpoints(self) -> None:
        net = gen_random(10, 30, 3)
        assert (net.s, net.t) == (1, 10)

    def test_complete_digraph(self) -> None:
        net = gen_random(5, 20, 1)
        assert net.m == 20

    def test_too_many_arcs_raises(self) -> None:
        with pytest.raises(ValueError, match="Arc count"):
            gen_random(4, 13, 1)

    def test_too_few_arcs_raises(self) -> None:
        with pytest.raises(ValueError, match="Arc count"):
            gen_random(4, 3, 1)

    @given(
        n=st.integers(min_value=2, max_value=30),
        extra=st.integers(min_value=0, max_value=100),
        seed=st.integers(min_value=0, max_value=2**64 - 1),
    )
    def test_arc_count_and_validity(self, n: int, extra: int, seed: int) -> None:
        m = min(n + extra, n * (n - 1))
        net = gen_random(n, m, seed)
        assert net.m == m
        assert len(set(net.arcs)) == m


class TestInstanceSpec:
    def test_random_id(self) -> None:
        spec = InstanceSpec.random(100, 500, 3)
        assert spec.instance_id == "R_100_500_3"
        assert spec.group_id == "R_100_500"

    def test_grid_id(self) -> None:
        spec = InstanceSpec.grid(6, 6)
        assert spec.instance_id == "G_6_6"
        assert spec.group_id == "G_6_6"

    @pytest.mark.parametrize("instance_id", ["R_12_24_5", "G_3_12"])
    def test_parse_round_trip(self, instance_id: str) -> None:
        assert InstanceSpec.parse(instance_id).instance_id == instance_id

    def test_parse_invalid_raises(self) -> None:
        with pytest.raises(ValueError, match="Invalid instance id"):
            InstanceSpec.parse("G_6")

    def test_unknown_kind_raises(self) -> None:
        with pytest.raises(ValueError, match="Unknown instance kind"):
            InstanceSpec(kind="torus")

    def test_random_spec_validates(self) -> None:
        with pytest.raises(ValueError, match="n <= m"):
            InstanceSpec.random(10, 5, 1)

    def test_build_matches_generators(self) -> None:
        assert InstanceSpec.parse("G_3_4").build() == gen_grid(3, 4)
        assert InstanceSpec.parse("R_8_16_2").build() == gen_random(8, 16, 2)

    def test_reference_families(self) -> None:
        assert (6, 6) in REFERENCE_GRIDS
        assert (500, 5000) in REFERENCE_RANDOM_SIZES
        assert REFERENCE_K_RANGE == tuple(range(3, 11))
