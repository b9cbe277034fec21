"""Tests for the network and paths text formats."""

from pathlib import Path

import pytest

from kdissim.formats import (
    PATHS_HEADER,
    format_network,
    format_paths,
    parse_network,
    parse_paths,
    read_network,
    read_paths,
    resolve_instance,
    write_network,
    write_paths,
)
from kdissim.instances import gen_grid
from kdissim.ipm import ipm
from kdissim.network import DirectedNetwork


class TestNetworkFormat:
    def test_header_and_arcs(self, g22: DirectedNetwork) -> None:
        assert format_network(g22) == "p 4 4 1 4\na 1 2\na 3 4\na 1 3\na 2 4\n"

    def test_file_round_trip(self, tmp_path: Path, g66: DirectedNetwork) -> None:
        write_network(g66, tmp_path / "g66.net")
        assert read_network(tmp_path / "g66.net") == g66

    def test_comments_and_blank_lines(self) -> None:
        net = parse_network("c a comment\n\np 2 1 1 2\nc arcs\na 1 2\n")
        assert net.arcs == ((1, 2),)

    @pytest.mark.parametrize("text, message", [
        ("a 1 2\n", "Line 1: arc before the problem line"),
        ("p 2 1 1 2\np 2 1 1 2\n", "Line 2: second problem line"),
        ("p 2 1 1\n", "Line 1: expected 'p <n> <m> <s> <t>'"),
        ("p 2 1 1 2\na 1 x\n", "Line 2: non-integer field"),
        ("p 2 1 1 2\ne 1 2\n", "Line 2: unknown record type 'e'"),
        ("p 2 2 1 2\na 1 2\n", "declares 2 arcs, found 1"),
        ("c nothing\n", "Missing problem line"),
    ])
    def test_malformed(self, text: str, message: str) -> None:
        with pytest.raises(ValueError, match=message):
            parse_network(text)

    def test_read_error_names_file(self, tmp_path: Path) -> None:
        bad = tmp_path / "bad.net"
        bad.write_text("a 1 2\n")
        with pytest.raises(ValueError, match="bad.net: Line 1"):
            read_network(bad)


class TestPathsFormat:
    def test_format(self, g22: DirectedNetwork) -> None:
        paths = ipm(g22, 2)
        assert format_paths(paths) == f"{PATHS_HEADER}\n1 2 4\n1 3 4\n"

    def test_file_round_trip(self, tmp_path: Path, g66: DirectedNetwork) -> None:
        paths = ipm(g66, 3)
        write_paths(paths, tmp_path / "sol.paths")
        assert read_paths(tmp_path / "sol.paths", g66) == paths

    def test_missing_header(self, g22: DirectedNetwork) -> None:
        with pytest.raises(ValueError, match="must start with"):
            parse_paths("1 2 4\n", g22)

    def test_bad_path_line(self, g22: DirectedNetwork) -> None:
        with pytest.raises(ValueError, match=r"Line 3: \(2, 3\) is not an arc"):
            parse_paths(f"{PATHS_HEADER}\n1 2 4\n1 2 3 4\n", g22)


class TestResolveInstance:
    def test_instance_id(self) -> None:
        instance_id, net = resolve_instance("G_3_4")
        assert instance_id == "G_3_4"
        assert net == gen_grid(3, 4)

    def test_toy(self) -> None:
        instance_id, net = resolve_instance("toy:shared-bridge")
        assert instance_id == "toy:shared-bridge"
        assert net.n == 12

    def test_file(self, tmp_path: Path, g22: DirectedNetwork) -> None:
        write_network(g22, tmp_path / "small.net")
        assert resolve_instance(str(tmp_path / "small.net")) == ("small", g22)

    def test_unknown_token(self) -> None:
        with pytest.raises(ValueError, match="neither a file"):
            resolve_instance("nowhere")
