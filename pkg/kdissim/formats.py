"""Text formats: networks (`p`/`a` lines) and solution path files."""

import logging
from collections.abc import Sequence
from pathlib import Path

from kdissim.instances import InstanceSpec
from kdissim.network import DirectedNetwork, PathSeq, SolutionPaths
from kdissim.toys import load_toy

log = logging.getLogger(__name__)

PATHS_HEADER = "# kdissim-paths 1"
TOY_PREFIX = "toy:"


def format_network(net: DirectedNetwork) -> str:
    lines = [f"p {net.n} {net.m} {net.s} {net.t}"]
    lines += [f"a {u} {v}" for u, v in net.arcs]
    return "\n".join(lines) + "\n"


def parse_network(text: str) -> DirectedNetwork:
    """Parse a network; lines starting with `c` are comments.

    Raises ValueError naming the offending line.
    """
    header: tuple[int, int, int, int] | None = None
    arcs: list[tuple[int, int]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        fields = line.split()
        if not fields or fields[0] == "c":
            continue
        try:
            values = [int(f) for f in fields[1:]]
        except ValueError:
            raise ValueError(f"Line {lineno}: non-integer field in '{line.strip()}'") from None
        if fields[0] == "p":
            if header is not None:
                raise ValueError(f"Line {lineno}: second problem line")
            if len(values) != 4:
                raise ValueError(f"Line {lineno}: expected 'p <n> <m> <s> <t>'")
            header = (values[0], values[1], values[2], values[3])
        elif fields[0] == "a":
            if header is None:
                raise ValueError(f"Line {lineno}: arc before the problem line")
            if len(values) != 2:
                raise ValueError(f"Line {lineno}: expected 'a <tail> <head>'")
            arcs.append((values[0], values[1]))
        else:
            raise ValueError(f"Line {lineno}: unknown record type '{fields[0]}'")

    if header is None:
        raise ValueError("Missing problem line 'p <n> <m> <s> <t>'")
    n, m, s, t = header
    if len(arcs) != m:
        raise ValueError(f"Problem line declares {m} arcs, found {len(arcs)}")
    return DirectedNetwork(n=n, arcs=tuple(arcs), s=s, t=t)


def read_network(path: str | Path) -> DirectedNetwork:
    try:
        return parse_network(Path(path).read_text())
    except ValueError as e:
        raise ValueError(f"{path}: {e}") from None


def write_network(net: DirectedNetwork, path: str | Path) -> None:
    Path(path).write_text(format_network(net))
    log.info("Wrote network with %d nodes and %d arcs to %s", net.n, net.m, path)


def format_paths(paths: Sequence[PathSeq]) -> str:
    lines = [PATHS_HEADER] + [" ".join(str(v) for v in p.nodes) for p in paths]
    return "\n".join(lines) + "\n"


def parse_paths(text: str, net: DirectedNetwork) -> SolutionPaths:
    lines = text.splitlines()
    if not lines or lines[0].strip() != PATHS_HEADER:
        raise ValueError(f"Paths file must start with '{PATHS_HEADER}'")
    paths = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            nodes = [int(v) for v in line.split()]
            paths.append(PathSeq.from_nodes(net, nodes))
        except ValueError as e:
            raise ValueError(f"Line {lineno}: {e}") from None
    return tuple(paths)


def read_paths(path: str | Path, net: DirectedNetwork) -> SolutionPaths:
    try:
        return parse_paths(Path(path).read_text(), net)
    except ValueError as e:
        raise ValueError(f"{path}: {e}") from None


def write_paths(paths: Sequence[PathSeq], path: str | Path) -> None:
    Path(path).write_text(format_paths(paths))
    log.info("Wrote %d paths to %s", len(paths), path)


def resolve_instance(token: str) -> tuple[str, DirectedNetwork]:
    """(instance id, network) for a file path, an instance id or `toy:<key>`."""
    if token.startswith(TOY_PREFIX):
        toy = load_toy(token[len(TOY_PREFIX):])
        return token, toy.network
    file = Path(token)
    if file.is_file():
        return file.stem, read_network(file)
    try:
        spec = InstanceSpec.parse(token)
    except ValueError:
        raise ValueError(f"'{token}' is neither a file, an instance id nor toy:<key>") from None
    return spec.instance_id, spec.build()
