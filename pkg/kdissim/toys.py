"""Catalog of small illustrative networks.

Each entry carries a network and reference path configurations used to check
the overlap and repetition counts. Definitions live in toys.yaml; a network is
selected by key.
"""

from dataclasses import dataclass, field
from pathlib import Path

import yaml

from kdissim.network import DirectedNetwork, PathSeq, SolutionPaths

_TOYS_FILE = Path(__file__).parent / "toys.yaml"


@dataclass(frozen=True)
class ToyNetwork:
    """A catalog network with its named reference configurations."""

    key: str
    name: str
    network: DirectedNetwork
    paths: dict[str, SolutionPaths] = field(default_factory=dict)
    # Raw per-path arc-index lists; may contain loops.
    walks: dict[str, tuple[tuple[int, ...], ...]] = field(default_factory=dict)


def _load_all() -> dict[str, dict]:
    """Load raw toy definitions from YAML."""
    with open(_TOYS_FILE) as f:
        return yaml.safe_load(f)


def available_toys() -> list[str]:
    """Return the list of available toy keys."""
    return list(_load_all().keys())


def load_toy(key: str) -> ToyNetwork:
    """Load a ToyNetwork by key from toys.yaml.

    Raises KeyError if the key is not found.
    """
    toys = _load_all()
    if key not in toys:
        available = ", ".join(sorted(toys.keys()))
        raise KeyError(f"Unknown toy network '{key}'. Available: {available}")

    raw = toys[key]
    net = DirectedNetwork(
        n=raw["n"], arcs=tuple(tuple(a) for a in raw["arcs"]), s=raw["s"], t=raw["t"],
    )

    paths = {
        name: tuple(PathSeq.from_nodes(net, nodes) for nodes in config)
        for name, config in raw.get("paths", {}).items()
    }

    walks = {}
    for name, config in raw.get("walks", {}).items():
        arc_lists = []
        for walk in config:
            ids = [net.arc_id(u, v) for u, v in walk]
            if any(a is None for a in ids):
                raise ValueError(f"Walk '{name}' of toy '{key}' uses an arc not in the network")
            arc_lists.append(tuple(a for a in ids if a is not None))
        walks[name] = tuple(arc_lists)

    return ToyNetwork(key=key, name=raw["name"], network=net, paths=paths, walks=walks)
