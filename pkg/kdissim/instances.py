"""Seeded generators for the two instance families: random networks and grids.

Random networks R_{n,m} get a directed Hamiltonian cycle over a random node
permutation and then m - n further arcs drawn uniformly among the absent ordered
pairs. Grids G_{p,q} number nodes row-major from the top-left corner and carry
rightward and downward arcs only.
"""

import logging
import re
from dataclasses import dataclass

from kdissim.network import DirectedNetwork

log = logging.getLogger(__name__)

_MASK64 = (1 << 64) - 1

# Instance families of the reference experiments.
REFERENCE_RANDOM_SIZES = ((100, 500), (100, 1000), (300, 1500), (300, 3000), (500, 2500), (500, 5000))
REFERENCE_GRIDS = ((3, 12), (4, 36), (6, 6), (12, 12))
REFERENCE_K_RANGE = tuple(range(3, 11))
REFERENCE_SEEDS = tuple(range(1, 31))


class SplitMix64:
    """The splitmix64 generator: a 64-bit Weyl sequence passed through a mixer."""

    GAMMA = 0x9E3779B97F4A7C15

    def __init__(self, seed: int) -> None:
        self._state = seed & _MASK64

    def next(self) -> int:
        self._state = (self._state + self.GAMMA) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        """Uniform integer in [0, bound), rejecting the biased top of the 64-bit range."""
        if bound < 1:
            raise ValueError(f"Bound must be positive, got {bound}")
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            r = self.next()
            if r < limit:
                return r % bound


def gen_grid(p: int, q: int) -> DirectedNetwork:
    """Grid with p rows and q columns, s = 1 top-left and t = pq bottom-right.

    Arc order: rightward arcs row by row, then downward arcs column by column.
    """
    if p < 2 or q < 2:
        raise ValueError(f"Grid needs at least 2 rows and 2 columns, got {p}x{q}")

    def node(r: int, c: int) -> int:
        return r * q + c + 1

    arcs = [(node(r, c), node(r, c + 1)) for r in range(p) for c in range(q - 1)]
    arcs += [(node(r, c), node(r + 1, c)) for c in range(q) for r in range(p - 1)]
    return DirectedNetwork(n=p * q, arcs=tuple(arcs), s=1, t=p * q)


def gen_random(n: int, m: int, seed: int) -> DirectedNetwork:
    """Random network with a Hamiltonian cycle plus m - n uniformly drawn arcs."""
    if n < 2:
        raise ValueError(f"Random network needs at least 2 nodes, got {n}")
    if not n <= m <= n * (n - 1):
        raise ValueError(f"Arc count must lie in {n}..{n * (n - 1)} for n={n}, got {m}")

    rng = SplitMix64(seed)

    perm = list(range(1, n + 1))
    for i in range(n - 1, 0, -1):
        j = rng.below(i + 1)
        perm[i], perm[j] = perm[j], perm[i]

    arcs = [(perm[i], perm[(i + 1) % n]) for i in range(n)]
    present = set(arcs)
    while len(arcs) < m:
        u = rng.below(n) + 1
        v = rng.below(n) + 1
        if u == v or (u, v) in present:
            continue
        present.add((u, v))
        arcs.append((u, v))

    log.debug("Generated R_%d_%d with seed %d", n, m, seed)
    return DirectedNetwork(n=n, arcs=tuple(arcs), s=1, t=n)


_ID_PATTERN = re.compile(r"^(?:(R)_(\d+)_(\d+)_(\d+)|(G)_(\d+)_(\d+))$")


@dataclass(frozen=True)
class InstanceSpec:
    """A reproducible instance: a random network (n, m, seed) or a grid (p, q)."""

    kind: str
    n: int = 0
    m: int = 0
    seed: int = 0
    p: int = 0
    q: int = 0

    def __post_init__(self) -> None:
        if self.kind == "random":
            if not self.n <= self.m <= self.n * (self.n - 1):
                raise ValueError(
                    f"Random instance needs n <= m <= n(n-1), got n={self.n}, m={self.m}"
                )
        elif self.kind == "grid":
            if self.p < 2 or self.q < 2:
                raise ValueError(f"Grid instance needs p, q >= 2, got {self.p}x{self.q}")
        else:
            raise ValueError(f"Unknown instance kind '{self.kind}'. Must be random or grid")

    @classmethod
    def random(cls, n: int, m: int, seed: int) -> "InstanceSpec":
        return cls(kind="random", n=n, m=m, seed=seed)

    @classmethod
    def grid(cls, p: int, q: int) -> "InstanceSpec":
        return cls(kind="grid", p=p, q=q)

    @classmethod
    def parse(cls, instance_id: str) -> "InstanceSpec":
        """Parse an id of the form R_n_m_seed or G_p_q."""
        match = _ID_PATTERN.match(instance_id)
        if match is None:
            raise ValueError(f"Invalid instance id '{instance_id}'. Expected R_n_m_seed or G_p_q")
        if match.group(1):
            n, m, seed = (int(match.group(i)) for i in (2, 3, 4))
            return cls.random(n, m, seed)
        return cls.grid(int(match.group(6)), int(match.group(7)))

    @property
    def instance_id(self) -> str:
        if self.kind == "random":
            return f"R_{self.n}_{self.m}_{self.seed}"
        return f"G_{self.p}_{self.q}"

    @property
    def group_id(self) -> str:
        """Id shared by instances that differ only in their seed."""
        if self.kind == "random":
            return f"R_{self.n}_{self.m}"
        return self.instance_id

    def build(self) -> DirectedNetwork:
        if self.kind == "random":
            return gen_random(self.n, self.m, self.seed)
        return gen_grid(self.p, self.q)
