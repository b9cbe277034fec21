"""Turn K possibly looping unit flows into K simple s-t paths."""

import logging
from collections import Counter

from kdissim.formulations import RawSolution, SolutionError
from kdissim.network import DirectedNetwork, SolutionPaths
from kdissim.shortest import bfs_shortest_path

log = logging.getLogger(__name__)


def remove_loops(raw: RawSolution, net: DirectedNetwork) -> SolutionPaths:
    """Extract K fewest-arc paths from the support of the solution.

    Each arc starts with capacity equal to the number of input paths using it.
    Every extraction consumes one unit on its arcs, so the aggregate usage of
    the output never exceeds the input's and no objective can get worse.
    Output order is extraction order.
    """
    capacity: Counter[int] = Counter()
    for arcs in raw.arc_sets:
        capacity.update(arcs)

    paths = []
    for k in range(len(raw.arc_sets)):
        path = bfs_shortest_path(net, allowed=+capacity)
        if path is None:
            raise SolutionError(
                f"Support disconnected after {k} of {len(raw.arc_sets)} paths; input is not a flow"
            )
        capacity.subtract(path.arcs)
        log.debug("Extracted path %d with %d arcs", k, path.length)
        paths.append(path)
    return tuple(paths)


def loopless(paths: SolutionPaths) -> bool:
    return all(p.simple for p in paths)


def as_raw(paths: SolutionPaths, objective: float = 0.0) -> RawSolution:
    """Wrap already decoded paths for loop removal."""
    return RawSolution(arc_sets=tuple(p.arcs for p in paths), objective=objective)
