"""The presence bound R*: the least per-arc path count that still routes K paths."""

import logging
import math

from kdissim.flow import max_flow, max_unit_flow
from kdissim.formulations import build_minmax
from kdissim.lp import SolveStatus, solve_lp
from kdissim.network import DirectedNetwork
from kdissim.simplex import SolverError

log = logging.getLogger(__name__)

LP_ROUND_TOL = 1e-6


def rstar_flow(net: DirectedNetwork, K: int) -> int:
    """ceil(K / F) with F the number of arc-disjoint s-t paths, checked by a flow at that capacity."""
    if K < 1:
        raise ValueError(f"K must be at least 1, got {K}")
    disjoint = max_unit_flow(net)
    if disjoint == 0:
        raise ValueError(f"Target {net.t} is unreachable from source {net.s}")
    r = math.ceil(K / disjoint)
    routed = max_flow(net, capacity=r, limit=K)
    if routed < K:
        raise SolverError(f"Flow at capacity {r} routes {routed} < {K} paths")
    return r


def rstar_lp(net: DirectedNetwork, K: int, backend: str = "highs") -> int:
    """Ceiling of the LP relaxation value of the min-max presence model."""
    report = solve_lp(build_minmax(net, K), backend=backend)
    if report.status is not SolveStatus.OPTIMAL or report.objective is None:
        raise ValueError(f"Min-max presence relaxation is {report.status.value}")
    return math.ceil(report.objective - LP_ROUND_TOL)


def rstar(net: DirectedNetwork, K: int, cross_check: bool = False, backend: str = "highs") -> int:
    """R* from the flow computation, optionally compared with the LP value.

    A disagreement is logged; the flow value is returned either way.
    """
    value = rstar_flow(net, K)
    if cross_check:
        lp_value = rstar_lp(net, K, backend)
        if lp_value != value:
            log.warning("R* disagreement for K=%d: flow gives %d, LP gives %d", K, value, lp_value)
    return value
