"""Depth-first LP-based branch-and-bound."""

import logging
import math
import time
from collections.abc import Mapping
from dataclasses import dataclass

import numpy as np

from kdissim.lp import LpEngine, SolveReport, SolveStatus, make_engine
from kdissim.model import MilpModel
from kdissim.simplex import SolverError

log = logging.getLogger(__name__)

INTEGRALITY_TOL = 1e-6
PRUNE_TOL = 1e-6
PROGRESS_EVERY = 500


@dataclass
class _Node:
    lower: np.ndarray
    upper: np.ndarray
    # Parent LP value (or the known objective bound), valid for this subtree.
    bound: float
    # Root and warm-start nodes have no parent LP.
    top: bool = False


def _most_fractional(x: np.ndarray, int_idx: np.ndarray) -> int | None:
    """Integer column farthest from integrality; lowest index wins ties."""
    if len(int_idx) == 0:
        return None
    values = x[int_idx]
    dist = np.abs(values - np.round(values))
    k = int(np.argmax(dist))
    if dist[k] <= INTEGRALITY_TOL:
        return None
    return int(int_idx[k])


class _Search:
    def __init__(self, model: MilpModel, engine: LpEngine, deadline: float | None) -> None:
        self.model = model
        self.engine = engine
        self.deadline = deadline
        self.int_idx = model.integer_indices()
        self.integral_objective = model.objective_is_integral()
        self.incumbent: float | None = None
        self.incumbent_x: np.ndarray | None = None
        self.nodes = 0

    def remaining(self) -> float | None:
        return None if self.deadline is None else self.deadline - time.monotonic()

    def prunable(self, value: float) -> bool:
        if self.incumbent is None:
            return False
        if self.integral_objective:
            return value > self.incumbent - 1 + PRUNE_TOL
        return value >= self.incumbent - PRUNE_TOL

    def offer(self, value: float, x: np.ndarray) -> None:
        if self.integral_objective:
            value = float(round(value))
        if self.incumbent is None or value < self.incumbent - PRUNE_TOL:
            snapped = x.copy()
            snapped[self.int_idx] = np.round(snapped[self.int_idx])
            self.incumbent = value
            self.incumbent_x = snapped
            log.debug("New incumbent %.6g at node %d", value, self.nodes)

    def round_at_root(self, node: _Node, x: np.ndarray) -> None:
        """Fix the integer columns at their rounded values and re-solve for the rest."""
        lower, upper = node.lower.copy(), node.upper.copy()
        fixed = np.clip(np.round(x[self.int_idx]), lower[self.int_idx], upper[self.int_idx])
        lower[self.int_idx] = fixed
        upper[self.int_idx] = fixed
        outcome = self.engine.solve(lower, upper, self.remaining())
        if outcome.status is SolveStatus.OPTIMAL and outcome.x is not None:
            assert outcome.value is not None
            self.offer(outcome.value, outcome.x)


def _start_node(
    model: MilpModel, engine: LpEngine, start: Mapping[int, float], floor: float,
) -> _Node | None:
    """Node with the given integer columns fixed, or None when the values are out of bounds."""
    lower, upper = engine.lower.copy(), engine.upper.copy()
    for j, value in start.items():
        if not model.variables[j].integer:
            raise ValueError(f"Start value for continuous column '{model.variables[j].name}'")
        if not lower[j] <= value <= upper[j]:
            log.info("Start value %g for '%s' is out of bounds, start ignored",
                     value, model.variables[j].name)
            return None
        lower[j] = upper[j] = value
    return _Node(lower, upper, floor, top=True)


def solve_bb(
    model: MilpModel,
    time_limit_ms: int | None = None,
    backend: str = "highs",
    objective_bound: float | None = None,
    start: Mapping[int, float] | None = None,
) -> SolveReport:
    """Exact solve by branch-and-bound on the most fractional integer column.

    Nodes are explored depth-first, the child on the rounding side of the
    branching value first. When the objective takes integer values only,
    nodes are cut off at incumbent - 1.

    objective_bound: a value no optimum can beat (a lower bound when minimizing).
    It bounds every node, so an incumbent reaching it ends the search.
    start: values for some integer columns; the subproblem with those columns
    fixed is explored before the root.
    """
    start_time = time.monotonic()
    deadline = None if time_limit_ms is None else start_time + time_limit_ms / 1000
    engine = make_engine(model, backend)
    search = _Search(model, engine, deadline)

    for j in search.int_idx:
        if not (math.isfinite(engine.lower[j]) and math.isfinite(engine.upper[j])):
            raise ValueError(f"Integer variable '{model.variables[j].name}' needs finite bounds")

    floor = -math.inf if objective_bound is None else engine.sign * objective_bound
    stack = [_Node(engine.lower.copy(), engine.upper.copy(), floor, top=True)]
    if start:
        warm = _start_node(model, engine, start, floor)
        if warm is not None:
            stack.append(warm)
    timed_out = False

    while stack:
        remaining = search.remaining()
        if remaining is not None and remaining <= 0:
            timed_out = True
            break
        node = stack.pop()
        if search.prunable(node.bound):
            continue

        search.nodes += 1
        if search.nodes % PROGRESS_EVERY == 0:
            log.debug("%d nodes, %d open, incumbent %s", search.nodes, len(stack), search.incumbent)

        outcome = engine.solve(node.lower, node.upper, remaining)
        if outcome.status is SolveStatus.TIME_LIMIT:
            stack.append(node)
            timed_out = True
            break
        if outcome.status is SolveStatus.UNBOUNDED:
            if node.top:
                elapsed = (time.monotonic() - start_time) * 1000
                return SolveReport(SolveStatus.UNBOUNDED, None, None, None, search.nodes, elapsed)
            raise SolverError("Unbounded relaxation below a bounded root")
        if outcome.status is SolveStatus.INFEASIBLE:
            continue
        assert outcome.x is not None and outcome.value is not None

        x = outcome.x
        value = max(outcome.value, node.bound)
        if search.prunable(value):
            continue

        j = _most_fractional(x, search.int_idx)
        if j is None:
            search.offer(outcome.value, x)
            continue

        if node.top:
            search.round_at_root(node, x)

        floor_j = math.floor(x[j])
        down = _Node(node.lower, node.upper.copy(), value)
        down.upper[j] = floor_j
        up = _Node(node.lower.copy(), node.upper, value)
        up.lower[j] = floor_j + 1
        # Last pushed is explored first.
        if x[j] - floor_j >= 0.5:
            stack.extend((down, up))
        else:
            stack.extend((up, down))

    elapsed = (time.monotonic() - start_time) * 1000
    sign = engine.sign

    if search.incumbent is None:
        status = SolveStatus.TIME_LIMIT if timed_out else SolveStatus.INFEASIBLE
        bound = min((n.bound for n in stack), default=None) if timed_out else None
        log.info("Branch-and-bound on '%s': %s after %d nodes", model.name, status.value,
                 search.nodes)
        return SolveReport(
            status, None, None,
            None if bound is None or not math.isfinite(bound) else sign * bound,
            search.nodes, elapsed,
        )

    assert search.incumbent_x is not None
    if timed_out:
        status = SolveStatus.FEASIBLE_TIME_LIMIT
        bound = min([n.bound for n in stack] + [search.incumbent])
        if search.integral_objective and math.isfinite(bound):
            bound = math.ceil(bound - PRUNE_TOL)
        log.warning("Branch-and-bound on '%s' stopped at the time limit after %d nodes",
                    model.name, search.nodes)
    else:
        status = SolveStatus.OPTIMAL
        bound = search.incumbent

    objective = sign * search.incumbent
    log.info(
        "Branch-and-bound on '%s': %s, incumbent %.6g, bound %.6g, %d nodes, %.0f ms",
        model.name, status.value, objective, sign * bound, search.nodes, elapsed,
    )
    return SolveReport(
        status,
        objective,
        tuple(float(v) for v in search.incumbent_x),
        sign * bound if math.isfinite(bound) else None,
        search.nodes,
        elapsed,
    )
