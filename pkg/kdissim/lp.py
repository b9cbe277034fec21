"""LP relaxations: two interchangeable engines, the solve report and the gap formula."""

import logging
import time
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.optimize import OptimizeResult, linprog

from kdissim.model import MilpModel, Sense
from kdissim.simplex import SolverError, simplex

log = logging.getLogger(__name__)

BACKENDS = ("highs", "simplex")
GAP_SNAP_TOL = 1e-6


class SolveStatus(str, Enum):
    OPTIMAL = "optimal"
    FEASIBLE_TIME_LIMIT = "feasible_time_limit"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"
    # Time limit hit before any feasible point was found.
    TIME_LIMIT = "time_limit"


@dataclass(frozen=True)
class SolveReport:
    """Outcome of an LP or branch-and-bound solve, in the model's own sense."""

    status: SolveStatus
    objective: float | None
    assignment: tuple[float, ...] | None
    bound: float | None
    nodes: int
    time_ms: float

    @property
    def has_solution(self) -> bool:
        return self.assignment is not None


@dataclass(frozen=True)
class LpOutcome:
    """One LP solve in minimization form."""

    status: SolveStatus
    value: float | None = None
    x: np.ndarray | None = None


class LpEngine(ABC):
    """Solves the relaxation of a fixed model under per-call bound overrides.

    Maximization models are negated, so every value an engine returns is to
    be minimized.
    """

    def __init__(self, model: MilpModel) -> None:
        self.sign = 1.0 if model.sense is Sense.MIN else -1.0
        self.c = self.sign * model.objective_vector()
        self.a_ub, self.b_ub, self.a_eq, self.b_eq = model.constraint_matrices()
        self.lower, self.upper = model.bounds()

    @abstractmethod
    def solve(
        self,
        lower: np.ndarray | None = None,
        upper: np.ndarray | None = None,
        time_limit_s: float | None = None,
    ) -> LpOutcome: ...


class HighsEngine(LpEngine):
    """HiGHS dual simplex through scipy.optimize.linprog."""

    def solve(
        self,
        lower: np.ndarray | None = None,
        upper: np.ndarray | None = None,
        time_limit_s: float | None = None,
    ) -> LpOutcome:
        lo = self.lower if lower is None else lower
        hi = self.upper if upper is None else upper
        bounds = [
            (None if np.isneginf(low) else low, None if np.isposinf(high) else high)
            for low, high in zip(lo, hi)
        ]
        options: dict[str, float | bool] = {}
        if time_limit_s is not None:
            options["time_limit"] = max(time_limit_s, 1e-3)
        res = self._linprog(bounds, options)
        if res.status == 4:
            # Presolve could not tell infeasible from unbounded.
            res = self._linprog(bounds, {**options, "presolve": False})
        if res.status == 0:
            return LpOutcome(SolveStatus.OPTIMAL, float(res.fun), np.asarray(res.x))
        if res.status == 2:
            return LpOutcome(SolveStatus.INFEASIBLE)
        if res.status == 3:
            return LpOutcome(SolveStatus.UNBOUNDED)
        if res.status == 1 and time_limit_s is not None:
            return LpOutcome(SolveStatus.TIME_LIMIT)
        raise SolverError(f"HiGHS failed: {res.message}")

    def _linprog(self, bounds: list[tuple[float | None, float | None]],
                 options: dict[str, float | bool]) -> OptimizeResult:
        return linprog(
            self.c,
            A_ub=self.a_ub if self.a_ub.shape[0] else None,
            b_ub=self.b_ub if self.a_ub.shape[0] else None,
            A_eq=self.a_eq if self.a_eq.shape[0] else None,
            b_eq=self.b_eq if self.a_eq.shape[0] else None,
            bounds=bounds,
            method="highs",
            options=options,
        )


class SimplexEngine(LpEngine):
    """The package's own dense bounded-variable simplex."""

    def __init__(self, model: MilpModel) -> None:
        super().__init__(model)
        self.dense_ub = self.a_ub.toarray()
        self.dense_eq = self.a_eq.toarray()

    def solve(
        self,
        lower: np.ndarray | None = None,
        upper: np.ndarray | None = None,
        time_limit_s: float | None = None,
    ) -> LpOutcome:
        res = simplex(
            self.c, self.dense_ub, self.b_ub, self.dense_eq, self.b_eq,
            self.lower if lower is None else lower,
            self.upper if upper is None else upper,
        )
        if res.status == "infeasible":
            return LpOutcome(SolveStatus.INFEASIBLE)
        if res.status == "unbounded":
            return LpOutcome(SolveStatus.UNBOUNDED)
        return LpOutcome(SolveStatus.OPTIMAL, res.objective, res.x)


def make_engine(model: MilpModel, backend: str = "highs") -> LpEngine:
    if backend == "highs":
        return HighsEngine(model)
    if backend == "simplex":
        return SimplexEngine(model)
    raise ValueError(f"Unknown LP backend '{backend}'. Must be one of: {', '.join(BACKENDS)}")


def solve_lp(
    model: MilpModel, backend: str = "highs", time_limit_ms: int | None = None,
) -> SolveReport:
    """Solve the LP relaxation of `model` (integrality ignored, bounds kept)."""
    start = time.monotonic()
    engine = make_engine(model, backend)
    limit = None if time_limit_ms is None else time_limit_ms / 1000
    outcome = engine.solve(time_limit_s=limit)
    elapsed = (time.monotonic() - start) * 1000

    if outcome.status is not SolveStatus.OPTIMAL or outcome.x is None or outcome.value is None:
        log.info("LP relaxation of '%s': %s", model.name, outcome.status.value)
        return SolveReport(outcome.status, None, None, None, 0, elapsed)

    value = engine.sign * outcome.value
    log.info("LP relaxation of '%s': optimal %.6g in %.0f ms", model.name, value, elapsed)
    return SolveReport(
        SolveStatus.OPTIMAL, value, tuple(float(v) for v in outcome.x), value, 0, elapsed,
    )


def _snap(value: float) -> float:
    nearest = round(value)
    return float(nearest) if abs(value - nearest) <= GAP_SNAP_TOL else value


def gap(f_star: float, f_lr: float) -> float:
    """Integer programming gap 100 (f* - f_LR) / |f*|, in percent.

    f* = 0 gives 0 when the relaxation is also 0 and 100 otherwise.
    """
    f_star, f_lr = _snap(f_star), _snap(f_lr)
    if f_star == 0:
        return 0.0 if f_lr == 0 else 100.0
    return 100.0 * (f_star - f_lr) / abs(f_star)
