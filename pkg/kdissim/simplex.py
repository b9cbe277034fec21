"""Dense bounded-variable primal simplex.

Solves min c'x s.t. A_ub x <= b_ub, A_eq x = b_eq, lower <= x <= upper, with
infinite bounds allowed. Nonbasic columns rest on a finite bound (free columns
rest at zero). Phase 1 minimizes the sum of one artificial per row; phase 2
fixes the artificials at zero. Dantzig pricing, switching to Bland's rule
after a run of degenerate pivots.
"""

import logging
from dataclasses import dataclass

import numpy as np

log = logging.getLogger(__name__)

FEASIBILITY_TOL = 1e-7
PIVOT_TOL = 1e-9
COST_TOL = 1e-9
REFACTOR_EVERY = 50
DEGENERATE_RUN = 50


class SolverError(RuntimeError):
    """Raised when an LP cannot be solved (iteration limit, singular basis)."""


@dataclass(frozen=True)
class SimplexResult:
    status: str  # optimal | infeasible | unbounded
    x: np.ndarray | None
    objective: float | None
    iterations: int


class _Tableau:
    """Revised-simplex state: explicit basis inverse, full primal vector."""

    def __init__(
        self, a: np.ndarray, b: np.ndarray, lower: np.ndarray, upper: np.ndarray,
        x: np.ndarray, basis: np.ndarray, max_iter: int,
    ) -> None:
        self.a = a
        self.b = b
        self.lower = lower
        self.upper = upper
        self.x = x
        self.basis = basis
        self.is_basic = np.zeros(a.shape[1], dtype=bool)
        self.is_basic[basis] = True
        self.max_iter = max_iter
        self.iterations = 0
        self.binv = np.eye(a.shape[0])
        self.refactor()

    def refactor(self) -> None:
        if len(self.basis) == 0:
            return
        try:
            self.binv = np.linalg.inv(self.a[:, self.basis])
        except np.linalg.LinAlgError as e:
            raise SolverError(f"Singular basis after {self.iterations} iterations") from e
        nonbasic = np.where(self.is_basic, 0.0, self.x)
        self.x[self.basis] = self.binv @ (self.b - self.a @ nonbasic)

    def optimize(self, cost: np.ndarray) -> str:
        degenerate = 0
        since_refactor = 0
        while True:
            if self.iterations >= self.max_iter:
                raise SolverError(f"Simplex iteration limit {self.max_iter} reached")
            if since_refactor >= REFACTOR_EVERY:
                self.refactor()
                since_refactor = 0

            y = cost[self.basis] @ self.binv
            d = cost - y @ self.a
            room_up = self.x < self.upper - FEASIBILITY_TOL
            room_down = self.x > self.lower + FEASIBILITY_TOL
            eligible = ~self.is_basic & (
                ((d < -COST_TOL) & room_up) | ((d > COST_TOL) & room_down)
            )
            if not eligible.any():
                return "optimal"

            bland = degenerate >= DEGENERATE_RUN
            if bland:
                j = int(np.flatnonzero(eligible)[0])
            else:
                j = int(np.argmax(np.where(eligible, np.abs(d), -1.0)))
            direction = 1.0 if d[j] < 0 else -1.0

            alpha = self.binv @ self.a[:, j]
            rate = -direction * alpha
            xb = self.x[self.basis]
            limits = np.full(len(self.basis), np.inf)
            with np.errstate(invalid="ignore"):
                down = rate < -PIVOT_TOL
                limits[down] = (xb[down] - self.lower[self.basis][down]) / -rate[down]
                up = rate > PIVOT_TOL
                limits[up] = (self.upper[self.basis][up] - xb[up]) / rate[up]
            limits = np.maximum(limits, 0.0)

            flip = self.upper[j] - self.lower[j]
            step = float(limits.min()) if len(limits) else np.inf
            if not np.isfinite(step) and not np.isfinite(flip):
                return "unbounded"

            self.iterations += 1
            if flip <= step:
                self.x[self.basis] += flip * rate
                self.x[j] = self.upper[j] if direction > 0 else self.lower[j]
                degenerate = 0
                continue

            ties = np.flatnonzero(limits <= step + 1e-12)
            if bland:
                r = int(ties[np.argmin(self.basis[ties])])
            else:
                r = int(ties[np.argmax(np.abs(rate[ties]))])

            leaving = int(self.basis[r])
            self.x[self.basis] += step * rate
            self.x[j] += direction * step
            self.x[leaving] = self.lower[leaving] if rate[r] < 0 else self.upper[leaving]

            row = self.binv[r] / alpha[r]
            self.binv -= np.outer(alpha, row)
            self.binv[r] = row
            self.basis[r] = j
            self.is_basic[leaving] = False
            self.is_basic[j] = True
            since_refactor += 1
            degenerate = degenerate + 1 if step <= 1e-12 else 0


def _resting_value(lower: np.ndarray, upper: np.ndarray) -> np.ndarray:
    return np.where(np.isfinite(lower), lower, np.where(np.isfinite(upper), upper, 0.0))


def simplex(
    c: np.ndarray,
    a_ub: np.ndarray,
    b_ub: np.ndarray,
    a_eq: np.ndarray,
    b_eq: np.ndarray,
    lower: np.ndarray,
    upper: np.ndarray,
    max_iter: int | None = None,
) -> SimplexResult:
    n = len(c)
    m_ub, m_eq = a_ub.shape[0], a_eq.shape[0]
    m = m_ub + m_eq
    if np.any(lower > upper):
        return SimplexResult("infeasible", None, None, 0)

    # Columns: structural | slacks | artificials
    cols = n + m_ub + m
    a = np.zeros((m, cols))
    a[:m_ub, :n] = a_ub
    a[m_ub:, :n] = a_eq
    a[:m_ub, n:n + m_ub] = np.eye(m_ub)
    b = np.concatenate([b_ub, b_eq]).astype(float)
    lo = np.concatenate([lower, np.zeros(m_ub), np.zeros(m)]).astype(float)
    hi = np.concatenate([upper, np.full(m_ub, np.inf), np.full(m, np.inf)]).astype(float)

    x = np.zeros(cols)
    x[:n + m_ub] = _resting_value(lo[:n + m_ub], hi[:n + m_ub])
    artificial = np.arange(n + m_ub, cols)
    residual = b - a[:, :n + m_ub] @ x[:n + m_ub]
    a[np.arange(m), artificial] = np.where(residual >= 0, 1.0, -1.0)
    x[artificial] = np.abs(residual)

    budget = max_iter if max_iter is not None else max(1000, 20 * (m + cols))
    tableau = _Tableau(a, b, lo, hi, x, artificial.copy(), budget)

    phase1 = np.zeros(cols)
    phase1[artificial] = 1.0
    tableau.optimize(phase1)
    infeasibility = float(tableau.x[artificial].sum())
    log.debug("Simplex phase 1 done after %d iterations, infeasibility %.3g",
              tableau.iterations, infeasibility)
    if infeasibility > FEASIBILITY_TOL * max(1.0, float(np.abs(b).max(initial=0.0))):
        return SimplexResult("infeasible", None, None, tableau.iterations)

    hi[artificial] = 0.0
    tableau.x[artificial] = 0.0
    tableau.refactor()
    phase2 = np.zeros(cols)
    phase2[:n] = c
    status = tableau.optimize(phase2)
    if status == "unbounded":
        return SimplexResult("unbounded", None, None, tableau.iterations)

    tableau.refactor()
    solution = np.clip(tableau.x[:n], lower, upper)
    log.debug("Simplex optimal after %d iterations", tableau.iterations)
    return SimplexResult("optimal", solution, float(c @ solution), tableau.iterations)
