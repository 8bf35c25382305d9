"""Dense two-phase simplex solver for small linear programs.

Solves  min c.x  s.t.  A_i.x (<=|>=|=) b_i,  x >= 0.

Phase 1 minimizes the sum of artificial variables to find a basic feasible
solution; phase 2 minimizes the actual objective. Both entering and leaving
variables follow Bland's smallest-index rule, which excludes cycling at the
cost of extra pivots. The envelopment problems solved here have a handful
of constraints and at most ~80 columns, so neither sparsity nor a more
aggressive pivot rule is worth the complexity.
"""

import math
from dataclasses import dataclass

import numpy as np

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

FEASIBILITY_TOL = 1e-9
_PIVOT_TOL = 1e-10
_MAX_PIVOTS = 10_000


class SolverError(Exception):
    """The solver failed in a way valid inputs should never trigger."""


@dataclass(frozen=True)
class LinearProgram:
    """Minimization LP over nonnegative variables."""

    objective: tuple[float, ...]
    constraints: tuple[tuple[float, ...], ...]
    senses: tuple[str, ...]  # one of "<=", ">=", "=" per row
    rhs: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "objective", tuple(float(v) for v in self.objective))
        object.__setattr__(
            self, "constraints", tuple(tuple(float(v) for v in row) for row in self.constraints)
        )
        object.__setattr__(self, "senses", tuple(self.senses))
        object.__setattr__(self, "rhs", tuple(float(v) for v in self.rhs))
        n = len(self.objective)
        if not (len(self.constraints) == len(self.senses) == len(self.rhs)):
            raise ValueError("constraint matrix, senses, and rhs lengths differ")
        for row in self.constraints:
            if len(row) != n:
                raise ValueError(f"constraint row of length {len(row)}, expected {n}")
        for s in self.senses:
            if s not in ("<=", ">=", "="):
                raise ValueError(f"unknown constraint sense {s!r}")
        values = list(self.objective) + list(self.rhs) + [v for r in self.constraints for v in r]
        if not all(math.isfinite(v) for v in values):
            raise ValueError("non-finite coefficient in linear program")


@dataclass(frozen=True)
class LpSolution:
    status: str
    objective: float | None
    x: tuple[float, ...] | None


def _run_simplex(T: np.ndarray, basis: list[int], allowed: np.ndarray) -> str:
    """Pivot until optimal or unbounded. Cost row holds reduced costs."""
    m = T.shape[0] - 1
    for _ in range(_MAX_PIVOTS):
        entering = -1
        for j in range(T.shape[1] - 1):
            if allowed[j] and T[-1, j] < -_PIVOT_TOL:
                entering = j
                break
        if entering < 0:
            return OPTIMAL
        ratios = [
            (T[i, -1] / T[i, entering]) if T[i, entering] > _PIVOT_TOL else math.inf
            for i in range(m)
        ]
        best_ratio = min(ratios, default=math.inf)
        if math.isinf(best_ratio):
            return UNBOUNDED
        # Bland again: among the minimum-ratio rows, evict the smallest index.
        leaving = min(
            (i for i in range(m) if ratios[i] <= best_ratio + _PIVOT_TOL),
            key=lambda i: basis[i],
        )
        _pivot(T, leaving, entering)
        basis[leaving] = entering
    raise SolverError("pivot limit exceeded")


def _pivot(T: np.ndarray, row: int, col: int) -> None:
    T[row, :] /= T[row, col]
    for r in range(T.shape[0]):
        if r != row and T[r, col] != 0.0:
            T[r, :] -= T[r, col] * T[row, :]


def solve_lp(lp: LinearProgram) -> LpSolution:
    """Solve the program; statuses are optimal, infeasible, or unbounded."""
    n = len(lp.objective)
    m = len(lp.constraints)
    A = np.array(lp.constraints, dtype=float).reshape(m, n)
    b = np.array(lp.rhs, dtype=float)
    senses = list(lp.senses)

    # Normalize to b >= 0 so slack columns of <= rows can seed the basis.
    for i in range(m):
        if b[i] < 0:
            A[i, :] *= -1.0
            b[i] *= -1.0
            if senses[i] == "<=":
                senses[i] = ">="
            elif senses[i] == ">=":
                senses[i] = "<="

    n_slack = sum(1 for s in senses if s == "<=")
    n_surplus = sum(1 for s in senses if s == ">=")
    n_art = sum(1 for s in senses if s in (">=", "="))
    cols = n + n_slack + n_surplus + n_art

    T = np.zeros((m + 1, cols + 1))
    T[:m, :n] = A
    T[:m, -1] = b
    basis: list[int] = []
    art_start = n + n_slack + n_surplus
    slack_i = surplus_i = art_i = 0
    for i in range(m):
        if senses[i] == "<=":
            T[i, n + slack_i] = 1.0
            basis.append(n + slack_i)
            slack_i += 1
        else:
            if senses[i] == ">=":
                T[i, n + n_slack + surplus_i] = -1.0
                surplus_i += 1
            T[i, art_start + art_i] = 1.0
            basis.append(art_start + art_i)
            art_i += 1

    allowed = np.ones(cols, dtype=bool)
    if n_art:
        # Phase 1: minimize the artificial sum, written as reduced costs.
        T[-1, art_start:cols] = 1.0
        for r, bc in enumerate(basis):
            if bc >= art_start:
                T[-1, :] -= T[r, :]
        status = _run_simplex(T, basis, allowed)
        if status != OPTIMAL:
            raise SolverError(f"phase 1 ended {status}")
        if -T[-1, -1] > FEASIBILITY_TOL:
            return LpSolution(status=INFEASIBLE, objective=None, x=None)
        _expel_artificials(T, basis, art_start)
        allowed[art_start:] = False

    # Phase 2: install the real objective as reduced costs over the basis.
    T[-1, :] = 0.0
    T[-1, :n] = lp.objective
    for r, bc in enumerate(basis):
        coef = lp.objective[bc] if 0 <= bc < n else 0.0
        if coef != 0.0:
            T[-1, :] -= coef * T[r, :]
    status = _run_simplex(T, basis, allowed)
    if status == UNBOUNDED:
        return LpSolution(status=UNBOUNDED, objective=None, x=None)

    x = np.zeros(cols)
    for r, bc in enumerate(basis):
        if bc >= 0:
            x[bc] = T[r, -1]
    x_vars = np.clip(x[:n], 0.0, None)
    objective = float(np.dot(lp.objective, x_vars))
    return LpSolution(status=OPTIMAL, objective=objective, x=tuple(float(v) for v in x_vars))


def _expel_artificials(T: np.ndarray, basis: list[int], art_start: int) -> None:
    """Pivot basic artificials out; rows that cannot pivot are redundant."""
    for r, bc in enumerate(basis):
        if bc < art_start:
            continue
        pivot_col = -1
        for j in range(art_start):
            if abs(T[r, j]) > _PIVOT_TOL:
                pivot_col = j
                break
        if pivot_col >= 0:
            _pivot(T, r, pivot_col)
            basis[r] = pivot_col
        else:
            # Redundant constraint: zero the row so it can never pivot again.
            T[r, :] = 0.0
            basis[r] = -1
