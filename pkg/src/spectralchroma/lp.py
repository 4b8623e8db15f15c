"""Small dense linear programming: two-phase primal simplex, Bland's rule.

Built for the coclique-covering programs in this package (tens of rows, up to
a few thousand columns): a dense tableau with deterministic anti-cycling
pivoting beats anything fancier at that scale.  Equality rows are kept as
equalities (phase-1 artificials) so dual values stay meaningful.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["LinearProgram", "LPSolution", "solve_lp", "SimplexCycleError"]

_PIVOT_TOL = 1e-9


class SimplexCycleError(RuntimeError):
    """Iteration guard tripped; unreachable with Bland's rule on finite data."""


@dataclass
class LinearProgram:
    """min/max  c @ x  subject to  A x (<=,=,>=) b,  lower <= x <= upper.

    ``relations`` holds one of "<=", "=", ">=" per row.  Lower bounds default
    to 0; ``upper`` entries may be None (unbounded above).
    """

    sense: str
    c: np.ndarray
    a: np.ndarray
    b: np.ndarray
    relations: list[str]
    lower: np.ndarray | None = None
    upper: list[float | None] | None = None

    def __post_init__(self):
        self.c = np.asarray(self.c, dtype=np.float64).reshape(-1)
        self.a = np.asarray(self.a, dtype=np.float64).reshape(len(self.relations), self.c.shape[0])
        self.b = np.asarray(self.b, dtype=np.float64).reshape(-1)
        if self.sense not in ("min", "max"):
            raise ValueError("sense must be 'min' or 'max'")
        m, n = self.a.shape
        if self.c.shape[0] != n or self.b.shape[0] != m:
            raise ValueError("inconsistent LP dimensions")
        for r in self.relations:
            if r not in ("<=", "=", ">="):
                raise ValueError(f"bad relation {r!r}")
        if not (np.all(np.isfinite(self.c)) and np.all(np.isfinite(self.a)) and np.all(np.isfinite(self.b))):
            raise ValueError("LP data must be finite")


@dataclass
class LPSolution:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: np.ndarray | None = None
    duals: np.ndarray | None = None
    objective: float | None = None
    dual_objective: float | None = None
    feasibility_residual: float = 0.0
    slackness_residual: float = 0.0


class _Tableau:
    """Dense simplex tableau; last row is the reduced-cost row, last column b."""

    def __init__(self, columns: np.ndarray, b: np.ndarray, basis: np.ndarray):
        m = columns.shape[0]
        self.m = m
        self.n = columns.shape[1]
        self.body = np.zeros((m + 1, self.n + 1))
        self.body[:m, : self.n] = columns
        self.body[:m, -1] = b
        self.basis = basis

    def set_cost(self, cost: np.ndarray):
        self.body[-1, : self.n] = cost
        self.body[-1, -1] = 0.0
        for i in range(self.m):
            cb = cost[self.basis[i]]
            if cb != 0.0:
                self.body[-1] -= cb * self.body[i]

    def pivot(self, row: int, col: int):
        body = self.body
        body[row] /= body[row, col]
        colvals = body[:, col].copy()
        colvals[row] = 0.0
        self.body -= np.outer(colvals, body[row])
        body[:, col] = 0.0
        body[row, col] = 1.0
        self.basis[row] = col

    def run(self, allowed: np.ndarray) -> str:
        """Dantzig pricing (most negative reduced cost, lowest index on ties)
        until a degeneracy streak, then Bland's rule, whose lowest-eligible-
        index pivots guarantee termination.  Leaving row: ratio test with
        ties broken by lowest basis index."""
        body = self.body
        guard = 20000 + 200 * (self.m + self.n)
        stalled = 0
        bland = False
        last_obj = self.objective
        for _ in range(guard):
            z = body[-1, : self.n]
            eligible = allowed & (z < -_PIVOT_TOL)
            if not eligible.any():
                return "optimal"
            if bland:
                enter = int(np.flatnonzero(eligible)[0])
            else:
                masked = np.where(eligible, z, 0.0)
                enter = int(np.argmin(masked))
            col = body[: self.m, enter]
            rhs = np.maximum(body[: self.m, -1], 0.0)
            with np.errstate(divide="ignore", invalid="ignore"):
                ratios = np.where(col > _PIVOT_TOL, rhs / np.where(col > _PIVOT_TOL, col, 1.0), np.inf)
            best = float(ratios.min(initial=np.inf))
            if not np.isfinite(best):
                return "unbounded"
            ties = np.flatnonzero(ratios <= best + 1e-12)
            leave = int(ties[np.argmin(self.basis[ties])])
            self.pivot(leave, enter)
            obj = self.objective
            if obj < last_obj - 1e-12:
                stalled = 0
                last_obj = obj
            else:
                stalled += 1
                if stalled > 100:
                    bland = True
        raise SimplexCycleError("pivot guard exceeded")

    @property
    def objective(self) -> float:
        return -float(self.body[-1, -1])

    def solution(self) -> np.ndarray:
        x = np.zeros(self.n)
        for i in range(self.m):
            x[self.basis[i]] = self.body[i, -1]
        return x


def solve_lp(p: LinearProgram) -> LPSolution:
    """Solve with deterministic pivoting; identical inputs give identical bases.

    Dual sign convention (``sense=min``): duals y satisfy b @ y = objective
    with y >= 0 on ">=" rows, y <= 0 on "<=" rows, free on "=" rows.  For
    ``sense=max`` the duals of the equivalent min problem are negated.
    """
    minimize = p.sense == "min"
    c_int = p.c.copy() if minimize else -p.c
    a, b = p.a.copy(), p.b.copy()
    relations = list(p.relations)
    n = a.shape[1]

    # shift lower bounds to zero
    shift = np.zeros(n) if p.lower is None else np.asarray(p.lower, dtype=np.float64)
    if shift.any():
        b = b - a @ shift

    # upper bounds become explicit rows (x_j <= u_j - l_j)
    if p.upper is not None:
        for j, u in enumerate(p.upper):
            if u is None:
                continue
            row = np.zeros(n)
            row[j] = 1.0
            a = np.vstack([a, row])
            b = np.append(b, u - shift[j])
            relations.append("<=")
    m = a.shape[0]

    # orient rows so b >= 0, remembering flips for dual recovery
    row_sign = np.ones(m)
    neg = b < 0
    row_sign[neg] = -1.0
    a[neg] *= -1.0
    b[neg] *= -1.0
    flip = {"<=": ">=", ">=": "<=", "=": "="}
    relations = [flip[r] if s < 0 else r for r, s in zip(relations, row_sign)]

    # columns: structural, slack/surplus, artificial
    blocks = [a]
    slack_of_row: dict[int, int] = {}
    for i, rel in enumerate(relations):
        if rel == "=":
            continue
        col = np.zeros((m, 1))
        col[i, 0] = 1.0 if rel == "<=" else -1.0
        slack_of_row[i] = n + len(slack_of_row)
        blocks.append(col)
    n_slack = len(slack_of_row)
    art_of_row: dict[int, int] = {}
    for i, rel in enumerate(relations):
        if rel in ("=", ">="):
            col = np.zeros((m, 1))
            col[i, 0] = 1.0
            art_of_row[i] = n + n_slack + len(art_of_row)
            blocks.append(col)
    columns = np.hstack(blocks)
    n_total = columns.shape[1]

    basis = np.array(
        [art_of_row.get(i, slack_of_row.get(i, -1)) for i in range(m)], dtype=np.int64
    )
    tab = _Tableau(columns, b, basis)

    if art_of_row:
        cost1 = np.zeros(n_total)
        for j in art_of_row.values():
            cost1[j] = 1.0
        tab.set_cost(cost1)
        tab.run(np.ones(n_total, dtype=bool))
        if tab.objective > 1e-8 * (1.0 + float(np.abs(b).sum())):
            return LPSolution(status="infeasible")
        # pivot leftover zero-value artificials out of the basis when possible
        art_set = set(art_of_row.values())
        for i in range(m):
            if tab.basis[i] in art_set:
                row = tab.body[i, : n + n_slack]
                nz = np.flatnonzero(np.abs(row) > _PIVOT_TOL)
                if nz.size:
                    tab.pivot(i, int(nz[0]))

    cost2 = np.zeros(n_total)
    cost2[:n] = c_int
    tab.set_cost(cost2)
    allowed = np.ones(n_total, dtype=bool)
    for j in art_of_row.values():
        allowed[j] = False
    status = tab.run(allowed)
    if status == "unbounded":
        return LPSolution(status="unbounded")

    x = tab.solution()[:n] + shift
    objective = float(p.c @ x)

    # duals from the final basis: solve B^T y = c_B on the oriented columns
    basis_cols = columns[:, tab.basis]
    try:
        y_std = np.linalg.solve(basis_cols.T, cost2[tab.basis])
    except np.linalg.LinAlgError:
        y_std = np.linalg.lstsq(basis_cols.T, cost2[tab.basis], rcond=None)[0]
    y_min = (y_std * row_sign)[: len(p.relations)]
    duals = y_min if minimize else -y_min
    dual_obj_min = float(y_std @ b) + float(c_int @ shift)
    dual_objective = dual_obj_min if minimize else -dual_obj_min

    return LPSolution(
        status="optimal",
        x=x,
        duals=duals,
        objective=objective,
        dual_objective=dual_objective,
        feasibility_residual=_primal_residual(p, x),
        slackness_residual=_slackness_residual(p, x, duals),
    )


def _primal_residual(p: LinearProgram, x: np.ndarray) -> float:
    ax = p.a @ x
    res = 0.0
    for i, rel in enumerate(p.relations):
        if rel == "<=":
            res = max(res, float(ax[i] - p.b[i]))
        elif rel == ">=":
            res = max(res, float(p.b[i] - ax[i]))
        else:
            res = max(res, abs(float(ax[i] - p.b[i])))
    lower = np.zeros(x.shape[0]) if p.lower is None else np.asarray(p.lower, dtype=np.float64)
    res = max(res, float(np.max(lower - x, initial=0.0)))
    if p.upper is not None:
        for j, u in enumerate(p.upper):
            if u is not None:
                res = max(res, float(x[j] - u))
    return max(res, 0.0)


def _slackness_residual(p: LinearProgram, x: np.ndarray, duals: np.ndarray) -> float:
    ax = p.a @ x
    res = 0.0
    for i in range(len(p.relations)):
        res = max(res, abs(float(duals[i]) * float(ax[i] - p.b[i])))
    return res
