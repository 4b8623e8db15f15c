"""Lovász theta and its weighted k-level generalization, with certification.

``theta_k(G, w, k)`` is the minimum over edge-supported symmetric Z of the
(interpolated) sum of the k largest eigenvalues of sqrt(w)sqrt(w)^T + Z.  It
is computed through the equivalent semidefinite pair

    (upper / "primal")  min  k*eta + tr Y
                        s.t. Y - (sqrt(w)sqrt(w)^T + Z) + eta*I >= 0,
                             Y >= 0,  Z edge-supported
    (lower / "dual")    max  <sqrt(w)sqrt(w)^T, X>
                        s.t. tr X = k,  X_ij = 0 on edges,  0 <= X <= I

One interior-point solve of the lower program yields both witnesses: its
primal iterate is X, and its constraint multipliers assemble into
(eta, Z, Y).  The two sides are then re-evaluated through independent
routes - X by direct inner product after exact cleanup, (eta, Y) rebuilt
from the spectrum of sqrt(w)sqrt(w)^T + Z - so the reported gap does not
trust the solver's own objective bookkeeping.

The bound X <= I is modeled with an explicit slack block S' and entrywise
rows X + S' = I on the upper triangle; the solver itself only sees
equality-constrained standard form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graphs import Graph, complement, validate_weights
from .linalg import as_symmetric, eigh, kyfan_sum
from .sdp import BlockSdp, SdpSolution, solve_sdp

__all__ = [
    "ThetaKResult",
    "SolverFailure",
    "CertificationError",
    "lovasz_theta",
    "theta_k",
    "theta_k_dual",
    "theta_k_primal",
    "evaluate_Z",
    "recover_primal_from_Z",
    "interpolate_dual",
]

_SOLVE_TOL = 1e-9
_GAP_TOL = 1e-6


class SolverFailure(RuntimeError):
    """Interior-point solve did not reach the accuracy contract."""

    def __init__(self, message: str, solution: SdpSolution | None = None):
        self.solution = solution
        if solution is not None:
            message += (
                f" [status={solution.status}, pres={solution.primal_residual:.2e},"
                f" dres={solution.dual_residual:.2e}, relgap={solution.relative_gap:.2e}]"
            )
        super().__init__(message)


class CertificationError(RuntimeError):
    """Two-sided certification failed; carries both objective values."""

    def __init__(self, lower: float, upper: float):
        self.lower = lower
        self.upper = upper
        super().__init__(
            f"duality certification failed: lower {lower!r} vs upper {upper!r}"
        )


@dataclass
class ThetaKResult:
    """Certified value of the weighted theta level with both witnesses."""

    value: float
    k: float
    w: np.ndarray
    dual_x: np.ndarray       # feasible for the trace-k program (lower bound)
    primal_z: np.ndarray     # edge-supported
    primal_y: np.ndarray
    eta: float
    gap: float
    value_lower: float
    value_upper: float
    solver_gap: float        # relative primal-dual gap reported by the solve


def _sqrt_outer(w: np.ndarray) -> np.ndarray:
    r = np.sqrt(w)
    return np.outer(r, r)


def lovasz_theta(g: Graph, tol: float = _GAP_TOL) -> float:
    """max <J, X> s.t. tr X = 1, X zero on edges, X PSD."""
    n = g.n
    if n == 0:
        return 0.0
    p = BlockSdp([n], sense="max")
    p.set_objective_block(0, np.ones((n, n)))
    p.add_constraint([(0, i, i, 1.0) for i in range(n)], 1.0)
    for i, j in g.edge_list:
        p.add_constraint([(0, i, j, 1.0)], 0.0)
    sol = solve_sdp(p, tol=_SOLVE_TOL)
    if sol.status != "optimal" or sol.relative_gap > tol:
        raise SolverFailure("theta solve failed", sol)
    return 0.5 * (sol.primal_objective + sol.dual_objective)


def _build_level_program(g: Graph, w: np.ndarray, k: float) -> BlockSdp:
    """Standard form of the trace-k program with the explicit X <= I slack block."""
    n = g.n
    p = BlockSdp([n, n], sense="max")
    p.set_objective_block(0, _sqrt_outer(w))
    p.add_constraint([(0, i, i, 1.0) for i in range(n)], float(k))
    for i, j in g.edge_list:
        p.add_constraint([(0, i, j, 1.0)], 0.0)
    for i in range(n):
        for j in range(i, n):
            p.add_constraint([(0, i, j, 1.0), (1, i, j, 1.0)], 1.0 if i == j else 0.0)
    return p


def _extract_multipliers(g: Graph, y: np.ndarray) -> tuple[float, np.ndarray, np.ndarray]:
    """(eta, Z, Y) from the dual multipliers of ``_build_level_program``.

    Row order there: trace row, one row per edge, then upper-triangle bound
    rows.  Z flips sign so that the PSD constraint reads
    Y - (sqrt(w)sqrt(w)^T + Z) + eta*I >= 0.
    """
    n = g.n
    eta = float(y[0])
    z = np.zeros((n, n))
    for idx, (i, j) in enumerate(g.edge_list):
        z[i, j] = z[j, i] = -float(y[1 + idx])
    ymat = np.zeros((n, n))
    pos = 1 + g.m
    for i in range(n):
        for j in range(i, n):
            ymat[i, j] = ymat[j, i] = float(y[pos])
            pos += 1
    return eta, z, ymat


def _clean_dual_witness(g: Graph, x: np.ndarray, k: float) -> np.ndarray:
    """Exactly zero the edge entries and restore the trace, keeping the
    perturbation at the solver-residual scale."""
    n = g.n
    x = (x + x.T) / 2.0
    for i, j in g.edges:
        x[i, j] = 0.0
        x[j, i] = 0.0
    x += ((k - np.trace(x)) / n) * np.eye(n)
    return x


def _recover_level_witness(m_eig, k: float) -> tuple[float, np.ndarray, float]:
    """Optimal (eta, Y) for fixed Z from the spectrum of sqrt(w)sqrt(w)^T + Z.

    eta is the ceil(k)-th eigenvalue and Y collects the spectral mass above
    eta; the objective k*eta + tr Y equals the interpolated top-k sum.
    """
    vals, vecs = m_eig.values, m_eig.vectors
    n = vals.shape[0]
    mm = max(1, min(n, math.ceil(k)))
    eta = float(vals[mm - 1])
    coeffs = np.maximum(vals[:mm] - eta, 0.0)
    y = (vecs[:, :mm] * coeffs) @ vecs[:, :mm].T
    value = k * eta + float(coeffs.sum())
    return eta, y, value


def _analytic_result(g: Graph, w: np.ndarray, k: float) -> ThetaKResult:
    """Closed forms at k = 0, k = n, or w = 0 (no strictly feasible point
    exists for the trace-k program at the endpoints)."""
    n = g.n
    wt1 = float(w.sum())
    outer = _sqrt_outer(w)
    if wt1 == 0.0:
        x, z, y, eta, value = np.zeros((n, n)), np.zeros((n, n)), np.zeros((n, n)), 0.0, 0.0
    elif k == 0:
        x, z, y, eta, value = np.zeros((n, n)), np.zeros((n, n)), np.zeros((n, n)), wt1, 0.0
    else:  # k == n
        x, z, y, eta, value = np.eye(n), np.zeros((n, n)), outer, 0.0, wt1
    return ThetaKResult(
        value=value, k=float(k), w=w, dual_x=x, primal_z=z, primal_y=y, eta=eta,
        gap=0.0, value_lower=value, value_upper=value, solver_gap=0.0,
    )


def _solve_level(g: Graph, w, k: float, gap_tol: float = _GAP_TOL) -> ThetaKResult:
    w = validate_weights(g, w)
    n = g.n
    if not (0.0 <= k <= n):
        raise ValueError(f"k={k} outside [0, {n}]")
    if n == 0:
        return ThetaKResult(0.0, float(k), w, np.zeros((0, 0)), np.zeros((0, 0)),
                            np.zeros((0, 0)), 0.0, 0.0, 0.0, 0.0, 0.0)
    if w.sum() == 0.0 or k == 0 or k == n:
        return _analytic_result(g, w, k)

    prog = _build_level_program(g, w, k)
    sol = solve_sdp(prog, tol=_SOLVE_TOL, max_iter=300)
    if sol.status == "failed":
        raise SolverFailure("level solve failed", sol)

    outer = _sqrt_outer(w)
    x = _clean_dual_witness(g, sol.x[:n, :n].copy(), k)
    value_lower = float(np.tensordot(outer, x))

    eta_raw, z, _ = _extract_multipliers(g, sol.y)
    m_eig = eigh(outer + z)
    eta, ymat, value_upper = _recover_level_witness(m_eig, k)

    value = 0.5 * (value_lower + value_upper)
    gap = abs(value_upper - value_lower)
    if gap > gap_tol * (1.0 + abs(value)):
        raise CertificationError(value_lower, value_upper)
    return ThetaKResult(
        value=value, k=float(k), w=w, dual_x=x, primal_z=z, primal_y=ymat,
        eta=eta, gap=gap, value_lower=value_lower, value_upper=value_upper,
        solver_gap=sol.relative_gap,
    )


def theta_k(g: Graph, w, k: float) -> ThetaKResult:
    """Certified weighted theta level: solves the SDP pair, re-evaluates both
    witnesses independently, and requires the two-sided gap to close."""
    return _solve_level(g, w, k)


def theta_k_dual(g: Graph, w, k: float) -> tuple[float, np.ndarray]:
    """Value and feasible X for the trace-k (max) formulation."""
    res = _solve_level(g, w, k)
    return res.value, res.dual_x


def theta_k_primal(g: Graph, w, k: float) -> tuple[float, np.ndarray, np.ndarray, float]:
    """Value and feasible (Z, Y, eta) for the eigenvalue-sum (min) formulation."""
    res = _solve_level(g, w, k)
    return res.value, res.primal_z, res.primal_y, res.eta


def evaluate_Z(g: Graph, w, k: float, z) -> float:
    """Interpolated top-k eigenvalue sum of sqrt(w)sqrt(w)^T + Z; an upper
    bound on the level value for every edge-supported Z."""
    w = validate_weights(g, w)
    z = as_symmetric(z)
    if z.shape[0] != g.n:
        raise ValueError("Z has wrong dimension")
    _require_edge_support(g, z)
    return kyfan_sum(_sqrt_outer(w) + z, k)


def _require_edge_support(g: Graph, z: np.ndarray, tol: float = 1e-12):
    mask = np.ones_like(z, dtype=bool)
    for i, j in g.edges:
        mask[i, j] = False
        mask[j, i] = False
    worst = float(np.abs(z[mask]).max(initial=0.0))
    if worst > tol:
        raise ValueError(f"matrix has off-edge entry of magnitude {worst:.3e}")


def recover_primal_from_Z(z, w, k: int) -> tuple[float, np.ndarray]:
    """Optimal (eta, Y) for a fixed edge-supported Z at integer level k:
    eta is the k-th eigenvalue of sqrt(w)sqrt(w)^T + Z and Y the spectral
    mass above it."""
    if k != int(k) or k < 1:
        raise ValueError("k must be a positive integer")
    w = np.asarray(w, dtype=np.float64)
    z = as_symmetric(z)
    eta, y, _ = _recover_level_witness(eigh(_sqrt_outer(np.maximum(w, 0.0)) + z), int(k))
    return eta, y


def interpolate_dual(x, k: float, ell: float, n: int) -> np.ndarray:
    """Lift a feasible X from trace level k to level ell >= k by blending
    toward the identity; the objective never decreases."""
    if not (0.0 <= k < ell <= n) or k == n:
        raise ValueError(f"need 0 <= k < ell <= n, got k={k}, ell={ell}, n={n}")
    x = as_symmetric(x)
    t = (ell - k) / (n - k)
    return (1.0 - t) * x + t * np.eye(n)


def theta_of_complement(g: Graph) -> float:
    """Convenience: Lovász theta of the complement graph."""
    return lovasz_theta(complement(g))
