"""Dense primal-dual interior-point solver for block semidefinite programs.

Standard form (max sense):

    max  <C, X>   s.t.  <A_i, X> = b_i  (i = 1..m),   X in a product of
                                                       PSD cones (blocks)

with dual  min b@y  s.t.  S = sum_i y_i A_i - C >= 0.  The solver runs an
infeasible-start HKM predictor-corrector with a Mehrotra centering heuristic,
dense Cholesky on the normal system, and an exact minimum-eigenvalue
fraction-to-boundary line search on each block.  All data is dense
block-diagonal; constraints are sparse symmetric triplet lists.

Minimize-sense problems are handled by negating the objective internally.
One solve owns its workspace; distinct solves may run concurrently.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .linalg import as_symmetric

__all__ = [
    "BlockSdp",
    "SdpSolution",
    "SdpCheck",
    "solve_sdp",
    "check_solution",
    "sdp_to_json",
    "sdp_from_json",
]

_STEP_FRACTION = 0.98
_BIG = 1e30


class BlockSdp:
    """Block-structured SDP in equality-constrained standard form.

    ``blocks`` lists the PSD block orders (order-1 blocks model scalars).
    The objective and each constraint matrix are block-diagonal symmetric;
    entries are given as ``(block, i, j, value)`` with i <= j, meaning the
    symmetric pair (i,j) and (j,i) both carry ``value``.
    """

    def __init__(self, blocks: list[int], sense: str = "max"):
        if not blocks or any(int(d) < 1 for d in blocks):
            raise ValueError("blocks must be positive dimensions")
        if sense not in ("max", "min"):
            raise ValueError("sense must be 'max' or 'min'")
        self.blocks = [int(d) for d in blocks]
        self.sense = sense
        self.offsets = np.concatenate([[0], np.cumsum(self.blocks)])
        self.n_total = int(self.offsets[-1])
        self.c = np.zeros((self.n_total, self.n_total))
        self.constraint_entries: list[list[tuple[int, int, int, float]]] = []
        self.rhs: list[float] = []

    # -- construction ---------------------------------------------------------

    def _global_index(self, blk: int, i: int, j: int) -> tuple[int, int]:
        if not (0 <= blk < len(self.blocks)):
            raise ValueError(f"block {blk} out of range")
        d = self.blocks[blk]
        if not (0 <= i < d and 0 <= j < d):
            raise ValueError(f"entry ({i},{j}) out of range for block {blk} of order {d}")
        off = int(self.offsets[blk])
        return off + i, off + j

    def set_objective_entries(self, entries):
        self.c[:, :] = 0.0
        for blk, i, j, v in entries:
            gi, gj = self._global_index(blk, i, j)
            self.c[gi, gj] = v
            self.c[gj, gi] = v

    def set_objective_block(self, blk: int, dense):
        mat = as_symmetric(dense)
        off = int(self.offsets[blk])
        d = self.blocks[blk]
        if mat.shape != (d, d):
            raise ValueError("objective block has wrong shape")
        self.c[off:off + d, off:off + d] = mat

    def add_constraint(self, entries, b: float):
        entries = [(int(blk), int(i), int(j), float(v)) for blk, i, j, v in entries]
        if not entries:
            raise ValueError("constraint must have at least one entry")
        for blk, i, j, v in entries:
            self._global_index(blk, i, j)
            if not np.isfinite(v):
                raise ValueError("constraint entries must be finite")
        self.constraint_entries.append(entries)
        self.rhs.append(float(b))

    @property
    def m(self) -> int:
        return len(self.rhs)

    # -- compiled view --------------------------------------------------------

    def compiled(self):
        """CSR-style triplet arrays with global indices, both orientations."""
        ptr = [0]
        rows, cols, vals = [], [], []
        for entries in self.constraint_entries:
            for blk, i, j, v in entries:
                gi, gj = self._global_index(blk, i, j)
                rows.append(gi)
                cols.append(gj)
                vals.append(v)
                if gi != gj:
                    rows.append(gj)
                    cols.append(gi)
                    vals.append(v)
            ptr.append(len(rows))
        return (
            np.asarray(ptr, dtype=np.int64),
            np.asarray(rows, dtype=np.int64),
            np.asarray(cols, dtype=np.int64),
            np.asarray(vals, dtype=np.float64),
            np.asarray(self.rhs, dtype=np.float64),
        )

    def block_slices(self):
        return [slice(int(self.offsets[t]), int(self.offsets[t + 1])) for t in range(len(self.blocks))]

    def data_inf_norm(self) -> float:
        top = float(np.abs(self.c).max(initial=0.0))
        top = max(top, max((abs(b) for b in self.rhs), default=0.0))
        for entries in self.constraint_entries:
            for _, _, _, v in entries:
                top = max(top, abs(v))
        return top


@dataclass
class SdpSolution:
    status: str  # "optimal" | "inaccurate" | "failed"
    x: np.ndarray
    y: np.ndarray
    s: np.ndarray
    primal_objective: float
    dual_objective: float
    primal_residual: float
    dual_residual: float
    relative_gap: float
    iterations: int
    history: list[dict] = field(default_factory=list)


def _min_eig_blocks(mat, slices) -> float:
    lo = np.inf
    for sl in slices:
        block = np.ascontiguousarray(mat[sl, sl])
        d, _, _, _ = kernels.jacobi_eigh((block + block.T) / 2.0, False)
        lo = min(lo, float(d.min()))
    return lo


def _max_step(l_factor, d_mat, slices) -> float:
    """Largest alpha with M + alpha*dM >= 0, M = L L^T (exact per-block eigs)."""
    w = kernels.solve_lower(l_factor, d_mat)
    t = kernels.solve_lower(l_factor, np.ascontiguousarray(w.T))
    t = (t + t.T) / 2.0
    lo = _min_eig_blocks(t, slices)
    if lo >= -1e-14:
        return _BIG
    return 1.0 / (-lo)


def _chol_ridge(mat):
    """Cholesky with escalating diagonal regularization; None if hopeless."""
    scale = max(1.0, float(np.abs(np.diag(mat)).max(initial=0.0)))
    for ridge in (0.0, 1e-13, 1e-10, 1e-7):
        l, info = kernels.chol_factor(mat + ridge * scale * np.eye(mat.shape[0]), 0.0)
        if info < 0:
            return l
    return None


def solve_sdp(
    p: BlockSdp,
    tol: float = 1e-8,
    optimal_tol: float = 1e-7,
    max_iter: int = 200,
    start_scale: float = 1.0,
) -> SdpSolution:
    """Solve to max(primal res, dual res, relative gap) <= tol.

    Deterministic for identical inputs.  The start point is
    X = S = start_scale * (1 + ||data||_inf) * I, y = 0; ``start_scale``
    exists so independence of the solution from the start can be tested.
    """
    if p.m == 0:
        raise ValueError("constraint list must be nonempty")
    maximize = p.sense == "max"
    c = p.c if maximize else -p.c
    ptr, rows, cols, vals, b = p.compiled()
    n = p.n_total
    slices = p.block_slices()
    norm_b = float(np.linalg.norm(b))
    norm_c = float(np.linalg.norm(c))

    tau0 = start_scale * (1.0 + p.data_inf_norm())
    x = tau0 * np.eye(n)
    s = tau0 * np.eye(n)
    y = np.zeros(p.m)

    history: list[dict] = []
    best = None  # (merit, x, y, s, iteration)
    status = "inaccurate"
    it = 0
    prev_state = None
    retreats = 0

    while True:
        rp = b - kernels.apply_constraints(ptr, rows, cols, vals, x)
        aty = kernels.adjoint_constraints(ptr, rows, cols, vals, y, n)
        rd = c + s - aty
        pobj = float(np.tensordot(c, x))
        dobj = float(b @ y)
        xs = float(np.tensordot(x, s))
        mu = xs / n
        pres = float(np.linalg.norm(rp)) / (1.0 + norm_b)
        dres = float(np.linalg.norm(rd)) / (1.0 + norm_c)
        relgap = abs(pobj - dobj) / (1.0 + abs(pobj) + abs(dobj))
        merit = max(pres, dres, relgap)
        history.append(
            {
                "iteration": it,
                "mu": mu,
                "primal_objective": pobj if maximize else -pobj,
                "dual_objective": dobj if maximize else -dobj,
                "primal_residual": pres,
                "dual_residual": dres,
                "relative_gap": relgap,
                "inner_xs": xs,
                "y_dot_rp": float(y @ rp),
                "rd_dot_x": float(np.tensordot(rd, x)),
            }
        )
        if best is None or merit < best[0]:
            best = (merit, x.copy(), y.copy(), s.copy())
        if merit <= tol:
            status = "optimal"
            break
        if it >= max_iter:
            status = "optimal" if merit <= optimal_tol else "inaccurate"
            break

        ls = _chol_ridge(s)
        if ls is None:
            # step-size retreat toward the previous iterate
            if prev_state is None or retreats >= 5:
                status = "failed" if best[0] > optimal_tol else "optimal"
                break
            xp, yp, sp = prev_state
            x = (x + xp) / 2.0
            y = (y + yp) / 2.0
            s = (s + sp) / 2.0
            retreats += 1
            continue
        u = kernels.solve_lower_t(ls, kernels.solve_lower(ls, np.eye(n)))
        u = (u + u.T) / 2.0

        bmat = kernels.schur_assemble(ptr, rows, cols, vals, x, u)
        lb = _chol_ridge((bmat + bmat.T) / 2.0)
        if lb is None:
            if prev_state is None or retreats >= 5:
                status = "failed" if best[0] > optimal_tol else "optimal"
                break
            xp, yp, sp = prev_state
            x = (x + xp) / 2.0
            y = (y + yp) / 2.0
            s = (s + sp) / 2.0
            retreats += 1
            continue

        lx = _chol_ridge(x)
        if lx is None:
            status = "failed" if best[0] > optimal_tol else "optimal"
            break

        def normal_solve(rhs):
            return kernels.solve_lower_t(lb, kernels.solve_lower(lb, rhs))

        g = kernels.apply_constraints(ptr, rows, cols, vals, x @ rd @ u)
        a_of_u = kernels.apply_constraints(ptr, rows, cols, vals, u)

        # predictor (affine scaling)
        dy_a = normal_solve(g - b)
        ds_a = kernels.adjoint_constraints(ptr, rows, cols, vals, dy_a, n) - rd
        xdsu = x @ ds_a @ u
        dx_a = -x - (xdsu + xdsu.T) / 2.0

        ap_a = min(1.0, _max_step(lx, dx_a, slices))
        ad_a = min(1.0, _max_step(ls, ds_a, slices))
        mu_aff = max(0.0, float(np.tensordot(x + ap_a * dx_a, s + ad_a * ds_a))) / n
        sigma = min(1.0, max((mu_aff / mu) ** 3 if mu > 0 else 0.0, 0.0))
        tau_c = sigma * mu

        # corrector with second-order term
        w2 = dx_a @ ds_a @ u
        cc = kernels.apply_constraints(ptr, rows, cols, vals, w2)
        dy = normal_solve(tau_c * a_of_u - b + g - cc)
        ds = kernels.adjoint_constraints(ptr, rows, cols, vals, dy, n) - rd
        xdsu = x @ ds @ u
        dx = tau_c * u - x - (xdsu + xdsu.T) / 2.0 - (w2 + w2.T) / 2.0

        alpha_p = min(1.0, _STEP_FRACTION * _max_step(lx, dx, slices))
        alpha_d = min(1.0, _STEP_FRACTION * _max_step(ls, ds, slices))

        prev_state = (x.copy(), y.copy(), s.copy())
        x = x + alpha_p * dx
        y = y + alpha_d * dy
        s = s + alpha_d * ds
        x = (x + x.T) / 2.0
        s = (s + s.T) / 2.0
        it += 1

    merit, bx, by, bs = best
    if status == "optimal" and merit > optimal_tol:
        status = "inaccurate"
    # recompute residuals at the returned (best) iterate
    rp = b - kernels.apply_constraints(ptr, rows, cols, vals, bx)
    rd = c + bs - kernels.adjoint_constraints(ptr, rows, cols, vals, by, n)
    pobj = float(np.tensordot(c, bx))
    dobj = float(b @ by)
    sign = 1.0 if maximize else -1.0
    return SdpSolution(
        status=status,
        x=bx,
        y=by * sign,
        s=bs,
        primal_objective=sign * pobj,
        dual_objective=sign * dobj,
        primal_residual=float(np.linalg.norm(rp)) / (1.0 + norm_b),
        dual_residual=float(np.linalg.norm(rd)) / (1.0 + norm_c),
        relative_gap=abs(pobj - dobj) / (1.0 + abs(pobj) + abs(dobj)),
        iterations=it,
        history=history,
    )


@dataclass
class SdpCheck:
    ok: bool
    max_equality_violation: float
    equality_norm: float
    dual_residual: float
    min_eig_x: float
    min_eig_s: float
    gap: float
    relative_gap: float


def check_solution(p: BlockSdp, sol: SdpSolution, tol: float = 1e-6) -> SdpCheck:
    """Independent residual report for a candidate primal-dual pair."""
    ptr, rows, cols, vals, b = p.compiled()
    n = p.n_total
    if sol.x.shape != (n, n):
        raise ValueError("solution X has wrong shape")
    maximize = p.sense == "max"
    sign = 1.0 if maximize else -1.0
    c = p.c if maximize else -p.c
    y_int = sol.y * sign
    rp = b - kernels.apply_constraints(ptr, rows, cols, vals, sol.x)
    rd = c + sol.s - kernels.adjoint_constraints(ptr, rows, cols, vals, y_int, n)
    slices = p.block_slices()
    min_x = _min_eig_blocks(sol.x, slices)
    min_s = _min_eig_blocks(sol.s, slices)
    gap = abs(sol.primal_objective - sol.dual_objective)
    relgap = gap / (1.0 + abs(sol.primal_objective) + abs(sol.dual_objective))
    scale = 1.0 + p.data_inf_norm()
    ok = (
        float(np.abs(rp).max(initial=0.0)) <= tol * (1.0 + float(np.linalg.norm(b)))
        and float(np.abs(rd).max(initial=0.0)) <= tol * scale
        and min_x >= -tol * scale
        and min_s >= -tol * scale
        and relgap <= tol
    )
    return SdpCheck(
        ok=ok,
        max_equality_violation=float(np.abs(rp).max(initial=0.0)),
        equality_norm=float(np.linalg.norm(rp)),
        dual_residual=float(np.abs(rd).max(initial=0.0)),
        min_eig_x=min_x,
        min_eig_s=min_s,
        gap=gap,
        relative_gap=relgap,
    )


# -- debugging import/export ---------------------------------------------------


def sdp_to_json(p: BlockSdp) -> str:
    """Serialize an instance (schema documented in the README)."""
    obj_entries = []
    for blk, sl in enumerate(p.block_slices()):
        block = p.c[sl, sl]
        for i in range(block.shape[0]):
            for j in range(i, block.shape[0]):
                if block[i, j] != 0.0:
                    obj_entries.append([blk, i, j, block[i, j]])
    return json.dumps(
        {
            "schema": 1,
            "blocks": p.blocks,
            "sense": p.sense,
            "objective": obj_entries,
            "constraints": [
                {"b": b, "entries": [list(e) for e in entries]}
                for entries, b in zip(p.constraint_entries, p.rhs)
            ],
        }
    )


def sdp_from_json(text: str) -> BlockSdp:
    data = json.loads(text)
    p = BlockSdp(data["blocks"], data.get("sense", "max"))
    p.set_objective_entries(data.get("objective", []))
    for con in data["constraints"]:
        p.add_constraint([tuple(e) for e in con["entries"]], con["b"])
    return p
