"""Pure-numpy kernel implementations (fallback path).

Same algorithms as ``numba_impl`` — cyclic Jacobi, right-looking Cholesky,
substitution solves, sparse-constraint contractions — expressed with
vectorized row/column operations instead of scalar loops.
"""

from __future__ import annotations

import numpy as np

MAX_JACOBI_SWEEPS = 60
JACOBI_TOL = 1e-12


def jacobi_eigh(a, want_vectors=True):
    """Cyclic Jacobi diagonalization of a symmetric matrix.

    Returns (diag, vectors, off_norm, sweeps); eigenvalues are the diagonal
    entries in matrix order (unsorted), columns of ``vectors`` align with them.
    """
    a = np.array(a, dtype=np.float64)
    n = a.shape[0]
    v = np.eye(n)
    norm = np.linalg.norm(a)
    target = JACOBI_TOL * norm
    sweeps = 0
    off = _off_norm(a)
    while off > target and sweeps < MAX_JACOBI_SWEEPS:
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0 or abs(apq) < 1e-300:
                    continue
                tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.hypot(1.0, tau))
                else:
                    t = -1.0 / (-tau + np.hypot(1.0, tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # a <- J^T a J with J the (p,q) plane rotation
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = 0.0
                a[q, p] = 0.0
                if want_vectors:
                    vp = v[:, p].copy()
                    vq = v[:, q].copy()
                    v[:, p] = c * vp - s * vq
                    v[:, q] = s * vp + c * vq
        sweeps += 1
        off = _off_norm(a)
    return np.diag(a).copy(), v, off, sweeps


def _off_norm(a):
    # computed from the off-diagonal entries directly: the norm-minus-diagonal
    # identity cancels catastrophically once the matrix is nearly diagonal
    return float(np.sqrt(2.0) * np.linalg.norm(np.triu(a, 1)))


def chol_factor(a, tol):
    """Lower Cholesky factor; returns (L, info) with info=-1 on success,
    else the index of the first non-positive pivot."""
    a = np.asarray(a, dtype=np.float64)
    n = a.shape[0]
    l = np.zeros((n, n))
    for j in range(n):
        col = a[j:, j] - l[j:, :j] @ l[j, :j]
        d = col[0]
        if d <= tol:
            return l, j
        root = np.sqrt(d)
        l[j, j] = root
        if j + 1 < n:
            l[j + 1:, j] = col[1:] / root
    return l, -1


def solve_lower(l, b):
    """Solve L X = B (forward substitution; B may be 1-D or 2-D)."""
    l = np.asarray(l)
    b = np.asarray(b, dtype=np.float64)
    vector = b.ndim == 1
    x = b.reshape(b.shape[0], -1).copy()
    n = l.shape[0]
    for i in range(n):
        if i:
            x[i] -= l[i, :i] @ x[:i]
        x[i] /= l[i, i]
    return x[:, 0] if vector else x


def solve_lower_t(l, b):
    """Solve L^T X = B (backward substitution)."""
    l = np.asarray(l)
    b = np.asarray(b, dtype=np.float64)
    vector = b.ndim == 1
    x = b.reshape(b.shape[0], -1).copy()
    n = l.shape[0]
    for i in range(n - 1, -1, -1):
        if i + 1 < n:
            x[i] -= l[i + 1:, i] @ x[i + 1:]
        x[i] /= l[i, i]
    return x[:, 0] if vector else x


def schur_assemble(ptr, rows, cols, vals, x, u):
    """Normal-system matrix B[i,j] = <A_i, X A_j U> for sparse symmetric A_i.

    Constraints are CSR-style triplet lists (both orientations stored);
    X and U are dense symmetric (block-diagonal) matrices.
    """
    m = len(ptr) - 1
    b = np.empty((m, m))
    for i in range(m):
        lo, hi = ptr[i], ptr[i + 1]
        acc = np.zeros(len(rows))
        for s in range(lo, hi):
            acc += vals[s] * (x[cols[s], rows] * u[cols, rows[s]])
        b[i] = np.add.reduceat(acc * vals, ptr[:-1])
    return b


def apply_constraints(ptr, rows, cols, vals, mat):
    """y_i = <A_i, M> for all constraints (M need not be symmetric)."""
    g = vals * mat[cols, rows]
    return np.add.reduceat(g, ptr[:-1])


def adjoint_constraints(ptr, rows, cols, vals, y, n):
    """Dense sum_i y_i A_i."""
    owner = np.repeat(np.arange(len(ptr) - 1), np.diff(ptr))
    out = np.zeros((n, n))
    np.add.at(out, (rows, cols), vals * y[owner])
    return out
