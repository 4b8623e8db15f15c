"""Dense symmetric linear algebra on top of the kernel layer.

Eigendecomposition uses cyclic Jacobi rotations (deterministic, accurate at
the matrix sizes this package targets, n up to a few hundred).  Matrices are
plain float64 numpy arrays; ``as_symmetric`` is the validation boundary.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels

__all__ = [
    "EigenDecomposition",
    "NotPositiveDefiniteError",
    "EighConvergenceError",
    "as_symmetric",
    "eigh",
    "eigvalsh",
    "cholesky_spd",
    "solve_spd",
    "kyfan_sum",
]


class NotPositiveDefiniteError(ValueError):
    """Cholesky pivot failure; ``pivot`` is the offending index."""

    def __init__(self, pivot: int, value: float):
        self.pivot = pivot
        self.value = value
        super().__init__(f"matrix is not positive definite: pivot {pivot} = {value:.3e}")


class EighConvergenceError(RuntimeError):
    def __init__(self, residual: float, sweeps: int):
        self.residual = residual
        super().__init__(f"Jacobi sweeps exhausted after {sweeps} sweeps, off-norm {residual:.3e}")


def as_symmetric(m, tol: float = 1e-8) -> np.ndarray:
    """Validate symmetry (within ``tol`` * scale) and return an exactly
    symmetric float64 copy."""
    a = np.asarray(m, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    scale = max(1.0, float(np.abs(a).max(initial=0.0)))
    skew = float(np.abs(a - a.T).max(initial=0.0))
    if skew > tol * scale:
        raise ValueError(f"matrix is not symmetric: max asymmetry {skew:.3e}")
    return (a + a.T) / 2.0


@dataclass(frozen=True)
class EigenDecomposition:
    """Full spectral factorization; values sorted descending, vectors are
    orthonormal columns aligned with values."""

    values: np.ndarray
    vectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.vectors * self.values) @ self.vectors.T


def eigh(m) -> EigenDecomposition:
    """Eigendecomposition of a symmetric matrix, eigenvalues descending.

    Ties are broken by original (post-rotation) index, so repeated calls on
    identical input give identical output.  Eigenvectors within a degenerate
    eigenspace are an arbitrary orthonormal basis.
    """
    a = as_symmetric(m)
    n = a.shape[0]
    if n == 0:
        return EigenDecomposition(np.zeros(0), np.zeros((0, 0)))
    d, v, off, sweeps = kernels.jacobi_eigh(a, True)
    if off > 1e-10 * max(1.0, np.linalg.norm(a)):
        raise EighConvergenceError(off, sweeps)
    order = np.argsort(-d, kind="stable")
    return EigenDecomposition(d[order], v[:, order])


def eigvalsh(m) -> np.ndarray:
    """Eigenvalues only (descending), skipping vector accumulation."""
    a = as_symmetric(m)
    if a.shape[0] == 0:
        return np.zeros(0)
    d, _, off, sweeps = kernels.jacobi_eigh(a, False)
    if off > 1e-10 * max(1.0, np.linalg.norm(a)):
        raise EighConvergenceError(off, sweeps)
    return np.sort(d)[::-1]


def cholesky_spd(m) -> np.ndarray:
    """Lower Cholesky factor of a symmetric positive definite matrix."""
    a = as_symmetric(m)
    tol = 1e-12 * max(1.0, float(np.linalg.norm(a)))
    l, info = kernels.chol_factor(a, tol)
    if info >= 0:
        raise NotPositiveDefiniteError(info, float(a[info, info]))
    return l


def solve_spd(m, b) -> np.ndarray:
    """Solve M x = b for symmetric positive definite M."""
    l = cholesky_spd(m)
    return kernels.solve_lower_t(l, kernels.solve_lower(l, np.asarray(b, dtype=np.float64)))


def kyfan_sum(m, k: float) -> float:
    """Sum of the k largest eigenvalues, linearly interpolated for real k.

    For k = floor(k) + f this is lambda_1 + ... + lambda_floor(k) plus
    f * lambda_(floor(k)+1); the value of the variational top-k program for
    fixed matrix data.
    """
    a = as_symmetric(m)
    n = a.shape[0]
    if not (0.0 <= k <= n):
        raise ValueError(f"k={k} outside [0, {n}]")
    vals = eigvalsh(a)
    whole = int(np.floor(k))
    frac = k - whole
    total = float(vals[:whole].sum())
    if frac > 0.0:
        total += frac * float(vals[whole])
    return total
