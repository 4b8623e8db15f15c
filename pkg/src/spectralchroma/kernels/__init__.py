"""Hot numeric kernels with two interchangeable implementations.

Every kernel exists twice with identical semantics: a numba ``@njit`` version
(``numba_impl``) and a vectorized pure-numpy version (``numpy_impl``).  The
active path is chosen by the environment variable ``SPECTRAL_CHROMA_KERNELS``:

* ``auto`` (default) - numba when importable, else numpy
* ``numba``          - require the JIT path
* ``numpy``          - force the fallback

``benchmarks/kernel_bench.py`` compares the two paths on representative
workloads; ``set_backend`` switches at runtime for tests and benchmarks.
"""

from __future__ import annotations

import os

_KERNEL_NAMES = (
    "jacobi_eigh",
    "chol_factor",
    "solve_lower",
    "solve_lower_t",
    "schur_assemble",
    "apply_constraints",
    "adjoint_constraints",
)

_active: dict = {"name": None, "impl": None}


def _load(name: str):
    if name == "numpy":
        from . import numpy_impl
        return numpy_impl
    if name == "numba":
        from . import numba_impl
        return numba_impl
    raise ValueError(f"unknown kernel backend {name!r}")


def set_backend(name: str) -> str:
    """Select the kernel implementation; returns the backend actually active."""
    name = name.lower()
    if name == "auto":
        try:
            impl = _load("numba")
            name = "numba"
        except ImportError:
            impl = _load("numpy")
            name = "numpy"
    else:
        impl = _load(name)
    _active["name"] = name
    _active["impl"] = impl
    return name


def active_backend() -> str:
    if _active["impl"] is None:
        set_backend(os.environ.get("SPECTRAL_CHROMA_KERNELS", "auto"))
    return _active["name"]


def _impl():
    if _active["impl"] is None:
        active_backend()
    return _active["impl"]


def jacobi_eigh(a, want_vectors=True):
    return _impl().jacobi_eigh(a, want_vectors)


def chol_factor(a, tol):
    return _impl().chol_factor(a, tol)


def solve_lower(l, b):
    return _impl().solve_lower(l, b)


def solve_lower_t(l, b):
    return _impl().solve_lower_t(l, b)


def schur_assemble(ptr, rows, cols, vals, x, u):
    return _impl().schur_assemble(ptr, rows, cols, vals, x, u)


def apply_constraints(ptr, rows, cols, vals, mat):
    return _impl().apply_constraints(ptr, rows, cols, vals, mat)


def adjoint_constraints(ptr, rows, cols, vals, y, n):
    return _impl().adjoint_constraints(ptr, rows, cols, vals, y, n)


def warm_up():
    """Run every kernel once on tiny inputs (forces JIT compilation)."""
    import numpy as np

    m = np.array([[2.0, 1.0], [1.0, 2.0]])
    jacobi_eigh(m, True)
    jacobi_eigh(m, False)
    l, info = chol_factor(m, 1e-14)
    solve_lower(l, np.eye(2))
    solve_lower_t(l, np.eye(2))
    ptr = np.array([0, 2], dtype=np.int64)
    rows = np.array([0, 1], dtype=np.int64)
    cols = np.array([1, 0], dtype=np.int64)
    vals = np.array([1.0, 1.0])
    schur_assemble(ptr, rows, cols, vals, m, m)
    apply_constraints(ptr, rows, cols, vals, m)
    adjoint_constraints(ptr, rows, cols, vals, np.array([1.0]), 2)
