"""Numba ``@njit`` kernel implementations (default path).

Mirrors ``numpy_impl`` function for function; compiled objects are cached on
disk so repeat runs skip JIT cost.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .numpy_impl import JACOBI_TOL, MAX_JACOBI_SWEEPS


@njit(cache=True)
def _jacobi_core(a, v, want_vectors, target, max_sweeps):
    n = a.shape[0]
    sweeps = 0
    off = 0.0
    for i in range(n - 1):
        for j in range(i + 1, n):
            off += 2.0 * a[i, j] * a[i, j]
    off = np.sqrt(off)
    while off > target and sweeps < max_sweeps:
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0 or abs(apq) < 1e-300:
                    continue
                app = a[p, p]
                aqq = a[q, q]
                tau = (aqq - app) / (2.0 * apq)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.hypot(1.0, tau))
                else:
                    t = -1.0 / (-tau + np.hypot(1.0, tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                for i in range(n):
                    if i != p and i != q:
                        aip = a[i, p]
                        aiq = a[i, q]
                        a[i, p] = c * aip - s * aiq
                        a[p, i] = a[i, p]
                        a[i, q] = s * aip + c * aiq
                        a[q, i] = a[i, q]
                a[p, p] = app - t * apq
                a[q, q] = aqq + t * apq
                a[p, q] = 0.0
                a[q, p] = 0.0
                if want_vectors:
                    for i in range(n):
                        vip = v[i, p]
                        viq = v[i, q]
                        v[i, p] = c * vip - s * viq
                        v[i, q] = s * vip + c * viq
        sweeps += 1
        off = 0.0
        for i in range(n - 1):
            for j in range(i + 1, n):
                off += 2.0 * a[i, j] * a[i, j]
        off = np.sqrt(off)
    d = np.empty(n)
    for i in range(n):
        d[i] = a[i, i]
    return d, off, sweeps


def jacobi_eigh(a, want_vectors=True):
    a = np.array(a, dtype=np.float64)
    n = a.shape[0]
    v = np.eye(n)
    target = JACOBI_TOL * np.linalg.norm(a)
    d, off, sweeps = _jacobi_core(a, v, want_vectors, target, MAX_JACOBI_SWEEPS)
    return d, v, off, sweeps


@njit(cache=True)
def _chol_core(a, tol):
    n = a.shape[0]
    l = np.zeros((n, n))
    for j in range(n):
        d = a[j, j]
        for k in range(j):
            d -= l[j, k] * l[j, k]
        if d <= tol:
            return l, j
        root = np.sqrt(d)
        l[j, j] = root
        for i in range(j + 1, n):
            s = a[i, j]
            for k in range(j):
                s -= l[i, k] * l[j, k]
            l[i, j] = s / root
    return l, -1


def chol_factor(a, tol):
    return _chol_core(np.ascontiguousarray(a, dtype=np.float64), tol)


@njit(cache=True)
def _solve_lower_core(l, b):
    n = l.shape[0]
    k = b.shape[1]
    x = b.copy()
    for i in range(n):
        for c in range(k):
            s = x[i, c]
            for j in range(i):
                s -= l[i, j] * x[j, c]
            x[i, c] = s / l[i, i]
    return x


@njit(cache=True)
def _solve_lower_t_core(l, b):
    n = l.shape[0]
    k = b.shape[1]
    x = b.copy()
    for i in range(n - 1, -1, -1):
        for c in range(k):
            s = x[i, c]
            for j in range(i + 1, n):
                s -= l[j, i] * x[j, c]
            x[i, c] = s / l[i, i]
    return x


def solve_lower(l, b):
    b = np.asarray(b, dtype=np.float64)
    vector = b.ndim == 1
    x = _solve_lower_core(np.ascontiguousarray(l), np.ascontiguousarray(b.reshape(b.shape[0], -1)))
    return x[:, 0] if vector else x


def solve_lower_t(l, b):
    b = np.asarray(b, dtype=np.float64)
    vector = b.ndim == 1
    x = _solve_lower_t_core(np.ascontiguousarray(l), np.ascontiguousarray(b.reshape(b.shape[0], -1)))
    return x[:, 0] if vector else x


@njit(cache=True)
def _schur_core(ptr, rows, cols, vals, x, u):
    m = len(ptr) - 1
    b = np.zeros((m, m))
    for i in range(m):
        for j in range(i, m):
            acc = 0.0
            for s in range(ptr[i], ptr[i + 1]):
                vs = vals[s]
                cs = cols[s]
                rs = rows[s]
                for t in range(ptr[j], ptr[j + 1]):
                    acc += vs * vals[t] * x[cs, rows[t]] * u[cols[t], rs]
            b[i, j] = acc
            b[j, i] = acc
    return b


def schur_assemble(ptr, rows, cols, vals, x, u):
    return _schur_core(ptr, rows, cols, vals, np.ascontiguousarray(x), np.ascontiguousarray(u))


@njit(cache=True)
def _apply_core(ptr, rows, cols, vals, mat):
    m = len(ptr) - 1
    y = np.zeros(m)
    for i in range(m):
        s = 0.0
        for t in range(ptr[i], ptr[i + 1]):
            s += vals[t] * mat[cols[t], rows[t]]
        y[i] = s
    return y


def apply_constraints(ptr, rows, cols, vals, mat):
    return _apply_core(ptr, rows, cols, vals, np.ascontiguousarray(mat))


@njit(cache=True)
def _adjoint_core(ptr, rows, cols, vals, y, n):
    out = np.zeros((n, n))
    m = len(ptr) - 1
    for i in range(m):
        yi = y[i]
        if yi == 0.0:
            continue
        for t in range(ptr[i], ptr[i + 1]):
            out[rows[t], cols[t]] += vals[t] * yi
    return out


def adjoint_constraints(ptr, rows, cols, vals, y, n):
    return _adjoint_core(ptr, rows, cols, vals, np.ascontiguousarray(y, dtype=np.float64), n)
