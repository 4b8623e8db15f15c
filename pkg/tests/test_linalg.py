import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spectralchroma.graphs import adjacency_matrix, cycle
from spectralchroma.linalg import (
    NotPositiveDefiniteError,
    cholesky_spd,
    eigh,
    eigvalsh,
    kyfan_sum,
    solve_spd,
)
from spectralchroma import kernels


def _random_symmetric(rng, n, scale=1.0):
    a = rng.standard_normal((n, n)) * scale
    return (a + a.T) / 2.0


def _kyfan_variational_oracle(vals, k):
    """Minimize k*eta + sum(max(lambda - eta, 0)) by scanning breakpoints;
    independent of the interpolation formula."""
    candidates = list(vals) + [vals.min() - 1.0, vals.max() + 1.0]
    best = math.inf
    for eta in candidates:
        best = min(best, k * eta + float(np.maximum(vals - eta, 0.0).sum()))
    return best


class TestEigh:
    def test_identity(self):
        dec = eigh(np.eye(3))
        assert np.allclose(dec.values, [1, 1, 1])

    def test_all_ones_rank_one(self):
        dec = eigh(np.ones((4, 4)))
        assert np.allclose(dec.values, [4, 0, 0, 0], atol=1e-10)

    def test_c5_adjacency_analytic(self):
        dec = eigh(adjacency_matrix(cycle(5)))
        golden = np.sort([2 * math.cos(2 * math.pi * j / 5) for j in range(5)])[::-1]
        assert np.allclose(dec.values, golden, atol=1e-9)
        assert abs(dec.values[1] - 0.618034) < 1e-6
        assert abs(dec.values[3] + 1.618034) < 1e-6

    @pytest.mark.parametrize("n", [1, 2, 5, 12, 30, 60])
    def test_against_lapack_oracle(self, rng, n):
        m = _random_symmetric(rng, n, scale=3.0)
        dec = eigh(m)
        ref = np.linalg.eigvalsh(m)[::-1]
        assert np.allclose(dec.values, ref, atol=1e-9 * max(1, np.linalg.norm(m)))

    @pytest.mark.parametrize("n", [2, 7, 25])
    def test_reconstruction_and_orthonormality(self, rng, n):
        m = _random_symmetric(rng, n, scale=2.0)
        dec = eigh(m)
        norm = max(1.0, np.linalg.norm(m))
        assert np.linalg.norm(dec.reconstruct() - m) <= 1e-10 * norm
        assert np.linalg.norm(dec.vectors.T @ dec.vectors - np.eye(n)) <= 1e-10 * n

    def test_trace_and_frobenius_identities(self, rng):
        m = _random_symmetric(rng, 17)
        vals = eigvalsh(m)
        assert abs(vals.sum() - np.trace(m)) <= 1e-9 * max(1, np.linalg.norm(m))
        assert abs((vals**2).sum() - np.linalg.norm(m) ** 2) <= 1e-8 * max(1, np.linalg.norm(m) ** 2)

    def test_deterministic(self, rng):
        m = _random_symmetric(rng, 9)
        a = eigh(m)
        b = eigh(m)
        assert np.array_equal(a.values, b.values)
        assert np.array_equal(a.vectors, b.vectors)

    def test_rejects_nonsymmetric(self):
        with pytest.raises(ValueError, match="symmetric"):
            eigh(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_backends_agree(self, rng):
        m = _random_symmetric(rng, 14)
        current = kernels.active_backend()
        try:
            kernels.set_backend("numba")
            a = eigvalsh(m)
            kernels.set_backend("numpy")
            b = eigvalsh(m)
        finally:
            kernels.set_backend(current)
        assert np.allclose(a, b, atol=1e-10)


class TestCholesky:
    def test_identity(self):
        assert np.array_equal(cholesky_spd(np.eye(4)), np.eye(4))

    def test_diagonal(self):
        l = cholesky_spd(np.diag([4.0, 9.0]))
        assert np.allclose(l, np.diag([2.0, 3.0]))

    def test_random_spd_residual(self, rng):
        a = rng.standard_normal((15, 15))
        m = a.T @ a + np.eye(15)
        l = cholesky_spd(m)
        assert np.linalg.norm(l @ l.T - m) <= 1e-9 * np.linalg.norm(m)
        assert np.all(np.triu(l, 1) == 0)

    def test_rejects_indefinite_with_pivot(self):
        m = np.diag([1.0, -1.0, 2.0])
        with pytest.raises(NotPositiveDefiniteError) as err:
            cholesky_spd(m)
        assert err.value.pivot == 1

    def test_solve_spd_residual(self, rng):
        a = rng.standard_normal((12, 12))
        m = a.T @ a + np.eye(12)
        b = rng.standard_normal(12)
        x = solve_spd(m, b)
        assert np.linalg.norm(m @ x - b) <= 1e-8 * (
            np.linalg.norm(m) * np.linalg.norm(x) + np.linalg.norm(b)
        )


class TestKyFan:
    def test_integer_level(self):
        assert kyfan_sum(np.diag([3.0, 1.0, 0.0]), 2) == pytest.approx(4.0)

    def test_fractional_level_against_variational_oracle(self):
        m = np.diag([3.0, 1.0, 0.0])
        assert kyfan_sum(m, 1.5) == pytest.approx(3.5)
        assert kyfan_sum(m, 1.5) == pytest.approx(_kyfan_variational_oracle(np.array([3.0, 1.0, 0.0]), 1.5))

    def test_zero_level(self, rng):
        assert kyfan_sum(_random_symmetric(rng, 6), 0) == 0.0

    def test_full_level_is_trace(self, rng):
        m = _random_symmetric(rng, 8)
        assert kyfan_sum(m, 8) == pytest.approx(np.trace(m), abs=1e-9 * max(1, np.linalg.norm(m)))

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            kyfan_sum(np.eye(2), 3)
        with pytest.raises(ValueError):
            kyfan_sum(np.eye(2), -0.5)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(min_value=0, max_value=2**32), st.integers(min_value=2, max_value=8))
    def test_matches_variational_oracle_random(self, seed, n):
        rng = np.random.default_rng(seed)
        m = _random_symmetric(rng, n)
        k = rng.uniform(0, n)
        vals = np.linalg.eigvalsh(m)[::-1]
        assert kyfan_sum(m, k) == pytest.approx(_kyfan_variational_oracle(vals, k), abs=1e-9)

    def test_integer_increments_are_eigenvalues(self, rng):
        m = _random_symmetric(rng, 7)
        vals = eigvalsh(m)
        for k in range(6):
            inc = kyfan_sum(m, k + 1) - kyfan_sum(m, k)
            assert inc == pytest.approx(vals[k], abs=1e-9)

    def test_concave_nondecreasing_when_psd(self, rng):
        a = rng.standard_normal((6, 6))
        m = a.T @ a  # PSD: nondecreasing in k
        grid = np.linspace(0, 6, 13)
        vals = [kyfan_sum(m, k) for k in grid]
        diffs = np.diff(vals)
        assert np.all(diffs >= -1e-9)
        assert np.all(np.diff(diffs) <= 1e-9)  # concavity
