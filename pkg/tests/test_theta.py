import itertools
import math

import numpy as np
import pytest

from spectralchroma.graphs import (
    Graph,
    adjacency_matrix,
    complete,
    cycle,
    empty,
    erdos_renyi,
    petersen,
)
from spectralchroma.linalg import eigvalsh, kyfan_sum
from spectralchroma.rng import SplitMix64
from spectralchroma.theta import (
    evaluate_Z,
    interpolate_dual,
    lovasz_theta,
    recover_primal_from_Z,
    theta_k,
    theta_k_dual,
    theta_k_primal,
)

SQRT5 = math.sqrt(5.0)


def _random_w(g, seed):
    rng = SplitMix64(seed)
    return np.array([rng.uniform() for _ in range(g.n)])


def _chi_all_subsets(g: Graph) -> list[int]:
    """Exact chromatic number of every induced subgraph by subset DP
    (exhaustive; the independent oracle for alpha_k)."""
    n = g.n
    masks = g.neighbor_masks
    independent = [True] * (1 << n)
    for s in range(1 << n):
        v = (s & -s).bit_length() - 1 if s else -1
        if s and (s & (s - 1)):
            rest = s & (s - 1)
            independent[s] = independent[rest] and not (masks[v] & rest)
    chi = [0] * (1 << n)
    for s in range(1, 1 << n):
        v = (s & -s).bit_length() - 1
        best = n + 1
        # iterate subsets of s containing v
        sub = s
        while sub:
            if (sub >> v) & 1 and independent[sub]:
                best = min(best, 1 + chi[s & ~sub])
            sub = (sub - 1) & s
        chi[s] = best
    return chi


def brute_alpha_k(g: Graph, k: int) -> int:
    chi = _chi_all_subsets(g)
    return max(s.bit_count() for s in range(1 << g.n) if chi[s] <= k)


class TestLovaszTheta:
    def test_empty(self):
        for n in (1, 3, 6):
            assert lovasz_theta(empty(n)) == pytest.approx(n, abs=1e-6)

    def test_complete(self):
        for n in (2, 5):
            assert lovasz_theta(complete(n)) == pytest.approx(1.0, abs=1e-6)

    def test_c5_is_sqrt5(self):
        assert lovasz_theta(cycle(5)) == pytest.approx(SQRT5, abs=1e-5)

    def test_petersen(self):
        assert lovasz_theta(petersen()) == pytest.approx(4.0, abs=1e-5)

    def test_zero_vertices(self):
        assert lovasz_theta(empty(0)) == 0.0


class TestLevelDual:
    def test_complete_graph_forces_diagonal(self):
        # brute-force oracle: with all off-diagonals pinned to zero, the
        # program reduces to max w.x over 0 <= x <= 1, sum x = k
        for n, k in [(4, 2), (5, 3)]:
            value, x = theta_k_dual(complete(n), np.ones(n), k)
            assert value == pytest.approx(k, abs=1e-6)
            assert np.abs(x - np.diag(np.diag(x))).max() <= 1e-8

    def test_empty_graph_hits_total_weight(self):
        w = np.array([0.5, 1.5, 2.0, 0.1])
        value, _ = theta_k_dual(empty(4), w, 1)
        assert value == pytest.approx(w.sum(), abs=1e-6)

    def test_c5_at_fractional_level(self):
        value, x = theta_k_dual(cycle(5), np.ones(5), 2.5)
        assert value == pytest.approx(5.0, abs=1e-5)
        assert np.trace(x) == pytest.approx(2.5, abs=1e-8)


class TestLevelPrimal:
    def test_empty_graph(self):
        value, z, y, eta = theta_k_primal(empty(3), np.ones(3), 1)
        assert value == pytest.approx(3.0, abs=1e-6)
        assert np.abs(z).max() == 0.0

    def test_complete_graph(self):
        value, _, _, _ = theta_k_primal(complete(4), np.ones(4), 1)
        assert value == pytest.approx(1.0, abs=1e-6)

    def test_zero_weights(self):
        value, z, y, eta = theta_k_primal(cycle(5), np.zeros(5), 2)
        assert value == 0.0
        assert np.abs(y).max() == 0.0


class TestCertifiedLevel:
    def test_c5_level_one_is_theta(self):
        res = theta_k(cycle(5), np.ones(5), 1)
        assert res.value == pytest.approx(SQRT5, abs=1e-5)

    def test_full_level_is_total_weight(self):
        g = erdos_renyi(6, 0.5, seed=1)
        w = _random_w(g, 5)
        res = theta_k(g, w, g.n)
        assert res.value == pytest.approx(w.sum(), abs=1e-9)
        assert res.gap == 0.0

    @pytest.mark.parametrize("seed", range(4))
    def test_scaling_in_w(self, seed):
        g = erdos_renyi(6, 0.5, seed=seed)
        w = _random_w(g, seed + 50)
        k = 1 + (seed % 3)
        base = theta_k(g, w, k).value
        scaled = theta_k(g, 3.0 * w, k).value
        assert scaled == pytest.approx(3.0 * base, abs=1e-6 * (1 + abs(scaled)))

    def test_witness_invariants(self):
        g = cycle(5)
        w = np.array([0.3, 1.2, 0.8, 1.0, 0.5])
        k = 1.7
        res = theta_k(g, w, k)
        outer = np.outer(np.sqrt(w), np.sqrt(w))
        # dual witness: trace, edge zeros, spectrum in [0, 1]
        assert abs(np.trace(res.dual_x) - k) <= 1e-6
        assert max(abs(res.dual_x[i, j]) for i, j in g.edges) <= 1e-8
        vals = eigvalsh(res.dual_x)
        assert vals[-1] >= -1e-7 and vals[0] <= 1 + 1e-7
        # primal witness: edge support, PSD parts
        off = res.primal_z.copy()
        for i, j in g.edges:
            off[i, j] = off[j, i] = 0.0
        assert np.abs(off).max() <= 1e-10
        assert eigvalsh(res.primal_y)[-1] >= -1e-7
        slack = res.primal_y - (outer + res.primal_z) + res.eta * np.eye(5)
        assert eigvalsh(slack)[-1] >= -1e-7
        # two-sided certification
        assert res.gap <= 1e-6 * (1 + abs(res.value))

    def test_monotone_in_level(self):
        g = erdos_renyi(7, 0.5, seed=9)
        w = _random_w(g, 17)
        levels = [0.0, 0.8, 1.0, 2.3, 4.0, 7.0]
        values = [theta_k(g, w, k).value for k in levels]
        for lo, hi in itertools.pairwise(values):
            assert lo <= hi + 1e-6

    def test_upper_bounded_by_total_weight(self):
        for seed in range(4):
            g = erdos_renyi(6, 0.4, seed=seed)
            w = _random_w(g, seed + 3)
            k = 1 + 2 * (seed % 2)
            assert theta_k(g, w, k).value <= w.sum() + 1e-6

    def test_complementary_slackness_at_optimum(self):
        g = cycle(5)
        res = theta_k(g, np.ones(5), 2)
        xy = res.primal_y - res.dual_x @ res.primal_y
        assert np.linalg.norm(xy) <= 1e-5 * (1 + np.linalg.norm(res.primal_y))

    def test_alpha_k_sandwich_small(self):
        for seed in range(3):
            g = erdos_renyi(6, 0.5, seed=seed + 100)
            for k in range(1, 7):
                assert brute_alpha_k(g, k) <= theta_k(g, np.ones(6), k).value + 1e-6

    def test_level_zero_and_rejections(self):
        g = cycle(5)
        assert theta_k(g, np.ones(5), 0).value == 0.0
        with pytest.raises(ValueError):
            theta_k(g, np.ones(5), 5.5)
        with pytest.raises(ValueError):
            theta_k(g, np.ones(5), -0.1)


class TestEvaluateZ:
    def test_zero_z_is_total_weight(self):
        g = cycle(5)
        w = np.array([1.0, 2.0, 0.5, 1.5, 1.0])
        assert evaluate_Z(g, w, 2, np.zeros((5, 5))) == pytest.approx(w.sum())

    def test_optimal_z_reproduces_value(self):
        g = cycle(5)
        w = np.ones(5)
        res = theta_k(g, w, 2)
        assert evaluate_Z(g, w, 2, res.primal_z) == pytest.approx(res.value, abs=1e-6)

    def test_random_z_upper_bounds(self):
        g = cycle(5)
        w = np.ones(5)
        opt = theta_k(g, w, 2).value
        rng = SplitMix64(4)
        for _ in range(5):
            z = np.zeros((5, 5))
            for i, j in g.edges:
                z[i, j] = z[j, i] = rng.symmetric_uniform()
            assert evaluate_Z(g, w, 2, z) >= opt - 1e-6

    def test_rejects_off_edge_support(self):
        g = cycle(5)
        z = np.zeros((5, 5))
        z[0, 2] = z[2, 0] = 1e-6
        with pytest.raises(ValueError, match="off-edge"):
            evaluate_Z(g, np.ones(5), 2, z)

    def test_rejects_nonzero_diagonal(self):
        # a vertex pair (i, i) is never an edge of a simple graph
        g = cycle(5)
        z = np.zeros((5, 5))
        z[3, 3] = 1e-6
        with pytest.raises(ValueError, match="off-edge"):
            evaluate_Z(g, np.ones(5), 2, z)


class TestRecovery:
    def test_rank_one_case(self):
        eta, y = recover_primal_from_Z(np.zeros((3, 3)), np.ones(3), 1)
        assert eta == pytest.approx(3.0)
        assert np.abs(y).max() <= 1e-12

    def test_known_spectrum_case(self):
        # weights zero: the matrix is the C5 adjacency itself
        a = adjacency_matrix(cycle(5))
        eta, y = recover_primal_from_Z(a, np.zeros(5), 2)
        assert eta == pytest.approx(0.618034, abs=1e-6)
        assert np.trace(y) == pytest.approx(2.0 - 0.618034, abs=1e-6)

    @pytest.mark.parametrize("seed", range(4))
    def test_recovered_pair_is_feasible(self, seed):
        g = erdos_renyi(6, 0.5, seed=seed)
        rng = SplitMix64(seed + 7)
        z = np.zeros((6, 6))
        for i, j in g.edges:
            z[i, j] = z[j, i] = rng.symmetric_uniform()
        w = _random_w(g, seed)
        k = 1 + seed % 4
        eta, y = recover_primal_from_Z(z, w, k)
        outer = np.outer(np.sqrt(w), np.sqrt(w))
        assert eigvalsh(y)[-1] >= -1e-9
        assert eigvalsh(y - (outer + z) + eta * np.eye(6))[-1] >= -1e-9
        objective = k * eta + np.trace(y)
        assert objective == pytest.approx(kyfan_sum(outer + z, k), abs=1e-8)

    def test_rejects_non_integer(self):
        with pytest.raises(ValueError):
            recover_primal_from_Z(np.zeros((3, 3)), np.ones(3), 1.5)


class TestInterpolation:
    def test_blend_from_zero(self):
        x = interpolate_dual(np.zeros((6, 6)), 0, 3, 6)
        assert np.allclose(x, 0.5 * np.eye(6))

    def test_full_level_endpoint(self):
        x = interpolate_dual(np.diag([1.0, 0, 0, 0, 0]), 1, 5, 5)
        assert np.allclose(x, np.eye(5))

    def test_trace_and_objective_monotone(self):
        g = cycle(5)
        w = np.ones(5)
        res = theta_k(g, w, 1)
        lifted = interpolate_dual(res.dual_x, 1, 2, 5)
        assert np.trace(lifted) == pytest.approx(2.0, abs=1e-6)
        outer = np.outer(np.sqrt(w), np.sqrt(w))
        assert np.tensordot(outer, lifted) >= np.tensordot(outer, res.dual_x) - 1e-9
        # still feasible at the higher level
        assert max(abs(lifted[i, j]) for i, j in g.edges) <= 1e-8
        vals = eigvalsh(lifted)
        assert vals[-1] >= -1e-7 and vals[0] <= 1 + 1e-7

    def test_rejects_equal_levels_and_k_equals_n(self):
        with pytest.raises(ValueError):
            interpolate_dual(np.zeros((3, 3)), 2, 2, 3)
        with pytest.raises(ValueError):
            interpolate_dual(np.zeros((3, 3)), 3, 3, 3)
