"""Eigenvalue-sum bounds and the certified bracket for the threshold h(G).

For a symmetric matrix Z let S(m) = lambda_1 + (sum of the m-1 smallest
eigenvalues).  h(G) is the smallest integer m >= 1 such that S(m)(Z) <= 0 for
every edge-supported symmetric Z.  Exhibiting an edge-supported Z with
S(m)(Z) > 0 therefore certifies h(G) >= m + 1, while the fractional chromatic
number gives h(G) <= ceil(chi_f(G)); this module produces and verifies both
sides and reports h(G) as a rigorous integer bracket.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .chromatic import FractionalColoring, equality_form, fractional_chromatic
from .formats import encode_graph6, parse_graph6
from .graphs import Graph, adjacency_matrix, complement, validate_weights
from .linalg import as_symmetric, eigh, eigvalsh
from .rng import SplitMix64
from .theta import lovasz_theta, theta_k

__all__ = [
    "hoffman_partial_sum",
    "hoffman_bound",
    "ratio_bound",
    "z_search",
    "z_to_w",
    "w_to_z",
    "min_k_for_weight",
    "w_search_refute",
    "h_bracket",
    "HBracket",
    "LevelCertificate",
    "ConversionError",
    "BracketConsistencyError",
    "certificate_to_dict",
    "certificate_from_dict",
    "ceil_guarded",
]

_CERT_TOL = 1e-7
_RESTART_ITERS = 500


class ConversionError(RuntimeError):
    """A certificate conversion failed its verification solve/eigencheck."""


class BracketConsistencyError(RuntimeError):
    """lo > hi: a numerically verified certificate contradicts the upper
    bound, which indicates a bug, so the computation must abort."""


def hoffman_partial_sum(spectrum, m: int) -> float:
    """S(m): the largest eigenvalue plus the m-1 smallest (spectrum given
    descending)."""
    vals = np.asarray(spectrum, dtype=np.float64)
    n = vals.shape[0]
    if not 2 <= m <= n:
        raise ValueError(f"m={m} outside [2, {n}]")
    return float(vals[0] + vals[n - m + 1:].sum())


def hoffman_bound(z) -> int:
    """1 + the largest m with S(m) above noise; a chromatic-number lower
    bound for any edge-supported Z (1 when no partial sum is positive)."""
    z = as_symmetric(z)
    if not np.any(z):
        raise ValueError("zero matrix has no eigenvalue-sum bound")
    if z.shape[0] < 2:
        raise ValueError("need n >= 2")
    vals = eigvalsh(z)
    threshold = 1e-9 * float(np.linalg.norm(z))
    best = 0
    for m in range(2, z.shape[0] + 1):
        if hoffman_partial_sum(vals, m) > threshold:
            best = m
    return 1 + best if best else 1


def ratio_bound(z) -> float:
    """1 - lambda_1/lambda_n; for edge-supported Z this never exceeds the
    Lovász theta number of the complement graph."""
    z = as_symmetric(z)
    if not np.any(z):
        raise ValueError("zero matrix")
    vals = eigvalsh(z)
    if vals[-1] >= 0:
        raise ValueError(f"smallest eigenvalue {vals[-1]:.3e} is not negative")
    return 1.0 - float(vals[0]) / float(vals[-1])


# -- searches -------------------------------------------------------------------

def _edge_projector(g: Graph):
    mask = np.zeros((g.n, g.n), dtype=bool)
    for i, j in g.edges:
        mask[i, j] = True
        mask[j, i] = True

    def project(mat):
        out = np.where(mask, mat, 0.0)
        return (out + out.T) / 2.0

    return project


def _random_edge_matrix(g: Graph, rng: SplitMix64) -> np.ndarray:
    z = np.zeros((g.n, g.n))
    for i, j in g.edge_list:
        v = rng.symmetric_uniform()
        z[i, j] = v
        z[j, i] = v
    norm = np.linalg.norm(z)
    return z / norm if norm > 0 else z


def z_search(g: Graph, m: int, budget: int = 10000, seed: int = 0) -> tuple[np.ndarray, float]:
    """Multistart projected subgradient ascent of S(m) over unit-Frobenius
    edge-supported matrices.

    The ascent direction is the outer-product subgradient v1 v1^T plus the
    eigenvector mass of the m-1 smallest eigenvalues, projected onto the edge
    support; iterates stay on the unit sphere.  The adjacency matrix is always
    the first start.  A best value above 1e-7 certifies h(G) >= m + 1.
    """
    n = g.n
    if not 2 <= m <= n:
        raise ValueError(f"m={m} outside [2, {n}]")
    if g.m == 0:
        raise ValueError("graph has no edges")
    project = _edge_projector(g)
    rng = SplitMix64(seed)
    restarts = max(1, math.ceil(budget / _RESTART_ITERS))
    best_z = adjacency_matrix(g)
    best_z /= np.linalg.norm(best_z)
    best_s = -np.inf
    remaining = budget
    for r in range(restarts):
        if r == 0:
            z = best_z.copy()
        else:
            z = _random_edge_matrix(g, rng)
            if not np.any(z):
                continue
        iters = min(_RESTART_ITERS, remaining)
        remaining -= iters
        for it in range(1, iters + 1):
            dec = eigh(z)
            s_val = hoffman_partial_sum(dec.values, m)
            if s_val > best_s:
                best_s = s_val
                best_z = z.copy()
            v1 = dec.vectors[:, 0]
            tail = dec.vectors[:, n - m + 1:]
            grad = project(np.outer(v1, v1) + tail @ tail.T)
            gnorm = np.linalg.norm(grad)
            if gnorm < 1e-14:
                break
            z = z + (0.5 / math.sqrt(it)) * grad / gnorm
            z = project(z)
            norm = np.linalg.norm(z)
            if norm < 1e-14:
                break
            z /= norm
        if remaining <= 0:
            break
    return best_z, float(best_s)


def z_to_w(g: Graph, z, m: int) -> np.ndarray:
    """Weight vector refuting level m, built from a matrix with S(m) > 0.

    A sign-flip conjugation makes the top eigenvector v nonnegative; the
    weights are w = c^2 v^2 with c^2 = lambda_1 - lambda_n, which makes the
    top-m eigenvalue sum of sqrt(w)sqrt(w)^T - (conjugated Z) equal to
    w^T 1 - S(m) < w^T 1.  Verified by an actual level solve before returning.
    """
    z = as_symmetric(z)
    dec = eigh(z)
    s_val = hoffman_partial_sum(dec.values, m)
    if s_val <= 1e-12 * max(1.0, float(np.linalg.norm(z))):
        raise ValueError(f"S({m}) = {s_val:.3e} is not positive")
    v = dec.vectors[:, 0]
    scale = float(dec.values[0] - dec.values[-1])
    w = scale * v * v
    w[w < 1e-14] = 0.0
    res = theta_k(g, w, m)
    wt1 = float(w.sum())
    if not res.value < wt1 - _CERT_TOL:
        raise ConversionError(
            f"verification failed: theta_{m} = {res.value!r} vs w^T 1 = {wt1!r}"
        )
    return w


def w_to_z(g: Graph, w, m: int) -> np.ndarray:
    """Edge-supported certificate from a refuting weight vector.

    Solves the level-m program for its optimal Z and returns -Z; since
    lambda_1(sqrt(w)sqrt(w)^T + Z) >= w^T 1 + lambda_n(Z), Weyl interlacing
    gives S(m)(-Z) >= w^T 1 - theta_m(G;w) for any edge-supported Z, so the
    returned matrix certifies once the spectrum check passes.
    """
    w = validate_weights(g, w, require_nonzero=True)
    if m != int(m) or not 1 <= m <= g.n:
        raise ValueError("m must be an integer level in [1, n]")
    res = theta_k(g, w, int(m))
    wt1 = float(w.sum())
    if not res.value < wt1 - 1e-6:
        raise ValueError(
            f"precondition failed: theta_{m}(G;w) = {res.value!r} not below w^T 1 = {wt1!r}"
        )
    cert = -res.primal_z
    if m >= 2:
        spectrum = eigvalsh(cert)
        achieved = hoffman_partial_sum(spectrum, int(m))
        expected = (wt1 - res.value) - 1e-6
        if achieved < expected:
            raise ConversionError(
                f"S({m})(-Z) = {achieved!r} below guarantee {expected!r};"
                f" spectrum {spectrum.tolist()}"
            )
    return cert


def min_k_for_weight(g: Graph, w) -> int:
    """Smallest integer k >= 1 with theta_k(G;w) >= w^T 1 - 1e-6; binary
    search is valid because the level value is nondecreasing in k."""
    w = validate_weights(g, w, require_nonzero=True)
    wt1 = float(w.sum())
    lo, hi = 1, g.n
    while lo < hi:
        mid = (lo + hi) // 2
        if theta_k(g, w, mid).value >= wt1 - 1e-6:
            hi = mid
        else:
            lo = mid + 1
    return lo


def w_search_refute(
    g: Graph, k: int, budget: int = 240, seed: int = 0
) -> np.ndarray | None:
    """Search for w >= 0 with theta_k(G;w) < w^T 1, or None.

    Minimizes f(s) = theta_k(G; s^2) over the nonnegative unit sphere
    (so w^T 1 = 1) by projected subgradient steps 2*X s taken from the dual
    witness X of each solve; multistart, deterministic in the seed.
    """
    n = g.n
    if not 1 <= k <= n:
        raise ValueError(f"k={k} outside [1, {n}]")
    if k >= n:
        return None  # theta_n is always w^T 1
    rng = SplitMix64(seed)
    iters_per_restart = 40
    restarts = max(1, budget // iters_per_restart)
    for r in range(restarts):
        if r == 0:
            s = np.ones(n) / math.sqrt(n)
        else:
            s = np.array([rng.uniform() for _ in range(n)])
            norm = np.linalg.norm(s)
            if norm < 1e-14:
                continue
            s /= norm
        for it in range(1, iters_per_restart + 1):
            w = s * s
            res = theta_k(g, w, k)
            if res.value < 1.0 - 1e-6:
                return w
            grad = 2.0 * (res.dual_x @ s)
            grad -= float(s @ grad) * s  # tangent projection
            gnorm = np.linalg.norm(grad)
            if gnorm < 1e-12:
                break
            s = s - (0.4 / math.sqrt(it)) * grad / gnorm
            s = np.maximum(s, 0.0)
            norm = np.linalg.norm(s)
            if norm < 1e-14:
                break
            s /= norm
    return None


# -- the bracket ------------------------------------------------------------------

@dataclass
class LevelCertificate:
    """Verified witness that h(G) >= m + 1: an edge-supported unit-Frobenius
    matrix with S(m) above the certificate threshold (optionally the weight
    vector it came from)."""

    m: int
    z: np.ndarray
    achieved: float
    source: str = "z_search"  # or "w_search"
    w: np.ndarray | None = None


@dataclass
class HBracket:
    """Rigorous integer interval for h(G) with certificates for each side."""

    lo: int
    hi: int
    lo_certificates: list[LevelCertificate] = field(default_factory=list)
    chi_f: float = 0.0
    chi_f_rational: tuple[int, int] | None = None
    coloring: FractionalColoring | None = None
    theta_complement: float = 0.0


def ceil_guarded(x: float, rational: tuple[int, int] | None = None) -> int:
    """Ceiling with a 1e-6 cushion against solver round-up; an exact rational
    value overrides the float."""
    if rational is not None:
        p, q = rational
        return -(-p // q)
    return math.ceil(x - 1e-6)


def verify_level_certificate(g: Graph, m: int, z, tol: float = _CERT_TOL) -> float:
    """Re-verify S(m) > tol from a fresh eigendecomposition at unit norm;
    returns the achieved value or raises."""
    try:
        z = as_symmetric(z)
    except ValueError as err:
        raise ConversionError(str(err)) from err
    norm = np.linalg.norm(z)
    if norm < 1e-14:
        raise ConversionError("certificate matrix is zero")
    z = z / norm
    mask = np.ones_like(z, dtype=bool)
    for i, j in g.edges:
        mask[i, j] = False
        mask[j, i] = False
    off = float(np.abs(z[mask]).max(initial=0.0))
    if off > 1e-12:
        raise ConversionError(f"certificate has off-edge entry {off:.3e}")
    achieved = hoffman_partial_sum(eigvalsh(z), m)
    if achieved <= tol:
        raise ConversionError(f"certificate S({m}) = {achieved:.3e} not above {tol:g}")
    return achieved


def h_bracket(g: Graph, budget: int = 10000, seed: int = 0) -> HBracket:
    """Certified bracket lo <= h(G) <= hi.

    hi is the guarded ceiling of the fractional chromatic number.  lo starts
    at the guarded ceiling of the complement theta number and is pushed up by
    verified positive-S(m) certificates found by z_search, falling back to
    the weight-space search plus conversion when the direct search stalls.
    The two sides are theoretically ordered, so lo > hi aborts.
    """
    if g.n == 0:
        raise ValueError("h(G) needs at least one vertex")
    chi_f, witness, rational = fractional_chromatic(g)
    hi = max(1, ceil_guarded(chi_f, rational))
    theta_bar = lovasz_theta(complement(g)) if g.n else 0.0
    if g.m == 0:
        return HBracket(1, 1, [], chi_f, rational, witness, theta_bar)
    lo = max(1, ceil_guarded(theta_bar))
    certificates: list[LevelCertificate] = []
    for m in range(max(2, lo), hi):
        cert = None
        z, best_s = z_search(g, m, budget=budget, seed=seed)
        if best_s > _CERT_TOL:
            achieved = verify_level_certificate(g, m, z)
            cert = LevelCertificate(m=m, z=z / np.linalg.norm(z), achieved=achieved)
        else:
            w = w_search_refute(g, m, seed=seed)
            if w is not None:
                zc = w_to_z(g, w, m)
                norm = np.linalg.norm(zc)
                try:
                    achieved = verify_level_certificate(g, m, zc)
                except ConversionError:
                    achieved = None
                if achieved is not None:
                    cert = LevelCertificate(
                        m=m, z=zc / norm, achieved=achieved, source="w_search", w=w
                    )
        if cert is None:
            break
        certificates.append(cert)
        lo = max(lo, m + 1)
    if lo > hi:
        raise BracketConsistencyError(
            f"certified lower bound {lo} exceeds upper bound {hi} on {encode_graph6(g)}"
        )
    return HBracket(lo, hi, certificates, chi_f, rational, witness, theta_bar)


# -- certificate serialization ------------------------------------------------------

def certificate_to_dict(g: Graph, cert: LevelCertificate) -> dict:
    return {
        "schema": 1,
        "kind": "level-certificate",
        "graph6": encode_graph6(g),
        "m": cert.m,
        "z": [[float(v) for v in row] for row in cert.z],
        "achieved": cert.achieved,
        "tolerance": _CERT_TOL,
        "source": cert.source,
        "w": None if cert.w is None else [float(v) for v in cert.w],
    }


def certificate_from_dict(data: dict) -> tuple[Graph, LevelCertificate]:
    """Load and re-verify a serialized certificate (verification is part of
    the load contract)."""
    g = parse_graph6(data["graph6"])
    z = np.asarray(data["z"], dtype=np.float64)
    m = int(data["m"])
    achieved = verify_level_certificate(g, m, z, tol=float(data.get("tolerance", _CERT_TOL)))
    w = data.get("w")
    cert = LevelCertificate(
        m=m,
        z=z / np.linalg.norm(z),
        achieved=achieved,
        source=data.get("source", "z_search"),
        w=None if w is None else np.asarray(w, dtype=np.float64),
    )
    return g, cert


def certificate_to_json(g: Graph, cert: LevelCertificate) -> str:
    return json.dumps(certificate_to_dict(g, cert))


def certificate_from_json(text: str) -> tuple[Graph, LevelCertificate]:
    return certificate_from_dict(json.loads(text))
