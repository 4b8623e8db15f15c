"""Constructive certificates and the end-to-end inequality-chain verifier.

The central construction takes a fractional coloring in equality form
(N y = 1) and a weight vector w and assembles

    M = sum over cocliques S with w(S) > 0 of
        y(S) * Diag(x_S) sqrt(w)sqrt(w)^T Diag(x_S) / w(S)

which is feasible for the trace-k level program at k = chi_f(G) with
objective w^T 1: its trace telescopes to sum y(S), cocliques carry no edges,
M fixes sqrt(w), and nonnegativity plus unit row action cap the spectrum at 1.
That single matrix certifies theta_{chi_f}(G; w) >= w^T 1 for every w.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .chromatic import (
    FractionalColoring,
    chromatic_number,
    equality_form,
    fractional_chromatic,
    stability_number,
    validate_fractional_coloring,
)
from .formats import encode_graph6
from .graphs import (
    Graph,
    adjacency_matrix,
    complement,
    complete,
    complete_multipartite,
    cycle,
    erdos_renyi,
    kneser,
    petersen,
    validate_weights,
)
from .hoffman import HBracket, ceil_guarded, h_bracket, hoffman_bound, ratio_bound
from .linalg import eigvalsh
from .theta import lovasz_theta

__all__ = [
    "ColoringCertificate",
    "CertificationError",
    "ChainViolationError",
    "ChainReport",
    "certificate_from_coloring",
    "verify_dual_feasible",
    "verify_chain",
    "builtin_corpus",
]


class CertificationError(RuntimeError):
    """A certificate residual exceeded its tolerance; names the claim."""


class ChainViolationError(RuntimeError):
    """The bound chain failed on a concrete graph; carries the full report."""

    def __init__(self, message: str, report: "ChainReport"):
        self.report = report
        super().__init__(f"{message}\n{report}")


@dataclass
class ColoringCertificate:
    """Feasible witness for the level program at k = chi_f(G).

    ``checks`` maps each verified claim to its residual: trace equals chi_f,
    spectrum within [0, 1], zero entries on edges, objective equals w^T 1,
    and M sqrt(w) = sqrt(w).
    """

    m: np.ndarray
    k: float
    w: np.ndarray
    trace_value: float
    objective_value: float
    checks: dict[str, float] = field(default_factory=dict)


def certificate_from_coloring(
    g: Graph, w, coloring: FractionalColoring
) -> ColoringCertificate:
    """Build and fully verify the certificate matrix from an equality-form
    fractional coloring.  Cocliques with w(S) = 0 are skipped, exactly as in
    the defining sum."""
    w = validate_weights(g, w)
    validate_fractional_coloring(g, coloring, equality=True, tol=1e-9)
    n = g.n
    rt = np.sqrt(w)
    m = np.zeros((n, n))
    for s, y in zip(coloring.cocliques, coloring.weights):
        idx = list(s)
        ws = float(w[idx].sum())
        if ws <= 0.0:
            continue
        piece = np.zeros(n)
        piece[idx] = rt[idx]
        m += (float(y) / ws) * np.outer(piece, piece)

    chi_f = coloring.value
    wt1 = float(w.sum())
    checks: dict[str, float] = {}
    checks["trace"] = abs(float(np.trace(m)) - chi_f)
    vals = eigvalsh(m) if n else np.zeros(0)
    lo = float(vals[-1]) if n else 0.0
    hi = float(vals[0]) if n else 0.0
    checks["psd"] = max(0.0, -lo)
    checks["contraction"] = max(0.0, hi - 1.0)
    checks["edge_support"] = max(
        (abs(float(m[i, j])) for i, j in g.edges), default=0.0
    )
    checks["objective"] = abs(float(rt @ m @ rt) - wt1)
    checks["fixed_vector"] = float(np.linalg.norm(m @ rt - rt))

    tolerances = {
        "trace": 1e-7,
        "psd": 1e-7,
        "contraction": 1e-7,
        "edge_support": 1e-9,
        "objective": 1e-7,
        "fixed_vector": 1e-7 * max(1.0, float(np.linalg.norm(rt))),
    }
    for name, residual in checks.items():
        if residual > tolerances[name]:
            raise CertificationError(
                f"claim {name!r} violated: residual {residual:.3e} > {tolerances[name]:g}"
            )
    return ColoringCertificate(
        m=m, k=chi_f, w=w, trace_value=float(np.trace(m)),
        objective_value=float(rt @ m @ rt), checks=checks,
    )


@dataclass
class FeasibilityReport:
    ok: bool
    trace_deviation: float
    max_edge_entry: float
    min_eigenvalue: float
    max_eigenvalue: float
    objective: float


def verify_dual_feasible(g: Graph, x, k: float, w, tol: float = 1e-6) -> FeasibilityReport:
    """Check a candidate X against the trace-k program constraints."""
    w = validate_weights(g, w)
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (g.n, g.n):
        raise ValueError("X has wrong shape")
    vals = eigvalsh((x + x.T) / 2.0) if g.n else np.zeros(0)
    rt = np.sqrt(w)
    report = FeasibilityReport(
        ok=False,
        trace_deviation=abs(float(np.trace(x)) - k),
        max_edge_entry=max((abs(float(x[i, j])) for i, j in g.edges), default=0.0),
        min_eigenvalue=float(vals[-1]) if g.n else 0.0,
        max_eigenvalue=float(vals[0]) if g.n else 0.0,
        objective=float(rt @ x @ rt),
    )
    report.ok = (
        report.trace_deviation <= tol * max(1.0, abs(k))
        and report.max_edge_entry <= tol
        and report.min_eigenvalue >= -tol
        and report.max_eigenvalue <= 1.0 + tol
    )
    return report


# -- the chain -----------------------------------------------------------------------

@dataclass
class ChainReport:
    """Every quantity in the bound chain for one graph, plus the verdict."""

    name: str
    graph6: str
    n: int
    m_edges: int
    alpha: int
    theta: float
    theta_complement: float
    chi_f: float
    chi_f_rational: tuple[int, int] | None
    chi: int
    hoffman_adjacency: int | None
    ratio_adjacency: float | None
    h_lo: int
    h_hi: int
    chain_ok: bool
    seconds: float
    timings: dict[str, float] = field(default_factory=dict)
    bracket: HBracket | None = None

    def __str__(self):
        rat = f" ({self.chi_f_rational[0]}/{self.chi_f_rational[1]})" if self.chi_f_rational else ""
        return (
            f"{self.name}: n={self.n} m={self.m_edges} alpha={self.alpha}"
            f" theta={self.theta:.6f} theta_bar={self.theta_complement:.6f}"
            f" chi_f={self.chi_f:.6f}{rat} chi={self.chi}"
            f" h=[{self.h_lo},{self.h_hi}] ok={self.chain_ok}"
        )


def verify_chain(
    g: Graph, budget: int = 10000, seed: int = 0, name: str | None = None
) -> ChainReport:
    """Compute every bound and assert
    ceil(theta(complement)) <= h_lo <= h_hi = ceil(chi_f) <= chi.

    Any violated inequality raises ChainViolationError carrying the full
    report; this is the package's core correctness gate.
    """
    started = time.perf_counter()
    timings: dict[str, float] = {}

    def timed(key, fn):
        t0 = time.perf_counter()
        out = fn()
        timings[key] = time.perf_counter() - t0
        return out

    alpha = timed("alpha", lambda: stability_number(g))
    theta = timed("theta", lambda: lovasz_theta(g)) if g.n else 0.0
    chi = timed("chi", lambda: chromatic_number(g))
    bracket = timed("h_bracket", lambda: h_bracket(g, budget=budget, seed=seed))
    adj = adjacency_matrix(g)
    hoffman_adj = hoffman_bound(adj) if g.m else None
    ratio_adj = ratio_bound(adj) if g.m else None

    report = ChainReport(
        name=name or encode_graph6(g),
        graph6=encode_graph6(g),
        n=g.n,
        m_edges=g.m,
        alpha=alpha,
        theta=theta,
        theta_complement=bracket.theta_complement,
        chi_f=bracket.chi_f,
        chi_f_rational=bracket.chi_f_rational,
        chi=chi,
        hoffman_adjacency=hoffman_adj,
        ratio_adjacency=ratio_adj,
        h_lo=bracket.lo,
        h_hi=bracket.hi,
        chain_ok=False,
        seconds=0.0,
        timings=timings,
        bracket=bracket,
    )

    lo_required = max(1, ceil_guarded(bracket.theta_complement))
    hi_required = ceil_guarded(bracket.chi_f, bracket.chi_f_rational) if g.n else 0
    problems = []
    if not lo_required <= bracket.lo:
        problems.append(f"ceil(theta_bar)={lo_required} > h_lo={bracket.lo}")
    if not bracket.lo <= bracket.hi:
        problems.append(f"h_lo={bracket.lo} > h_hi={bracket.hi}")
    if g.n and bracket.hi != max(1, hi_required):
        problems.append(f"h_hi={bracket.hi} != ceil(chi_f)={hi_required}")
    if not bracket.hi <= chi or (g.n == 0 and chi != 0):
        problems.append(f"h_hi={bracket.hi} > chi={chi}")
    if hoffman_adj is not None and hoffman_adj > chi:
        problems.append(f"hoffman bound {hoffman_adj} > chi={chi}")
    report.seconds = time.perf_counter() - started
    report.chain_ok = not problems
    if problems:
        raise ChainViolationError("; ".join(problems), report)
    return report


# -- built-in corpus -------------------------------------------------------------------

def builtin_corpus(include_random: bool = True, include_large: bool = True):
    """The standing test corpus: odd/even cycles, complete graphs, Petersen,
    Kneser graphs, small complete multipartite graphs, and seeded G(n, 1/2)."""
    graphs: list[tuple[str, Graph]] = []
    for n in range(3, 12):
        graphs.append((f"cycle-{n}", cycle(n)))
    for n in range(2, 9):
        graphs.append((f"complete-{n}", complete(n)))
    graphs.append(("petersen", petersen()))
    graphs.append(("kneser-5-2", kneser(5, 2)))
    if include_large:
        graphs.append(("kneser-7-3", kneser(7, 3)))
    for sizes in ((2, 2, 2), (1, 2, 3), (3, 3, 3), (4, 4, 4)):
        graphs.append(("multipartite-" + "-".join(map(str, sizes)), complete_multipartite(sizes)))
    if include_random:
        for s in range(50):
            n = 4 + (s % 7)
            graphs.append((f"gnp-{n}-s{s}", erdos_renyi(n, 0.5, seed=s)))
    return graphs
