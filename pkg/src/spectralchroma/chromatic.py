"""Exact combinatorial parameters: cocliques, stability and chromatic numbers,
and the fractional chromatic number with an LP witness.

Enumeration is guarded at n <= 40; everything here is exact at the desk
scales this package targets.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .graphs import Graph, complement
from .lp import LinearProgram, solve_lp

__all__ = [
    "FractionalColoring",
    "maximal_cocliques",
    "stability_number",
    "chromatic_number",
    "fractional_chromatic",
    "equality_form",
    "validate_fractional_coloring",
    "SizeGuardError",
]

_SIZE_GUARD = 40


class SizeGuardError(ValueError):
    pass


def _guard(g: Graph, what: str):
    if g.n > _SIZE_GUARD:
        raise SizeGuardError(f"{what} supports n <= {_SIZE_GUARD}, got n={g.n}")


@dataclass
class FractionalColoring:
    """Weighted cover of the vertices by cocliques; ``value`` is the total
    weight (equals the fractional chromatic number when optimal)."""

    cocliques: list[tuple[int, ...]]
    weights: np.ndarray
    value: float


# -- maximal cocliques (Bron-Kerbosch on the complement) -----------------------

def _degeneracy_order(n: int, masks: list[int]) -> list[int]:
    remaining = set(range(n))
    degs = {v: masks[v].bit_count() for v in remaining}
    order = []
    while remaining:
        v = min(remaining, key=lambda u: (degs[u], u))
        order.append(v)
        remaining.discard(v)
        for u in remaining:
            if (masks[v] >> u) & 1:
                degs[u] -= 1
    return order


def _bron_kerbosch_pivot(masks: list[int], r: int, p: int, x: int, out: list[int]):
    if p == 0 and x == 0:
        out.append(r)
        return
    # pivot on the candidate covering the most of P
    px = p | x
    pivot, best = -1, -1
    m = px
    while m:
        v = (m & -m).bit_length() - 1
        m &= m - 1
        cover = (p & masks[v]).bit_count()
        if cover > best:
            best, pivot = cover, v
    cand = p & ~masks[pivot]
    while cand:
        v = (cand & -cand).bit_length() - 1
        cand &= cand - 1
        bit = 1 << v
        _bron_kerbosch_pivot(masks, r | bit, p & masks[v], x & masks[v], out)
        p &= ~bit
        x |= bit


def maximal_cocliques(g: Graph) -> list[list[int]]:
    """All inclusion-maximal independent sets, each sorted, list sorted
    lexicographically.  Runs Bron-Kerbosch with degeneracy-order pivoting on
    the complement graph."""
    _guard(g, "coclique enumeration")
    n = g.n
    if n == 0:
        return []
    comp = complement(g)
    masks = comp.neighbor_masks
    out: list[int] = []
    order = _degeneracy_order(n, masks)
    p = (1 << n) - 1
    x = 0
    for v in order:
        bit = 1 << v
        _bron_kerbosch_pivot(masks, bit, p & masks[v], x & masks[v], out)
        p &= ~bit
        x |= bit
    sets = sorted(sorted(_bits_to_list(mask)) for mask in out)
    return sets


def _bits_to_list(mask: int) -> list[int]:
    vs = []
    while mask:
        v = (mask & -mask).bit_length() - 1
        vs.append(v)
        mask &= mask - 1
    return vs


def stability_number(g: Graph) -> int:
    _guard(g, "stability number")
    if g.n == 0:
        return 0
    return max(len(s) for s in maximal_cocliques(g))


# -- exact chromatic number (DSATUR branch and bound) ---------------------------

def _greedy_clique(g: Graph) -> list[int]:
    """Deterministic greedy clique from every start vertex; used as the
    branch-and-bound lower bound."""
    masks = g.neighbor_masks
    best: list[int] = []
    vertices = sorted(range(g.n), key=lambda v: (-g.degree(v), v))
    for start in vertices:
        clique = [start]
        cand = masks[start]
        while cand:
            pick, deg = -1, -1
            m = cand
            while m:
                v = (m & -m).bit_length() - 1
                m &= m - 1
                d = (cand & masks[v]).bit_count()
                if d > deg:
                    deg, pick = d, v
            clique.append(pick)
            cand &= masks[pick]
        if len(clique) > len(best):
            best = clique
    return sorted(best)


def _dsatur_greedy(g: Graph) -> tuple[int, list[int]]:
    n = g.n
    masks = g.neighbor_masks
    colors = [-1] * n
    sat = [0] * n  # bitmask of neighbor colors
    for _ in range(n):
        v = max(
            (u for u in range(n) if colors[u] < 0),
            key=lambda u: (sat[u].bit_count(), g.degree(u), -u),
        )
        c = 0
        while (sat[v] >> c) & 1:
            c += 1
        colors[v] = c
        m = masks[v]
        while m:
            u = (m & -m).bit_length() - 1
            m &= m - 1
            sat[u] |= 1 << c
        sat[v] = 0
    return max(colors) + 1 if n else 0, colors


def chromatic_number(g: Graph) -> int:
    """Exact chromatic number via DSATUR-ordered branch and bound with a
    greedy clique lower bound; deterministic."""
    _guard(g, "chromatic number")
    n = g.n
    if n == 0:
        return 0
    if g.m == 0:
        return 1
    clique = _greedy_clique(g)
    lb = len(clique)
    ub, _ = _dsatur_greedy(g)
    if lb == ub:
        return ub
    masks = g.neighbor_masks
    best = ub
    colors = [-1] * n
    # seed the search with the clique pre-colored (symmetry breaking)
    for c, v in enumerate(clique):
        colors[v] = c

    def saturation(v: int) -> int:
        seen = 0
        m = masks[v]
        while m:
            u = (m & -m).bit_length() - 1
            m &= m - 1
            if colors[u] >= 0:
                seen |= 1 << colors[u]
        return seen

    def descend(colored: int, used: int):
        nonlocal best
        if used >= best:
            return
        if colored == n:
            best = used
            return
        # most saturated uncolored vertex, ties by degree then index
        pick, key = -1, (-1, -1, 1)
        for v in range(n):
            if colors[v] < 0:
                kk = (saturation(v).bit_count(), g.degree(v), -v)
                if kk > key:
                    key, pick = kk, v
        forbidden = saturation(pick)
        limit = min(used + 1, best - 1)
        for c in range(limit):
            if not (forbidden >> c) & 1:
                colors[pick] = c
                descend(colored + 1, max(used, c + 1))
                colors[pick] = -1

    descend(lb, lb)
    return best


# -- fractional chromatic number -------------------------------------------------

def fractional_chromatic(g: Graph) -> tuple[float, FractionalColoring, tuple[int, int] | None]:
    """Optimal coclique cover weight, its witness, and a small-denominator
    rational reconstruction of the value (None when no q <= n verifies)."""
    _guard(g, "fractional chromatic number")
    n = g.n
    if n == 0:
        return 0.0, FractionalColoring([], np.zeros(0), 0.0), (0, 1)
    sets = maximal_cocliques(g)
    incidence = np.zeros((n, len(sets)))
    for col, s in enumerate(sets):
        incidence[s, col] = 1.0
    lp = LinearProgram(
        sense="min",
        c=np.ones(len(sets)),
        a=incidence,
        b=np.ones(n),
        relations=[">="] * n,
    )
    sol = solve_lp(lp)
    if sol.status != "optimal":
        raise RuntimeError(f"covering LP unexpectedly {sol.status}")
    value = float(sol.objective)
    keep = [(tuple(sets[j]), sol.x[j]) for j in range(len(sets)) if sol.x[j] > 1e-12]
    witness = FractionalColoring(
        cocliques=[s for s, _ in keep],
        weights=np.array([y for _, y in keep]),
        value=value,
    )
    return value, witness, _rationalize(value, n)


def _rationalize(value: float, max_den: int) -> tuple[int, int] | None:
    frac = Fraction(value).limit_denominator(max(1, max_den))
    if abs(float(frac) - value) <= 1e-7:
        return frac.numerator, frac.denominator
    return None


def validate_fractional_coloring(
    g: Graph, fc: FractionalColoring, equality: bool = False, tol: float = 1e-9
):
    """Raise unless every set is a coclique, weights are nonnegative, coverage
    is >= 1 (or == 1 in equality form), and the value matches the weights."""
    coverage = np.zeros(g.n)
    for s, y in zip(fc.cocliques, fc.weights):
        if y < -tol:
            raise ValueError("negative coclique weight")
        for a in range(len(s)):
            for b in range(a + 1, len(s)):
                if g.has_edge(s[a], s[b]):
                    raise ValueError(f"set {s} contains edge ({s[a]},{s[b]})")
        coverage[list(s)] += y
    if equality:
        if np.abs(coverage - 1.0).max(initial=0.0) > tol:
            raise ValueError("coverage is not exactly 1")
    elif np.min(coverage, initial=1.0) < 1.0 - tol:
        raise ValueError("coverage below 1")
    if abs(float(np.sum(fc.weights)) - fc.value) > tol * (1.0 + abs(fc.value)):
        raise ValueError("stored value disagrees with weights")


def equality_form(witness: FractionalColoring, g: Graph) -> FractionalColoring:
    """Convert a covering witness (coverage >= 1) into one with coverage
    exactly 1 and the same total weight, by moving surplus weight from
    over-covered sets onto sub-cocliques with the offending vertex removed."""
    validate_fractional_coloring(g, witness)
    weights: dict[tuple[int, ...], float] = {}
    for s, y in zip(witness.cocliques, witness.weights):
        if y > 0.0:
            weights[tuple(sorted(s))] = weights.get(tuple(sorted(s)), 0.0) + float(y)
    coverage = np.zeros(g.n)
    for s, y in weights.items():
        coverage[list(s)] += y
    for v in range(g.n):
        while coverage[v] > 1.0 + 1e-12:
            # take surplus out of the largest set containing v (deterministic)
            holders = sorted((s for s in weights if v in s and weights[s] > 0.0),
                             key=lambda s: (-len(s), s))
            s = holders[0]
            delta = min(weights[s], coverage[v] - 1.0)
            weights[s] -= delta
            if weights[s] <= 1e-15:
                del weights[s]
            reduced = tuple(u for u in s if u != v)
            if reduced or delta > 0.0:
                weights[reduced] = weights.get(reduced, 0.0) + delta
            coverage[v] -= delta
    sets = sorted(weights)
    out = FractionalColoring(
        cocliques=sets,
        weights=np.array([weights[s] for s in sets]),
        value=witness.value,
    )
    validate_fractional_coloring(g, out, equality=True)
    return out
