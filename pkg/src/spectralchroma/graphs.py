"""Simple undirected graphs: representation, generators, and matrices.

Vertices are the integers 0..n-1.  Edges are stored as a frozenset of
``(i, j)`` pairs with ``i < j``; a Graph is immutable after construction and
safe to share between threads.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .rng import SplitMix64

__all__ = [
    "Graph",
    "FamilySpec",
    "generate",
    "complement",
    "adjacency_matrix",
    "cycle",
    "complete",
    "empty",
    "kneser",
    "petersen",
    "complete_multipartite",
    "erdos_renyi",
    "validate_weights",
]


def _normalize_edge(i: int, j: int) -> tuple[int, int]:
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 0..n-1."""

    n: int
    edges: frozenset[tuple[int, int]] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError(f"vertex count must be >= 0, got {self.n}")
        for i, j in self.edges:
            if i == j:
                raise ValueError(f"self-loop at vertex {i}")
            if not (0 <= i < j < self.n):
                raise ValueError(f"edge ({i},{j}) out of range for n={self.n}")

    @staticmethod
    def from_edges(n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        """Build from arbitrary (i, j) pairs; orientation and duplicates collapse."""
        return Graph(n, frozenset(_normalize_edge(i, j) for i, j in edges))

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def edge_list(self) -> list[tuple[int, int]]:
        """Edges sorted lexicographically (deterministic iteration order)."""
        return sorted(self.edges)

    @cached_property
    def neighbor_masks(self) -> list[int]:
        """Adjacency as bitmasks: bit j of entry i set iff ij is an edge."""
        masks = [0] * self.n
        for i, j in self.edges:
            masks[i] |= 1 << j
            masks[j] |= 1 << i
        return masks

    def has_edge(self, i: int, j: int) -> bool:
        return _normalize_edge(i, j) in self.edges

    def degree(self, i: int) -> int:
        return self.neighbor_masks[i].bit_count()


def complement(g: Graph) -> Graph:
    """Graph with edge {i,j} present iff absent in ``g`` (an involution)."""
    all_pairs = itertools.combinations(range(g.n), 2)
    return Graph(g.n, frozenset(p for p in all_pairs if p not in g.edges))


def adjacency_matrix(g: Graph) -> np.ndarray:
    """Dense symmetric 0/1 adjacency matrix with zero diagonal."""
    a = np.zeros((g.n, g.n))
    for i, j in g.edges:
        a[i, j] = 1.0
        a[j, i] = 1.0
    return a


# -- generators ---------------------------------------------------------------

_FAMILY_KINDS = (
    "cycle",
    "complete",
    "empty",
    "kneser",
    "complete-multipartite",
    "petersen",
    "erdos-renyi",
)


@dataclass(frozen=True)
class FamilySpec:
    """Parameterized test-family description (see ``generate``)."""

    kind: str
    parameters: tuple[int, ...] = ()
    seed: int = 0
    probability: float = 0.5  # erdos-renyi only

    def __post_init__(self):
        if self.kind not in _FAMILY_KINDS:
            raise ValueError(f"unknown family kind {self.kind!r}")

    def name(self) -> str:
        parts = [self.kind] + [str(p) for p in self.parameters]
        if self.kind == "erdos-renyi":
            parts += [f"p{self.probability:g}", f"s{self.seed}"]
        return "-".join(parts)


def cycle(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle requires n >= 3")
    return Graph.from_edges(n, ((i, (i + 1) % n) for i in range(n)))


def complete(n: int) -> Graph:
    return Graph(n, frozenset(itertools.combinations(range(n), 2)))


def empty(n: int) -> Graph:
    return Graph(n)


def _colex_subsets(n: int, k: int) -> list[tuple[int, ...]]:
    """k-subsets of {0..n-1} in colexicographic order.

    Fixed ordering so that vertex indices of Kneser graphs (and hence any
    stored weight vectors or certificates) are reproducible.
    """
    subsets = sorted(itertools.combinations(range(n), k), key=lambda s: s[::-1])
    return subsets


def kneser(n: int, k: int) -> Graph:
    """Vertices are k-subsets of an n-set; edges join disjoint subsets."""
    if not (n >= 2 * k >= 2):
        raise ValueError(f"kneser requires n >= 2k >= 2, got ({n},{k})")
    subsets = _colex_subsets(n, k)
    sets = [frozenset(s) for s in subsets]
    edges = [
        (a, b)
        for a, b in itertools.combinations(range(len(sets)), 2)
        if sets[a].isdisjoint(sets[b])
    ]
    return Graph.from_edges(len(sets), edges)


def petersen() -> Graph:
    return kneser(5, 2)


def complete_multipartite(sizes: Sequence[int]) -> Graph:
    if not sizes or any(s < 1 for s in sizes):
        raise ValueError("part sizes must be positive")
    bounds = np.cumsum([0] + list(sizes))
    parts = [range(bounds[t], bounds[t + 1]) for t in range(len(sizes))]
    edges = [
        (i, j)
        for a, b in itertools.combinations(range(len(parts)), 2)
        for i in parts[a]
        for j in parts[b]
    ]
    return Graph.from_edges(int(bounds[-1]), edges)


def erdos_renyi(n: int, p: float, seed: int = 0) -> Graph:
    """G(n, p) sampled edge-by-edge from SplitMix64(seed).

    Pairs are visited in lexicographic order (0,1), (0,2), ..., (n-2,n-1);
    pair (i, j) becomes an edge iff the next uniform draw is < p.  Equal
    seeds therefore produce identical edge sets on every platform.
    """
    if not (0.0 <= p <= 1.0):
        raise ValueError("probability must be in [0, 1]")
    rng = SplitMix64(seed)
    edges = [(i, j) for i, j in itertools.combinations(range(n), 2) if rng.uniform() < p]
    return Graph.from_edges(n, edges)


def generate(spec: FamilySpec) -> Graph:
    """Instantiate a graph family from its spec."""
    kind, params = spec.kind, spec.parameters
    expected = {"cycle": 1, "complete": 1, "empty": 1, "kneser": 2, "petersen": 0, "erdos-renyi": 1}
    if kind in expected and len(params) != expected[kind]:
        raise ValueError(f"{kind} expects {expected[kind]} parameter(s), got {len(params)}")
    if kind == "cycle":
        return cycle(params[0])
    if kind == "complete":
        return complete(params[0])
    if kind == "empty":
        return empty(params[0])
    if kind == "kneser":
        return kneser(params[0], params[1])
    if kind == "petersen":
        return petersen()
    if kind == "complete-multipartite":
        return complete_multipartite(params)
    if kind == "erdos-renyi":
        return erdos_renyi(params[0], spec.probability, spec.seed)
    raise ValueError(f"unknown family kind {kind!r}")


# -- vertex weights -----------------------------------------------------------

def validate_weights(g: Graph, w, require_nonzero: bool = False) -> np.ndarray:
    """Check a vertex-weight vector against ``g`` and return it as float64.

    Entries below 1e-14 are treated as exactly zero so that support logic
    (square roots, certificate construction) is stable.
    """
    arr = np.asarray(w, dtype=np.float64).reshape(-1)
    if arr.shape[0] != g.n:
        raise ValueError(f"weight vector has length {arr.shape[0]}, graph has n={g.n}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("weights must be finite")
    if np.any(arr < 0):
        raise ValueError("weights must be non-negative")
    arr = arr.copy()
    arr[arr < 1e-14] = 0.0
    if require_nonzero and not arr.any():
        raise ValueError("weight vector must not be identically zero")
    return arr
