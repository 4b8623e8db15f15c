"""Graph interchange formats: graph6, DIMACS edge files, plain edge lists.

graph6 follows Brendan McKay's specification: a size header (one byte for
n <= 62, or ``~`` + 3 bytes for n <= 258047), then the upper triangle of the
adjacency matrix read column by column, packed into 6-bit groups offset by 63.
"""

from __future__ import annotations

from .graphs import Graph

__all__ = [
    "GraphParseError",
    "parse_graph6",
    "encode_graph6",
    "parse_dimacs",
    "parse_edge_list",
]

_G6_MAX_SHORT = 62
_G6_MAX_LONG = 258047


class GraphParseError(ValueError):
    """Malformed graph input; ``offset`` is the byte position when known."""

    def __init__(self, message: str, offset: int | None = None):
        self.offset = offset
        if offset is not None:
            message = f"{message} (byte offset {offset})"
        super().__init__(message)


def _check_chars(text: str, start: int = 0):
    for pos in range(start, len(text)):
        c = ord(text[pos])
        if not (63 <= c <= 126):
            raise GraphParseError(f"character {text[pos]!r} outside graph6 range [63,126]", pos)


def parse_graph6(text: str) -> Graph:
    """Decode one graph6 line into a Graph."""
    s = text.strip()
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<"):]
    if not s:
        raise GraphParseError("empty graph6 string", 0)
    _check_chars(s)
    if s[0] == "~":
        if len(s) >= 2 and s[1] == "~":
            raise GraphParseError("graph6 sizes above 258047 are not supported", 0)
        if len(s) < 4:
            raise GraphParseError("truncated extended size prefix", len(s))
        n = 0
        for pos in range(1, 4):
            n = (n << 6) | (ord(s[pos]) - 63)
        body_start = 4
    else:
        n = ord(s[0]) - 63
        body_start = 1
    if n > _G6_MAX_LONG:
        raise GraphParseError(f"vertex count {n} out of range", 0)

    nbits = n * (n - 1) // 2
    nbytes = (nbits + 5) // 6
    body = s[body_start:]
    if len(body) != nbytes:
        raise GraphParseError(
            f"expected {nbytes} data bytes for n={n}, found {len(body)}", body_start + min(len(body), nbytes)
        )

    bits = []
    for ch in body:
        v = ord(ch) - 63
        bits.extend((v >> shift) & 1 for shift in range(5, -1, -1))
    for extra in range(nbits, len(bits)):
        if bits[extra]:
            raise GraphParseError("nonzero padding bits", body_start + extra // 6)

    edges = []
    idx = 0
    for j in range(1, n):
        for i in range(j):
            if bits[idx]:
                edges.append((i, j))
            idx += 1
    return Graph.from_edges(n, edges)


def encode_graph6(g: Graph) -> str:
    """Encode a Graph as canonical graph6 (zero padding bits)."""
    n = g.n
    if n <= _G6_MAX_SHORT:
        header = chr(n + 63)
    elif n <= _G6_MAX_LONG:
        header = "~" + "".join(chr(((n >> shift) & 63) + 63) for shift in (12, 6, 0))
    else:
        raise ValueError(f"vertex count {n} too large for graph6")

    bits = []
    for j in range(1, n):
        for i in range(j):
            bits.append(1 if g.has_edge(i, j) else 0)
    while len(bits) % 6:
        bits.append(0)
    chars = []
    for pos in range(0, len(bits), 6):
        v = 0
        for b in bits[pos:pos + 6]:
            v = (v << 1) | b
        chars.append(chr(v + 63))
    return header + "".join(chars)


def parse_dimacs(text: str) -> Graph:
    """Parse a DIMACS edge-format graph (``p edge n m`` header, 1-indexed)."""
    n = None
    declared_m = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None:
                raise GraphParseError(f"duplicate problem line at line {lineno}")
            if len(parts) != 4 or parts[1] not in ("edge", "col"):
                raise GraphParseError(f"bad problem line {line!r} at line {lineno}")
            n, declared_m = int(parts[2]), int(parts[3])
        elif parts[0] == "e":
            if n is None:
                raise GraphParseError(f"edge line before problem line at line {lineno}")
            if len(parts) != 3:
                raise GraphParseError(f"bad edge line {line!r} at line {lineno}")
            i, j = int(parts[1]), int(parts[2])
            if not (1 <= i <= n and 1 <= j <= n):
                raise GraphParseError(f"vertex index out of range at line {lineno}")
            if i != j:
                edges.append((i - 1, j - 1))
        else:
            raise GraphParseError(f"unrecognized line {line!r} at line {lineno}")
    if n is None:
        raise GraphParseError("missing problem line")
    g = Graph.from_edges(n, edges)
    if declared_m is not None and declared_m != g.m and declared_m != len(edges):
        raise GraphParseError(f"header declares {declared_m} edges, found {g.m} distinct")
    return g


def parse_edge_list(text: str, n: int | None = None) -> Graph:
    """Parse whitespace-separated 0-indexed ``i j`` pairs, one per line.

    Vertex count defaults to 1 + the largest index seen; duplicate and
    reversed pairs collapse.
    """
    edges = []
    top = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#")[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphParseError(f"expected 'i j' at line {lineno}, got {line!r}")
        i, j = int(parts[0]), int(parts[1])
        if i < 0 or j < 0:
            raise GraphParseError(f"negative vertex index at line {lineno}")
        if i == j:
            raise GraphParseError(f"self-loop at line {lineno}")
        top = max(top, i, j)
        edges.append((i, j))
    count = top + 1 if n is None else n
    if top >= count:
        raise GraphParseError(f"vertex index {top} out of range for n={count}")
    return Graph.from_edges(count, edges)
