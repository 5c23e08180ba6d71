"""Text formats: the ``mg`` multigraph format and graph6.

``mg`` files look like::

    # optional comments
    mg 2
    0 1
    0 1

one line per edge, in edge-id order; repeated lines are parallel edges.
"""
from __future__ import annotations

from pathlib import Path

from .graph import CircflowError, GraphError, Multigraph, from_edges

GRAPH6_MAX_ORDER = 258047


class GraphFormatError(CircflowError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def parse_multigraph(text: str) -> Multigraph:
    n = None
    pairs: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if n is None:
            if len(tokens) != 2 or tokens[0] != "mg":
                raise GraphFormatError(f"expected header 'mg <n>', got {line!r}", lineno)
            n = _int(tokens[1], lineno)
            if n < 0:
                raise GraphFormatError("vertex count must be non-negative", lineno)
            continue
        if len(tokens) != 2:
            raise GraphFormatError(f"expected '<u> <v>', got {line!r}", lineno)
        u, v = _int(tokens[0], lineno), _int(tokens[1], lineno)
        for x in (u, v):
            if not 0 <= x < n:
                raise GraphFormatError(f"vertex id {x} out of range 0..{n - 1}", lineno)
        if u == v:
            raise GraphFormatError(f"loop at vertex {u} rejected", lineno)
        pairs.append((u, v))
    if n is None:
        raise GraphFormatError("missing header 'mg <n>'")
    return from_edges(n, pairs)


def _int(token: str, lineno: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise GraphFormatError(f"non-integer token {token!r}", lineno) from None


def serialize(G: Multigraph) -> str:
    lines = [f"mg {G.n}"] + [f"{u} {v}" for u, v in G.edges]
    return "\n".join(lines) + "\n"


def parse_graph6(text: str) -> Multigraph:
    """Decode one graph6 line (simple graphs only). Edges come out in
    column-major upper-triangle order, i.e. ``(i, j)`` with ``i < j`` sorted
    by ``j`` then ``i``."""
    s = text.strip()
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<"):]
    if not s:
        raise GraphFormatError("empty graph6 string")
    data = []
    for ch in s:
        c = ord(ch)
        if not 63 <= c <= 126:
            raise GraphFormatError(f"invalid graph6 character {ch!r}")
        data.append(c - 63)
    if data[0] < 63:
        n, body = data[0], data[1:]
    elif len(data) >= 4 and data[1] < 63:
        n = (data[1] << 12) | (data[2] << 6) | data[3]
        body = data[4:]
    else:
        raise GraphFormatError(f"graph6 orders above {GRAPH6_MAX_ORDER} are not supported")
    nbits = n * (n - 1) // 2
    if len(body) != (nbits + 5) // 6:
        raise GraphFormatError(f"graph6 body has {len(body)} bytes, expected {(nbits + 5) // 6} for n={n}")
    bits = [(b >> (5 - k)) & 1 for b in body for k in range(6)]
    pairs = []
    pos = 0
    for j in range(1, n):
        for i in range(j):
            if bits[pos]:
                pairs.append((i, j))
            pos += 1
    if any(bits[nbits:]):
        raise GraphFormatError("graph6 padding bits must be zero")
    return from_edges(n, pairs)


def to_graph6(G: Multigraph) -> str:
    n = G.n
    if n > GRAPH6_MAX_ORDER:
        raise GraphError(f"graph6 supports at most {GRAPH6_MAX_ORDER} vertices")
    adj = {(min(u, v), max(u, v)) for u, v in G.edges}
    if len(adj) != G.m:
        raise GraphError("graph6 cannot encode parallel edges")
    bits = [1 if (i, j) in adj else 0 for j in range(1, n) for i in range(j)]
    bits += [0] * (-len(bits) % 6)
    if n < 63:
        head = [n]
    else:
        head = [63, n >> 12 & 63, n >> 6 & 63, n & 63]
    body = [int("".join(map(str, bits[k:k + 6])), 2) for k in range(0, len(bits), 6)]
    return "".join(chr(c + 63) for c in head + body)


def read_graphs(path: str | Path) -> list[tuple[str, Multigraph]]:
    """Load a file as ``[(graph_id, graph)]``.

    ``.mg`` files hold one multigraph; ``.g6`` files hold one graph6 string
    per line, named ``<stem>#<line>``.
    """
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix == ".g6" or (path.suffix != ".mg" and not text.lstrip().startswith(("mg", "#"))):
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if len(lines) == 1:
            return [(path.stem, parse_graph6(lines[0]))]
        return [(f"{path.stem}#{i}", parse_graph6(ln)) for i, ln in enumerate(lines, start=1)]
    return [(path.stem, parse_multigraph(text))]


def read_graph(path: str | Path) -> Multigraph:
    graphs = read_graphs(path)
    if len(graphs) != 1:
        raise GraphFormatError(f"{path} holds {len(graphs)} graphs, expected one")
    return graphs[0][1]
