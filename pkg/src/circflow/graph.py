"""Loopless multigraphs with stable edge identities, plus the structural
predicates (cuts, bipartiteness, bridges, odd cuts) the other modules share.

Vertices are ``0..n-1``. Edge ``i`` is stored as ``(tail, head)``; that pair
is the edge's reference direction, used by flows to sign values. Parallel
edges are separate records and count separately everywhere.
"""
from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

import numpy as np

VertexSet = frozenset  # frozenset[int]

#: exhaustive subset scans are refused above this many vertices by default
SUBSET_SCAN_LIMIT = 20


class CircflowError(Exception):
    """Base class for errors raised by this package."""


class GraphError(CircflowError, ValueError):
    """Invalid vertex/edge ids or an operation that would break an invariant."""


class ScanLimitExceeded(CircflowError):
    """An exhaustive subset scan was not attempted because the graph is too large."""


class EdgeRecord(NamedTuple):
    id: int
    tail: int
    head: int

    def other(self, v: int) -> int:
        return self.head if v == self.tail else self.tail


@dataclass(frozen=True)
class Multigraph:
    n: int
    edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        if self.n < 0:
            raise GraphError(f"negative vertex count {self.n}")
        edges = tuple((int(u), int(v)) for u, v in self.edges)
        object.__setattr__(self, "edges", edges)
        for i, (u, v) in enumerate(edges):
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"edge {i} = ({u}, {v}) has an endpoint outside 0..{self.n - 1}")
            if u == v:
                raise GraphError(f"edge {i} is a loop at vertex {u}")

    @property
    def m(self) -> int:
        return len(self.edges)

    def edge(self, i: int) -> EdgeRecord:
        if not 0 <= i < self.m:
            raise GraphError(f"no edge with id {i}")
        u, v = self.edges[i]
        return EdgeRecord(i, u, v)

    def edge_records(self) -> list[EdgeRecord]:
        return [EdgeRecord(i, u, v) for i, (u, v) in enumerate(self.edges)]

    @cached_property
    def incidence(self) -> tuple[tuple[int, ...], ...]:
        """Edge ids incident to each vertex, ascending."""
        inc: list[list[int]] = [[] for _ in range(self.n)]
        for i, (u, v) in enumerate(self.edges):
            inc[u].append(i)
            inc[v].append(i)
        return tuple(tuple(x) for x in inc)

    def check_vertex(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise GraphError(f"no vertex with id {v}")

    def __repr__(self) -> str:
        return f"Multigraph(n={self.n}, m={self.m})"


def from_edges(n: int, pairs: Iterable[Sequence[int]]) -> Multigraph:
    return Multigraph(n, tuple((int(u), int(v)) for u, v in pairs))


@dataclass(frozen=True)
class Cut:
    source: frozenset
    edges: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class Bipartition:
    a: frozenset
    b: frozenset

    def side(self, v: int) -> int:
        return 0 if v in self.a else 1


# ---------------------------------------------------------------- degrees


def degree(G: Multigraph, v: int) -> int:
    G.check_vertex(v)
    return len(G.incidence[v])


def degrees(G: Multigraph) -> list[int]:
    return [len(x) for x in G.incidence]


def regular_degree(G: Multigraph) -> int | None:
    """The common degree if ``G`` is regular (and has a vertex), else ``None``."""
    ds = set(degrees(G))
    if len(ds) == 1:
        return ds.pop()
    return None


def max_degree(G: Multigraph) -> int:
    return max(degrees(G), default=0)


def max_multiplicity(G: Multigraph) -> int:
    if not G.edges:
        return 0
    c = Counter((min(u, v), max(u, v)) for u, v in G.edges)
    return max(c.values())


def parallel_classes(G: Multigraph) -> list[list[int]]:
    """Edge ids grouped by unordered endpoint pair, each group ascending."""
    groups: dict[tuple[int, int], list[int]] = {}
    for i, (u, v) in enumerate(G.edges):
        groups.setdefault((min(u, v), max(u, v)), []).append(i)
    return sorted(groups.values())


# ---------------------------------------------------------------- cuts


def boundary(G: Multigraph, X: Iterable[int]) -> Cut:
    """The edges with exactly one end in ``X``."""
    xs = frozenset(X)
    for v in xs:
        G.check_vertex(v)
    ids = tuple(i for i, (u, v) in enumerate(G.edges) if (u in xs) != (v in xs))
    return Cut(xs, ids)


def subset_masks(n: int) -> np.ndarray:
    return np.arange(1 << n, dtype=np.int64)


def cut_sizes(G: Multigraph, masks: np.ndarray) -> np.ndarray:
    """Vectorised ``|boundary(X)|`` for every bitmask in ``masks``."""
    out = np.zeros(masks.shape, dtype=np.int64)
    for u, v in G.edges:
        out += ((masks >> u) ^ (masks >> v)) & 1
    return out


def popcounts(masks: np.ndarray, n: int) -> np.ndarray:
    out = np.zeros(masks.shape, dtype=np.int64)
    for v in range(n):
        out += (masks >> v) & 1
    return out


def mask_to_set(mask: int) -> frozenset:
    mask = int(mask)
    return frozenset(v for v in range(mask.bit_length()) if mask >> v & 1)


def set_to_mask(X: Iterable[int]) -> int:
    return sum(1 << v for v in set(X))


# ---------------------------------------------------------------- connectivity


def components(G: Multigraph) -> list[list[int]]:
    """Vertex lists of the connected components, ordered by smallest vertex."""
    seen = [False] * G.n
    comps = []
    for s in range(G.n):
        if seen[s]:
            continue
        seen[s] = True
        comp, queue = [s], deque([s])
        while queue:
            x = queue.popleft()
            for e in G.incidence[x]:
                y = G.edge(e).other(x)
                if not seen[y]:
                    seen[y] = True
                    comp.append(y)
                    queue.append(y)
        comps.append(sorted(comp))
    return comps


def is_connected(G: Multigraph) -> bool:
    return len(components(G)) <= 1


def induced_subgraph(G: Multigraph, vertices: Sequence[int]) -> tuple[Multigraph, list[int]]:
    """Subgraph on ``vertices`` (relabelled in the given order) and the
    original ids of its edges."""
    index = {v: i for i, v in enumerate(vertices)}
    pairs, ids = [], []
    for i, (u, v) in enumerate(G.edges):
        if u in index and v in index:
            pairs.append((index[u], index[v]))
            ids.append(i)
    return from_edges(len(vertices), pairs), ids


def delete_edges(G: Multigraph, ids: Iterable[int]) -> Multigraph:
    drop = set(ids)
    return from_edges(G.n, (e for i, e in enumerate(G.edges) if i not in drop))


def two_coloring(G: Multigraph) -> tuple[Bipartition | None, list[int] | None]:
    """``(bipartition, None)`` or ``(None, odd_cycle)``.

    The odd cycle is returned as a list of edge ids forming a closed walk of
    odd length.
    """
    color = [-1] * G.n
    parent_edge = [-1] * G.n
    for s in range(G.n):
        if color[s] >= 0:
            continue
        color[s] = 0
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for e in G.incidence[x]:
                y = G.edge(e).other(x)
                if color[y] < 0:
                    color[y] = 1 - color[x]
                    parent_edge[y] = e
                    queue.append(y)
                elif color[y] == color[x]:
                    return None, _odd_cycle(G, parent_edge, x, y, e)
    a = frozenset(v for v in range(G.n) if color[v] == 0)
    return Bipartition(a, frozenset(range(G.n)) - a), None


def _odd_cycle(G: Multigraph, parent_edge: list[int], x: int, y: int, closing: int) -> list[int]:
    def path_to_root(v: int) -> list[tuple[int, int]]:
        out = [(v, -1)]
        while parent_edge[v] >= 0:
            e = parent_edge[v]
            v = G.edge(e).other(v)
            out[-1] = (out[-1][0], e)
            out.append((v, -1))
        return out

    px, py = path_to_root(x), path_to_root(y)
    on_py = {v: i for i, (v, _) in enumerate(py)}
    i = next(i for i, (v, _) in enumerate(px) if v in on_py)
    j = on_py[px[i][0]]
    up = [e for _, e in px[:i]]
    down = [e for _, e in py[:j]]
    return up + list(reversed(down)) + [closing]


def is_bipartite(G: Multigraph) -> Bipartition | None:
    return two_coloring(G)[0]


def bridges(G: Multigraph) -> list[int]:
    """Ids of all cut-edges, ascending. Parallel edges are never bridges."""
    disc = [-1] * G.n
    low = [0] * G.n
    out: list[int] = []
    timer = 0
    for root in range(G.n):
        if disc[root] >= 0:
            continue
        disc[root] = low[root] = timer
        timer += 1
        # frames: (vertex, edge used to enter, iterator position)
        stack = [(root, -1, 0)]
        while stack:
            v, pe, pos = stack[-1]
            inc = G.incidence[v]
            if pos < len(inc):
                stack[-1] = (v, pe, pos + 1)
                e = inc[pos]
                if e == pe:
                    continue
                w = G.edge(e).other(v)
                if disc[w] < 0:
                    disc[w] = low[w] = timer
                    timer += 1
                    stack.append((w, e, 0))
                else:
                    low[v] = min(low[v], disc[w])
            else:
                stack.pop()
                if stack:
                    u = stack[-1][0]
                    low[u] = min(low[u], low[v])
                    if low[v] > disc[u]:
                        out.append(pe)
    return sorted(out)


# ---------------------------------------------------------------- odd cuts


@dataclass(frozen=True)
class OddCutObstruction:
    vertices: frozenset
    cut: Cut

    @property
    def size(self) -> int:
        return self.cut.size


def _require_odd_regular(G: Multigraph) -> int:
    r = regular_degree(G)
    if r is None or r % 2 == 0:
        raise GraphError("graph must be regular of odd degree")
    return r


def odd_cut_obstruction(G: Multigraph, max_vertices: int = SUBSET_SCAN_LIMIT) -> OddCutObstruction | None:
    """Smallest odd vertex set whose boundary is below the regular degree.

    Among all odd ``X`` with ``|boundary(X)| < r`` the one returned minimises
    the cut size, then ``|X|``, then the sorted vertex tuple. For an
    odd-regular graph such a set forces class 2.
    """
    r = _require_odd_regular(G)
    n = G.n
    if n > max_vertices:
        raise ScanLimitExceeded(f"odd-cut scan not attempted: {n} vertices > bound {max_vertices}")
    masks = subset_masks(n)
    sizes = popcounts(masks, n)
    cuts = cut_sizes(G, masks)
    hit = np.nonzero((sizes % 2 == 1) & (cuts < r))[0]
    if hit.size == 0:
        return None
    best = min(hit.tolist(), key=lambda x: (int(cuts[x]), int(sizes[x]), x))
    X = mask_to_set(best)
    return OddCutObstruction(X, boundary(G, X))


def is_t_graph(G: Multigraph, t: int, max_vertices: int = SUBSET_SCAN_LIMIT) -> bool:
    """True iff ``G`` is a (2t+1)-graph: every odd set has boundary >= 2t+1."""
    if regular_degree(G) != 2 * t + 1:
        raise GraphError(f"graph is not {2 * t + 1}-regular")
    return odd_cut_obstruction(G, max_vertices) is None


# ---------------------------------------------------------------- primitives


def disjoint_union(*graphs: Multigraph) -> Multigraph:
    """Vertices and edges of each graph in turn, shifted past the previous ones."""
    n, pairs = 0, []
    for H in graphs:
        pairs.extend((u + n, v + n) for u, v in H.edges)
        n += H.n
    return from_edges(n, pairs)


def subdivide(G: Multigraph, e: int) -> Multigraph:
    """Replace edge ``e = (u, v)`` by ``(u, x)`` (keeping id ``e``) and
    ``(x, v)`` (new last id), with ``x = n`` a fresh vertex."""
    u, v = G.edge(e)[1:]
    pairs = list(G.edges)
    pairs[e] = (u, G.n)
    pairs.append((G.n, v))
    return from_edges(G.n + 1, pairs)


def identify_vertices(G: Multigraph, pairs: Iterable[tuple[int, int]]) -> Multigraph:
    """Merge ``b`` into ``a`` for each ``(a, b)``.

    Merged-away vertices are dropped and the survivors renumbered in
    ascending order; edges keep their ids.
    """
    pairs = list(pairs)
    used: set[int] = set()
    target = list(range(G.n))
    for a, b in pairs:
        G.check_vertex(a)
        G.check_vertex(b)
        if a == b or a in used or b in used:
            raise GraphError(f"identification pairs must be pairwise disjoint, got ({a}, {b})")
        used.update((a, b))
        target[b] = a
    dropped = {b for _, b in pairs}
    new_id = {}
    for v in range(G.n):
        if v not in dropped:
            new_id[v] = len(new_id)
    out = []
    for i, (u, v) in enumerate(G.edges):
        nu, nv = new_id[target[u]], new_id[target[v]]
        if nu == nv:
            raise GraphError(f"identification turns edge {i} into a loop")
        out.append((nu, nv))
    return from_edges(len(new_id), out)


def add_edge_copies(G: Multigraph, F: Sequence[int], k: int) -> Multigraph:
    """Append ``k`` parallel copies of each edge of ``F``: all copies of
    ``F[0]`` first, then ``F[1]``, and so on."""
    if k < 0:
        raise GraphError("copy count must be non-negative")
    for e in F:
        G.edge(e)
    extra = [G.edges[e] for e in F for _ in range(k)]
    return from_edges(G.n, list(G.edges) + extra)
