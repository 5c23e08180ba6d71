"""Graph families: multi-edge gadgets, the gadget gluing that forces class 2,
and the Petersen family obtained by adding copies of a 1-factor."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from .coloring import enumerate_perfect_matchings
from .graph import (
    CircflowError,
    GraphError,
    Multigraph,
    add_edge_copies,
    disjoint_union,
    from_edges,
    identify_vertices,
    is_t_graph,
    odd_cut_obstruction,
    regular_degree,
    subdivide,
)
from .valuations import is_balanced_brute, is_balanced_mincut


class ConstructionError(CircflowError):
    """A constructed graph failed its post-construction check."""


@dataclass(frozen=True)
class GadgetLabels:
    u: int
    v: int
    x: int


def k2_multi(t: int) -> Multigraph:
    """Two vertices joined by ``2t+1`` parallel edges."""
    if t < 1:
        raise GraphError("t must be at least 1")
    return from_edges(2, [(0, 1)] * (2 * t + 1))


def h_gadget(t: int) -> tuple[Multigraph, GadgetLabels]:
    """``k2_multi(t)`` with edge 0 subdivided by ``x = 2``."""
    return subdivide(k2_multi(t), 0), GadgetLabels(0, 1, 2)


def attach_h_gadgets(base: Multigraph, t: int) -> tuple[Multigraph, list[GadgetLabels]]:
    """Attach an ``h_gadget(t)`` to every vertex of a (2t-1)-regular graph.

    Base vertices keep ids ``0..n-1``; gadget ``i`` gets ``u = n + 2i`` and
    ``v = n + 2i + 1`` and its ``x`` is base vertex ``i``. Base edges keep
    their ids, gadget edges follow in gadget order.
    """
    if t <= 1:
        raise GraphError("gluing needs t > 1")
    if base.n and regular_degree(base) != 2 * t - 1:
        raise GraphError(f"base graph must be {2 * t - 1}-regular")
    H, _ = h_gadget(t)
    n = base.n
    G = disjoint_union(base, *([H] * n))
    G = identify_vertices(G, [(i, n + 3 * i + 2) for i in range(n)])
    labels = [GadgetLabels(n + 2 * i, n + 2 * i + 1, i) for i in range(n)]

    if regular_degree(G) != 2 * t + 1:
        raise ConstructionError("glued graph is not (2t+1)-regular")
    obs = odd_cut_obstruction(G) if G.n <= 20 else None
    if G.n <= 20 and (obs is None or obs.size != 2 * t - 1):
        raise ConstructionError("glued graph lacks the expected odd cut")
    return G, labels


# name used by the published API contract
glue_prop7 = attach_h_gadgets


PETERSEN = from_edges(
    10,
    [(i, (i + 1) % 5) for i in range(5)]
    + [(i, i + 5) for i in range(5)]
    + [(5 + i, 5 + (i + 2) % 5) for i in range(5)],
)


@dataclass(frozen=True)
class PetersenData:
    graph: Multigraph
    a: frozenset
    b: frozenset
    matching: tuple[int, ...]


@lru_cache(maxsize=None)
def petersen_data() -> PetersenData:
    """Petersen graph (outer 5-cycle 0-4, spokes i--i+5, inner pentagram
    5-9) with the first 5/5 vertex split (by sorted ``A``) on which +-5/3 is
    balanced and admits a perfect matching crossing the split, and the first
    such matching."""
    P = PETERSEN
    third = Fraction(5, 3)
    matchings = list(enumerate_perfect_matchings(P))
    for A in combinations(range(10), 5):
        A = frozenset(A)
        w = [third if v in A else -third for v in range(10)]
        if not is_balanced_brute(P, w):
            continue
        for F in matchings:
            if all((P.edges[e][0] in A) != (P.edges[e][1] in A) for e in F):
                return PetersenData(P, A, frozenset(range(10)) - A, F)
    raise ConstructionError("no balanced 5/3 split with a crossing 1-factor")


def petersen_family(t: int, check: bool = True) -> Multigraph:
    """Petersen plus ``2t-2`` extra copies of the fixed 1-factor."""
    if t < 1:
        raise GraphError("t must be at least 1")
    data = petersen_data()
    G = add_edge_copies(data.graph, data.matching, 2 * t - 2)
    if check:
        if not is_t_graph(G, t):
            raise ConstructionError(f"P_{2 * t + 1} is not a {2 * t + 1}-graph")
        c = 2 * t - Fraction(1, 3)
        w = [c if v in data.a else -c for v in range(G.n)]
        if not is_balanced_mincut(G, w):
            raise ConstructionError(f"+-{c} is not balanced on P_{2 * t + 1}")
    return G


def uniform_valuation(a, n: int, c) -> tuple[Fraction, ...]:
    return tuple(Fraction(c) if v in a else -Fraction(c) for v in range(n))
