"""Exact chromatic index, class 1/2, perfect matchings and bipartizing 1-factors."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator

from .flows import Budget, BudgetExhausted, FcStatus, Verdict, _Clock, circular_flow_number, has_nwz_flow
from .graph import (
    SUBSET_SCAN_LIMIT,
    Bipartition,
    GraphError,
    Multigraph,
    bridges,
    delete_edges,
    is_connected,
    max_degree,
    max_multiplicity,
    odd_cut_obstruction,
    parallel_classes,
    regular_degree,
    two_coloring,
)
from .valuations import is_balanced_mincut


class GraphClass(str, enum.Enum):
    CLASS1 = "class1"
    CLASS2 = "class2"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class EdgeColoring:
    num_colors: int
    colors: tuple[int, ...]

    def classes(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.num_colors)]
        for e, c in enumerate(self.colors):
            out[c].append(e)
        return out


@dataclass
class ChromaticIndex:
    value: int | None  # None when the search ran out of budget
    coloring: EdgeColoring | None
    lower: int
    upper: int
    nodes: int = 0

    @property
    def exact(self) -> bool:
        return self.value is not None


def is_proper(G: Multigraph, coloring: EdgeColoring) -> bool:
    if len(coloring.colors) != G.m:
        return False
    for v in range(G.n):
        seen = [coloring.colors[e] for e in G.incidence[v]]
        if len(set(seen)) != len(seen):
            return False
    return all(0 <= c < coloring.num_colors for c in coloring.colors)


def _try_colors(G: Multigraph, c: int, clock: _Clock) -> list[int] | None:
    """Proper edge colouring with ``c`` colours, edges taken in id order.

    Symmetry: edge ``e`` may open at most one new colour, and parallel edges
    get increasing colours in id order.
    """
    m = G.m
    color = [-1] * m
    used = [0] * G.n  # colour bitmask per vertex
    left = [len(x) for x in G.incidence]  # uncoloured incident edges
    full = (1 << c) - 1
    prev_parallel = [-1] * m
    for cls in parallel_classes(G):
        for a, b in zip(cls, cls[1:]):
            prev_parallel[b] = a

    def room(v: int) -> bool:
        return left[v] <= c - bin(used[v]).count("1")

    def go(e: int, top: int) -> bool:
        if e == m:
            return True
        clock.tick()
        u, v = G.edges[e]
        free = full & ~(used[u] | used[v])
        floor = color[prev_parallel[e]] + 1 if prev_parallel[e] >= 0 else 0
        for col in range(floor, min(top + 1, c)):
            bit = 1 << col
            if not free & bit:
                continue
            color[e] = col
            used[u] |= bit
            used[v] |= bit
            left[u] -= 1
            left[v] -= 1
            if room(u) and room(v) and go(e + 1, max(top, col + 1)):
                return True
            used[u] &= ~bit
            used[v] &= ~bit
            left[u] += 1
            left[v] += 1
        color[e] = -1
        return False

    return list(color) if go(0, 0) else None


def chromatic_index(G: Multigraph, budget: Budget | None = None) -> ChromaticIndex:
    if G.m == 0:
        return ChromaticIndex(0, EdgeColoring(0, ()), 0, 0)
    lo = max_degree(G)
    hi = lo + max_multiplicity(G)
    clock = _Clock(budget or Budget())
    for c in range(lo, hi + 1):
        try:
            found = _try_colors(G, c, clock)
        except BudgetExhausted:
            return ChromaticIndex(None, None, c, hi, clock.nodes)
        if found is not None:
            return ChromaticIndex(c, EdgeColoring(c, tuple(found)), c, c, clock.nodes)
    raise AssertionError("no colouring within Vizing's bound")  # unreachable for loopless graphs


@dataclass
class Classification:
    graph_class: GraphClass
    method: str  # "odd-cut" or "search"
    chromatic: ChromaticIndex | None = None
    obstruction: object | None = None


def classify(G: Multigraph, budget: Budget | None = None, max_vertices: int = SUBSET_SCAN_LIMIT) -> Classification:
    """Class 1 iff the chromatic index equals the maximum degree.

    For odd-regular graphs an odd set with a small boundary settles class 2
    without searching: each colour class would be a perfect matching and
    must cross every odd set.
    """
    r = regular_degree(G)
    if r is not None and r % 2 == 1 and G.n <= max_vertices:
        obs = odd_cut_obstruction(G, max_vertices)
        if obs is not None:
            return Classification(GraphClass.CLASS2, "odd-cut", obstruction=obs)
    chi = chromatic_index(G, budget)
    if not chi.exact:
        cls = GraphClass.CLASS2 if chi.lower > max_degree(G) else GraphClass.UNKNOWN
        return Classification(cls, "search", chi)
    cls = GraphClass.CLASS1 if chi.value == max_degree(G) else GraphClass.CLASS2
    return Classification(cls, "search", chi)


# ---------------------------------------------------------------- matchings


def enumerate_perfect_matchings(G: Multigraph) -> Iterator[tuple[int, ...]]:
    """All perfect matchings as ascending edge-id tuples.

    Branches on the lowest uncovered vertex, trying its edges by id, so the
    order is deterministic and each matching appears once.
    """
    if G.n % 2:
        return
    covered = [False] * G.n
    chosen: list[int] = []

    def go(start: int) -> Iterator[tuple[int, ...]]:
        v = start
        while v < G.n and covered[v]:
            v += 1
        if v == G.n:
            yield tuple(sorted(chosen))
            return
        covered[v] = True
        for e in G.incidence[v]:
            w = G.edge(e).other(v)
            if not covered[w]:
                covered[w] = True
                chosen.append(e)
                yield from go(v + 1)
                chosen.pop()
                covered[w] = False
        covered[v] = False

    yield from go(0)


def bipartizing_one_factor(G: Multigraph) -> tuple[tuple[int, ...], Bipartition] | None:
    """First perfect matching ``F`` (enumeration order) with ``G - F`` bipartite."""
    r = regular_degree(G)
    if r is None or r % 2 == 0:
        raise GraphError("graph must be regular of odd degree")
    for F in enumerate_perfect_matchings(G):
        bip, _ = two_coloring(delete_edges(G, F))
        if bip is not None:
            return F, bip
    return None


# ---------------------------------------------------------------- 1-factor / flow link


@dataclass
class FactorFlowReport:
    t: int
    threshold: Fraction
    bipartite: bool
    factor: tuple[int, ...] | None
    flow_at_threshold: Verdict
    fc: Fraction | None = None
    # +-2t on the sides of G - F, i.e. k_v = +-1 at the threshold
    valuation_balanced: bool | None = None
    agree: bool = True
    notes: list[str] = field(default_factory=list)


def check_factor_flow_link(
    G: Multigraph,
    decide: Callable = has_nwz_flow,
    fc: Callable = circular_flow_number,
    budget: Budget | None = None,
) -> FactorFlowReport:
    """Compare the bipartizing-1-factor side with the flow side at
    ``2 + 2/(2t-1)``, and for non-bipartite graphs with ``F_c`` itself."""
    r = regular_degree(G)
    if r is None or r % 2 == 0:
        raise GraphError("graph must be regular of odd degree")
    if not is_connected(G) or bridges(G):
        raise GraphError("graph must be connected and bridgeless")
    t = (r - 1) // 2
    threshold = 2 + Fraction(2, 2 * t - 1)
    found = bipartizing_one_factor(G)
    decision = decide(G, threshold, budget)
    bip = two_coloring(G)[0] is not None
    rep = FactorFlowReport(t, threshold, bip, found[0] if found else None, decision.verdict)
    if found is not None:
        sides = found[1]
        w = [2 * t if v in sides.a else -2 * t for v in range(G.n)]
        rep.valuation_balanced = bool(is_balanced_mincut(G, w))
        if not rep.valuation_balanced:
            rep.agree = False
            rep.notes.append(f"+-{2 * t} on the sides of G - F is not balanced")
    if decision.verdict is Verdict.UNKNOWN:
        rep.notes.append("flow decision at threshold ran out of budget")
    elif (found is not None) != (decision.verdict is Verdict.YES):
        rep.agree = False
        rep.notes.append("1-factor side and flow side disagree")
    if not bip:
        res = fc(G, budget=budget)
        if res.status is FcStatus.EXACT:
            rep.fc = res.value
            if (found is not None) != (res.value == threshold):
                rep.agree = False
                rep.notes.append(f"1-factor side disagrees with F_c = {res.value}")
        else:
            rep.notes.append("F_c not computed exactly")
    return rep


def format_coloring(coloring: EdgeColoring) -> str:
    return "".join(f"color {c}: {' '.join(map(str, ids))}\n" for c, ids in enumerate(coloring.classes()))


def format_matching(ids) -> str:
    return f"matching: {' '.join(map(str, ids))}\n"
