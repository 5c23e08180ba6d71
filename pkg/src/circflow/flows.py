"""Nowhere-zero r-flows: verification, exact decision, circular flow number.

Everything here is exact (``fractions.Fraction``). For ``r = p/q`` in lowest
terms a nowhere-zero r-flow exists iff there is an integer circulation with
``q <= |x(e)| <= p - q`` on every edge; both solvers search for that integer
circulation and divide by ``q`` to produce the certificate.

Two decision procedures are provided:

``"orientation"`` (default)
    branches on edge directions; each node checks the convex relaxation
    (undirected edges may carry anything in ``[-(p-q), p-q]``) with an exact
    circulation feasibility test, plus local degree-ratio propagation.
``"cycle-space"``
    free variables on the cotree edges of a spanning forest, tree-edge values
    derived from fundamental cycles, interval pruning on tree edges.
"""
from __future__ import annotations

import enum
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .graph import CircflowError, GraphError, Multigraph, bridges, components, induced_subgraph, parallel_classes
from .maxflow import feasible_circulation

LADDER_CEILING = 6
DEFAULT_NODE_BUDGET = 10**9


class Verdict(str, enum.Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


class FcStatus(str, enum.Enum):
    EXACT = "exact-within-bound"
    LOWER_BOUND = "lower-bound-only"
    BRIDGE = "undefined-bridge"


@dataclass(frozen=True)
class Budget:
    nodes: int = DEFAULT_NODE_BUDGET
    seconds: float | None = None


class BudgetExhausted(Exception):
    pass


@dataclass(frozen=True)
class FlowAssignment:
    """Signed value per edge id, relative to the edge's stored direction."""

    r: Fraction
    values: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "r", Fraction(self.r))
        object.__setattr__(self, "values", tuple(Fraction(x) for x in self.values))


@dataclass
class FlowDecision:
    verdict: Verdict
    r: Fraction
    certificate: FlowAssignment | None = None
    nodes: int = 0
    seconds: float = 0.0
    method: str = ""

    def __bool__(self) -> bool:
        return self.verdict is Verdict.YES


@dataclass
class FcResult:
    value: Fraction | None
    status: FcStatus
    witness: FlowAssignment | None = None
    # the ladder candidate just below ``value`` and the decision refusing it;
    # ``None`` when value is 2 (r < 2 never admits a flow on a graph with edges)
    refusal: FlowDecision | None = None
    largest_refuted: Fraction | None = None
    denominator_bound: int = 0
    nodes: int = 0
    probes: list[FlowDecision] = field(default_factory=list)


def as_fraction(r) -> Fraction:
    if isinstance(r, str):
        return Fraction(r.strip())
    return Fraction(r)


# ---------------------------------------------------------------- verification


def verify_flow(G: Multigraph, f: FlowAssignment) -> bool:
    if len(f.values) != G.m:
        raise GraphError(f"flow has {len(f.values)} values for {G.m} edges")
    r = f.r
    for x in f.values:
        if not 1 <= abs(x) <= r - 1:
            return False
    net = [Fraction(0)] * G.n
    for (u, v), x in zip(G.edges, f.values):
        net[u] += x
        net[v] -= x
    return all(x == 0 for x in net)


def negate_edge(f: FlowAssignment, e: int) -> FlowAssignment:
    """Flip the sign of one value; pair with reversing the edge's direction."""
    vals = list(f.values)
    vals[e] = -vals[e]
    return FlowAssignment(f.r, tuple(vals))


def reverse_edge(G: Multigraph, e: int) -> Multigraph:
    pairs = list(G.edges)
    u, v = pairs[e]
    pairs[e] = (v, u)
    return Multigraph(G.n, tuple(pairs))


def normalize_positive(G: Multigraph, f: FlowAssignment) -> tuple[tuple[int, ...], tuple[Fraction, ...]]:
    """Orientation (+1 keeps the stored direction, -1 reverses it) under
    which every value of ``f`` is positive, and those positive values."""
    if not verify_flow(G, f):
        raise GraphError("not a valid nowhere-zero flow")
    orientation = tuple(1 if x > 0 else -1 for x in f.values)
    return orientation, tuple(abs(x) for x in f.values)


def oriented_graph(G: Multigraph, orientation: Sequence[int]) -> Multigraph:
    return Multigraph(G.n, tuple((u, v) if s > 0 else (v, u) for (u, v), s in zip(G.edges, orientation)))


def format_certificate(f: FlowAssignment) -> str:
    lines = [f"flow r={f.r.numerator}/{f.r.denominator}"]
    for i, x in enumerate(f.values):
        sign = "-" if x < 0 else "+"
        lines.append(f"{i} {sign}{abs(x).numerator}/{abs(x).denominator}")
    return "\n".join(lines) + "\n"


def parse_certificate(text: str) -> FlowAssignment:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if not lines or not lines[0].startswith("flow r="):
        raise ValueError("certificate must start with 'flow r=<p>/<q>'")
    r = Fraction(lines[0][len("flow r="):])
    vals: dict[int, Fraction] = {}
    for ln in lines[1:]:
        eid, val = ln.split()
        vals[int(eid)] = Fraction(val)
    if sorted(vals) != list(range(len(vals))):
        raise ValueError("certificate edge ids must be 0..m-1")
    return FlowAssignment(r, tuple(vals[i] for i in range(len(vals))))


# ---------------------------------------------------------------- decision


def flow_bounds(r: Fraction) -> tuple[int, int]:
    """``(k, n)`` with ``r = 1 + n/k`` in lowest terms."""
    return r.denominator, r.numerator - r.denominator


class _Clock:
    def __init__(self, budget: Budget):
        self.budget = budget
        self.nodes = 0
        self.start = time.perf_counter()
        self.deadline = None if budget.seconds is None else self.start + budget.seconds

    def tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.budget.nodes:
            raise BudgetExhausted
        if self.deadline is not None and self.nodes % 256 == 0 and time.perf_counter() > self.deadline:
            raise BudgetExhausted

    @property
    def elapsed(self) -> float:
        return time.perf_counter() - self.start


def has_nwz_flow(G: Multigraph, r, budget: Budget | None = None, method: str = "orientation") -> FlowDecision:
    """Decide whether ``G`` has a nowhere-zero ``r``-flow.

    A YES always carries a certificate passing :func:`verify_flow`; running
    out of budget gives UNKNOWN, never NO.
    """
    r = as_fraction(r)
    budget = budget or Budget()
    clock = _Clock(budget)
    if method not in SOLVERS:
        raise ValueError(f"unknown method {method!r}; choose from {sorted(SOLVERS)}")

    def done(verdict: Verdict, ints: list[int] | None = None) -> FlowDecision:
        cert = None
        if ints is not None:
            cert = FlowAssignment(r, tuple(Fraction(x, r.denominator) for x in ints))
            if not verify_flow(G, cert):
                raise CircflowError("solver produced an invalid certificate")
        return FlowDecision(verdict, r, cert, clock.nodes, clock.elapsed, method)

    if G.m == 0:
        return done(Verdict.YES, [])
    if r < 2 or bridges(G):
        return done(Verdict.NO)
    k, n = flow_bounds(r)
    try:
        ints = SOLVERS[method](G, k, n, clock)
    except BudgetExhausted:
        return done(Verdict.UNKNOWN)
    return done(Verdict.NO) if ints is None else done(Verdict.YES, ints)


# -- orientation branching ------------------------------------------------


def _orientation_search(G: Multigraph, k: int, n: int, clock: _Clock) -> list[int] | None:
    m = G.m
    tails = [u for u, _ in G.edges]
    heads = [v for _, v in G.edges]
    inc = G.incidence
    sign = [0] * m  # +1 stored direction, -1 reversed, 0 open
    trail: list[int] = []

    # parallel edges are interchangeable: in every class, signs normalised to
    # the low->high direction must be non-increasing in id order
    klass_of = [None] * m
    pos_in = [0] * m
    norm = [1 if u < v else -1 for u, v in G.edges]
    for cls in parallel_classes(G):
        for i, e in enumerate(cls):
            klass_of[e] = cls
            pos_in[e] = i

    def leaving(e: int, v: int) -> int:
        """+1 if edge e leaves v, -1 if it enters, 0 if open."""
        s = sign[e]
        return s if tails[e] == v else -s

    def set_sign(e: int, s: int, queue: list[int]) -> bool:
        if sign[e]:
            return sign[e] == s
        sign[e] = s
        trail.append(e)
        queue.append(tails[e])
        queue.append(heads[e])
        cls = klass_of[e]
        ns = s * norm[e]
        rest = cls[pos_in[e] + 1:] if ns < 0 else cls[:pos_in[e]]
        for g in rest:
            if not set_sign(g, ns * norm[g], queue):
                return False
        return True

    def propagate(queue: list[int]) -> bool:
        while queue:
            v = queue.pop()
            a = b = 0
            open_edges = []
            for e in inc[v]:
                d = leaving(e, v)
                if d > 0:
                    a += 1
                elif d < 0:
                    b += 1
                else:
                    open_edges.append(e)
            u = len(open_edges)
            ok = [x for x in range(u + 1) if k * (a + x) <= n * (b + u - x) and k * (b + u - x) <= n * (a + x)]
            if not ok:
                return False
            if u and (ok[0] == u or ok[-1] == 0):
                out = ok[0] == u
                for e in open_edges:
                    s = 1 if (tails[e] == v) == out else -1
                    if not set_sign(e, s, queue):
                        return False
        return True

    def undo(mark: int) -> None:
        while len(trail) > mark:
            sign[trail.pop()] = 0

    def relaxed() -> list[int] | None:
        lo = [k if s > 0 else (-n if s < 0 else -n) for s in sign]
        hi = [n if s > 0 else (-k if s < 0 else n) for s in sign]
        return feasible_circulation(G.n, list(G.edges), lo, hi)

    def search(root: bool) -> list[int] | None:
        clock.tick()
        x = relaxed()
        if x is None:
            return None
        bad = [e for e in range(m) if abs(x[e]) < k]
        if not bad:
            return x
        # most constrained endpoint first
        def weight(e: int) -> tuple:
            fixed = max(sum(1 for g in inc[w] if sign[g]) for w in (tails[e], heads[e]))
            return (-fixed, e)

        e = min(bad, key=weight)
        cls = klass_of[e]
        e = next(g for g in cls if not sign[g])
        first = 1 if x[e] >= 0 else -1
        options = [norm[e]] if root else [first, -first]
        for s in options:
            mark = len(trail)
            queue: list[int] = []
            if set_sign(e, s, queue) and propagate(queue):
                res = search(False)
                if res is not None:
                    return res
            undo(mark)
        return None

    if not propagate(list(range(G.n))):
        return None
    return search(True)


# -- cycle space ----------------------------------------------------------


def _cycle_space_search(G: Multigraph, k: int, n: int, clock: _Clock) -> list[int] | None:
    m = G.m
    # BFS spanning forest
    parent_edge = [-1] * G.n
    seen = [False] * G.n
    tree = [False] * m
    for s in range(G.n):
        if seen[s]:
            continue
        seen[s] = True
        frontier = [s]
        while frontier:
            nxt = []
            for x in frontier:
                for e in G.incidence[x]:
                    y = G.edge(e).other(x)
                    if not seen[y]:
                        seen[y] = True
                        tree[e] = True
                        parent_edge[y] = e
                        nxt.append(y)
            frontier = nxt
    depth = [0] * G.n
    for v in _bfs_order(G, parent_edge):
        if parent_edge[v] >= 0:
            depth[v] = depth[G.edge(parent_edge[v]).other(v)] + 1

    cotree = [e for e in range(m) if not tree[e]]
    # coeff[t][j]: coefficient of cotree variable j in tree edge t's value
    coeff: dict[int, dict[int, int]] = {e: {} for e in range(m) if tree[e]}
    for j, c in enumerate(cotree):
        a, b = G.edges[c]
        # x_j runs a -> b on c, then back from b to a along the tree
        for t, s in _tree_path(G, parent_edge, depth, b, a):
            coeff[t][j] = s

    nv = len(cotree)
    # greedy variable order: complete as many tree constraints as early as possible
    var_edges = [[t for t in coeff if j in coeff[t]] for j in range(nv)]
    remaining = {t: len(coeff[t]) for t in coeff}
    started = {t: 0 for t in coeff}
    var_order: list[int] = []
    free = set(range(nv))
    while free:
        def score(j: int) -> tuple:
            completes = sum(1 for t in var_edges[j] if remaining[t] == 1)
            constrained = sum(1 for t in var_edges[j] if started[t])
            return (-completes, -constrained, j)

        j = min(free, key=score)
        free.remove(j)
        var_order.append(j)
        for t in var_edges[j]:
            remaining[t] -= 1
            started[t] += 1

    values = [0] * nv
    partial = {t: 0 for t in coeff}
    left = {t: len(coeff[t]) for t in coeff}
    domain = [s * v for v in range(k, n + 1) for s in (1, -1)]

    def feasible(t: int) -> bool:
        s, rem = partial[t], left[t]
        if rem == 0:
            return k <= abs(s) <= n
        span = rem * n
        return (s - span <= n and s + span >= k) or (s - span <= -k and s + span >= -n)

    def search(d: int) -> bool:
        if d == nv:
            return True
        j = var_order[d]
        touched = var_edges[j]
        for val in (domain[0::2] if d == 0 else domain):
            clock.tick()
            for t in touched:
                partial[t] += coeff[t][j] * val
                left[t] -= 1
            if all(feasible(t) for t in touched) and search(d + 1):
                values[j] = val
                return True
            for t in touched:
                partial[t] -= coeff[t][j] * val
                left[t] += 1
        return False

    if any(not coeff[t] for t in coeff):
        return None  # a tree edge on no cycle is a bridge
    if not search(0):
        return None
    out = [0] * m
    for j, c in enumerate(cotree):
        out[c] = values[j]
    for t in coeff:
        out[t] = partial[t]
    return out


def _bfs_order(G: Multigraph, parent_edge: list[int]) -> list[int]:
    children: list[list[int]] = [[] for _ in range(G.n)]
    roots = []
    for v in range(G.n):
        if parent_edge[v] < 0:
            roots.append(v)
        else:
            children[G.edge(parent_edge[v]).other(v)].append(v)
    out = list(roots)
    i = 0
    while i < len(out):
        out.extend(children[out[i]])
        i += 1
    return out


def _tree_path(G: Multigraph, parent_edge: list[int], depth: list[int], x: int, y: int) -> list[tuple[int, int]]:
    """Tree edges on the path ``x -> y`` with +1 where the walk follows the
    edge's stored direction and -1 otherwise."""
    up, down = [], []
    while x != y:
        if depth[x] >= depth[y]:
            e = parent_edge[x]
            p = G.edge(e).other(x)
            up.append((e, 1 if G.edges[e] == (x, p) else -1))
            x = p
        else:
            e = parent_edge[y]
            p = G.edge(e).other(y)
            down.append((e, 1 if G.edges[e] == (p, y) else -1))
            y = p
    return up + down[::-1]


SOLVERS = {"orientation": _orientation_search, "cycle-space": _cycle_space_search}


# ---------------------------------------------------------------- F_c


def candidate_ladder(Q: int, lo: int = 2, hi: int = LADDER_CEILING) -> list[Fraction]:
    """All rationals ``p/q`` in ``[lo, hi]`` with ``q <= Q``, ascending."""
    if Q < 1:
        raise ValueError("denominator bound must be >= 1")
    out = {Fraction(p, q) for q in range(1, Q + 1) for p in range(lo * q, hi * q + 1)}
    return sorted(out)


def circular_flow_number(
    G: Multigraph, Q: int | None = None, budget: Budget | None = None, method: str = "orientation"
) -> FcResult:
    """Least ladder candidate admitting a nowhere-zero flow.

    ``Q`` (default ``|V|``) bounds the denominators tried, so an EXACT status
    means exact among rationals with denominator at most ``Q``. The budget
    applies to each probe separately.
    """
    Q = Q or max(G.n, 1)
    if bridges(G):
        return FcResult(None, FcStatus.BRIDGE, denominator_bound=Q)
    parts = [c for c in components(G) if any(G.incidence[v] for v in c)]
    if len(parts) <= 1:
        return _fc_connected(G, Q, budget, method)

    results = []
    for comp in parts:
        H, ids = induced_subgraph(G, comp)
        results.append((_fc_connected(H, Q, budget, method), ids))
    nodes = sum(res.nodes for res, _ in results)
    probes = [p for res, _ in results for p in res.probes]
    if any(res.status is not FcStatus.EXACT for res, _ in results):
        lows = [res.largest_refuted for res, _ in results if res.largest_refuted is not None]
        return FcResult(
            None, FcStatus.LOWER_BOUND, largest_refuted=max(lows, default=None),
            denominator_bound=Q, nodes=nodes, probes=probes,
        )
    top, _ = max(results, key=lambda x: x[0].value)
    vals = [Fraction(0)] * G.m
    for res, ids in results:
        for i, x in zip(ids, res.witness.values):
            vals[i] = x
    witness = FlowAssignment(top.value, tuple(vals))
    return FcResult(
        top.value, FcStatus.EXACT, witness, top.refusal, top.largest_refuted, Q, nodes, probes
    )


def _fc_connected(G: Multigraph, Q: int, budget: Budget | None, method: str) -> FcResult:
    ladder = candidate_ladder(Q)
    probes: list[FlowDecision] = []

    def probe(i: int) -> FlowDecision:
        d = has_nwz_flow(G, ladder[i], budget, method)
        probes.append(d)
        return d

    def result(**kw) -> FcResult:
        return FcResult(denominator_bound=Q, nodes=sum(p.nodes for p in probes), probes=probes, **kw)

    if G.m == 0:
        return result(value=ladder[0], status=FcStatus.EXACT, witness=FlowAssignment(ladder[0], ()))
    hi = len(ladder) - 1
    top = probe(hi)
    if top.verdict is Verdict.UNKNOWN:
        return result(value=None, status=FcStatus.LOWER_BOUND)
    if top.verdict is Verdict.NO:
        raise CircflowError(f"internal error: bridgeless graph has no {ladder[hi]}-flow")
    best, refusal = top, None
    lo = -1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        d = probe(mid)
        if d.verdict is Verdict.UNKNOWN:
            return result(
                value=None, status=FcStatus.LOWER_BOUND,
                largest_refuted=ladder[lo] if lo >= 0 else None,
            )
        if d.verdict is Verdict.YES:
            hi, best = mid, d
        else:
            lo, refusal = mid, d
    return result(
        value=ladder[hi], status=FcStatus.EXACT, witness=best.certificate,
        refusal=refusal, largest_refuted=ladder[lo] if lo >= 0 else None,
    )
