"""Balanced valuations: brute-force and min-cut balance checks, the
flow -> valuation correspondence, and valuation-based flow refutation.

A valuation ``w`` is balanced when ``|sum(w[v] for v in X)| <= |boundary(X)|``
for every vertex set ``X``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .flows import FlowAssignment, as_fraction, normalize_positive
from .graph import (
    SUBSET_SCAN_LIMIT,
    CircflowError,
    GraphError,
    Multigraph,
    ScanLimitExceeded,
    cut_sizes,
    degrees,
    mask_to_set,
    popcounts,
    set_to_mask,
    subset_masks,
)
from .maxflow import FlowNetwork

REFUTE_LIMIT = 12


class CorrespondenceError(CircflowError):
    """A flow produced a valuation that failed its own parity/balance check."""


@dataclass(frozen=True)
class BalanceCheck:
    balanced: bool
    violator: frozenset | None = None

    def __bool__(self) -> bool:
        return self.balanced


@dataclass(frozen=True)
class JaegerForm:
    r: Fraction
    k: tuple[int, ...]

    @property
    def weights(self) -> tuple[Fraction, ...]:
        c = r_to_weight(self.r)
        return tuple(kv * c for kv in self.k)


def r_to_weight(r) -> Fraction:
    r = as_fraction(r)
    if r <= 2:
        raise ValueError("r must exceed 2")
    return r / (r - 2)


def weight_to_r(c) -> Fraction:
    c = as_fraction(c)
    if c <= 1:
        raise ValueError("weight factor must exceed 1")
    return 2 * c / (c - 1)


def _scaled(w: Sequence) -> tuple[list[int], int]:
    fr = [Fraction(x) for x in w]
    den = math.lcm(*(x.denominator for x in fr)) if fr else 1
    return [int(x * den) for x in fr], den


def _check_len(G: Multigraph, w: Sequence) -> None:
    if len(w) != G.n:
        raise GraphError(f"valuation has {len(w)} weights for {G.n} vertices")


def is_balanced_brute(G: Multigraph, w: Sequence, max_vertices: int = SUBSET_SCAN_LIMIT) -> BalanceCheck:
    """Check every vertex set. The violator reported is the one with the
    lowest bitmask (vertex ``v`` is bit ``v``)."""
    _check_len(G, w)
    if G.n > max_vertices:
        raise ScanLimitExceeded(f"{G.n} vertices exceeds brute-force bound {max_vertices}")
    wi, den = _scaled(w)
    masks = subset_masks(G.n)
    sums = np.zeros(masks.shape, dtype=object if max(map(abs, wi), default=0) > 2**40 else np.int64)
    for v, x in enumerate(wi):
        if x:
            sums = sums + ((masks >> v) & 1) * x
    bad = np.nonzero(np.abs(sums) > cut_sizes(G, masks) * den)[0]
    if bad.size:
        return BalanceCheck(False, mask_to_set(bad[0]))
    return BalanceCheck(True)


def _min_excess(G: Multigraph, wi: list[int], den: int) -> tuple[int, frozenset]:
    """``min_X den*|boundary(X)| - sum_X wi`` and a minimising ``X``."""
    s, t = G.n, G.n + 1
    net = FlowNetwork(G.n + 2)
    positive = 0
    for v, x in enumerate(wi):
        if x > 0:
            net.add_arc(s, v, x)
            positive += x
        elif x < 0:
            net.add_arc(v, t, -x)
    for u, v in G.edges:
        net.add_arc(u, v, den)
        net.add_arc(v, u, den)
    value = net.max_flow(s, t) - positive
    return value, frozenset(net.source_side(s) - {s})


def is_balanced_mincut(G: Multigraph, w: Sequence) -> BalanceCheck:
    """Balance via two s-t min cuts (one per sign of the inequality)."""
    _check_len(G, w)
    wi, den = _scaled(w)
    for sign in (1, -1):
        value, X = _min_excess(G, [sign * x for x in wi], den)
        if value < 0:
            return BalanceCheck(False, X)
    return BalanceCheck(True)


def flow_to_valuation(G: Multigraph, f: FlowAssignment) -> tuple[tuple[Fraction, ...], JaegerForm]:
    """Valuation ``k_v * r/(r-2)`` with ``k_v`` = out-degree minus in-degree
    once all flow values are made positive. Raises CorrespondenceError if the
    result is not a balanced Jaeger form."""
    if f.r <= 2:
        raise ValueError("flow_to_valuation needs r > 2")
    orientation, _ = normalize_positive(G, f)
    k = [0] * G.n
    for (u, v), s in zip(G.edges, orientation):
        tail, head = (u, v) if s > 0 else (v, u)
        k[tail] += 1
        k[head] -= 1
    form = JaegerForm(f.r, tuple(k))
    if any((kv - d) % 2 for kv, d in zip(k, degrees(G))):
        raise CorrespondenceError("k_v parity differs from the degree parity")
    w = form.weights
    if not is_balanced_mincut(G, w):
        raise CorrespondenceError("valuation derived from the flow is not balanced")
    return w, form


def max_uniform_weight(
    G: Multigraph, A, B, max_vertices: int = SUBSET_SCAN_LIMIT
) -> Fraction:
    """Largest ``c`` for which ``+c`` on ``A`` and ``-c`` on ``B`` is balanced."""
    A, B = frozenset(A), frozenset(B)
    if A & B or A | B != frozenset(range(G.n)):
        raise GraphError("A and B must partition the vertex set")
    if G.n > max_vertices:
        raise ScanLimitExceeded(f"{G.n} vertices exceeds bound {max_vertices}")
    masks = subset_masks(G.n)
    diff = np.abs(popcounts(masks & set_to_mask(A), G.n) - popcounts(masks & set_to_mask(B), G.n))
    cuts = cut_sizes(G, masks)
    keep = diff > 0
    if not keep.any():
        raise GraphError("empty vertex set")
    pairs = set(zip(cuts[keep].tolist(), diff[keep].tolist()))
    return min(Fraction(c, d) for c, d in pairs)


class Refutation(str, enum.Enum):
    REFUTED = "refuted"
    NOT_REFUTED = "not-refuted"


@dataclass(frozen=True)
class RefutationResult:
    verdict: Refutation
    r: Fraction
    witness: JaegerForm | None = None  # a balanced Jaeger form when not refuted
    nodes: int = 0

    @property
    def refuted(self) -> bool:
        return self.verdict is Refutation.REFUTED


def refute_flow_by_valuation(G: Multigraph, r, max_vertices: int = REFUTE_LIMIT) -> RefutationResult:
    """Search all Jaeger forms ``k_v * r/(r-2)`` (``k_v = d(v) mod 2``,
    ``|k_v| <= d(v)``) for a balanced one. None found proves ``G`` has no
    nowhere-zero ``r``-flow; this never calls the flow solver."""
    r = as_fraction(r)
    c = r_to_weight(r)
    if G.n > max_vertices:
        raise ScanLimitExceeded(f"{G.n} vertices exceeds refutation bound {max_vertices}")
    n = G.n
    cuts = cut_sizes(G, subset_masks(n))
    p, q = c.numerator, c.denominator
    deg = degrees(G)
    domains = []
    for v in range(n):
        ks = [x for x in range(-deg[v], deg[v] + 1) if (x - deg[v]) % 2 == 0 and abs(x) * p <= deg[v] * q]
        ks.sort(key=lambda x: (abs(x), -x))
        domains.append(ks)
    k = [0] * n
    nodes = 0

    # sums[mask] for masks over the assigned prefix, in the same order as subset_masks
    def extend(i: int, sums: np.ndarray) -> bool:
        nonlocal nodes
        if i == n:
            return True
        base = cuts[(1 << i):(1 << (i + 1))]
        for kv in domains[i]:
            if i == 0 and kv < 0:
                continue  # negating a balanced valuation keeps it balanced
            nodes += 1
            new = sums + kv
            if np.all(np.abs(new) * p <= base * q):
                k[i] = kv
                if extend(i + 1, np.concatenate([sums, new])):
                    return True
        return False

    if n == 0 or extend(0, np.zeros(1, dtype=np.int64)):
        return RefutationResult(Refutation.NOT_REFUTED, r, JaegerForm(r, tuple(k)), nodes)
    return RefutationResult(Refutation.REFUTED, r, None, nodes)


def format_valuation(w: Sequence) -> str:
    return "".join(f"{v} {Fraction(x).numerator}/{Fraction(x).denominator}\n" for v, x in enumerate(w))


def parse_valuation(text: str) -> tuple[Fraction, ...]:
    vals: dict[int, Fraction] = {}
    for ln in text.splitlines():
        ln = ln.strip()
        if not ln or ln.startswith("#"):
            continue
        v, x = ln.split()
        vals[int(v)] = Fraction(x)
    if sorted(vals) != list(range(len(vals))):
        raise ValueError("valuation must list vertices 0..n-1")
    return tuple(vals[v] for v in range(len(vals)))
