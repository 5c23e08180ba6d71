"""Exact integer max-flow (Dinic) and circulations with lower bounds."""
from __future__ import annotations

from collections import deque


class FlowNetwork:
    def __init__(self, n: int):
        self.n = n
        self.adj: list[list[int]] = [[] for _ in range(n)]
        self.to: list[int] = []
        self.cap: list[int] = []

    def add_arc(self, u: int, v: int, cap: int) -> int:
        """Add ``u -> v``; returns the arc index (its reverse is index ^ 1)."""
        if cap < 0:
            raise ValueError("negative capacity")
        idx = len(self.to)
        self.to += [v, u]
        self.cap += [cap, 0]
        self.adj[u].append(idx)
        self.adj[v].append(idx + 1)
        return idx

    def flow_on(self, arc: int) -> int:
        return self.cap[arc ^ 1]

    def max_flow(self, s: int, t: int) -> int:
        total = 0
        to, cap, adj = self.to, self.cap, self.adj
        while True:
            level = [-1] * self.n
            level[s] = 0
            q = deque([s])
            while q:
                x = q.popleft()
                for a in adj[x]:
                    if cap[a] > 0 and level[to[a]] < 0:
                        level[to[a]] = level[x] + 1
                        q.append(to[a])
            if level[t] < 0:
                return total
            it = [0] * self.n

            def push(x: int, f: int) -> int:
                if x == t:
                    return f
                while it[x] < len(adj[x]):
                    a = adj[x][it[x]]
                    y = to[a]
                    if cap[a] > 0 and level[y] == level[x] + 1:
                        d = push(y, min(f, cap[a]))
                        if d:
                            cap[a] -= d
                            cap[a ^ 1] += d
                            return d
                    it[x] += 1
                return 0

            while True:
                f = push(s, 1 << 62)
                if not f:
                    break
                total += f

    def source_side(self, s: int) -> set[int]:
        """Vertices reachable from ``s`` in the residual graph (after max_flow)."""
        seen = {s}
        q = deque([s])
        while q:
            x = q.popleft()
            for a in self.adj[x]:
                if self.cap[a] > 0 and self.to[a] not in seen:
                    seen.add(self.to[a])
                    q.append(self.to[a])
        return seen


def feasible_circulation(
    n: int, arcs: list[tuple[int, int]], lower: list[int], upper: list[int]
) -> list[int] | None:
    """Integer circulation with ``lower[i] <= x[i] <= upper[i]`` on arc
    ``arcs[i] = (u, v)`` (flow ``x`` runs ``u -> v``; bounds may be negative),
    or ``None`` if none exists."""
    net = FlowNetwork(n + 2)
    s, t = n, n + 1
    excess = [0] * n
    ids = []
    for (u, v), lo, hi in zip(arcs, lower, upper):
        if lo > hi:
            return None
        ids.append(net.add_arc(u, v, hi - lo))
        excess[v] += lo
        excess[u] -= lo
    need = 0
    for v, ex in enumerate(excess):
        if ex > 0:
            net.add_arc(s, v, ex)
            need += ex
        elif ex < 0:
            net.add_arc(v, t, -ex)
    if net.max_flow(s, t) != need:
        return None
    return [lo + net.flow_on(a) for lo, a in zip(lower, ids)]
