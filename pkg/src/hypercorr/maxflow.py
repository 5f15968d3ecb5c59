"""Dinic's blocking-flow max-flow on integer capacities."""

from __future__ import annotations

from collections import deque


class FlowNetwork:
    """Directed graph with integer capacities and paired residual edges."""

    def __init__(self, num_nodes: int):
        self.num_nodes = num_nodes
        self.head: list[list[int]] = [[] for _ in range(num_nodes)]
        self.to: list[int] = []
        self.cap: list[int] = []

    def add_edge(self, u: int, v: int, capacity: int) -> int:
        """Add ``u -> v``; returns the edge id (its reverse is ``id ^ 1``)."""
        if capacity < 0:
            raise ValueError("capacities must be nonnegative")
        eid = len(self.to)
        self.to += [v, u]
        self.cap += [capacity, 0]
        self.head[u].append(eid)
        self.head[v].append(eid + 1)
        return eid

    def flow_on(self, eid: int) -> int:
        return self.cap[eid ^ 1]

    def _levels(self, s: int, t: int) -> list[int] | None:
        level = [-1] * self.num_nodes
        level[s] = 0
        q = deque([s])
        while q:
            u = q.popleft()
            for e in self.head[u]:
                v = self.to[e]
                if self.cap[e] > 0 and level[v] < 0:
                    level[v] = level[u] + 1
                    q.append(v)
        return level if level[t] >= 0 else None

    def _blocking(self, s: int, t: int, level: list[int]) -> int:
        it = [0] * self.num_nodes
        total = 0
        while True:
            # iterative DFS for one augmenting path in the level graph
            path: list[int] = []
            u = s
            while u != t:
                edges = self.head[u]
                while it[u] < len(edges):
                    e = edges[it[u]]
                    v = self.to[e]
                    if self.cap[e] > 0 and level[v] == level[u] + 1:
                        break
                    it[u] += 1
                else:
                    if u == s:
                        return total
                    # dead end: retreat
                    level[u] = -1
                    e = path.pop()
                    u = self.to[e ^ 1]
                    it[u] += 1
                    continue
                path.append(edges[it[u]])
                u = self.to[edges[it[u]]]
            push = min(self.cap[e] for e in path)
            for e in path:
                self.cap[e] -= push
                self.cap[e ^ 1] += push
            total += push

    def max_flow(self, s: int, t: int) -> int:
        total = 0
        while (level := self._levels(s, t)) is not None:
            total += self._blocking(s, t, level)
        return total

    def reachable(self, s: int) -> set[int]:
        """Nodes reachable from ``s`` in the residual graph."""
        seen = {s}
        stack = [s]
        while stack:
            u = stack.pop()
            for e in self.head[u]:
                v = self.to[e]
                if self.cap[e] > 0 and v not in seen:
                    seen.add(v)
                    stack.append(v)
        return seen
