"""Dinic's algorithm on integer capacities."""

from __future__ import annotations

from collections import deque


class FlowNetwork:
    __slots__ = ("n", "head", "cap", "adj")

    def __init__(self, n: int):
        self.n = n
        self.head: list[int] = []
        self.cap: list[int] = []
        self.adj: list[list[int]] = [[] for _ in range(n)]

    def add_edge(self, u: int, v: int, cap: int) -> None:
        # arc i and its residual twin i ^ 1
        self.adj[u].append(len(self.head))
        self.head.append(v)
        self.cap.append(cap)
        self.adj[v].append(len(self.head))
        self.head.append(u)
        self.cap.append(0)

    def _levels(self, s: int, t: int) -> list[int] | None:
        level = [-1] * self.n
        level[s] = 0
        queue = deque([s])
        head, cap = self.head, self.cap
        while queue:
            u = queue.popleft()
            for a in self.adj[u]:
                if cap[a] > 0 and level[head[a]] < 0:
                    level[head[a]] = level[u] + 1
                    queue.append(head[a])
        return level if level[t] >= 0 else None

    def max_flow(self, s: int, t: int) -> int:
        head, cap, adj = self.head, self.cap, self.adj
        total = 0
        while True:
            level = self._levels(s, t)
            if level is None:
                return total
            it = [0] * self.n
            while True:
                # iterative DFS for one blocking-flow augmenting path
                path: list[int] = []
                u = s
                while u != t:
                    advanced = False
                    while it[u] < len(adj[u]):
                        a = adj[u][it[u]]
                        v = head[a]
                        if cap[a] > 0 and level[v] == level[u] + 1:
                            path.append(a)
                            u = v
                            advanced = True
                            break
                        it[u] += 1
                    if not advanced:
                        if u == s:
                            break
                        level[u] = -1
                        a = path.pop()
                        u = head[a ^ 1]
                        it[u] += 1
                if u != t:
                    break
                push = min(cap[a] for a in path)
                for a in path:
                    cap[a] -= push
                    cap[a ^ 1] += push
                total += push

    def source_side(self, s: int) -> set[int]:
        """Vertices reachable from ``s`` in the residual network (after :meth:`max_flow`)."""
        seen = {s}
        stack = [s]
        while stack:
            u = stack.pop()
            for a in self.adj[u]:
                v = self.head[a]
                if self.cap[a] > 0 and v not in seen:
                    seen.add(v)
                    stack.append(v)
        return seen
