"""Loop-free multigraphs and the oriented, red/blue coloured edge states built on them."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

RED = True
BLUE = False


class Multigraph:
    """Finite multigraph on vertices ``0..n-1``.

    Edges are identified by their position in ``edges``; parallel edges are
    distinct edges with distinct ids.  Loops are rejected.  Instances are
    treated as immutable once built.
    """

    __slots__ = ("n", "edges", "incident")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        self.n = n
        self.edges: tuple[tuple[int, int], ...] = tuple((int(u), int(v)) for u, v in edges)
        incident: list[list[int]] = [[] for _ in range(n)]
        for eid, (u, v) in enumerate(self.edges):
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge {eid} ({u}, {v}) has an endpoint outside 0..{n - 1}")
            if u == v:
                raise ValueError(f"edge {eid} is a loop at vertex {u}")
            incident[u].append(eid)
            incident[v].append(eid)
        self.incident: tuple[tuple[int, ...], ...] = tuple(tuple(a) for a in incident)

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.incident[v])

    def other(self, eid: int, v: int) -> int:
        u, w = self.edges[eid]
        return w if v == u else u

    def induced_edge_count(self, vertices: Iterable[int]) -> int:
        s = set(vertices)
        return sum(1 for u, v in self.edges if u in s and v in s)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Multigraph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def __repr__(self) -> str:
        return f"Multigraph(n={self.n}, m={self.m})"


class OrientedState:
    """An orientation of every edge together with a red/blue colour per edge.

    ``tail[e]`` is the vertex edge ``e`` points away from.  ``red[e]`` is the
    colour flag.  The state is mutable; callers that need the old value keep
    a :meth:`copy`.
    """

    __slots__ = ("graph", "tail", "red")

    def __init__(self, graph: Multigraph, tail: Sequence[int], red: Optional[Sequence[bool]] = None):
        if len(tail) != graph.m:
            raise ValueError("one tail per edge is required")
        for eid, t in enumerate(tail):
            if t not in graph.edges[eid]:
                raise ValueError(f"tail {t} is not an endpoint of edge {eid}")
        self.graph = graph
        self.tail = list(tail)
        self.red = list(red) if red is not None else [BLUE] * graph.m

    def copy(self) -> "OrientedState":
        new = OrientedState.__new__(OrientedState)
        new.graph = self.graph
        new.tail = self.tail[:]
        new.red = self.red[:]
        return new

    def head(self, eid: int) -> int:
        return self.graph.other(eid, self.tail[eid])

    def reverse(self, eid: int) -> None:
        self.tail[eid] = self.head(eid)

    def out_edges(self, v: int) -> list[int]:
        tail = self.tail
        return [e for e in self.graph.incident[v] if tail[e] == v]

    def blue_out_edges(self, v: int) -> list[int]:
        tail, red = self.tail, self.red
        return [e for e in self.graph.incident[v] if tail[e] == v and not red[e]]

    def red_out_edges(self, v: int) -> list[int]:
        tail, red = self.tail, self.red
        return [e for e in self.graph.incident[v] if tail[e] == v and red[e]]

    def red_incident(self, v: int) -> list[int]:
        red = self.red
        return [e for e in self.graph.incident[v] if red[e]]

    def out_degrees(self) -> list[int]:
        deg = [0] * self.graph.n
        for t in self.tail:
            deg[t] += 1
        return deg

    def red_count(self) -> int:
        return sum(self.red)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, OrientedState):
            return NotImplemented
        return self.graph == other.graph and self.tail == other.tail and self.red == other.red

    def __repr__(self) -> str:
        return f"OrientedState(n={self.graph.n}, m={self.graph.m}, red={self.red_count()})"


def out_degree(state: OrientedState, v: int) -> int:
    if not 0 <= v < state.graph.n:
        raise ValueError(f"vertex {v} out of range")
    return len(state.out_edges(v))


@dataclass(frozen=True)
class RedComponent:
    """A connected component of the red subgraph (direction ignored)."""

    id: int
    vertices: tuple[int, ...]
    edges: tuple[int, ...]

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def has_cycle(self) -> bool:
        # the red class is a pseudoforest, so e == v is decisive
        return len(self.edges) >= len(self.vertices)

    @property
    def key(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return self.vertices, self.edges


@dataclass
class RedPartition:
    components: list[RedComponent]
    comp_of: list[int] = field(repr=False)

    def __iter__(self):
        return iter(self.components)

    def __len__(self) -> int:
        return len(self.components)

    def __getitem__(self, i: int) -> RedComponent:
        return self.components[i]

    def of(self, v: int) -> RedComponent:
        return self.components[self.comp_of[v]]


def red_components(state: OrientedState) -> RedPartition:
    """Components of the red edges; ids follow the smallest vertex of each component."""
    g = state.graph
    red = state.red
    comp_of = [-1] * g.n
    comps: list[RedComponent] = []
    for s in range(g.n):
        if comp_of[s] != -1:
            continue
        cid = len(comps)
        comp_of[s] = cid
        verts = [s]
        edges = set()
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for e in g.incident[u]:
                if not red[e]:
                    continue
                edges.add(e)
                w = g.other(e, u)
                if comp_of[w] == -1:
                    comp_of[w] = cid
                    verts.append(w)
                    queue.append(w)
        comps.append(RedComponent(cid, tuple(sorted(verts)), tuple(sorted(edges))))
    return RedPartition(comps, comp_of)


@dataclass(frozen=True)
class Violation:
    """First broken invariant found by :func:`validate`."""

    message: str
    vertex: Optional[int] = None
    edge: Optional[int] = None

    def __str__(self) -> str:
        return self.message


def validate(state: OrientedState, k: int) -> Optional[Violation]:
    """Return ``None`` when the red/blue invariant holds for ``k``, else the first violation.

    Every vertex must have at most one red out-arc, ``min(d+(v), k)`` blue
    out-arcs and the remaining ``d+(v) - min(d+(v), k)`` arcs red.
    """
    g = state.graph
    if len(state.tail) != g.m or len(state.red) != g.m:
        return Violation("state arrays do not match the edge count")
    for eid, t in enumerate(state.tail):
        if t not in g.edges[eid]:
            return Violation(f"edge {eid} has tail {t} which is not an endpoint", edge=eid)
    blue_out = [0] * g.n
    red_out = [0] * g.n
    for eid, t in enumerate(state.tail):
        if state.red[eid]:
            red_out[t] += 1
        else:
            blue_out[t] += 1
    for v in range(g.n):
        if red_out[v] > 1:
            return Violation(f"vertex {v} has {red_out[v]} red out-arcs", vertex=v)
        total = red_out[v] + blue_out[v]
        if blue_out[v] != min(total, k):
            return Violation(
                f"vertex {v} has {blue_out[v]} blue out-arcs, expected {min(total, k)}", vertex=v
            )
    return None
