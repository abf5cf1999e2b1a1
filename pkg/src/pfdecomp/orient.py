"""Bounded out-degree orientations, red/blue colouring and saturation."""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from typing import Optional

from .density import DensityWitness
from .graph import BLUE, RED, Multigraph, OrientedState


@dataclass(frozen=True)
class OrientationResult:
    """Exactly one of ``state`` (max out-degree <= cap) or ``witness`` (mad > 2 cap)."""

    state: Optional[OrientedState] = None
    witness: Optional[DensityWitness] = None

    def __post_init__(self):
        if (self.state is None) == (self.witness is None):
            raise ValueError("exactly one of state / witness must be set")

    @property
    def ok(self) -> bool:
        return self.state is not None


def hakimi_orient(g: Multigraph, cap: int, seed: int = 0, k: Optional[int] = None) -> OrientationResult:
    """Orient ``g`` with every out-degree at most ``cap``, or prove ``mad(g) > 2 cap``.

    Edges are inserted one at a time in id order with a seeded random initial
    direction.  An overloaded tail is repaired by reversing a directed path to
    a vertex with spare capacity; when none is reachable the reachable set
    ``S`` has ``e(G[S]) > cap |S|``.

    The returned state is coloured for parameter ``k`` (default ``cap``, which
    leaves every arc blue).
    """
    if cap < 1:
        raise ValueError("cap must be at least 1")
    rng = random.Random(seed)
    n = g.n
    tail = [-1] * g.m
    out: list[list[int]] = [[] for _ in range(n)]

    def head(e: int) -> int:
        return g.other(e, tail[e])

    for eid, (u, v) in enumerate(g.edges):
        t = u if rng.random() < 0.5 else v
        tail[eid] = t
        out[t].append(eid)
        if len(out[t]) <= cap:
            continue
        parent_arc = {t: -1}
        queue = deque([t])
        target = -1
        while queue and target < 0:
            x = queue.popleft()
            for a in out[x]:
                y = head(a)
                if y in parent_arc:
                    continue
                parent_arc[y] = a
                if len(out[y]) < cap:
                    target = y
                    break
                queue.append(y)
        if target < 0:
            return OrientationResult(witness=DensityWitness.of(g, parent_arc))
        y = target
        while y != t:
            a = parent_arc[y]
            x = tail[a]
            out[x].remove(a)
            tail[a] = y
            out[y].append(a)
            y = x

    state = OrientedState(g, tail)
    return OrientationResult(state=colour(state, cap if k is None else k, seed))


def colour(state: OrientedState, k: int, seed: int = 0) -> OrientedState:
    """Colour one out-arc red at every vertex of out-degree ``k+1``; all others blue."""
    rng = random.Random(seed)
    new = state.copy()
    new.red = [BLUE] * state.graph.m
    for v in range(state.graph.n):
        arcs = state.out_edges(v)
        if len(arcs) > k + 1:
            raise ValueError(f"vertex {v} has out-degree {len(arcs)} > k+1 = {k + 1}")
        if len(arcs) == k + 1:
            new.red[rng.choice(arcs)] = RED
    return new


def reverse_path(state: OrientedState, path: list[int], k: int) -> None:
    """Reverse a directed path in place and shift colours so the invariant survives.

    Each inner vertex keeps the colour of the arc it lost; the final vertex
    gains a blue arc; the start vertex, which lost one arc, gives up its red
    arc if it still has one.
    """
    start = state.tail[path[0]]
    old = [state.red[a] for a in path]
    for i, a in enumerate(path):
        state.reverse(a)
        state.red[a] = old[i + 1] if i + 1 < len(path) else BLUE
    if not old[0]:
        for a in state.red_out_edges(start):
            state.red[a] = BLUE


def saturation_path(state: OrientedState, k: int) -> Optional[list[int]]:
    """Shortest directed path from an out-degree ``k+1`` vertex to one below ``k``."""
    deg = state.out_degrees()
    sources = [v for v in range(state.graph.n) if deg[v] == k + 1]
    if not sources or all(x >= k for x in deg):
        return None
    parent_arc = {v: -1 for v in sources}
    queue = deque(sources)
    while queue:
        x = queue.popleft()
        for a in state.out_edges(x):
            y = state.head(a)
            if y in parent_arc:
                continue
            parent_arc[y] = a
            if deg[y] < k:
                path = []
                while parent_arc[y] != -1:
                    a = parent_arc[y]
                    path.append(a)
                    y = state.tail[a]
                return path[::-1]
            queue.append(y)
    return None


def saturate_in_place(state: OrientedState, k: int) -> int:
    """Apply saturation reversals until none is possible; return how many were made."""
    steps = 0
    while True:
        path = saturation_path(state, k)
        if path is None:
            return steps
        reverse_path(state, path, k)
        steps += 1


def saturate(state: OrientedState, k: int) -> OrientedState:
    """Push out-degrees toward ``[k, k+1]``; each reversal removes exactly one red arc."""
    if max(state.out_degrees(), default=0) > k + 1:
        raise ValueError("saturate needs max out-degree <= k+1")
    new = state.copy()
    saturate_in_place(new, k)
    return new
