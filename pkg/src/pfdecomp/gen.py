"""Seeded instance generators below, at and above the density bound."""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .density import DensityWitness, mad_exact, threshold
from .graph import Multigraph


@dataclass
class Generated:
    graph: Multigraph
    meta: dict[str, Any] = field(default_factory=dict)


class _DensityGate:
    """Incrementally accepts edges while ``mad <= 2 cap / copies`` stays true.

    ``mad(G) <= 2N/D`` iff the multigraph with every edge repeated ``D`` times
    has an orientation with out-degree at most ``N``; arcs are inserted with
    path reversal and an edge is rolled back if any of its copies fails.
    """

    def __init__(self, n: int, bound: Fraction):
        half = bound / 2
        self.cap, self.copies = half.numerator, half.denominator
        self.n = n
        self.ends: list[tuple[int, int]] = []
        self.tail: list[int] = []
        self.out: list[set[int]] = [set() for _ in range(n)]

    def _head(self, a: int) -> int:
        u, v = self.ends[a]
        return v if self.tail[a] == u else u

    def _insert(self, a: int) -> bool:
        t = self.tail[a]
        self.out[t].add(a)
        if len(self.out[t]) <= self.cap:
            return True
        parent = {t: -1}
        queue = deque([t])
        while queue:
            x = queue.popleft()
            for b in sorted(self.out[x]):
                y = self._head(b)
                if y in parent:
                    continue
                parent[y] = b
                if len(self.out[y]) < self.cap:
                    while y != t:
                        b = parent[y]
                        x = self.tail[b]
                        self.out[x].discard(b)
                        self.tail[b] = y
                        self.out[y].add(b)
                        y = x
                    return True
                queue.append(y)
        self.out[t].discard(a)
        return False

    def try_add(self, u: int, v: int) -> bool:
        added = []
        for _ in range(self.copies):
            a = len(self.ends)
            self.ends.append((u, v))
            self.tail.append(u if len(added) % 2 == 0 else v)
            if not self._insert(a):
                self.ends.pop()
                self.tail.pop()
                for b in added:
                    self.out[self.tail[b]].discard(b)
                    self.tail[b] = -1
                return False
            added.append(a)
        return True


def _skewed_pair(rng: random.Random, weights: list[float]) -> tuple[int, int]:
    n = len(weights)
    u = rng.choices(range(n), weights)[0]
    v = u
    while v == u:
        v = rng.choices(range(n), weights)[0]
    return u, v


def _fill_below(n: int, bound: Fraction, rng: random.Random, multi_edge_prob: float, fill: float) -> list[tuple[int, int]]:
    gate = _DensityGate(n, bound)
    edges: list[tuple[int, int]] = []
    target = int(fill * n * bound / 2)
    weights = [0.2 + rng.random() ** 2 for _ in range(n)]
    for _ in range(6 * max(target, 1)):
        if len(edges) >= target:
            break
        if edges and rng.random() < multi_edge_prob:
            u, v = rng.choice(edges)
        else:
            u, v = _skewed_pair(rng, weights)
        if gate.try_add(u, v):
            edges.append((u, v))
    return edges


def gen_below_threshold(
    n: int, k: int, d: int, seed: int, tries: int = 20, multi_edge_prob: float = 0.15
) -> Generated:
    """A random multigraph with ``mad <= 2k + 2d/(d+k+1)``, usually close to the bound.

    Edges are drawn with skewed endpoint weights (dense cores, sparse
    fringes) and kept while an exact orientation gate allows; the final graph
    is re-checked with :func:`mad_exact` before it is returned.
    """
    if n < 2:
        raise ValueError("need at least 2 vertices")
    bound = threshold(k, d)
    rng = random.Random(seed)
    for attempt in range(tries):
        fill = 1.0 if rng.random() < 0.7 else rng.uniform(0.4, 1.0)
        edges = _fill_below(n, bound, rng, multi_edge_prob, fill)
        g = Multigraph(n, edges)
        w = mad_exact(g) if edges else DensityWitness((0,), 0, Fraction(0))
        if w.density <= bound:
            return Generated(g, _meta("below", n, k, d, seed, w, attempts=attempt + 1))
    raise RuntimeError(f"no graph below {bound} after {tries} tries")


def gen_above_threshold(n: int, k: int, d: int, seed: int, multi_edge_prob: float = 0.15) -> Generated:
    """A multigraph with ``mad > 2k + 2d/(d+k+1)``: a dense core glued to a sparse fringe."""
    if n < 2:
        raise ValueError("need at least 2 vertices")
    bound = threshold(k, d)
    rng = random.Random(seed)
    if n >= 6 and rng.random() < 0.6:
        # near-bound background plus a slightly overfull core
        edges = _fill_below(n, bound, rng, multi_edge_prob, 1.0)
        size = rng.randint(2, min(n, 8))
    else:
        edges = []
        for v in range(1, n):
            if rng.random() < 0.8:
                edges.append((v, rng.randrange(v)))
        size = rng.randint(2, min(n, 6))
    core = sorted(rng.sample(range(n), size))
    need = int(bound * size / 2) + 1
    inside = sum(1 for u, v in edges if u in core and v in core)
    while inside < need:
        u, v = rng.sample(core, 2)
        edges.append((u, v))
        inside += 1
    rng.shuffle(edges)
    g = Multigraph(n, edges)
    w = mad_exact(g)
    assert w.density > bound
    return Generated(g, _meta("above", n, k, d, seed, w, core=core))


def gen_pseudoforest_union(n: int, k: int, d: int, seed: int, multi_edge_prob: float = 0.1) -> Generated:
    """Union of ``k`` random pseudoforests and one whose components have at most ``d`` edges.

    The planted parts are kept in ``meta["planted_parts"]`` as edge-id lists,
    special part last.
    """
    if n < 1:
        raise ValueError("need at least 1 vertex")
    rng = random.Random(seed)
    edges: list[tuple[int, int]] = []
    parts: list[list[int]] = []
    for _ in range(k):
        part = []
        for v in range(n):
            if n > 1 and rng.random() < 0.8:
                u = rng.randrange(n - 1)
                u += u >= v
                part.append(len(edges))
                edges.append((v, u))
        parts.append(part)
    # special part: merge random vertex pairs while components stay small pseudoforests
    comp = list(range(n))
    ce = [0] * n
    cv = [1] * n
    special = []

    def find(x):
        while comp[x] != x:
            comp[x] = comp[comp[x]]
            x = comp[x]
        return x

    for _ in range(2 * n):
        if n < 2:
            break
        if special and rng.random() < multi_edge_prob:
            u, v = edges[rng.choice(special)]
        else:
            u, v = rng.sample(range(n), 2)
        ru, rv = find(u), find(v)
        if ru == rv:
            if ce[ru] + 1 > cv[ru] or ce[ru] + 1 > d:
                continue
            ce[ru] += 1
        else:
            tot = ce[ru] + ce[rv] + 1
            if tot > cv[ru] + cv[rv] or tot > d:
                continue
            comp[rv] = ru
            ce[ru], cv[ru] = tot, cv[ru] + cv[rv]
        special.append(len(edges))
        edges.append((u, v))
    parts.append(special)
    g = Multigraph(n, edges)
    return Generated(g, {"kind": "pseudoforest_union", "n": n, "k": k, "d": d, "seed": seed, "planted_parts": parts})


def _meta(kind: str, n: int, k: int, d: int, seed: int, w: DensityWitness, **extra) -> dict[str, Any]:
    meta = {
        "kind": kind,
        "n": n,
        "k": k,
        "d": d,
        "seed": seed,
        "threshold": _frac(threshold(k, d)),
        "witness_vertices": list(w.vertices),
        "witness_edge_count": w.edge_count,
        "witness_density": _frac(w.density),
    }
    meta.update(extra)
    return meta


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"
