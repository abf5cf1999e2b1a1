"""Exact maximum average degree and densest-subgraph witnesses.

All values are :class:`fractions.Fraction`; nothing here touches floating
point.  ``mad(G)`` is ``max 2 e(H) / v(H)`` over nonempty subgraphs, and
induced subgraphs suffice.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from ._maxflow import FlowNetwork
from .graph import Multigraph

BRUTEFORCE_MAX_VERTICES = 20


@dataclass(frozen=True)
class DensityWitness:
    vertices: tuple[int, ...]
    edge_count: int
    density: Fraction

    def __post_init__(self):
        if not self.vertices:
            raise ValueError("a density witness needs at least one vertex")
        if self.density != Fraction(2 * self.edge_count, len(self.vertices)):
            raise ValueError("density does not match 2 * edge_count / |S|")

    @classmethod
    def of(cls, g: Multigraph, vertices: Iterable[int]) -> "DensityWitness":
        vs = tuple(sorted(set(vertices)))
        e = g.induced_edge_count(vs)
        return cls(vs, e, Fraction(2 * e, len(vs)))


def threshold(k: int, d: int) -> Fraction:
    """The degree bound ``2k + 2d/(d+k+1)``."""
    if k < 1 or d < 1:
        raise ValueError(f"threshold needs k >= 1 and d >= 1, got k={k}, d={d}")
    return 2 * k + Fraction(2 * d, d + k + 1)


def mad_bruteforce(g: Multigraph) -> DensityWitness:
    """Enumerate every nonempty vertex subset.  Exponential; guarded at 20 vertices."""
    n = g.n
    if n == 0:
        raise ValueError("the empty graph has no nonempty subgraph")
    if n > BRUTEFORCE_MAX_VERTICES:
        raise ValueError(f"brute force limited to {BRUTEFORCE_MAX_VERTICES} vertices, got {n}")
    # neighbours with multiplicity, as (bit, count) pairs
    nbr: list[dict[int, int]] = [{} for _ in range(n)]
    for u, v in g.edges:
        nbr[u][v] = nbr[u].get(v, 0) + 1
        nbr[v][u] = nbr[v].get(u, 0) + 1
    inside = [0] * (1 << n)
    best_mask, best_e, best_s = 1, 0, 1
    for mask in range(1, 1 << n):
        top = mask.bit_length() - 1
        rest = mask ^ (1 << top)
        e = inside[rest] + sum(c for w, c in nbr[top].items() if rest >> w & 1)
        inside[mask] = e
        s = mask.bit_count() if hasattr(int, "bit_count") else bin(mask).count("1")
        if e * best_s > best_e * s:
            best_mask, best_e, best_s = mask, e, s
    verts = tuple(v for v in range(n) if best_mask >> v & 1)
    return DensityWitness(verts, best_e, Fraction(2 * best_e, best_s))


def _denser_than(g: Multigraph, bound: Fraction) -> Optional[set[int]]:
    """A vertex set with ``2 e(S)/|S| > bound``, or ``None`` if there is none.

    Source -> edge node (capacity 2b), edge node -> both endpoints (2b, which
    is unbounded in effect), vertex -> sink (a) for ``bound = a/b``.  Then
    ``max_S 2b e(S) - a |S| = 2b m - mincut``.
    """
    a, b = bound.numerator, bound.denominator
    if a < 0:
        return {0} if g.n else None
    m, n = g.m, g.n
    if m == 0:
        return None
    s, t = 0, m + n + 1
    net = FlowNetwork(m + n + 2)
    for eid, (u, v) in enumerate(g.edges):
        net.add_edge(s, 1 + eid, 2 * b)
        net.add_edge(1 + eid, 1 + m + u, 2 * b)
        net.add_edge(1 + eid, 1 + m + v, 2 * b)
    for v in range(n):
        if a:
            net.add_edge(1 + m + v, t, a)
    cut = net.max_flow(s, t)
    if cut >= 2 * b * m:
        return None
    side = net.source_side(s)
    return {node - 1 - m for node in side if 1 + m <= node <= m + n}


def mad_exact(g: Multigraph) -> DensityWitness:
    """Exact ``mad(g)`` with an argmax vertex set, by flow tests and bisection.

    Candidate values are fractions ``2e'/v'`` with ``v' <= n``; two distinct
    candidates differ by at least ``1/n^2``, so bisection stops once the
    bracket ``(lo, hi]`` is narrower than that and then holds only ``mad``.
    """
    if g.n == 0:
        raise ValueError("mad of the empty graph is undefined")
    if g.m == 0:
        return DensityWitness((0,), 0, Fraction(0))
    n = g.n
    lo, hi = Fraction(0), Fraction(g.m)
    best = _denser_than(g, lo)
    assert best is not None
    lo = DensityWitness.of(g, best).density
    gap = Fraction(1, n * n)
    while hi - lo >= gap:
        mid = (lo + hi) / 2
        found = _denser_than(g, mid)
        if found is None:
            hi = mid
        else:
            best = found
            lo = DensityWitness.of(g, found).density
    return DensityWitness.of(g, best)


def check_mad_at_most(g: Multigraph, bound: Fraction) -> Optional[DensityWitness]:
    """``None`` when ``mad(g) <= bound``; otherwise a witness denser than ``bound``."""
    if g.n == 0:
        return None
    found = _denser_than(g, Fraction(bound))
    return None if found is None else DensityWitness.of(g, found)
