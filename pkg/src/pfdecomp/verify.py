"""Independent checkers for decompositions and density certificates.

Everything here is recomputed from the raw multigraph; nothing is taken
from the search that produced the object being checked.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .density import threshold
from .graph import Multigraph
from .results import DensityCertificate, Decomposition, Params

BRUTEFORCE_LIMIT = 10**7


@dataclass(frozen=True)
class CheckFailure:
    check: str
    message: str
    edge: Optional[int] = None
    vertices: Optional[tuple[int, ...]] = None

    def __str__(self) -> str:
        return f"[{self.check}] {self.message}"


def _components(g: Multigraph, edge_ids: Iterable[int]) -> list[tuple[list[int], list[int]]]:
    """Connected components of the edge set, as (vertices, edges); isolated vertices omitted."""
    parent: dict[int, int] = {}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    edge_ids = list(edge_ids)
    for e in edge_ids:
        for v in g.edges[e]:
            parent.setdefault(v, v)
        u, v = g.edges[e]
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
    groups: dict[int, tuple[list[int], list[int]]] = {}
    for v in sorted(parent):
        groups.setdefault(find(v), ([], []))[0].append(v)
    for e in edge_ids:
        groups[find(g.edges[e][0])][1].append(e)
    return list(groups.values())


def is_pseudoforest(g: Multigraph, edge_set: Iterable[int]) -> bool:
    """Every component of the sub-multigraph has at most as many edges as vertices."""
    return all(len(es) <= len(vs) for vs, es in _components(g, edge_set))


def verify_decomposition(g: Multigraph, dec: Decomposition, p: Params) -> Optional[CheckFailure]:
    """``None`` if ``dec`` is a valid decomposition for ``(k, d)``, else the first failure."""
    if len(dec.parts) != p.k + 1:
        return CheckFailure("shape", f"expected {p.k + 1} parts, got {len(dec.parts)}")
    if not 0 <= dec.special_index < len(dec.parts):
        return CheckFailure("shape", f"special_index {dec.special_index} out of range")
    owner: dict[int, int] = {}
    for i, part in enumerate(dec.parts):
        for e in part:
            if not isinstance(e, int) or not 0 <= e < g.m:
                return CheckFailure("a", f"part {i} names unknown edge {e!r}", edge=e if isinstance(e, int) else None)
            if e in owner:
                return CheckFailure("a", f"edge {e} appears in parts {owner[e]} and {i}", edge=e)
            owner[e] = i
    if len(owner) != g.m:
        missing = min(set(range(g.m)) - set(owner))
        return CheckFailure("a", f"edge {missing} is in no part", edge=missing)
    for i, part in enumerate(dec.parts):
        for vs, es in _components(g, part):
            if len(es) > len(vs):
                return CheckFailure(
                    "b", f"part {i} has a component with {len(es)} edges on {len(vs)} vertices", vertices=tuple(vs)
                )
    for vs, es in _components(g, dec.parts[dec.special_index]):
        if len(es) > p.d:
            return CheckFailure("c", f"special part has a component with {len(es)} > {p.d} edges", vertices=tuple(vs))
    return None


def verify_certificate(g: Multigraph, cert: DensityCertificate, p: Params) -> Optional[CheckFailure]:
    """Recount the edges inside the certificate's vertex set and compare against the bound."""
    verts = list(cert.vertices)
    if not verts:
        return CheckFailure("certificate", "empty vertex set")
    if len(set(verts)) != len(verts) or any(not 0 <= v < g.n for v in verts):
        return CheckFailure("certificate", "vertex list has repeats or out-of-range ids")
    count = g.induced_edge_count(verts)
    if count != cert.edge_count:
        return CheckFailure("certificate", f"recount gives {count} edges inside S, certificate says {cert.edge_count}")
    density = Fraction(2 * count, len(verts))
    if Fraction(cert.density) != density:
        return CheckFailure("certificate", f"density is {density}, certificate says {cert.density}")
    bound = threshold(p.k, p.d)
    if Fraction(cert.claimed_bound) != bound:
        return CheckFailure("certificate", f"claimed bound {cert.claimed_bound} differs from {bound}")
    if not density > bound:
        return CheckFailure("certificate", f"density {density} does not exceed {bound}")
    return None


def bruteforce_decomposition_exists(g: Multigraph, p: Params) -> bool:
    """Exhaustive search over edge-to-part assignments, pruned as soon as a part breaks.

    Blue parts are interchangeable, so an edge may only open the next unused
    blue part.  Guarded at ``(k+1)^m <= 10^7``.
    """
    if (p.k + 1) ** g.m > BRUTEFORCE_LIMIT:
        raise ValueError(f"(k+1)^m = {(p.k + 1) ** g.m} exceeds {BRUTEFORCE_LIMIT}")
    parts = p.k + 1
    special = p.k
    n = g.n
    parent = [list(range(n)) for _ in range(parts)]
    nv = [[1] * n for _ in range(parts)]
    ne = [[0] * n for _ in range(parts)]

    def find(j: int, x: int) -> int:
        par = parent[j]
        while par[x] != x:
            x = par[x]
        return x

    def add(j: int, e: int):
        u, v = g.edges[e]
        ru, rv = find(j, u), find(j, v)
        if ru == rv:
            if ne[j][ru] + 1 > nv[j][ru] or (j == special and ne[j][ru] + 1 > p.d):
                return None
            ne[j][ru] += 1
            return (ru, None)
        total = ne[j][ru] + ne[j][rv] + 1
        if total > nv[j][ru] + nv[j][rv] or (j == special and total > p.d):
            return None
        if nv[j][ru] < nv[j][rv]:
            ru, rv = rv, ru
        parent[j][rv] = ru
        nv[j][ru] += nv[j][rv]
        ne[j][ru] = total
        return (ru, rv)

    def undo(j: int, rec, old_e: int) -> None:
        ru, rv = rec
        if rv is None:
            ne[j][ru] -= 1
            return
        parent[j][rv] = rv
        nv[j][ru] -= nv[j][rv]
        ne[j][ru] = old_e

    def search(i: int, used: int) -> bool:
        if i == g.m:
            return True
        choices = [special] + list(range(min(used + 1, p.k)))
        for j in choices:
            u = g.edges[i][0]
            r = find(j, u)
            old_e = ne[j][r]
            rec = add(j, i)
            if rec is None:
                continue
            if rec[1] is not None:
                old_e = ne[j][rec[0]] - 1 - ne[j][rec[1]]
            ok = search(i + 1, max(used, j + 1) if j != special else used)
            undo(j, rec, old_e)
            if ok:
                return True
        return False

    return search(0, 0)
