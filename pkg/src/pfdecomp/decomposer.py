"""Local search for a pseudoforest decomposition with a small-component red part.

The search keeps an orientation where every vertex has at most ``k`` blue
out-arcs and at most one red out-arc.  Blue arcs then split into ``k``
pseudoforests and the red arcs form one more.  While some red component has
more than ``d`` edges, the search picks such a component as the root,
explores what it can reach, orders the red components it met, and applies a
flip that strictly lowers the potential

    (red arcs, red cycles, residue, edge counts along the legal order)

compared lexicographically.  When no flip helps, the explored vertex set is
returned as a density certificate.
"""

from __future__ import annotations

import heapq
import logging
from collections import defaultdict, deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator, NamedTuple, Optional, Union

from .graph import BLUE, RED, Multigraph, OrientedState, RedComponent, RedPartition, red_components, validate
from .orient import hakimi_orient, saturate_in_place
from .results import DensityCertificate, Decomposition, Params

log = logging.getLogger(__name__)


class DecomposerError(RuntimeError):
    pass


class IterationCapExceeded(DecomposerError):
    pass


class PotentialError(DecomposerError):
    """A move left the state invalid or failed to lower the potential."""


class InternalInconsistency(DecomposerError):
    """No move applies, yet the explored subgraph is not dense enough."""


class FlipError(ValueError):
    pass


# ---------------------------------------------------------------------------
# red component measures


def residue(state: OrientedState | RedPartition, d: int) -> int:
    """Sum over red components of ``max(e(K) - d, 0)``."""
    comps = state if isinstance(state, RedPartition) else red_components(state)
    return sum(max(c.n_edges - d, 0) for c in comps)


def is_troublesome(component, p: Params) -> bool:
    """``e_r(K)/v(K) < d/(d+k+1)``, compared exactly.

    ``component`` is anything with ``n_edges`` and ``n_vertices``, or an
    ``(edges, vertices)`` pair.
    """
    if isinstance(component, tuple):
        e, v = component
    else:
        e, v = component.n_edges, component.n_vertices
    if v <= 0:
        raise ValueError("troublesome test needs a nonempty vertex set")
    return e * (p.d + p.k + 1) < p.d * v


class Potential(NamedTuple):
    red_arcs: int
    cycles: int
    residue: int
    order_vector: tuple[int, ...]


# ---------------------------------------------------------------------------
# explored subgraph and legal orders


@dataclass(frozen=True)
class ExploredSubgraph:
    root: int
    vertices: frozenset[int]
    components: tuple[int, ...]
    partition: RedPartition = field(repr=False, compare=False)


def explore(state: OrientedState, root: int, partition: Optional[RedPartition] = None) -> ExploredSubgraph:
    """Close the root component under blue out-arcs and red edges in either direction."""
    part = partition if partition is not None else red_components(state)
    g = state.graph
    seen = set(part[root].vertices)
    queue = deque(sorted(seen))
    while queue:
        u = queue.popleft()
        for e in g.incident[u]:
            if state.red[e] or state.tail[e] == u:
                w = g.other(e, u)
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
    comps = tuple(sorted({part.comp_of[v] for v in seen}))
    return ExploredSubgraph(root, frozenset(seen), comps, part)


@dataclass(frozen=True)
class LegalOrder:
    sequence: tuple[int, ...]
    parent: dict[int, int]
    determiners: dict[int, tuple[int, ...]]

    @property
    def position(self) -> dict[int, int]:
        return {c: i for i, c in enumerate(self.sequence)}

    @property
    def determiner(self) -> dict[int, int]:
        return {c: ds[0] for c, ds in self.determiners.items()}

    def children(self, c: int) -> list[int]:
        return [x for x in self.sequence if self.parent.get(x) == c]


def _blue_arcs_into(state: OrientedState, comp: RedComponent) -> Iterator[tuple[int, int, int]]:
    """``(edge, tail, head)`` for blue arcs entering ``comp`` from outside."""
    verts = set(comp.vertices)
    for v in comp.vertices:
        for e in state.graph.incident[v]:
            if not state.red[e] and state.tail[e] != v and state.tail[e] not in verts:
                yield e, state.tail[e], v


def _finish_order(state: OrientedState, h: ExploredSubgraph, sequence: list[int]) -> LegalOrder:
    part = h.partition
    pos = {c: i for i, c in enumerate(sequence)}
    parent: dict[int, int] = {}
    dets: dict[int, set[int]] = defaultdict(set)
    for c in sequence[1:]:
        best = None
        for _, u, v in _blue_arcs_into(state, part[c]):
            cu = part.comp_of[u]
            if cu in pos and pos[cu] < pos[c]:
                dets[c].add(v)
                if best is None or pos[cu] < pos[best]:
                    best = cu
        assert best is not None, "sequence is not a legal order"
        parent[c] = best
    return LegalOrder(tuple(sequence), parent, {c: tuple(sorted(vs)) for c, vs in dets.items()})


def _greedy_complete(state: OrientedState, h: ExploredSubgraph, prefix: list[int]) -> LegalOrder:
    part = h.partition
    chosen = set(prefix)
    sequence = list(prefix)
    heap: list[tuple[int, int]] = []
    queued = set(chosen)

    def push_from(c: int) -> None:
        for u in part[c].vertices:
            for e in state.blue_out_edges(u):
                cv = part.comp_of[state.head(e)]
                if cv not in queued:
                    queued.add(cv)
                    heapq.heappush(heap, (part[cv].n_edges, cv))

    for c in prefix:
        push_from(c)
    while heap:
        _, c = heapq.heappop(heap)
        sequence.append(c)
        push_from(c)
    return _finish_order(state, h, sequence)


def canonical_legal_order(state: OrientedState, h: ExploredSubgraph) -> LegalOrder:
    """Root first, then repeatedly the reachable component with fewest edges (ties by id)."""
    return _greedy_complete(state, h, [h.root])


def _kept_prefix(state: OrientedState, h: ExploredSubgraph, keys: Iterable) -> list[int]:
    """Longest prefix of a previous order whose components survive unchanged and stay legal."""
    part = h.partition
    by_key = {c.key: c.id for c in part}
    prefix: list[int] = []
    kept: set[int] = set()
    for key in keys:
        c = by_key.get(key)
        if c is None or c not in h.components:
            break
        if prefix and not any(part.comp_of[u] in kept for _, u, _ in _blue_arcs_into(state, part[c])):
            break
        if not prefix and c != h.root:
            break
        prefix.append(c)
        kept.add(c)
    return prefix or [h.root]


# ---------------------------------------------------------------------------
# the flip


def _red_walk(state: OrientedState, y: int) -> tuple[list[int], int]:
    """Maximal directed red path from ``y``; raises if it runs into a red cycle."""
    path: list[int] = []
    seen = {y}
    v = y
    while True:
        out = state.red_out_edges(v)
        if not out:
            return path, v
        path.append(out[0])
        v = state.head(out[0])
        if v in seen:
            raise FlipError(f"vertex {y} reaches a red cycle")
        seen.add(v)


def path_flip(state: OrientedState, e: int, a: int, path: Iterable[int] = (), k: Optional[int] = None) -> OrientedState:
    """Flip along a blue path ``path`` ending at the tail ``x`` of the blue arc ``a = (x, y)``.

    ``e`` is a red edge at the first vertex of ``path`` (at ``x`` when the path
    is empty).  The maximal red path leaving ``y`` is reversed, ``a`` becomes
    the red arc ``(y, x)``, the blue path is reversed and ``e`` turns blue,
    pointing away from the path's first vertex.

    With ``k`` given, an endpoint that picks up a red arc while short of ``k``
    blue arcs has that arc recoloured blue, which keeps the state valid.
    """
    g = state.graph
    path = list(path)
    if state.red[a]:
        raise FlipError(f"arc {a} is not blue")
    x, y = state.tail[a], state.head(a)
    for i, b in enumerate(path):
        if state.red[b]:
            raise FlipError(f"path arc {b} is not blue")
        nxt = state.tail[path[i + 1]] if i + 1 < len(path) else x
        if state.head(b) != nxt:
            raise FlipError("path arcs do not form a directed path into x")
    start = state.tail[path[0]] if path else x
    if not state.red[e]:
        raise FlipError(f"edge {e} is not red")
    if start not in g.edges[e]:
        raise FlipError(f"edge {e} is not incident to {start}")
    q, end = _red_walk(state, y)
    if e in q or end == start:
        raise FlipError("red edge and red path overlap")

    new = state.copy()
    for b in q:
        new.reverse(b)
    new.red[a] = RED
    new.tail[a] = y
    for b in path:
        new.reverse(b)
    new.red[e] = BLUE
    new.tail[e] = start
    if k is not None and len(new.blue_out_edges(end)) < k:
        for b in new.red_out_edges(end):
            new.red[b] = BLUE
    return new


def flip(state: OrientedState, e: int, a: int, k: Optional[int] = None) -> OrientedState:
    """Flip on red edge ``e`` at ``x`` and blue arc ``a = (x, y)``."""
    return path_flip(state, e, a, (), k)


# ---------------------------------------------------------------------------
# search context and moves


@dataclass
class SearchContext:
    state: OrientedState
    params: Params
    partition: RedPartition
    root: Optional[int]
    h: Optional[ExploredSubgraph]
    order: Optional[LegalOrder]
    potential: Potential

    @property
    def done(self) -> bool:
        return self.root is None

    @property
    def root_key(self):
        return None if self.root is None else self.partition[self.root].key

    @property
    def order_keys(self) -> tuple:
        if self.order is None:
            return ()
        return tuple(self.partition[c].key for c in self.order.sequence)

    def comp(self, v: int) -> RedComponent:
        return self.partition.of(v)

    def blue_arcs(self) -> list[tuple[int, int, int]]:
        """Blue arcs leaving vertices of H, ``(edge, tail, head)``, by position then id."""
        pos = self.order.position
        comp_of = self.partition.comp_of
        arcs = [(e, u, self.state.head(e)) for u in self.h.vertices for e in self.state.blue_out_edges(u)]
        arcs.sort(key=lambda t: (pos[comp_of[t[1]]], t[0]))
        return arcs


def build_context(state: OrientedState, p: Params, root_key=None, order_keys: Iterable = ()) -> SearchContext:
    part = red_components(state)
    red_arcs = state.red_count()
    cycles = sum(1 for c in part if c.has_cycle)
    res = residue(part, p.d)
    big = [c for c in part if c.n_edges > p.d]
    if not big:
        return SearchContext(state, p, part, None, None, None, Potential(red_arcs, cycles, res, ()))
    root = next((c.id for c in big if c.key == root_key), None)
    if root is None:
        root = max(big, key=lambda c: (c.n_edges, -c.id)).id
        order_keys = ()
    h = explore(state, root, part)
    order = _greedy_complete(state, h, _kept_prefix(state, h, order_keys))
    vector = tuple(part[c].n_edges for c in order.sequence)
    return SearchContext(state, p, part, root, h, order, Potential(red_arcs, cycles, res, vector))


@dataclass
class Move:
    kind: str
    edge: int
    arc: int
    path: tuple[int, ...]
    result: SearchContext = field(repr=False)


def _try_flip(ctx: SearchContext, kind: str, e: int, a: int, path: tuple[int, ...] = ()) -> Optional[Move]:
    try:
        new = path_flip(ctx.state, e, a, path, ctx.params.k)
    except FlipError:
        return None
    result = build_context(new, ctx.params, ctx.root_key, ctx.order_keys)
    if result.potential < ctx.potential:
        return Move(kind, e, a, path, result)
    return None


def _first_move(ctx: SearchContext, candidates: Iterable[tuple[str, int, int, tuple[int, ...]]]) -> Optional[Move]:
    tried = set()
    for kind, e, a, path in candidates:
        if (e, a, path) in tried:
            continue
        tried.add((e, a, path))
        move = _try_flip(ctx, kind, e, a, path)
        if move is not None:
            return move
    return None


def _on_red_cycle(state: OrientedState, x: int) -> bool:
    v = x
    for _ in range(state.graph.n):
        out = state.red_out_edges(v)
        if not out:
            return False
        v = state.head(out[0])
        if v == x:
            return True
    return False


def _first_edge_towards(state: OrientedState, comp: RedComponent, src: int, dst: int) -> int:
    """First red edge on a path from ``src`` to ``dst`` inside ``comp``."""
    g = state.graph
    first = {src: -1}
    queue = deque([src])
    while queue:
        u = queue.popleft()
        if u == dst:
            return first[u]
        for e in state.red_incident(u):
            w = g.other(e, u)
            if w not in first:
                first[w] = e if u == src else first[u]
                queue.append(w)
    raise ValueError(f"{dst} not reachable from {src} in red component {comp.id}")


def find_cycle_break(ctx: SearchContext) -> Optional[Move]:
    """Blue arc ``(x, y)`` between components, ``R^y`` a tree, ``x`` on a red cycle."""
    state = ctx.state

    def candidates():
        for a, x, y in ctx.blue_arcs():
            cx, cy = ctx.comp(x), ctx.comp(y)
            if cx.id == cy.id or cy.has_cycle or not cx.has_cycle:
                continue
            if not _on_red_cycle(state, x):
                continue
            out = state.red_out_edges(x)[0]
            yield "cycle-break", out, a, ()
            for e in state.red_incident(x):
                # the other cycle edge at x is the one whose tail walks back to x
                if e != out and _on_red_cycle(state, state.tail[e]):
                    yield "cycle-break", e, a, ()

    return _first_move(ctx, candidates())


def small_pair_violations(ctx: SearchContext) -> list[tuple[int, int, int]]:
    """Blue arcs from a parent into an acyclic child with ``e(parent) + e(child) < d``."""
    d = ctx.params.d
    order = ctx.order
    out = []
    for a, x, y in ctx.blue_arcs():
        cx, cy = ctx.comp(x), ctx.comp(y)
        if order.parent.get(cy.id) != cx.id or cy.has_cycle:
            continue
        if cx.n_edges + cy.n_edges < d:
            out.append((a, x, y))
    return out


def find_small_pair_move(ctx: SearchContext) -> Optional[Move]:
    """Repair a parent/child pair that is too small together."""
    state = ctx.state
    order = ctx.order
    part = ctx.partition

    def candidates():
        for a, x, y in small_pair_violations(ctx):
            cx = ctx.comp(x)
            # the determiner on another vertex lets the parent shrink in place
            for w in order.determiners.get(cx.id, ()):
                if w != x:
                    yield "small-pair-1", _first_edge_towards(state, cx, x, w), a, ()
            # otherwise hand a red edge up the chain of edgeless ancestors
            path: list[int] = []
            cur, target = cx.id, x
            while cur in order.parent:
                par = order.parent[cur]
                arcs = [(b, u) for b, u, v in _blue_arcs_into(state, part[cur]) if v == target and part.comp_of[u] == par]
                if not arcs:
                    break
                if part[par].n_edges >= 1:
                    for b, u in arcs:
                        for e in state.red_incident(u):
                            yield "small-pair-2", e, a, tuple([b] + path)
                    break
                b, u = arcs[0]
                path.insert(0, b)
                cur, target = par, u
            for e in state.red_incident(x):
                yield "small-pair-fallback", e, a, ()

    return _first_move(ctx, candidates())


def troublesome_children(ctx: SearchContext) -> dict[int, list[int]]:
    kids: dict[int, list[int]] = defaultdict(list)
    for c in ctx.order.sequence[1:]:
        if is_troublesome(ctx.partition[c], ctx.params):
            kids[ctx.order.parent[c]].append(c)
    return kids


def children_hypothesis(comp: RedComponent, p: Params) -> bool:
    """Edge-count hypothesis under which a component has at most ``k`` troublesome children."""
    if 2 * p.d < p.d + p.k + 1:
        return comp.n_edges >= 2
    return comp.n_edges >= 3


def find_children_reduction_move(ctx: SearchContext) -> Optional[Move]:
    """Shrink a component with more than ``k`` troublesome children."""
    state = ctx.state
    order = ctx.order
    k = ctx.params.k
    kids = troublesome_children(ctx)

    def candidates():
        for t in order.sequence:
            if len(kids.get(t, ())) <= k or ctx.partition[t].n_edges < 1:
                continue
            comp = ctx.partition[t]
            kid_set = set(kids[t])
            arcs = [(a, x, y) for a, x, y in ctx.blue_arcs() if ctx.partition.comp_of[x] == t and ctx.partition.comp_of[y] in kid_set]
            pivots = sorted({x for _, x, _ in arcs})
            if t != ctx.root:
                for z in order.determiners.get(t, ()):
                    for a, x, _ in arcs:
                        if x != z:
                            yield "children-nonroot", _first_edge_towards(state, comp, x, z), a, ()
                    for a, x, _ in arcs:
                        if x == z:
                            for e in state.red_incident(z):
                                yield "children-nonroot", e, a, ()
            else:
                for a, w, _ in arcs:
                    red_at = state.red_incident(w)
                    if len(red_at) == 1:
                        yield "children-root", red_at[0], a, ()
                for a, x, _ in arcs:
                    for w in pivots:
                        if w != x:
                            yield "children-root", _first_edge_towards(state, comp, x, w), a, ()
            for a, x, _ in arcs:
                for e in state.red_incident(x):
                    yield "children-fallback", e, a, ()

    return _first_move(ctx, candidates())


FINDERS: tuple[Callable[[SearchContext], Optional[Move]], ...] = (
    find_cycle_break,
    find_small_pair_move,
    find_children_reduction_move,
)


# ---------------------------------------------------------------------------
# certificate extraction


@dataclass(frozen=True)
class Deficiency:
    vertex: int


def tc_groups(ctx: SearchContext) -> list[tuple[int, int, int]]:
    """``(leader, red edges, vertices)`` for every non-troublesome component with its troublesome children."""
    p = ctx.params
    part = ctx.partition
    groups: dict[int, list[int]] = {}
    for c in ctx.order.sequence:
        if not is_troublesome(part[c], p):
            groups.setdefault(c, [0, 0])
    for c in ctx.order.sequence:
        leader = c if c in groups else ctx.order.parent.get(c)
        if leader not in groups:
            raise InternalInconsistency(f"troublesome component {c} has no non-troublesome parent")
        groups[leader][0] += part[c].n_edges
        groups[leader][1] += part[c].n_vertices
    return [(c, e, v) for c, (e, v) in groups.items()]


def extract_certificate(ctx: SearchContext) -> Union[DensityCertificate, Deficiency]:
    """Turn a state with no improving move into a density certificate.

    A vertex of H with fewer than ``k`` blue out-arcs is reported as a
    :class:`Deficiency`; the caller saturates and continues.
    """
    state, p = ctx.state, ctx.params
    for v in sorted(ctx.h.vertices):
        if len(state.blue_out_edges(v)) < p.k:
            return Deficiency(v)
    verts = tuple(sorted(ctx.h.vertices))
    e_h = state.graph.induced_edge_count(verts)
    density = Fraction(2 * e_h, len(verts))
    if density > p.density_bound:
        return DensityCertificate(verts, e_h, density, p.density_bound)
    problems = []
    try:
        for leader, e, v in tc_groups(ctx):
            ratio = Fraction(e, v)
            strict = leader == ctx.root
            if ratio < p.troublesome_threshold or (strict and ratio == p.troublesome_threshold):
                problems.append(f"group of component {leader}: {e} red edges on {v} vertices")
    except InternalInconsistency as exc:
        problems.append(str(exc))
    problems.extend(terminal_property_violations(ctx))
    raise InternalInconsistency(
        f"no improving move but 2e(H)/v(H) = {density} <= {p.density_bound} "
        f"(k={p.k}, d={p.d}); " + "; ".join(problems or ["no group diagnostics"])
    )


def terminal_property_violations(ctx: SearchContext) -> list[str]:
    """Pair and children properties that must hold once no move applies."""
    p = ctx.params
    out = []
    for a, x, y in small_pair_violations(ctx):
        out.append(f"arc {a} ({x}->{y}): parent and acyclic child have fewer than {p.d} edges together")
    for t, kids in troublesome_children(ctx).items():
        comp = ctx.partition[t]
        if children_hypothesis(comp, p) and len(kids) > p.k:
            out.append(f"component {t} with {comp.n_edges} edges has {len(kids)} troublesome children")
    return out


# ---------------------------------------------------------------------------
# driver


def split_blue_by_slot(state: OrientedState, k: int) -> list[list[int]]:
    """Each vertex sends its i-th blue out-arc (by edge id) to part i."""
    parts: list[list[int]] = [[] for _ in range(k)]
    for v in range(state.graph.n):
        for i, e in enumerate(sorted(state.blue_out_edges(v))):
            parts[i].append(e)
    return parts


class Decomposer:
    """One decomposition run; ``stats`` is filled in as it goes."""

    def __init__(
        self,
        graph: Multigraph,
        params: Params,
        seed: int = 0,
        max_iters: Optional[int] = None,
        assert_potential: bool = False,
        observer: Optional[Callable[[str, SearchContext], None]] = None,
    ):
        self.graph = graph
        self.params = params
        self.seed = seed
        self.max_iters = max_iters if max_iters is not None else max(1, 10 * graph.m * graph.m)
        self.assert_potential = assert_potential
        self.observer = observer
        self.stats = {"moves": 0, "flips": 0, "iterations": 0, "seed": seed, "saturations": 0}
        self.final_state: Optional[OrientedState] = None

    def _notify(self, event: str, ctx: SearchContext) -> None:
        if self.observer is not None:
            self.observer(event, ctx)

    def _check(self, old: SearchContext, new_state: OrientedState) -> None:
        bad = validate(new_state, self.params.k)
        if bad is not None:
            raise PotentialError(f"state invalid after move: {bad}")
        fresh = build_context(new_state, self.params, old.root_key, old.order_keys)
        if not fresh.potential < old.potential:
            raise PotentialError(f"potential did not decrease: {old.potential} -> {fresh.potential}")

    def run(self) -> Union[Decomposition, DensityCertificate]:
        g, p = self.graph, self.params
        if not p.guaranteed:
            log.warning("d=%d is outside [2, 2k+2] for k=%d; running best-effort", p.d, p.k)
        oriented = hakimi_orient(g, p.k + 1, seed=self.seed, k=p.k)
        if not oriented.ok:
            w = oriented.witness
            return DensityCertificate(w.vertices, w.edge_count, w.density, p.density_bound)
        state = oriented.state
        self.stats["saturations"] += saturate_in_place(state, p.k)
        self.stats["moves"] = self.stats["saturations"]
        ctx = build_context(state, p)
        while True:
            self.stats["iterations"] += 1
            if self.stats["iterations"] > self.max_iters:
                raise IterationCapExceeded(f"no result after {self.max_iters} iterations")
            if ctx.done:
                self.final_state = ctx.state
                blue = split_blue_by_slot(ctx.state, p.k)
                red = [e for e in range(g.m) if ctx.state.red[e]]
                parts = tuple(tuple(sorted(x)) for x in blue + [red])
                return Decomposition(parts, p.k, tuple(ctx.state.tail))
            move = None
            for finder in FINDERS:
                move = finder(ctx)
                if move is not None:
                    break
            if move is not None:
                if self.assert_potential:
                    self._check(ctx, move.result.state)
                self.stats["moves"] += 1
                self.stats["flips"] += 1
                self._notify("move", move.result)
                ctx = move.result
                continue
            self._notify("stuck", ctx)
            found = extract_certificate(ctx)
            if isinstance(found, DensityCertificate):
                self.final_state = ctx.state
                return found
            new_state = ctx.state.copy()
            steps = saturate_in_place(new_state, p.k)
            if steps == 0:
                raise InternalInconsistency(f"vertex {found.vertex} is deficient but no saturation path exists")
            if self.assert_potential:
                self._check(ctx, new_state)
            self.stats["saturations"] += steps
            self.stats["moves"] += steps
            ctx = build_context(new_state, p, ctx.root_key, ctx.order_keys)


def decompose(
    g: Multigraph,
    p: Params,
    seed: int = 0,
    max_iters: Optional[int] = None,
    assert_potential: bool = False,
) -> Union[Decomposition, DensityCertificate]:
    """Decompose ``g`` into ``k+1`` pseudoforests or certify ``mad(g) > 2k + 2d/(d+k+1)``."""
    return Decomposer(g, p, seed, max_iters, assert_potential).run()
