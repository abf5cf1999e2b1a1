import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from pfdecomp.decomposer import (
    Decomposer,
    Deficiency,
    FlipError,
    IterationCapExceeded,
    build_context,
    canonical_legal_order,
    decompose,
    explore,
    extract_certificate,
    find_children_reduction_move,
    find_cycle_break,
    find_small_pair_move,
    flip,
    is_troublesome,
    residue,
    small_pair_violations,
    terminal_property_violations,
    troublesome_children,
)
from pfdecomp.gen import gen_below_threshold
from pfdecomp.graph import Multigraph, OrientedState, RedComponent, RedPartition, red_components, validate
from pfdecomp.results import DensityCertificate, Decomposition, Params
from pfdecomp.verify import verify_certificate, verify_decomposition

from conftest import NAMED, k4


def state_from(n, arcs):
    """``arcs`` are ``(tail, head, "r" | "b")``; edge ids follow list order."""
    g = Multigraph(n, [(t, h) for t, h, _ in arcs])
    return OrientedState(g, [t for t, _, _ in arcs], [c == "r" for _, _, c in arcs])


def partition_with_sizes(sizes):
    comps = []
    v = 0
    comp_of = {}
    for i, e in enumerate(sizes):
        verts = tuple(range(v, v + e + 1))
        for u in verts:
            comp_of[u] = i
        comps.append(RedComponent(i, verts, tuple(range(e))))
        v += e + 1
    return RedPartition(tuple(comps), comp_of)


# --- measures


def test_residue_examples():
    assert residue(partition_with_sizes([5, 1, 3]), 2) == 4
    assert residue(partition_with_sizes([1, 2, 0]), 2) == 0
    assert residue(partition_with_sizes([7]), 3) == 4


def test_troublesome_examples():
    for k, d in [(1, 2), (2, 5), (3, 8)]:
        assert is_troublesome((0, 1), Params(k, d))
    assert not is_troublesome((1, 2), Params(1, 2))
    assert is_troublesome((1, 2), Params(1, 3))
    # a 2-edge path plus one single-vertex child: 2/4 is not below 2/4
    assert not is_troublesome((2, 4), Params(1, 2))


# --- flips


def test_flip_four_vertex_example():
    x, v, y, w = 0, 1, 2, 3
    s = state_from(4, [(x, v, "r"), (x, y, "b"), (y, w, "r")])
    out = flip(s, 0, 1)
    assert (out.tail[0], out.red[0]) == (x, False)
    assert (out.tail[1], out.red[1]) == (y, True)
    assert (out.tail[2], out.red[2]) == (w, True)


def test_flip_empty_red_path():
    s = state_from(3, [(0, 1, "r"), (0, 2, "b")])
    raw = flip(s, 0, 1)
    assert raw.tail == [0, 2] and raw.red == [False, True]
    # y had no blue arc of its own, so with k given its new red arc turns blue
    out = flip(s, 0, 1, k=1)
    assert out.tail == [0, 2] and out.red == [False, False]
    assert validate(out, 1) is None


def test_flip_rejects_bad_input():
    s = state_from(3, [(0, 1, "r"), (0, 2, "b")])
    with pytest.raises(FlipError):
        flip(s, 1, 0)
    s = state_from(4, [(0, 1, "r"), (1, 2, "b"), (2, 3, "b")])
    with pytest.raises(FlipError):
        flip(s, 0, 2)


# --- explore and legal order


def test_explore_root_only():
    s = state_from(4, [(0, 1, "r"), (1, 2, "r"), (2, 0, "r"), (0, 1, "b"), (1, 2, "b"), (2, 0, "b")])
    part = red_components(s)
    h = explore(s, part.of(0).id, part)
    assert h.vertices == {0, 1, 2}
    order = canonical_legal_order(s, h)
    assert len(order.sequence) == 1 and order.parent == {}


LEGAL = [
    (0, 1, "r"), (1, 2, "r"), (2, 3, "r"), (3, 4, "r"),
    (0, 6, "b"), (1, 10, "b"), (2, 4, "b"), (3, 4, "b"),
    (5, 6, "r"), (5, 0, "b"),
    (7, 8, "r"), (8, 9, "r"), (9, 10, "r"), (7, 0, "b"), (8, 0, "b"), (9, 0, "b"),
]


def test_legal_order_prefers_fewer_edges():
    s = state_from(11, LEGAL)
    assert validate(s, 1) is None
    ctx = build_context(s, Params(1, 2))
    sizes = [ctx.partition[c].n_edges for c in ctx.order.sequence]
    assert sizes == [4, 1, 3]
    root = ctx.order.sequence[0]
    assert all(ctx.order.parent[c] == root for c in ctx.order.sequence[1:])
    again = build_context(state_from(11, LEGAL), Params(1, 2))
    assert again.order == ctx.order


# --- finders


CYCLE = [(0, 1, "r"), (1, 2, "r"), (2, 0, "r"), (0, 3, "b"), (1, 3, "b"), (2, 3, "b")]


def test_cycle_break():
    ctx = build_context(state_from(4, CYCLE), Params(1, 2))
    assert ctx.potential.cycles == 1
    move = find_cycle_break(ctx)
    assert move is not None
    after = move.result.potential
    assert after.cycles == 0 and after.residue <= ctx.potential.residue
    assert validate(move.result.state, 1) is None


def test_cycle_break_none_without_cycles():
    ctx = build_context(state_from(11, LEGAL), Params(1, 2))
    assert find_cycle_break(ctx) is None


SMALL_PAIR = [
    (0, 1, "r"), (1, 2, "r"), (2, 3, "r"), (3, 4, "r"),
    (0, 6, "b"), (1, 8, "b"), (2, 8, "b"), (3, 8, "b"),
    (5, 6, "r"), (5, 7, "b"), (7, 8, "b"),
]


def test_small_pair_case_one():
    s = state_from(9, SMALL_PAIR)
    assert validate(s, 1) is None
    ctx = build_context(s, Params(1, 3))
    assert [x for _, x, _ in small_pair_violations(ctx)] == [5]
    pos_x = ctx.order.position[ctx.comp(5).id]
    move = find_small_pair_move(ctx)
    assert move.kind == "small-pair-1"
    assert move.result.potential < ctx.potential
    before, after = ctx.potential.order_vector, move.result.potential.order_vector
    assert before[:pos_x] == after[:pos_x] and after[pos_x] < before[pos_x]
    assert validate(move.result.state, 1) is None


def test_small_pair_none_when_pairs_large():
    ctx = build_context(state_from(11, LEGAL), Params(1, 2))
    assert small_pair_violations(ctx) == []
    assert find_small_pair_move(ctx) is None


CHILDREN = [
    (0, 1, "r"), (1, 2, "r"), (2, 3, "r"),
    (0, 6, "b"), (1, 6, "b"), (2, 6, "b"),
    (4, 5, "r"), (5, 6, "r"), (4, 7, "b"), (5, 8, "b"),
]


def test_children_reduction():
    s = state_from(9, CHILDREN)
    assert validate(s, 1) is None
    ctx = build_context(s, Params(1, 2))
    t = ctx.comp(4).id
    assert len(troublesome_children(ctx)[t]) == 2
    move = find_children_reduction_move(ctx)
    assert move is not None and move.kind.startswith("children")
    assert move.result.potential < ctx.potential
    assert validate(move.result.state, 1) is None


def test_children_none_when_few():
    ctx = build_context(state_from(11, LEGAL), Params(1, 2))
    assert find_children_reduction_move(ctx) is None


# --- extraction


def test_extract_deficiency():
    ctx = build_context(state_from(9, CHILDREN), Params(1, 2))
    found = extract_certificate(ctx)
    assert isinstance(found, Deficiency)
    assert len(ctx.state.blue_out_edges(found.vertex)) < 1


def test_extract_certificate_dense_h():
    s = state_from(4, [(0, 1, "r"), (2, 0, "r"), (3, 0, "b"), (1, 2, "r"), (1, 3, "b"), (2, 3, "b"), (0, 1, "b")])
    p = Params(1, 2)
    ctx = build_context(s, p)
    cert = extract_certificate(ctx)
    assert isinstance(cert, DensityCertificate)
    assert cert.density == Fraction(7, 2)
    assert verify_certificate(s.graph, cert, p) is None


# --- end to end


def test_decompose_k4():
    p = Params(1, 2)
    dec = decompose(k4(), p)
    assert isinstance(dec, Decomposition)
    assert verify_decomposition(k4(), dec, p) is None


def test_decompose_single_vertex():
    for k, d in [(1, 2), (2, 4), (3, 8)]:
        dec = decompose(Multigraph(1), Params(k, d))
        assert dec.parts == ((),) * (k + 1)


def test_decompose_parallel_certificate():
    g = NAMED["five_parallel"]
    cert = decompose(g, Params(1, 2))
    assert isinstance(cert, DensityCertificate)
    assert cert.density == 5
    assert verify_certificate(g, cert, Params(1, 2)) is None


def test_decompose_k4_extra_edge_certificate():
    g = NAMED["k4_extra"]
    cert = decompose(g, Params(1, 2))
    assert isinstance(cert, DensityCertificate) and cert.density > 3
    assert verify_certificate(g, cert, Params(1, 2)) is None


def test_iteration_cap():
    g = gen_below_threshold(30, 1, 3, seed=5).graph
    with pytest.raises(IterationCapExceeded):
        Decomposer(g, Params(1, 3), max_iters=1).run()


def test_decompose_deterministic():
    g = gen_below_threshold(25, 2, 4, seed=9).graph
    a = Decomposer(g, Params(2, 4), seed=3)
    b = Decomposer(g, Params(2, 4), seed=3)
    assert a.run() == b.run() and a.stats == b.stats


PARAMS = [(1, 2), (1, 3), (1, 4), (2, 2), (2, 4), (2, 6), (3, 8)]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(PARAMS), st.integers(2, 25), st.integers(0, 10**6))
def test_below_threshold_always_decomposes(kd, n, seed):
    k, d = kd
    p = Params(k, d)
    g = gen_below_threshold(n, k, d, seed).graph
    seen = []

    def observer(event, ctx):
        seen.append(event)
        if ctx.h is not None:
            for v in ctx.h.vertices:
                for e in ctx.state.blue_out_edges(v):
                    assert ctx.state.head(e) in ctx.h.vertices

    dec = Decomposer(g, p, seed=seed, assert_potential=True, observer=observer).run()
    assert isinstance(dec, Decomposition)
    assert verify_decomposition(g, dec, p) is None


def test_stuck_states_satisfy_terminal_properties():
    rng = random.Random(2)
    from pfdecomp.gen import gen_above_threshold

    stuck = 0
    for i in range(60):
        k, d = PARAMS[i % len(PARAMS)]
        g = gen_above_threshold(rng.randint(2, 30), k, d, seed=i).graph

        def observer(event, ctx):
            nonlocal stuck
            if event == "stuck":
                stuck += 1
                assert terminal_property_violations(ctx) == []

        Decomposer(g, Params(k, d), observer=observer).run()
    assert stuck > 0
