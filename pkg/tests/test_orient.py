import pytest
from hypothesis import given, settings

from pfdecomp.density import mad_exact
from pfdecomp.graph import Multigraph, OrientedState, validate
from pfdecomp.orient import colour, hakimi_orient, saturate

from conftest import cycle, k4, multigraphs


def test_cycle_cap_one():
    res = hakimi_orient(cycle(5), 1)
    assert res.ok
    assert res.state.out_degrees() == [1] * 5


def test_k4_cap_one_witness():
    res = hakimi_orient(k4(), 1)
    assert not res.ok
    w = res.witness
    assert set(w.vertices) == {0, 1, 2, 3} and w.edge_count == 6 and w.density == 3


def test_k4_cap_two():
    res = hakimi_orient(k4(), 2)
    assert res.ok and max(res.state.out_degrees()) <= 2


@settings(max_examples=80)
@given(multigraphs(max_e=20, min_e=1))
def test_orientation_iff_density(g):
    mad = mad_exact(g).density
    for cap in (1, 2, 3):
        res = hakimi_orient(g, cap)
        assert res.ok == (mad <= 2 * cap)
        if res.ok:
            assert max(res.state.out_degrees()) <= cap
        else:
            assert res.witness.density > 2 * cap


def test_saturate_already_saturated():
    g = cycle(4)
    s = colour(OrientedState(g, [u for u, _ in g.edges]), 1)
    assert saturate(s, 1) == s


def test_saturate_two_edge_path():
    # a-b-c with both arcs leaving b
    g = Multigraph(3, [(0, 1), (1, 2)])
    s = colour(OrientedState(g, [1, 1]), 1)
    assert s.red_count() == 1
    out = saturate(s, 1)
    assert out.out_degrees() == [1, 1, 0]
    assert out.red_count() == 0
    assert validate(out, 1) is None


@settings(max_examples=80)
@given(multigraphs(max_e=20))
def test_saturate_property(g):
    for k in (1, 2):
        res = hakimi_orient(g, k + 1, k=k)
        if not res.ok:
            continue
        before = res.state.red_count()
        out = saturate(res.state, k)
        assert validate(out, k) is None
        assert out.red_count() <= before
        for v in range(g.n):
            if out.red_out_edges(v):
                assert len(out.out_edges(v)) == k + 1


def test_colour_counts():
    g = Multigraph(3, [(0, 1), (1, 2)])
    s = colour(OrientedState(g, [0, 1]), 1)
    assert s.red_count() == 0
    g = cycle(4)
    s = OrientedState(Multigraph(4, list(g.edges) + list(g.edges)), [0, 1, 2, 3, 1, 2, 3, 0])
    c = colour(s, 1)
    assert c.red_count() == 4
    assert all(len(c.red_out_edges(v)) == 1 for v in range(4))


def test_colour_rejects_overload():
    g = Multigraph(3, [(0, 1), (0, 2), (0, 1)])
    with pytest.raises(ValueError):
        colour(OrientedState(g, [0, 0, 0]), 1)
