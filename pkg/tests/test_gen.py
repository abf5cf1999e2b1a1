from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from pfdecomp.density import mad_bruteforce, mad_exact, threshold
from pfdecomp.formats import format_edge_list, parse_edge_list
from pfdecomp.gen import gen_above_threshold, gen_below_threshold, gen_pseudoforest_union
from pfdecomp.results import DensityCertificate, Decomposition, Params
from pfdecomp.verify import is_pseudoforest, verify_certificate, verify_decomposition

from conftest import NAMED


def test_below_small_example():
    out = gen_below_threshold(8, 1, 2, seed=0)
    assert mad_bruteforce(out.graph).density <= 3
    assert Fraction(out.meta["witness_density"]) <= Fraction(out.meta["threshold"])


def test_generators_deterministic():
    for fn in (gen_below_threshold, gen_above_threshold, gen_pseudoforest_union):
        a, b = fn(15, 2, 4, 42), fn(15, 2, 4, 42)
        assert a.graph == b.graph and a.meta == b.meta


def test_generators_reject_tiny():
    with pytest.raises(ValueError):
        gen_below_threshold(1, 1, 2, 0)
    with pytest.raises(ValueError):
        gen_above_threshold(1, 1, 2, 0)


def test_above_examples():
    g = NAMED["k4_extra"]
    assert mad_bruteforce(g).density == Fraction(7, 2) > threshold(1, 2)
    bound = threshold(1, 2)
    g = NAMED["five_parallel"]
    assert mad_exact(g).density > bound


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 30), st.sampled_from([(1, 2), (1, 4), (2, 6), (3, 8)]), st.integers(0, 10**6))
def test_above_metadata_certifies(n, kd, seed):
    k, d = kd
    out = gen_above_threshold(n, k, d, seed)
    verts = tuple(out.meta["witness_vertices"])
    cert = DensityCertificate(verts, out.meta["witness_edge_count"], Fraction(out.meta["witness_density"]), threshold(k, d))
    assert verify_certificate(out.graph, cert, Params(k, d)) is None


def test_union_k0_is_single_small_pseudoforest():
    out = gen_pseudoforest_union(12, 0, 2, seed=3)
    assert len(out.meta["planted_parts"]) == 1
    g = out.graph
    assert is_pseudoforest(g, range(g.m))
    from pfdecomp.verify import _components

    assert all(len(es) <= 2 for _, es in _components(g, range(g.m)))


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 20), st.integers(1, 3), st.integers(1, 6), st.integers(0, 10**6))
def test_union_planted_parts_verify(n, k, d, seed):
    out = gen_pseudoforest_union(n, k, d, seed)
    dec = Decomposition(tuple(tuple(x) for x in out.meta["planted_parts"]), k)
    assert verify_decomposition(out.graph, dec, Params(k, d)) is None


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 25), st.integers(0, 10**6))
def test_edge_list_round_trip(n, seed):
    g = gen_below_threshold(n, 1, 3, seed).graph
    assert parse_edge_list(format_edge_list(g)) == g
