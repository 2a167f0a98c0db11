import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from hyperlambek.hypergraph import (EdgeNotFound, Hypergraph, HypergraphError, RankedLabel,
                                    canonical_key, empty_graph, from_json, handle, isomorphic,
                                    isomorphism, relabel, remove_edge, replace, replace_many,
                                    string_graph, to_dot, to_json)

from generators import random_graph, random_word, shuffled_copy, perturbed, str_graph
from oracles import brute_isomorphic

p, q, r, s = (RankedLabel(n, 2) for n in "pqrs")
a1 = RankedLabel("a", 1)

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def test_string_graph_shape():
    G = string_graph([p, q])
    assert len(G.nodes) == 3 and len(G.edges) == 2
    assert G.ext == (0, 2)
    assert G.att[1] == (0, 1) and G.att[2] == (1, 2)


def test_single_letter_string_graph_is_handle():
    assert string_graph([p]) == handle(p)


def test_handle():
    H = handle(RankedLabel("m", 3))
    assert H.rank == 3 and H.att[0] == H.ext


def test_replace_strings():
    G = replace_many(str_graph(), {1: string_graph([p, q]), 2: string_graph([r, s])})
    assert G == string_graph([p, q, r, s])


def test_replace_single_edge_wholesale():
    assert replace(string_graph([p]), 1, string_graph([q])) == string_graph([q])


def test_replace_by_handle_relabels():
    G = string_graph([p, q])
    assert replace(G, 1, handle(r)) == relabel(G, {1: r})


def test_replace_errors():
    G = string_graph([p, q])
    with pytest.raises(HypergraphError):
        replace(G, 1, handle(a1))
    with pytest.raises(EdgeNotFound):
        replace(G, 7, handle(p))
    with pytest.raises(EdgeNotFound):
        remove_edge(G, 7)
    with pytest.raises(HypergraphError):
        relabel(G, {1: a1})


def test_replace_many_empty_assignment():
    G = string_graph([p, q])
    assert replace_many(G, {}) is G


def test_remove_edge_keeps_nodes():
    G = remove_edge(string_graph([p, q]), 1)
    assert len(G.nodes) == 3 and G.edges == (2,)


def test_construction_checks():
    with pytest.raises(HypergraphError):
        Hypergraph((0,), {0: (0, 0)}, {0: a1}, (0,))
    with pytest.raises(HypergraphError):
        Hypergraph((0,), {0: (1,)}, {0: a1}, (0,))
    with pytest.raises(HypergraphError):
        Hypergraph((0,), {}, {}, (3,))


def test_isomorphism_respects_ext_order():
    G = Hypergraph((0, 1), {0: (0, 1)}, {0: p}, (0, 1))
    H = Hypergraph((0, 1), {0: (0, 1)}, {0: p}, (1, 0))
    assert not isomorphic(G, H)
    assert isomorphic(G, Hypergraph((5, 9), {3: (5, 9)}, {3: p}, (5, 9)))


def test_isolated_nodes_count():
    assert empty_graph(0) != Hypergraph((0,), {}, {}, ())


def test_isomorphism_witness():
    rng = random.Random(3)
    G = random_graph(rng)
    H = shuffled_copy(rng, G)
    node_map, edge_map = isomorphism(G, H)
    assert tuple(node_map[v] for v in G.ext) == H.ext
    for e, f in edge_map.items():
        assert G.lab[e] == H.lab[f]
        assert tuple(node_map[v] for v in G.att[e]) == H.att[f]


def test_json_roundtrip():
    G = string_graph([p, q])
    data = json.loads(json.dumps(to_json(G)))
    assert data["ext"] == [0, 2]
    assert from_json(data) == G


def test_dot_marks_external_nodes():
    dot = to_dot(string_graph([p, q]))
    assert 'xlabel="(1)"' in dot and 'xlabel="(2)"' in dot
    assert "penwidth" in dot
    tri = to_dot(handle(RankedLabel("m", 3)))
    assert "shape=box" in tri and 'label="3"' in tri


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_canonical_key_matches_brute_force(seed):
    rng = random.Random(seed)
    G = random_graph(rng)
    H = shuffled_copy(rng, G) if rng.random() < 0.5 else perturbed(rng, G)
    assert isomorphic(G, H) == brute_isomorphic(G, H)
    assert (canonical_key(G) == canonical_key(H)) == brute_isomorphic(G, H)


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_string_graphs_concatenate(seed):
    rng = random.Random(seed)
    w1, w2 = random_word(rng), random_word(rng)
    G = replace_many(str_graph(), {1: string_graph(w1), 2: string_graph(w2)})
    assert G == string_graph(w1 + w2)


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_replacement_order_independent(seed):
    rng = random.Random(seed)
    G = random_graph(rng, max_edges=5)
    while len(G.edges) < 2:
        G = random_graph(rng, max_edges=5)
    e1, e2 = rng.sample(G.edges, 2)
    H1 = random_graph(rng, rank=G.edge_rank(e1))
    H2 = random_graph(rng, rank=G.edge_rank(e2))
    one = replace(replace(G, e1, H1), e2, H2)
    two = replace(replace(G, e2, H2), e1, H1)
    both = replace_many(G, {e1: H1, e2: H2})
    assert one == two == both


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_handle_neutrality(seed):
    rng = random.Random(seed)
    G = random_graph(rng)
    while not G.edges:
        G = random_graph(rng)
    e = rng.choice(G.edges)
    a = RankedLabel(rng.choice("xyz"), G.edge_rank(e))
    assert replace(G, e, handle(a)) == relabel(G, {e: a})


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_replacement_well_defined_up_to_isomorphism(seed):
    rng = random.Random(seed)
    G = random_graph(rng)
    while not G.edges:
        G = random_graph(rng)
    e = rng.choice(G.edges)
    H = random_graph(rng, rank=G.edge_rank(e))
    assert replace(G, e, H) == replace(G, e, shuffled_copy(rng, H))
