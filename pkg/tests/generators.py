"""Seeded random instances shared by the property tests and the acceptance gate."""
from __future__ import annotations

import random

from hyperlambek.hypergraph import Hypergraph, RankedLabel, string_graph

ALPHABET = [RankedLabel(n, r) for n in "abc" for r in (1, 2, 3)]
WORD = [RankedLabel(n, 2) for n in "pqrs"]


def random_graph(rng: random.Random, max_nodes: int = 5, max_edges: int = 4,
                 rank: int | None = None) -> Hypergraph:
    n = rng.randint(1, max_nodes)
    nodes = tuple(rng.sample(range(20), n))
    att, lab = {}, {}
    for k in range(rng.randint(0, max_edges)):
        label = rng.choice(ALPHABET)
        e = rng.randint(0, 50)
        while e in att:
            e += 1
        att[e] = tuple(rng.choice(nodes) for _ in range(label.rank))
        lab[e] = label
    r = rng.randint(0, 3) if rank is None else rank
    ext = tuple(rng.choice(nodes) for _ in range(r))
    return Hypergraph(nodes, att, lab, ext)


def shuffled_copy(rng: random.Random, G: Hypergraph) -> Hypergraph:
    """An isomorphic copy with fresh node and edge ids."""
    new_nodes = rng.sample(range(100, 200), len(G.nodes))
    m = dict(zip(G.nodes, new_nodes))
    new_edges = rng.sample(range(300, 400), len(G.att))
    em = dict(zip(G.att, new_edges))
    order = list(G.att)
    rng.shuffle(order)
    return Hypergraph(tuple(rng.sample(new_nodes, len(new_nodes))),
                      {em[e]: tuple(m[v] for v in G.att[e]) for e in order},
                      {em[e]: G.lab[e] for e in order}, tuple(m[v] for v in G.ext))


def perturbed(rng: random.Random, G: Hypergraph) -> Hypergraph:
    """A small random edit; may or may not stay isomorphic."""
    if not G.att:
        return random_graph(rng)
    e = rng.choice(list(G.att))
    att = dict(G.att)
    lab = dict(G.lab)
    if rng.random() < 0.5:
        att[e] = tuple(rng.choice(G.nodes) for _ in att[e])
    else:
        same_rank = [l for l in ALPHABET if l.rank == len(att[e])]
        lab[e] = rng.choice(same_rank)
    return Hypergraph(G.nodes, att, lab, G.ext)


def random_word(rng: random.Random, lo: int = 1, hi: int = 4) -> list[RankedLabel]:
    return [rng.choice(WORD) for _ in range(rng.randint(lo, hi))]


def str_graph() -> Hypergraph:
    """Two-edge string graph with slot edges 1 and 2."""
    return string_graph([RankedLabel("s1", 2), RankedLabel("s2", 2)])
