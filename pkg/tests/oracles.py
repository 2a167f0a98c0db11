"""Slow reference implementations used only by the tests.

None of these share code with the package beyond its plain data types.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import permutations, product

from hyperlambek.hypergraph import Hypergraph, label_key
from hyperlambek.nlm.terms import (Angle, Atom, Box, Diamond, Leaf, NLMSequent, Over, Pair, Prod,
                                   Signature, Under)


# ---------------------------------------------------------------------------
# hypergraph isomorphism by trying every node bijection

def _edge_multiset(G: Hypergraph, phi: dict) -> list:
    return sorted((label_key(G.lab[e]), tuple(phi[v] for v in G.att[e])) for e in G.att)


def brute_isomorphic(G1: Hypergraph, G2: Hypergraph) -> bool:
    if len(G1.nodes) != len(G2.nodes) or len(G1.att) != len(G2.att) or len(G1.ext) != len(G2.ext):
        return False
    target = sorted((label_key(G2.lab[e]), G2.att[e]) for e in G2.att)
    for perm in permutations(G2.nodes):
        phi = dict(zip(G1.nodes, perm))
        if tuple(phi[v] for v in G1.ext) != tuple(G2.ext):
            continue
        if _edge_multiset(G1, phi) == target:
            return True
    return False


# ---------------------------------------------------------------------------
# structural closure by naive fixpoint

def _rewrites(t, sig: Signature):
    """Every database one postulate step away, in either direction."""
    if isinstance(t, Leaf):
        return
    if isinstance(t, Angle):
        for b in _rewrites(t.body, sig):
            yield Angle(t.mod, b)
        return
    i = t.mode
    if i in sig.commutative:
        yield Pair(i, t.right, t.left)
    if i in sig.associative:
        if isinstance(t.left, Pair) and t.left.mode == i:
            yield Pair(i, t.left.left, Pair(i, t.left.right, t.right))
        if isinstance(t.right, Pair) and t.right.mode == i:
            yield Pair(i, Pair(i, t.left, t.right.left), t.right.right)
    for l in _rewrites(t.left, sig):
        yield Pair(i, l, t.right)
    for r in _rewrites(t.right, sig):
        yield Pair(i, t.left, r)


def fixpoint_class(t, sig: Signature) -> frozenset:
    seen = {t}
    todo = [t]
    while todo:
        x = todo.pop()
        for y in _rewrites(x, sig):
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return frozenset(seen)


# ---------------------------------------------------------------------------
# NL♦ derivability by unrestricted backward search over whole classes

def _holes(t, path=()):
    yield path, t
    if isinstance(t, Pair):
        yield from _holes(t.left, path + (0,))
        yield from _holes(t.right, path + (1,))
    elif isinstance(t, Angle):
        yield from _holes(t.body, path + (0,))


def _put(t, path, new):
    if not path:
        return new
    if isinstance(t, Angle):
        return Angle(t.mod, _put(t.body, path[1:], new))
    if path[0] == 0:
        return Pair(t.mode, _put(t.left, path[1:], new), t.right)
    return Pair(t.mode, t.left, _put(t.right, path[1:], new))


def naive_derivable(seq: NLMSequent, sig: Signature) -> bool:
    """Tries every rule at every position of every member of the class."""

    @lru_cache(maxsize=None)
    def cls(t):
        return fixpoint_class(t, sig)

    @lru_cache(maxsize=None)
    def go(members: frozenset, C) -> bool:
        for G in sorted(members, key=str):
            if G == Leaf(C):
                return True
            if isinstance(C, Prod) and isinstance(G, Pair) and G.mode == C.mode:
                if der(G.left, C.left) and der(G.right, C.right):
                    return True
            if isinstance(C, Diamond) and isinstance(G, Angle) and G.mod == C.mod:
                if der(G.body, C.body):
                    return True
            if isinstance(C, Under) and der(Pair(C.mode, Leaf(C.den), G), C.num):
                return True
            if isinstance(C, Over) and der(Pair(C.mode, G, Leaf(C.den)), C.num):
                return True
            if isinstance(C, Box) and der(Angle(C.mod, G), C.body):
                return True
            for path, s in _holes(G):
                if isinstance(s, Leaf):
                    A = s.formula
                    if isinstance(A, Prod) and der(_put(G, path, Pair(A.mode, Leaf(A.left), Leaf(A.right))), C):
                        return True
                    if isinstance(A, Diamond) and der(_put(G, path, Angle(A.mod, Leaf(A.body))), C):
                        return True
                if isinstance(s, Pair) and isinstance(s.right, Leaf):
                    A = s.right.formula
                    if isinstance(A, Under) and A.mode == s.mode and der(s.left, A.den) \
                            and der(_put(G, path, Leaf(A.num)), C):
                        return True
                if isinstance(s, Pair) and isinstance(s.left, Leaf):
                    A = s.left.formula
                    if isinstance(A, Over) and A.mode == s.mode and der(s.right, A.den) \
                            and der(_put(G, path, Leaf(A.num)), C):
                        return True
                if isinstance(s, Angle) and isinstance(s.body, Leaf):
                    A = s.body.formula
                    if isinstance(A, Box) and A.mod == s.mod and der(_put(G, path, Leaf(A.body)), C):
                        return True
        return False

    def der(G, C) -> bool:
        return go(cls(G), C)

    return der(seq.antecedent, seq.succedent)


# ---------------------------------------------------------------------------
# product decompositions by trying every edge-to-slot assignment and node map

def brute_product_decompositions(H: Hypergraph, M: Hypergraph) -> set[tuple[str, ...]]:
    from hyperlambek.hypergraph import replace_many

    slots = sorted(M.att)
    out = set()
    edges = sorted(H.att)
    for node_map in product(H.nodes, repeat=len(M.nodes)):
        phi = dict(zip(M.nodes, node_map))
        if tuple(phi[v] for v in M.ext) != tuple(H.ext):
            continue
        boundary = set(phi.values())
        inner = [v for v in H.nodes if v not in boundary]
        for edge_slots in product(range(len(slots)), repeat=len(edges)):
            for node_slots in product(range(len(slots)), repeat=len(inner)):
                parts = []
                ok = True
                for i, m in enumerate(slots):
                    ext = tuple(phi[v] for v in M.att[m])
                    mine = [e for e, s in zip(edges, edge_slots) if s == i]
                    own = [v for v, s in zip(inner, node_slots) if s == i]
                    nodes = list(dict.fromkeys(list(ext) + own))
                    if any(v not in nodes for e in mine for v in H.att[e]):
                        ok = False
                        break
                    parts.append(Hypergraph(tuple(nodes), {e: H.att[e] for e in mine},
                                            {e: H.lab[e] for e in mine}, ext))
                if not ok:
                    continue
                if replace_many(M, dict(zip(slots, parts))) == H:
                    out.add(tuple(p.key for p in parts))
    return out


__all__ = ["brute_isomorphic", "fixpoint_class", "naive_derivable", "brute_product_decompositions",
           "Atom"]
