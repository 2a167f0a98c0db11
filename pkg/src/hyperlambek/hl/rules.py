"""The axiom and rules of HL: derivation trees, one-level checking, and
backward decomposition (inverse hyperedge replacement)."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import permutations, product as cartesian
from typing import Any, Iterator, NamedTuple

from ..hypergraph import Hypergraph, handle, replace, replace_many
from .formulas import Division, Formula, Product, Sequent, fill_hole, polarity_count

AX, PROD_L, PROD_R, DIV_L, DIV_R = "ax", "xL", "xR", "divL", "divR"
RULES = (AX, PROD_L, PROD_R, DIV_L, DIV_R)


@dataclass(frozen=True, eq=False)
class Derivation:
    conclusion: Sequent
    rule: str
    premises: tuple["Derivation", ...] = ()
    meta: dict[str, Any] = field(default_factory=dict)

    def size(self) -> int:
        return 1 + sum(p.size() for p in self.premises)

    def depth(self) -> int:
        return 1 + max((p.depth() for p in self.premises), default=0)

    def walk(self) -> Iterator["Derivation"]:
        yield self
        for p in self.premises:
            yield from p.walk()

    def to_dict(self) -> dict:
        from .syntax import sequent_to_json
        return {
            "rule": self.rule,
            "conclusion": sequent_to_json(self.conclusion),
            "meta": dict(self.meta),
            "premises": [p.to_dict() for p in self.premises],
        }

    def to_text(self, indent: int = 0) -> str:
        pad = "  " * indent
        lines = [f"{pad}{self.conclusion}   [{self.rule}]"]
        for p in self.premises:
            lines.append(p.to_text(indent + 1))
        return "\n".join(lines)


class RuleCheck(NamedTuple):
    ok: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _fail(msg: str) -> RuleCheck:
    return RuleCheck(False, msg)


def check_rule(d: Derivation) -> RuleCheck:
    """Validate one inference step against its schema, modulo isomorphism."""
    c = d.conclusion
    G, A = c.antecedent, c.succedent
    ps = [p.conclusion for p in d.premises]
    if d.rule == AX:
        if ps:
            return _fail("axiom has premises")
        if G != handle(A):
            return _fail("antecedent is not the handle of the succedent")
        return RuleCheck(True)
    if d.rule == PROD_L:
        if len(ps) != 1:
            return _fail("(xL) needs one premise")
        e = d.meta.get("edge")
        if e not in G.att or not isinstance(G.lab[e], Product):
            return _fail("(xL) edge missing or not labeled by a product")
        if ps[0].succedent != A:
            return _fail("(xL) succedent changed")
        if ps[0].antecedent != replace(G, e, G.lab[e].graph):
            return _fail("(xL) premise antecedent is not H[e/M]")
        return RuleCheck(True)
    if d.rule == PROD_R:
        if not isinstance(A, Product):
            return _fail("(xR) succedent is not a product")
        M = A.graph
        slots = M.edges
        if len(ps) != len(slots):
            return _fail("(xR) premise count differs from |E_M|")
        # isomorphic copies of M may number their edges differently
        matched = False
        for order in permutations(ps):
            if any(p.succedent != M.lab[m] for m, p in zip(slots, order)):
                continue
            matched = True
            if replace_many(M, {m: p.antecedent for m, p in zip(slots, order)}) == G:
                return RuleCheck(True)
        if not matched:
            return _fail("(xR) premise succedents are not the labels of M")
        return _fail("(xR) antecedent is not M[m1/H1,...,ml/Hl]")
    if d.rule == DIV_L:
        f, ce = d.meta.get("edge"), d.meta.get("context_edge")
        if f not in G.att or not isinstance(G.lab[f], Division):
            return _fail("(divL) major edge missing or not a division")
        div: Division = G.lab[f]
        peers = div.peers
        if len(ps) != 1 + len(peers):
            return _fail("(divL) premise count differs from 1 + k")
        P0 = ps[0].antecedent
        if ce not in P0.att or P0.lab[ce] != div.numerator:
            return _fail("(divL) first premise lacks the numerator edge")
        if ps[0].succedent != A:
            return _fail("(divL) first premise succedent changed")
        # isomorphic copies of a division may list their denominator edges in another order
        for order in permutations(ps[1:]):
            if any(p.succedent != div.denominator.lab[dd] for dd, p in zip(peers, order)):
                continue
            inner = replace_many(div.denominator, {div.hole_edge: handle(div),
                                                   **{dd: p.antecedent for dd, p in zip(peers, order)}})
            if replace(P0, ce, inner) == G:
                return RuleCheck(True)
        return _fail("(divL) antecedent is not H[e/D[e$/(N/D)•, d_i/H_i]]")
    if d.rule == DIV_R:
        if len(ps) != 1 or not isinstance(A, Division):
            return _fail("(divR) needs a division succedent and one premise")
        if ps[0].succedent != A.numerator:
            return _fail("(divR) premise succedent is not the numerator")
        if ps[0].antecedent != fill_hole(A.denominator, A.hole_edge, G):
            return _fail("(divR) premise antecedent is not D[e$/F]")
        return RuleCheck(True)
    return _fail(f"unknown rule {d.rule!r}")


def check_derivation(d: Derivation) -> RuleCheck:
    for node in d.walk():
        r = check_rule(node)
        if not r:
            return RuleCheck(False, f"{r.reason} at {node.conclusion}")
    return RuleCheck(True)


# ---------------------------------------------------------------------------
# inverse replacement

class _Component(NamedTuple):
    edges: tuple[int, ...]
    internal: frozenset[int]
    boundary: frozenset[int]


def _components(G: Hypergraph, edges: list[int], boundary: set[int]) -> list[_Component]:
    parent = {e: e for e in edges}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    first: dict[int, int] = {}
    for e in edges:
        for v in G.att[e]:
            if v in boundary:
                continue
            if v in first:
                a, b = find(first[v]), find(e)
                if a != b:
                    parent[max(a, b)] = min(a, b)
            else:
                first[v] = e
    groups: dict[int, list[int]] = {}
    for e in edges:
        groups.setdefault(find(e), []).append(e)
    out = []
    for es in groups.values():
        nodes = {v for e in es for v in G.att[e]}
        out.append(_Component(tuple(es), frozenset(nodes - boundary), frozenset(nodes & boundary)))
    return out


def _node_maps(pattern: Hypergraph, target: Hypergraph, pinned: dict[int, int]) -> Iterator[dict[int, int]]:
    free = [v for v in pattern.nodes if v not in pinned]
    for choice in cartesian(target.nodes, repeat=len(free)):
        phi = dict(pinned)
        phi.update(zip(free, choice))
        yield phi


def _pin(src: tuple[int, ...], dst: tuple[int, ...]) -> dict[int, int] | None:
    phi: dict[int, int] = {}
    for a, b in zip(src, dst):
        if phi.setdefault(a, b) != b:
            return None
    return phi


def _subgraph(G: Hypergraph, ext: tuple[int, ...], comps: list[_Component],
              extra_nodes: list[int]) -> Hypergraph:
    nodes = list(dict.fromkeys(list(ext) + sorted(v for c in comps for v in c.internal) + extra_nodes))
    edges = [e for c in comps for e in c.edges]
    return Hypergraph(tuple(nodes), {e: G.att[e] for e in edges}, {e: G.lab[e] for e in edges},
                      ext, check=False)


def _component_count(G: Hypergraph, comp: _Component) -> Counter:
    c: Counter = Counter()
    for e in comp.edges:
        c.update(polarity_count(G.lab[e]))
    return c


def _clean(c: Counter) -> Counter:
    return Counter({k: v for k, v in c.items() if v})


def decompose_product(H: Hypergraph, M: Hypergraph, prune: bool = True) -> Iterator[list[Hypergraph]]:
    """All ``[H_1..H_l]`` (aligned with ``M.edges``) with ``M[m_i/H_i] = H``.

    With ``prune``, parts whose primitive count differs from their slot's
    label are skipped: such premises can never be derived.
    """
    slots = M.edges
    if not slots:
        if H == M:
            yield []
        return
    pinned = _pin(M.ext, H.ext)
    if pinned is None:
        return
    targets = [_clean(polarity_count(M.lab[m])) for m in slots]
    seen: set[tuple[str, ...]] = set()
    for phi in _node_maps(M, H, pinned):
        boundary = set(phi.values())
        comps = _components(H, list(H.edges), boundary)
        touched = {v for c in comps for v in c.internal}
        free = [v for v in H.nodes if v not in boundary and v not in touched]
        slot_nodes = [set(phi[v] for v in M.att[m]) for m in slots]
        options = []
        for c in comps:
            opts = [i for i, s in enumerate(slot_nodes) if c.boundary <= s]
            if not opts:
                break
            options.append(opts)
        else:
            counts = [_component_count(H, c) for c in comps]
            for assign in cartesian(*options):
                totals = [Counter() for _ in slots]
                for i, cnt in zip(assign, counts):
                    totals[i].update(cnt)
                if prune and any(_clean(t) != want for t, want in zip(totals, targets)):
                    continue
                for free_assign in cartesian(range(len(slots)), repeat=len(free)):
                    parts = []
                    for i, m in enumerate(slots):
                        ext = tuple(phi[v] for v in M.att[m])
                        mine = [c for c, a in zip(comps, assign) if a == i]
                        extra = [v for v, a in zip(free, free_assign) if a == i]
                        parts.append(_subgraph(H, ext, mine, extra))
                    sig = tuple(p.key for p in parts)
                    if sig in seen:
                        continue
                    if replace_many(M, dict(zip(slots, parts))) != H:
                        continue
                    seen.add(sig)
                    yield parts


def decompose_division(G: Hypergraph, f: int) -> Iterator[tuple[Hypergraph, int, list[Hypergraph]]]:
    """All ``(H, e, [H_1..H_k])`` with ``H[e/D[e$/(N/D)•, d_i/H_i]] = G``.

    ``H`` carries the fresh edge ``e`` labeled by the numerator; the
    ``H_i`` are aligned with the division's peer edges.
    """
    div: Division = G.lab[f]
    D = div.denominator
    h = div.hole_edge
    peers = div.peers
    pinned = _pin(D.att[h], G.att[f])
    if pinned is None:
        return
    targets = [_clean(polarity_count(D.lab[d])) for d in peers]
    gext = set(G.ext)
    rest = [e for e in G.edges if e != f]
    e_new = max(G.att) + 1
    seen: set[tuple[str, ...]] = set()
    inner_fixed = {h: handle(div)}
    for phi in _node_maps(D, G, pinned):
        boundary = set(phi.values())
        outer = {phi[v] for v in D.ext}
        interior = boundary - outer
        if interior & gext:
            continue
        comps = _components(G, rest, boundary)
        touched = {v for c in comps for v in c.internal} | set(G.att[f])
        free = [v for v in G.nodes if v not in boundary and v not in touched]
        slot_nodes = [set(phi[v] for v in D.att[d]) for d in peers]
        options = []
        for c in comps:
            opts: list[int] = []
            if not (c.boundary & interior):
                opts.append(-1)
            if not (c.internal & gext):
                opts.extend(i for i, s in enumerate(slot_nodes) if c.boundary <= s)
            if not opts:
                break
            options.append(opts)
        else:
            counts = [_component_count(G, c) for c in comps]
            free_opts = [[-1] if v in gext else [-1, *range(len(peers))] for v in free]
            for assign in cartesian(*options):
                totals = [Counter() for _ in peers]
                for i, cnt in zip(assign, counts):
                    if i >= 0:
                        totals[i].update(cnt)
                if any(_clean(t) != want for t, want in zip(totals, targets)):
                    continue
                for free_assign in cartesian(*free_opts):
                    parts = []
                    for i, d in enumerate(peers):
                        ext = tuple(phi[v] for v in D.att[d])
                        mine = [c for c, a in zip(comps, assign) if a == i]
                        extra = [v for v, a in zip(free, free_assign) if a == i]
                        parts.append(_subgraph(G, ext, mine, extra))
                    removed = set(interior)
                    for c, a in zip(comps, assign):
                        if a >= 0:
                            removed |= c.internal
                    removed |= {v for v, a in zip(free, free_assign) if a >= 0}
                    ctx_edges = [e for c, a in zip(comps, assign) if a < 0 for e in c.edges]
                    att = {e: G.att[e] for e in ctx_edges}
                    lab: dict[int, Formula] = {e: G.lab[e] for e in ctx_edges}
                    att[e_new] = tuple(phi[v] for v in D.ext)
                    lab[e_new] = div.numerator
                    ctx = Hypergraph(tuple(v for v in G.nodes if v not in removed), att, lab,
                                     G.ext, check=False)
                    sig = (ctx.key, *(p.key for p in parts))
                    if sig in seen:
                        continue
                    inner = replace_many(D, {**inner_fixed, **dict(zip(peers, parts))})
                    if replace(ctx, e_new, inner) != G:
                        continue
                    seen.add(sig)
                    yield ctx, e_new, parts


def backward_steps(seq: Sequent, eager: bool = False) -> Iterator[tuple[str, list[Sequent], dict]]:
    """One-step backward rule applications.

    With ``eager`` the invertible rules (divR, xL) are applied alone when
    available, which preserves completeness and prunes the search space.
    """
    G, A = seq.antecedent, seq.succedent
    if G == handle(A):
        yield AX, [], {}
        if eager:
            return
    if isinstance(A, Division):
        yield DIV_R, [Sequent(fill_hole(A.denominator, A.hole_edge, G), A.numerator)], {}
        if eager:
            return
    prods = [e for e in G.edges if isinstance(G.lab[e], Product)]
    for e in prods:
        yield PROD_L, [Sequent(replace(G, e, G.lab[e].graph), A)], {"edge": e}
        if eager:
            return
    if isinstance(A, Product):
        M = A.graph
        for parts in decompose_product(G, M):
            yield PROD_R, [Sequent(H, M.lab[m]) for H, m in zip(parts, M.edges)], {}
    for f in G.edges:
        if not isinstance(G.lab[f], Division):
            continue
        div: Division = G.lab[f]
        for ctx, e_new, parts in decompose_division(G, f):
            prem = [Sequent(ctx, A)]
            prem += [Sequent(H, div.denominator.lab[d]) for H, d in zip(parts, div.peers)]
            yield DIV_L, prem, {"edge": f, "context_edge": e_new}


def backward_expansions(seq: Sequent) -> list[tuple[str, list[Sequent], dict]]:
    return list(backward_steps(seq, eager=False))
