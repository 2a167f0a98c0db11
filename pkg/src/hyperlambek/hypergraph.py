"""Ranked hypergraphs, hyperedge replacement and isomorphism.

A hypergraph is an immutable value: a tuple of node ids, a mapping from
edge ids to attachment strings, a mapping from edge ids to labels and a
string of external nodes.  Labels are arbitrary hashable objects exposing
a ``rank`` attribute; their identity for isomorphism purposes is given by
:func:`label_key`.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from itertools import count
from typing import Any, Callable, Hashable, Iterable, Mapping, Sequence


class HypergraphError(ValueError):
    """Raised when a hypergraph operation's contract is violated."""


class EdgeNotFound(HypergraphError, KeyError):
    pass


@dataclass(frozen=True)
class RankedLabel:
    name: str
    rank: int

    @property
    def key(self) -> str:
        return f"{self.name}:{self.rank}"

    def __str__(self) -> str:
        return self.name


def label_key(label: Any) -> str:
    key = getattr(label, "key", None)
    if key is None:
        return repr(label)
    return key


def rank_of(label: Any) -> int:
    return label.rank


@dataclass(frozen=True, eq=False)
class Hypergraph:
    """``<V, E, att, lab, ext>``; equality and hashing are up to isomorphism."""

    nodes: tuple[int, ...]
    att: Mapping[int, tuple[int, ...]]
    lab: Mapping[int, Any]
    ext: tuple[int, ...] = ()
    check: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "ext", tuple(self.ext))
        object.__setattr__(self, "att", {e: tuple(a) for e, a in self.att.items()})
        object.__setattr__(self, "lab", dict(self.lab))
        if not self.check:
            return
        if set(self.att) != set(self.lab):
            raise HypergraphError("att and lab must have the same edge set")
        node_set = set(self.nodes)
        if len(node_set) != len(self.nodes):
            raise HypergraphError("duplicate node ids")
        for e, a in self.att.items():
            if len(a) != rank_of(self.lab[e]):
                raise HypergraphError(
                    f"edge {e}: label {self.lab[e]} has rank {rank_of(self.lab[e])} "
                    f"but {len(a)} attachment nodes")
            if not node_set.issuperset(a):
                raise HypergraphError(f"edge {e} attached to unknown node")
        if not node_set.issuperset(self.ext):
            raise HypergraphError("external node not in node set")

    # -- basic accessors -------------------------------------------------

    @property
    def edges(self) -> tuple[int, ...]:
        return tuple(sorted(self.att))

    @property
    def rank(self) -> int:
        return len(self.ext)

    def edge_rank(self, e: int) -> int:
        return len(self.att[e])

    def labels(self) -> list[Any]:
        return [self.lab[e] for e in self.edges]

    def incident(self, v: int) -> list[int]:
        return [e for e in self.edges if v in self.att[e]]

    def __len__(self) -> int:
        return len(self.att)

    # -- isomorphism -----------------------------------------------------

    @cached_property
    def _canon(self) -> tuple[str, list[int], list[int]]:
        return _canonical_form(self)

    @property
    def key(self) -> str:
        """Canonical string: equal for two graphs iff they are isomorphic."""
        return self._canon[0]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        edges = ", ".join(f"{e}:{self.lab[e]}{list(self.att[e])}" for e in self.edges)
        return f"Hypergraph(nodes={list(self.nodes)}, edges=[{edges}], ext={list(self.ext)})"


# ---------------------------------------------------------------------------
# canonical labeling

def _compress(signatures: dict[int, Any]) -> dict[int, int]:
    ordered = sorted(set(signatures.values()))
    index = {s: i for i, s in enumerate(ordered)}
    return {k: index[s] for k, s in signatures.items()}


def _refine(G: Hypergraph, ncol: dict[int, int], ecol0: dict[int, int],
            incidences: dict[int, list[tuple[int, int]]]) -> tuple[dict[int, int], dict[int, int]]:
    ecol = ecol0
    while True:
        esig = {e: (ecol0[e], tuple(ncol[v] for v in G.att[e])) for e in G.att}
        ecol = _compress(esig)
        nsig = {v: (ncol[v], tuple(sorted((ecol[e], i) for e, i in incidences[v])))
                for v in ncol}
        new = _compress(nsig)
        if len(set(new.values())) == len(set(ncol.values())):
            return new, ecol
        ncol = new


def _canonical_form(G: Hypergraph) -> tuple[str, list[int], list[int]]:
    incidences: dict[int, list[tuple[int, int]]] = {v: [] for v in G.nodes}
    for e, a in G.att.items():
        for i, v in enumerate(a):
            incidences[v].append((e, i))
    ext_pos: dict[int, list[int]] = {}
    for i, v in enumerate(G.ext):
        ext_pos.setdefault(v, []).append(i)
    isolated = [v for v in G.nodes if not incidences[v] and v not in ext_pos]
    live = [v for v in G.nodes if incidences[v] or v in ext_pos]
    ecol0 = _compress({e: label_key(l) for e, l in G.lab.items()})
    ncol = _compress({v: tuple(ext_pos.get(v, ())) for v in live})
    ncol, _ = _refine(G, ncol, ecol0, incidences)

    best: list[Any] = [None, None]

    def encode(colors: dict[int, int]) -> tuple[str, list[int]]:
        order = sorted(colors, key=colors.__getitem__)
        idx = {v: i for i, v in enumerate(order)}
        edges = sorted((label_key(G.lab[e]), tuple(idx[v] for v in G.att[e])) for e in G.att)
        enc = repr((len(order), len(isolated), tuple(idx[v] for v in G.ext), edges))
        return enc, order

    def search(colors: dict[int, int]) -> None:
        cells: dict[int, list[int]] = {}
        for v, c in colors.items():
            cells.setdefault(c, []).append(v)
        target = min((c for c, vs in cells.items() if len(vs) > 1), default=None)
        if target is None:
            enc, order = encode(colors)
            if best[0] is None or enc < best[0]:
                best[0], best[1] = enc, order
            return
        for v in sorted(cells[target]):
            shifted = {u: 2 * c + (0 if u == v else 1) for u, c in colors.items()}
            refined, _ = _refine(G, _compress(shifted), ecol0, incidences)
            search(refined)

    search(ncol)
    key, order = best
    order = list(order) + sorted(isolated)
    idx = {v: i for i, v in enumerate(order)}
    edge_order = sorted(G.att, key=lambda e: (label_key(G.lab[e]), tuple(idx[v] for v in G.att[e])))
    return key, order, edge_order


def canonical_key(G: Hypergraph) -> bytes:
    return G.key.encode()


def isomorphic(G1: Hypergraph, G2: Hypergraph) -> bool:
    return G1.key == G2.key


def isomorphism(G1: Hypergraph, G2: Hypergraph) -> tuple[dict[int, int], dict[int, int]] | None:
    """Witness ``(node_map, edge_map)`` from G1 to G2, or None."""
    if G1.key != G2.key:
        return None
    _, o1, eo1 = G1._canon
    _, o2, eo2 = G2._canon
    node_map = dict(zip(o1, o2))
    # parallel edges with equal labels are interchangeable; zip in canonical order
    return node_map, dict(zip(eo1, eo2))


# ---------------------------------------------------------------------------
# constructions

def handle(a: Any) -> Hypergraph:
    n = rank_of(a)
    nodes = tuple(range(n))
    return Hypergraph(nodes, {0: nodes}, {0: a}, nodes)


def string_graph(word: Sequence[Any]) -> Hypergraph:
    for a in word:
        if rank_of(a) != 2:
            raise HypergraphError(f"string graph label {a} must have rank 2")
    n = len(word)
    att = {i: (i - 1, i) for i in range(1, n + 1)}
    lab = {i: word[i - 1] for i in range(1, n + 1)}
    return Hypergraph(tuple(range(n + 1)), att, lab, (0, n))


def relabel(H: Hypergraph, f: Mapping[int, Any] | Callable[[int], Any]) -> Hypergraph:
    get = f if callable(f) else (lambda e: f.get(e, H.lab[e]))
    lab = {}
    for e in H.att:
        new = get(e)
        if rank_of(new) != len(H.att[e]):
            raise HypergraphError(f"relabeling edge {e} with {new} changes its rank")
        lab[e] = new
    return Hypergraph(H.nodes, H.att, lab, H.ext)


def remove_edge(H: Hypergraph, e: int) -> Hypergraph:
    if e not in H.att:
        raise EdgeNotFound(e)
    att = {k: v for k, v in H.att.items() if k != e}
    lab = {k: v for k, v in H.lab.items() if k != e}
    return Hypergraph(H.nodes, att, lab, H.ext, check=False)


def add_edge(H: Hypergraph, label: Any, att: Sequence[int]) -> tuple[Hypergraph, int]:
    e = max(H.att, default=-1) + 1
    new_att = dict(H.att)
    new_att[e] = tuple(att)
    new_lab = dict(H.lab)
    new_lab[e] = label
    return Hypergraph(H.nodes, new_att, new_lab, H.ext), e


def disjoint_union(graphs: Iterable[Hypergraph]) -> Hypergraph:
    nodes: list[int] = []
    att: dict[int, tuple[int, ...]] = {}
    lab: dict[int, Any] = {}
    ext: list[int] = []
    nid, eid = count(), count()
    for G in graphs:
        nmap = {v: next(nid) for v in G.nodes}
        nodes.extend(nmap.values())
        for e in G.edges:
            k = next(eid)
            att[k] = tuple(nmap[v] for v in G.att[e])
            lab[k] = G.lab[e]
        ext.extend(nmap[v] for v in G.ext)
    return Hypergraph(tuple(nodes), att, lab, tuple(ext))


class _UnionFind:
    def __init__(self) -> None:
        self.parent: dict[Hashable, Hashable] = {}

    def find(self, x: Hashable) -> Hashable:
        self.parent.setdefault(x, x)
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: Hashable, b: Hashable) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # smaller id wins so host nodes keep their ids
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


def replace(G: Hypergraph, e: int, H: Hypergraph) -> Hypergraph:
    """``G[e/H]``: fuse ``att_G(e)(i)`` with ``ext_H(i)`` and drop ``e``."""
    if e not in G.att:
        raise EdgeNotFound(e)
    if len(G.att[e]) != H.rank:
        raise HypergraphError(f"edge {e} has rank {len(G.att[e])}, replacement has rank {H.rank}")
    node_off = max(G.nodes, default=-1) + 1 - min(H.nodes, default=0)
    edge_off = max(G.att, default=-1) + 1 - min(H.att, default=0)
    uf = _UnionFind()
    for a, b in zip(G.att[e], H.ext):
        uf.union(a, b + node_off)
    nodes = sorted({uf.find(v) for v in G.nodes} | {uf.find(v + node_off) for v in H.nodes})
    att = {k: tuple(uf.find(v) for v in a) for k, a in G.att.items() if k != e}
    lab = {k: l for k, l in G.lab.items() if k != e}
    for k, a in H.att.items():
        att[k + edge_off] = tuple(uf.find(v + node_off) for v in a)
        lab[k + edge_off] = H.lab[k]
    return Hypergraph(tuple(nodes), att, lab, tuple(uf.find(v) for v in G.ext), check=False)


def replace_many(G: Hypergraph, assignments: Mapping[int, Hypergraph]) -> Hypergraph:
    """Simultaneous replacement ``G[e1/H1, ..., ek/Hk]``."""
    for e, H in assignments.items():
        if e not in G.att:
            raise EdgeNotFound(e)
        if len(G.att[e]) != H.rank:
            raise HypergraphError(f"edge {e} has rank {len(G.att[e])}, replacement has rank {H.rank}")
    if not assignments:
        return G
    uf = _UnionFind()
    nodes = {("g", -1, v) for v in G.nodes}
    att: dict[tuple, tuple] = {}
    lab: dict[tuple, Any] = {}
    for k, a in G.att.items():
        if k not in assignments:
            att[("g", -1, k)] = tuple(("g", -1, v) for v in a)
            lab[("g", -1, k)] = G.lab[k]
    for e, H in assignments.items():
        nodes |= {("h", e, v) for v in H.nodes}
        for a, b in zip(G.att[e], H.ext):
            uf.union(("g", -1, a), ("h", e, b))
        for k, a in H.att.items():
            att[("h", e, k)] = tuple(("h", e, v) for v in a)
            lab[("h", e, k)] = H.lab[k]
    classes = sorted({uf.find(v) for v in nodes}, key=repr)
    nid = {c: i for i, c in enumerate(classes)}
    eids = sorted(att, key=repr)
    return Hypergraph(
        tuple(range(len(classes))),
        {i: tuple(nid[uf.find(v)] for v in att[k]) for i, k in enumerate(eids)},
        {i: lab[k] for i, k in enumerate(eids)},
        tuple(nid[uf.find(("g", -1, v))] for v in G.ext),
        check=False,
    )


def empty_graph(rank: int = 0) -> Hypergraph:
    return Hypergraph(tuple(range(rank)), {}, {}, tuple(range(rank)))


# ---------------------------------------------------------------------------
# serialization

def to_json(G: Hypergraph, encode_label: Callable[[Any], Any] = str) -> dict:
    return {
        "nodes": list(G.nodes),
        "edges": [{"id": e, "label": encode_label(G.lab[e]), "rank": len(G.att[e]),
                   "att": list(G.att[e])} for e in G.edges],
        "ext": list(G.ext),
    }


def from_json(data: Mapping | str, decode_label: Callable[[Any, int], Any] | None = None) -> Hypergraph:
    if isinstance(data, str):
        data = json.loads(data)
    if decode_label is None:
        decode_label = lambda raw, rank: RankedLabel(str(raw), rank)  # noqa: E731
    att, lab = {}, {}
    for item in data["edges"]:
        e = int(item["id"])
        att[e] = tuple(item["att"])
        rank = int(item.get("rank", len(att[e])))
        lab[e] = decode_label(item["label"], rank)
    return Hypergraph(tuple(data["nodes"]), att, lab, tuple(data.get("ext", ())))


def to_dot(G: Hypergraph, name: str = "G", label_text: Callable[[Any], str] = str,
           arrows_for_rank2: bool = True) -> str:
    """Nodes are circles, hyperedges boxes with numbered tentacles.

    Rank-2 edges are drawn as thick labeled arrows; external nodes carry
    their position ``(i)``.
    """
    ext_labels: dict[int, list[str]] = {}
    for i, v in enumerate(G.ext, 1):
        ext_labels.setdefault(v, []).append(f"({i})")
    lines = [f"digraph {json.dumps(name)} {{", "  rankdir=TB;"]
    for v in G.nodes:
        xl = ",".join(ext_labels.get(v, []))
        lines.append(f'  n{v} [shape=circle, width=0.15, label="", xlabel={json.dumps(xl)}];')
    for e in G.edges:
        text = json.dumps(label_text(G.lab[e]))
        a = G.att[e]
        if arrows_for_rank2 and len(a) == 2:
            lines.append(f"  n{a[0]} -> n{a[1]} [label={text}, penwidth=2.5];")
            continue
        lines.append(f"  e{e} [shape=box, label={text}];")
        for i, v in enumerate(a, 1):
            lines.append(f'  e{e} -> n{v} [arrowhead=none, label="{i}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
