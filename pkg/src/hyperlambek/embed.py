"""Translation of NL♦ sequents into HL sequents, and its inverse.

Signatures with no associative mode, or with a commutative associative
mode, translate into rank-1 hypergraphs.  A single non-commutative
associative mode needs the rank-2 ("barred") gadgets, where the
associative mode becomes a series composition marked by a unary edge.

Gadget node and edge numbering (slot edges are 1 and 2, the structural edge is 0):

    R[i](A,B)   ext (0);   i over (0,1,2), A over (1), B over (2)
    K[c](A,B)   ext (0);   c over (0,1),   A, B over (1)
    U[j](A)     ext (0);   j over (0,1),   A over (1)
    KO(A,B)     ext (1);   O over (0,1),   A, B over (1)
    Rb[i](A,B)  ext (0,1); i over (0..5),  A over (2,3), B over (4,5)
    Kb[c](A,B)  ext (0,1); c over (0..3),  A, B over (2,3)
    Ub[j](A)    ext (0,1); j over (0..3),  A over (2,3)
    RbO(A,B)    ext (0,2); O over (1),     A over (0,1), B over (1,2)
"""
from __future__ import annotations

from itertools import combinations
from typing import Any, Iterator

from .hypergraph import Hypergraph, RankedLabel, handle, isomorphic, replace_many
from .hl.formulas import Division, Formula, Hole, Primitive, Product, Sequent
from .nlm.structure import canon
from .nlm.terms import (Angle, Atom, Box, Database, Diamond, Leaf, NLMSequent, Over, Pair, Prod,
                        Signature, SignatureError, Under, UnsupportedSignature, formula_indices)

MODE_PREFIX = "mode:"
MOD_PREFIX = "mod:"


class EmbeddingError(ValueError):
    pass


# ---------------------------------------------------------------------------
# gadgets

def _g(n: int, att: dict[int, tuple[int, ...]], lab: dict[int, Any], ext: tuple[int, ...]) -> Hypergraph:
    return Hypergraph(tuple(range(n)), att, lab, ext)


def mode_label(i: str, rank: int) -> Primitive:
    return Primitive(MODE_PREFIX + i, rank)


def modality_label(j: str, rank: int) -> Primitive:
    return Primitive(MOD_PREFIX + j, rank)


def gadget_R(i: str, A: Any, B: Any) -> Hypergraph:
    return _g(3, {0: (0, 1, 2), 1: (1,), 2: (2,)}, {0: mode_label(i, 3), 1: A, 2: B}, (0,))


def gadget_K(c: str, A: Any, B: Any) -> Hypergraph:
    return _g(2, {0: (0, 1), 1: (1,), 2: (1,)}, {0: mode_label(c, 2), 1: A, 2: B}, (0,))


def gadget_U(j: str, A: Any) -> Hypergraph:
    return _g(2, {0: (0, 1), 1: (1,)}, {0: modality_label(j, 2), 1: A}, (0,))


def gadget_KO(A: Any, B: Any, o: str = "O") -> Hypergraph:
    return _g(2, {0: (0, 1), 1: (1,), 2: (1,)}, {0: mode_label(o, 2), 1: A, 2: B}, (1,))


def gadget_Rb(i: str, A: Any, B: Any) -> Hypergraph:
    return _g(6, {0: (0, 1, 2, 3, 4, 5), 1: (2, 3), 2: (4, 5)},
              {0: mode_label(i, 6), 1: A, 2: B}, (0, 1))


def gadget_Kb(c: str, A: Any, B: Any) -> Hypergraph:
    return _g(4, {0: (0, 1, 2, 3), 1: (2, 3), 2: (2, 3)}, {0: mode_label(c, 4), 1: A, 2: B}, (0, 1))


def gadget_Ub(j: str, A: Any) -> Hypergraph:
    return _g(4, {0: (0, 1, 2, 3), 1: (2, 3)}, {0: modality_label(j, 4), 1: A}, (0, 1))


def gadget_RbO(A: Any, B: Any, o: str = "O") -> Hypergraph:
    return _g(3, {0: (1,), 1: (0, 1), 2: (1, 2)}, {0: mode_label(o, 1), 1: A, 2: B}, (0, 2))


GADGETS = {
    "R": gadget_R, "K": gadget_K, "U": gadget_U, "KO": gadget_KO,
    "Rb": gadget_Rb, "Kb": gadget_Kb, "Ub": gadget_Ub, "RbO": gadget_RbO,
}


# ---------------------------------------------------------------------------
# translations

def _barred(sig: Signature) -> bool:
    if len(sig.associative) > 1 and not sig.allow_multi_assoc:
        raise UnsupportedSignature("no translation for more than one associative mode")
    if len(sig.associative) > 1:
        return any(not sig.is_comm(o) for o in sig.associative)
    return sig.case == 4


def _kind(i: str, sig: Signature) -> str:
    if sig.is_assoc(i):
        return "O"
    return "K" if sig.is_comm(i) else "R"


def _pair_gadget(i: str, A: Any, B: Any, sig: Signature, barred: bool) -> Hypergraph:
    kind = _kind(i, sig)
    if barred:
        if kind == "O":
            if sig.is_comm(i):
                raise EmbeddingError(f"commutative associative mode {i} cannot be mixed with rank 2")
            return gadget_RbO(A, B, i)
        return gadget_Kb(i, A, B) if kind == "K" else gadget_Rb(i, A, B)
    if kind == "O":
        if not sig.is_comm(i):
            raise EmbeddingError(f"non-commutative associative mode {i} needs rank-2 gadgets")
        return gadget_KO(A, B, i)
    return gadget_K(i, A, B) if kind == "K" else gadget_R(i, A, B)


def _angle_gadget(j: str, A: Any, barred: bool) -> Hypergraph:
    return gadget_Ub(j, A) if barred else gadget_U(j, A)


def _check_atom(name: str) -> None:
    if name.startswith((MODE_PREFIX, MOD_PREFIX)):
        raise EmbeddingError(f"atom name {name!r} collides with a structural label")


def _mu(A: Any, sig: Signature, barred: bool) -> Formula:
    r = 2 if barred else 1
    if isinstance(A, Atom):
        _check_atom(A.name)
        return Primitive(A.name, r)
    if isinstance(A, Prod):
        return Product(_pair_gadget(A.mode, _mu(A.left, sig, barred), _mu(A.right, sig, barred),
                                    sig, barred))
    if isinstance(A, Diamond):
        return Product(_angle_gadget(A.mod, _mu(A.body, sig, barred), barred))
    if isinstance(A, Box):
        return Division(_mu(A.body, sig, barred), _angle_gadget(A.mod, Hole(r), barred))
    if isinstance(A, Under):
        den = _mu(A.den, sig, barred)
        return Division(_mu(A.num, sig, barred), _pair_gadget(A.mode, den, Hole(r), sig, barred))
    if isinstance(A, Over):
        den = _mu(A.den, sig, barred)
        return Division(_mu(A.num, sig, barred), _pair_gadget(A.mode, Hole(r), den, sig, barred))
    raise TypeError(A)


def mu(A: Any, sig: Signature) -> Formula:
    """Formula translation; rank 1 for Cases 1-3 and rank 2 for Case 4."""
    return _mu(A, sig, _barred(sig))


def mu_bar(A: Any, sig: Signature) -> Formula:
    return _mu(A, sig, True)


def _htree(P: Database, sig: Signature, barred: bool) -> Hypergraph:
    if isinstance(P, Leaf):
        return handle(_mu(P.formula, sig, barred))
    r = 2 if barred else 1
    slot = RankedLabel("slot", r)
    if isinstance(P, Angle):
        G = _angle_gadget(P.mod, slot, barred)
        return replace_many(G, {1: _htree(P.body, sig, barred)})
    G = _pair_gadget(P.mode, slot, slot, sig, barred)
    return replace_many(G, {1: _htree(P.left, sig, barred), 2: _htree(P.right, sig, barred)})


def htree(P: Database, sig: Signature) -> Hypergraph:
    return _htree(P, sig, _barred(sig))


def htree_bar(P: Database, sig: Signature) -> Hypergraph:
    return _htree(P, sig, True)


def translate_sequent(s: NLMSequent, sig: Signature) -> Sequent:
    barred = _barred(sig)
    return Sequent(_htree(s.antecedent, sig, barred), _mu(s.succedent, sig, barred))


# ---------------------------------------------------------------------------
# recognition

def _structural(label: Any) -> tuple[str, str] | None:
    if isinstance(label, Primitive):
        for prefix in (MODE_PREFIX, MOD_PREFIX):
            if label.name.startswith(prefix):
                return prefix, label.name[len(prefix):]
    return None


def _unmu_candidates(X: Formula, sig: Signature, barred: bool) -> Iterator[Any]:
    r = 2 if barred else 1
    if isinstance(X, Primitive):
        if X.rank == r and _structural(X) is None:
            yield Atom(X.name)
        return
    if isinstance(X, Product):
        M = X.graph
        info = [(e, _structural(M.lab[e])) for e in M.edges]
        marks = [(e, s) for e, s in info if s is not None]
        slots = [e for e, s in info if s is None]
        if len(marks) != 1:
            return
        prefix, name = marks[0][1]
        if prefix == MOD_PREFIX and len(slots) == 1:
            for T in _unmu_candidates(M.lab[slots[0]], sig, barred):
                yield Diamond(name, T)
        elif prefix == MODE_PREFIX and len(slots) == 2:
            a, b = slots
            for x, y in ((a, b), (b, a)):
                for T1 in _unmu_candidates(M.lab[x], sig, barred):
                    for T2 in _unmu_candidates(M.lab[y], sig, barred):
                        yield Prod(name, T1, T2)
        return
    if isinstance(X, Division):
        D = X.denominator
        marks = [_structural(D.lab[e]) for e in X.peers]
        marks = [m for m in marks if m is not None]
        others = [e for e in X.peers if _structural(D.lab[e]) is None]
        if len(marks) != 1:
            return
        prefix, name = marks[0]
        nums = list(_unmu_candidates(X.numerator, sig, barred))
        if prefix == MOD_PREFIX and not others:
            for N in nums:
                yield Box(name, N)
        elif prefix == MODE_PREFIX and len(others) == 1:
            for B in _unmu_candidates(D.lab[others[0]], sig, barred):
                for N in nums:
                    yield Over(name, N, B)
                    yield Under(name, B, N)


def unmu(X: Formula, sig: Signature) -> Any | None:
    """An NL♦ formula ``T`` with ``mu(T) == X``, or None.

    Formulas with the same image are told apart only up to
    ``image_normal``, which is the form returned.
    """
    try:
        barred = _barred(sig)
    except SignatureError:
        return None
    for T in _unmu_candidates(X, sig, barred):
        try:
            if _index_ok(T, sig) and _mu(T, sig, barred) == X:
                return image_normal(T, sig)
        except (EmbeddingError, ValueError):
            continue
    return None


def image_normal(A: Any, sig: Signature) -> Any:
    """Representative of the formulas sharing ``A``'s image under ``mu``.

    For commutative ``c``, ``B \\c A`` becomes ``A /c B`` and the factors
    of ``A *c B`` are put in text order.
    """
    if isinstance(A, Atom):
        return A
    if isinstance(A, Diamond):
        return Diamond(A.mod, image_normal(A.body, sig))
    if isinstance(A, Box):
        return Box(A.mod, image_normal(A.body, sig))
    if isinstance(A, Prod):
        l, r = image_normal(A.left, sig), image_normal(A.right, sig)
        if sig.is_comm(A.mode) and str(r) < str(l):
            l, r = r, l
        return Prod(A.mode, l, r)
    if isinstance(A, Under):
        num, den = image_normal(A.num, sig), image_normal(A.den, sig)
        return Over(A.mode, num, den) if sig.is_comm(A.mode) else Under(A.mode, den, num)
    return Over(A.mode, image_normal(A.num, sig), image_normal(A.den, sig))


def image_normal_db(P: Database, sig: Signature) -> Database:
    if isinstance(P, Leaf):
        return Leaf(image_normal(P.formula, sig))
    if isinstance(P, Angle):
        return Angle(P.mod, image_normal_db(P.body, sig))
    return Pair(P.mode, image_normal_db(P.left, sig), image_normal_db(P.right, sig))


def _index_ok(T: Any, sig: Signature) -> bool:
    modes, mods = formula_indices(T)
    return modes <= sig.modes and mods <= sig.modalities


class _Parse:
    """Reads a database off a candidate hypertree; every edge is used once."""

    def __init__(self, G: Hypergraph, sig: Signature, barred: bool) -> None:
        self.G, self.sig, self.barred = G, sig, barred
        self.out: dict[int, list[int]] = {v: [] for v in G.nodes}
        self.marks: dict[int, list[int]] = {v: [] for v in G.nodes}
        self.leaf_terms: dict[int, Any] = {}
        for e in G.edges:
            lab, att = G.lab[e], G.att[e]
            s = _structural(lab)
            if s is not None and s[0] == MODE_PREFIX and sig.is_assoc(s[1]):
                # associativity marker: attached to the bag node (rank 1 chain midpoint / lower node)
                self.marks[att[-1]].append(e)
            elif att:
                self.out[att[0]].append(e)

    def leaf(self, e: int) -> Any | None:
        if e not in self.leaf_terms:
            self.leaf_terms[e] = unmu(self.G.lab[e], self.sig)
        return self.leaf_terms[e]

    def item(self, e: int, used: frozenset) -> Iterator[tuple[Database, frozenset]]:
        if e in used:
            return
        used = used | {e}
        G, lab, att = self.G, self.G.lab[e], self.G.att[e]
        s = _structural(lab)
        if s is None:
            T = self.leaf(e) if isinstance(lab, Formula) else None
            if T is not None:
                yield Leaf(T), used
            return
        prefix, name = s
        if prefix == MOD_PREFIX:
            if len(att) != (4 if self.barred else 2):
                return
            span = (att[2], att[3]) if self.barred else (att[1],)
            for body, u in self.bag(span, used):
                yield Angle(name, body), u
            return
        if self.sig.is_comm(name):
            if self.barred and len(att) == 4:
                for (l, r), u in self.split((att[2], att[3]), used):
                    yield Pair(name, l, r), u
            elif not self.barred and len(att) == 2:
                for (l, r), u in self.split((att[1],), used):
                    yield Pair(name, l, r), u
            return
        if self.barred and len(att) == 6:
            spans = ((att[2], att[3]), (att[4], att[5]))
        elif not self.barred and len(att) == 3:
            spans = ((att[1],), (att[2],))
        else:
            return
        for l, u1 in self.bag(spans[0], used):
            for r, u2 in self.bag(spans[1], u1):
                yield Pair(name, l, r), u2

    def _assoc(self) -> str | None:
        return self.sig.assoc_mode if len(self.sig.associative) == 1 else None

    def chains(self, span: tuple[int, ...], used: frozenset, first: list[int]
               ) -> Iterator[tuple[list[Database], frozenset]]:
        """Series chains (rank 2) starting with the edges ``first`` and ending at span[1]."""
        if not first:
            yield [], used
            return
        s, t = span
        e0, rest = first[0], first[1:]
        for items, u in self._chain(e0, t, used):
            for more, u2 in self.chains(span, u, rest):
                yield [items] + more, u2

    def _chain(self, e: int, t: int, used: frozenset) -> Iterator[tuple[Database, frozenset]]:
        o = self._assoc()
        for x, u in self.item(e, used):
            end = self.G.att[e][1]
            if end == t:
                yield x, u
                continue
            ms = [m for m in self.marks[end] if m not in u]
            nxt = [f for f in self.out[end] if f not in u]
            if o is None or len(ms) != 1 or len(nxt) != 1:
                continue
            for y, u2 in self._chain(nxt[0], t, u | {ms[0]}):
                yield Pair(o, x, y), u2

    def bag(self, span: tuple[int, ...], used: frozenset) -> Iterator[tuple[Database, frozenset]]:
        if self.barred:
            outs = [f for f in self.out[span[0]] if f not in used]
            if len(outs) != 1:
                return
            yield from self._chain(outs[0], span[1], used)
            return
        (v,) = span
        outs = [f for f in self.out[v] if f not in used]
        ms = [m for m in self.marks[v] if m not in used]
        if len(ms) != len(outs) - 1 or not outs:
            return
        yield from self._bag_items(outs, used | set(ms))

    def _bag_items(self, outs: list[int], used: frozenset) -> Iterator[tuple[Database, frozenset]]:
        if len(outs) == 1:
            yield from self.item(outs[0], used)
            return
        o = self._assoc()
        if o is None:
            return
        for x, u in self.item(outs[0], used):
            for y, u2 in self._bag_items(outs[1:], u):
                yield Pair(o, x, y), u2

    def split(self, span: tuple[int, ...], used: frozenset
              ) -> Iterator[tuple[tuple[Database, Database], frozenset]]:
        """The two parallel components of a commutative bracket."""
        if self.barred:
            outs = [f for f in self.out[span[0]] if f not in used]
            if len(outs) != 2:
                return
            for parts, u in self.chains(span, used, outs):
                yield (parts[0], parts[1]), u
            return
        (v,) = span
        outs = [f for f in self.out[v] if f not in used]
        ms = [m for m in self.marks[v] if m not in used]
        if len(outs) < 2 or len(ms) != len(outs) - 2:
            return
        first, rest = outs[0], outs[1:]
        seen = set()
        for r in range(0, len(rest)):
            for group in combinations(rest, r):
                left = [first, *group]
                right = [f for f in rest if f not in group]
                if not right:
                    continue
                for x, u in self._bag_items(left, used | set(ms)):
                    for y, u2 in self._bag_items(right, u):
                        k = (str(x), str(y))
                        if k not in seen:
                            seen.add(k)
                            yield (x, y), u2


def recognize_all(G: Hypergraph, X: Formula, sig: Signature) -> list[tuple[Database, Any]]:
    """All structural classes ``Π`` (canonical members) with ``htree(Π) ≅ G``, paired with ``T``."""
    try:
        barred = _barred(sig)
    except SignatureError:
        return []
    T = unmu(X, sig)
    if T is None or G.rank != (2 if barred else 1):
        return []
    p = _Parse(G, sig, barred)
    span = tuple(G.ext)
    found: dict[Database, None] = {}
    for P, used in p.bag(span, frozenset()):
        if len(used) != len(G.edges):
            continue
        c = canon(P, sig)
        if c in found:
            continue
        try:
            if isomorphic(_htree(c, sig, barred), G):
                found[c] = None
        except (EmbeddingError, ValueError):
            continue
    return [(P, T) for P in found]


def recognize(G: Hypergraph, X: Formula, sig: Signature) -> tuple[Database, Any] | None:
    out = recognize_all(G, X, sig)
    return out[0] if out else None


def recognize_sequent(s: Sequent, sig: Signature) -> tuple[Database, Any] | None:
    return recognize(s.antecedent, s.succedent, sig)


# ---------------------------------------------------------------------------
# collisions

def demonstrate_A2_collision(o1: str = "O1", o2: str = "O2",
                             atoms: tuple[str, str, str] = ("p", "q", "r")
                             ) -> tuple[Database, Database, bool, bool]:
    """Two non-commutative associative modes interfere in the rank-2 translation.

    Returns the two databases, whether their translations are isomorphic
    with both modes associative, and whether they are isomorphic when only
    ``o1`` is associative.
    """
    p, q, r = (Leaf(Atom(a)) for a in atoms)
    P1 = Pair(o2, Pair(o1, p, q), r)
    P2 = Pair(o1, p, Pair(o2, q, r))
    both = Signature(frozenset({o1, o2}), associative=frozenset({o1, o2}), allow_multi_assoc=True)
    one = Signature(frozenset({o1, o2}), associative=frozenset({o1}))
    iso_both = isomorphic(htree_bar(P1, both), htree_bar(P2, both))
    iso_one = isomorphic(htree_bar(P1, one), htree_bar(P2, one))
    return P1, P2, iso_both, iso_one


def commutative_bag_collision(o: str = "O", c: str = "c") -> tuple[Database, Database, Signature]:
    """With a commutative associative mode next to another commutative mode,
    ``((p,q)^O, r)^c`` and ``(p, (q,r)^O)^c`` share a rank-1 translation.

    Both databases lie in different structural classes.
    """
    sig = Signature(frozenset({o, c}), commutative=frozenset({o, c}), associative=frozenset({o}))
    p, q, r = (Leaf(Atom(a)) for a in "pqr")
    return Pair(c, Pair(o, p, q), r), Pair(c, p, Pair(o, q, r)), sig


__all__ = [
    "EmbeddingError", "GADGETS", "mu", "mu_bar", "htree", "htree_bar", "translate_sequent",
    "unmu", "image_normal", "image_normal_db", "recognize", "recognize_all", "recognize_sequent", "demonstrate_A2_collision",
    "commutative_bag_collision", "mode_label", "modality_label",
] + [f"gadget_{k}" for k in GADGETS]
