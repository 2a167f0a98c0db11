"""Formulas and sequents of the hypergraph Lambek calculus."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator

from ..hypergraph import Hypergraph, HypergraphError, handle, replace


class FormulaError(ValueError):
    pass


class Formula:
    """Base class.  Equality is structural, bodies compared up to isomorphism."""

    rank: int

    @property
    def key(self) -> str:
        raise NotImplementedError

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Formula):
            return NotImplemented
        return self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __str__(self) -> str:
        from .syntax import format_formula
        return format_formula(self)


@dataclass(frozen=True, eq=False)
class Primitive(Formula):
    name: str
    rank: int

    @property
    def key(self) -> str:
        return f"{self.name}:{self.rank}"

    def __repr__(self) -> str:
        return f"Primitive({self.name!r}, {self.rank})"


@dataclass(frozen=True, eq=False)
class Hole:
    """The label ``$n``; never a formula."""

    rank: int

    @property
    def key(self) -> str:
        return f"${self.rank}"

    def __str__(self) -> str:
        return f"${self.rank}"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Hole) and other.rank == self.rank

    def __hash__(self) -> int:
        return hash(("$", self.rank))


def _check_formula_labels(G: Hypergraph, allow_hole: bool) -> int | None:
    hole = None
    for e in G.edges:
        lab = G.lab[e]
        if isinstance(lab, Hole):
            if not allow_hole or hole is not None:
                raise FormulaError("hole label misplaced")
            hole = e
        elif not isinstance(lab, Formula):
            raise FormulaError(f"edge {e} label {lab!r} is not a formula")
    return hole


@dataclass(frozen=True, eq=False)
class Product(Formula):
    graph: Hypergraph

    def __post_init__(self) -> None:
        _check_formula_labels(self.graph, allow_hole=False)

    @property
    def rank(self) -> int:  # type: ignore[override]
        return self.graph.rank

    @cached_property
    def key(self) -> str:  # type: ignore[override]
        return f"x({self.graph.key})"

    def __repr__(self) -> str:
        return f"Product({self.graph!r})"


@dataclass(frozen=True, eq=False)
class Division(Formula):
    numerator: Formula
    denominator: Hypergraph

    def __post_init__(self) -> None:
        hole = _check_formula_labels(self.denominator, allow_hole=True)
        if hole is None:
            raise FormulaError("division denominator needs exactly one hole edge")
        if self.numerator.rank != self.denominator.rank:
            raise FormulaError(
                f"numerator rank {self.numerator.rank} != denominator rank {self.denominator.rank}")
        object.__setattr__(self, "_hole", hole)

    @property
    def hole_edge(self) -> int:
        return self._hole  # type: ignore[attr-defined]

    @property
    def rank(self) -> int:  # type: ignore[override]
        return self.denominator.edge_rank(self.hole_edge)

    @property
    def peers(self) -> list[int]:
        """Non-hole edges of the denominator, in id order."""
        return [e for e in self.denominator.edges if e != self.hole_edge]

    @cached_property
    def key(self) -> str:  # type: ignore[override]
        return f"div({self.numerator.key},{self.denominator.key})"

    def __repr__(self) -> str:
        return f"Division({self.numerator!r}, {self.denominator!r})"


def prim(name: str, rank: int = 1) -> Primitive:
    return Primitive(name, rank)


def hole_handle(rank: int) -> Hypergraph:
    return handle(Hole(rank))


# ---------------------------------------------------------------------------
# measures

def size(A: Formula) -> int:
    if isinstance(A, Primitive):
        return 1
    if isinstance(A, Product):
        return 1 + sum(size(l) for l in A.graph.labels())
    if isinstance(A, Division):
        return 1 + size(A.numerator) + sum(size(A.denominator.lab[e]) for e in A.peers)
    raise TypeError(A)


def graph_size(H: Hypergraph) -> int:
    return sum(size(l) for l in H.labels())


_count_cache: dict[str, Counter] = {}


def polarity_count(A: Formula) -> Counter:
    """Signed primitive count; invariant ``count(H) == count(A)`` for derivable ``H -> A``."""
    k = A.key
    hit = _count_cache.get(k)
    if hit is not None:
        return hit
    if isinstance(A, Primitive):
        c = Counter({A.key: 1})
    elif isinstance(A, Product):
        c = Counter()
        for l in A.graph.labels():
            c.update(polarity_count(l))
    else:
        c = Counter(polarity_count(A.numerator))
        for e in A.peers:
            c.subtract(polarity_count(A.denominator.lab[e]))
    c = Counter({p: n for p, n in c.items() if n})
    _count_cache[k] = c
    return c


def graph_count(H: Hypergraph) -> Counter:
    c: Counter = Counter()
    for l in H.labels():
        c.update(polarity_count(l))
    return Counter({p: n for p, n in c.items() if n})


# ---------------------------------------------------------------------------
# auxiliary notions

def subformulas(A: Formula) -> set[Formula]:
    out = {A}
    if isinstance(A, Product):
        for l in A.graph.labels():
            out |= subformulas(l)
    elif isinstance(A, Division):
        out |= subformulas(A.numerator)
        for e in A.peers:
            out |= subformulas(A.denominator.lab[e])
    return out


def head(A: Formula) -> set[Primitive]:
    if isinstance(A, Primitive):
        return {A}
    if isinstance(A, Division):
        return head(A.numerator)
    if isinstance(A, Product):
        out: set[Primitive] = set()
        for l in A.graph.labels():
            out |= head(l)
        return out
    raise TypeError(A)


def is_skeleton_free(A: Formula) -> bool:
    return not any(isinstance(B, Product) and len(B.graph) == 0 for B in subformulas(A))


def lemma1_applies(H: Hypergraph, p: Primitive) -> bool:
    """Side conditions under which a derivable ``H -> p`` forces ``H = p•``."""
    for A in H.labels():
        if not is_skeleton_free(A):
            return False
        for B in subformulas(A):
            if head(B) == {p} and B != p:
                return False
    return True


def lemma1_conclusion_check(H: Hypergraph, p: Primitive) -> bool | None:
    """None when the side conditions fail, else whether ``H`` is the handle of ``p``."""
    if not lemma1_applies(H, p):
        return None
    return H == handle(p)


# ---------------------------------------------------------------------------
# sequents

@dataclass(frozen=True, eq=False)
class Sequent:
    antecedent: Hypergraph
    succedent: Formula

    def __post_init__(self) -> None:
        if self.antecedent.rank != self.succedent.rank:
            raise FormulaError(
                f"antecedent rank {self.antecedent.rank} != succedent rank {self.succedent.rank}")
        _check_formula_labels(self.antecedent, allow_hole=False)

    @cached_property
    def key(self) -> str:
        return f"{self.antecedent.key}=>{self.succedent.key}"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Sequent) and other.key == self.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __str__(self) -> str:
        from .syntax import format_graph
        return f"{format_graph(self.antecedent)} -> {self.succedent}"


def fill_hole(D: Hypergraph, hole: int, F: Hypergraph) -> Hypergraph:
    """``D[e$/F]``."""
    try:
        return replace(D, hole, F)
    except HypergraphError as exc:
        raise FormulaError(str(exc)) from exc


def iter_formula_edges(H: Hypergraph, kind: type) -> Iterator[int]:
    return (e for e in H.edges if isinstance(H.lab[e], kind))


# ---------------------------------------------------------------------------
# classical Lambek calculus

@dataclass(frozen=True)
class LCAtom:
    name: str


@dataclass(frozen=True)
class LCProd:
    left: "LCFormula"
    right: "LCFormula"


@dataclass(frozen=True)
class LCOver:
    """``A / B``"""
    num: "LCFormula"
    den: "LCFormula"


@dataclass(frozen=True)
class LCUnder:
    """``B \\ A``"""
    den: "LCFormula"
    num: "LCFormula"


LCFormula = LCAtom | LCProd | LCOver | LCUnder


def tr_classic(A: LCFormula) -> Formula:
    from ..hypergraph import string_graph
    if isinstance(A, LCAtom):
        return Primitive(A.name, 2)
    if isinstance(A, LCProd):
        return Product(string_graph([tr_classic(A.left), tr_classic(A.right)]))
    if isinstance(A, LCOver):
        return Division(tr_classic(A.num), string_graph([Hole(2), tr_classic(A.den)]))
    if isinstance(A, LCUnder):
        return Division(tr_classic(A.num), string_graph([tr_classic(A.den), Hole(2)]))
    raise TypeError(A)


def tr_antecedent(formulas: list[LCFormula]) -> Hypergraph:
    from ..hypergraph import string_graph
    return string_graph([tr_classic(A) for A in formulas])
