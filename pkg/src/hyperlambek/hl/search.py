"""Bounded backward proof search for HL with a memo table keyed by
canonical sequent keys."""
from __future__ import annotations

import enum
import threading
from dataclasses import dataclass

from ..hypergraph import Hypergraph, isomorphism
from .formulas import Division, Formula, FormulaError, Sequent, fill_hole, graph_count, polarity_count
from .rules import Derivation, backward_steps

DEFAULT_BUDGET = 64


class Status(enum.Enum):
    PROVED = "proved"
    REFUTED = "refuted"
    EXHAUSTED = "exhausted"


@dataclass(frozen=True)
class ProofResult:
    status: Status
    derivation: Derivation | None = None

    @property
    def proved(self) -> bool:
        return self.status is Status.PROVED

    def __bool__(self) -> bool:
        return self.proved


def _same_ids(G: Hypergraph, H: Hypergraph) -> bool:
    return G is H or (G.ext == H.ext and G.att == H.att and G.lab == H.lab)


def _rebase(d: Derivation, seq: Sequent) -> Derivation:
    """Reuse a memoized derivation of an isomorphic sequent for ``seq`` itself.

    Premises stay as they are; only metadata naming edges of the conclusion
    is carried across the isomorphism.
    """
    if d.conclusion is seq or (_same_ids(d.conclusion.antecedent, seq.antecedent)
                               and d.conclusion.succedent == seq.succedent):
        return d if d.conclusion is seq else Derivation(seq, d.rule, d.premises, d.meta)
    meta = dict(d.meta)
    if "edge" in meta:
        witness = isomorphism(d.conclusion.antecedent, seq.antecedent)
        assert witness is not None
        meta["edge"] = witness[1][meta["edge"]]
    return Derivation(seq, d.rule, d.premises, meta)


def _count_eq(seq: Sequent) -> bool:
    lhs = graph_count(seq.antecedent)
    rhs = polarity_count(seq.succedent)
    return lhs == rhs


class Prover:
    """Reusable prover; its memo survives across calls.

    ``eager`` applies the invertible rules (divR, xL) without branching.
    Refutations are only memoized when no branch below ran out of budget.
    """

    def __init__(self, budget: int = DEFAULT_BUDGET, eager: bool = True) -> None:
        self.budget = budget
        self.eager = eager
        self._proved: dict[str, Derivation] = {}
        self._refuted: set[str] = set()
        self._lock = threading.Lock()
        self._exhaustions = 0

    def prove(self, seq: Sequent, budget: int | None = None) -> ProofResult:
        budget = self.budget if budget is None else budget
        before = self._exhaustions
        d = self._search(seq, budget, set())
        if d is not None:
            return ProofResult(Status.PROVED, d)
        if self._exhaustions != before:
            return ProofResult(Status.EXHAUSTED)
        return ProofResult(Status.REFUTED)

    def _search(self, seq: Sequent, depth: int, active: set[str]) -> Derivation | None:
        k = seq.key
        with self._lock:
            hit = self._proved.get(k)
            if hit is not None:
                return _rebase(hit, seq)
            if k in self._refuted:
                return None
        if not _count_eq(seq):
            with self._lock:
                self._refuted.add(k)
            return None
        if depth <= 0:
            self._exhaustions += 1
            return None
        if k in active:
            return None
        active.add(k)
        before = self._exhaustions
        found = None
        try:
            for rule, premises, meta in backward_steps(seq, eager=self.eager):
                subs = []
                for p in premises:
                    d = self._search(p, depth - 1, active)
                    if d is None:
                        break
                    subs.append(d)
                else:
                    found = Derivation(seq, rule, tuple(subs), meta)
                    break
        finally:
            active.discard(k)
        with self._lock:
            if found is not None:
                self._proved[k] = found
            elif self._exhaustions == before:
                self._refuted.add(k)
        return found


def prove(seq: Sequent, budget: int = DEFAULT_BUDGET, prover: Prover | None = None) -> ProofResult:
    return (prover or Prover(budget)).prove(seq, budget)


def residuation_check(F: Hypergraph, N: Formula, D: Hypergraph,
                      budget: int = DEFAULT_BUDGET) -> tuple[bool, bool]:
    """Derivability of ``F -> N/D`` and of ``D[e$/F] -> N``, each searched separately.

    The left side is searched without the invertible-rule shortcut so the
    two verdicts do not share a proof path.
    """
    div = Division(N, D)
    if F.rank != div.rank:
        raise FormulaError(f"F has rank {F.rank}, hole has rank {div.rank}")
    left = Prover(budget, eager=False).prove(Sequent(F, div))
    right = Prover(budget).prove(Sequent(fill_hole(D, div.hole_edge, F), N))
    return left.proved, right.proved
