"""Exhaustive comparison of NL♦ derivability with HL derivability of translations."""
from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from itertools import product
from typing import Any, Iterator

from .embed import htree, image_normal, image_normal_db, mu, recognize_all, translate_sequent
from .hl.formulas import Primitive, Sequent, lemma1_conclusion_check
from .hl.rules import Derivation, check_derivation
from .hl.search import Prover, Status
from .hypergraph import Hypergraph, isomorphic
from .nlm.prover import NLMProver, check_derivation_nlm
from .nlm.structure import canon
from .nlm.terms import (Angle, Atom, Box, Database, Diamond, Leaf, NLMSequent, Over, Pair, Prod,
                        Signature, Under)


@dataclass(frozen=True)
class EnumerationSpec:
    """Instance space of a sweep.

    ``max_ops`` bounds the total number of connectives and brackets in a
    sequent; without it a depth-2 alphabet already yields tens of millions
    of sequents.
    """
    atoms: tuple[str, ...]
    max_depth: int
    max_leaves: int
    signature: Signature
    budget: int = 64
    max_ops: int | None = 3
    probes: bool = True

    def to_json(self) -> dict:
        return {"atoms": list(self.atoms), "max_depth": self.max_depth,
                "max_leaves": self.max_leaves, "signature": self.signature.to_json(),
                "budget": self.budget, "max_ops": self.max_ops, "probes": self.probes}


@dataclass
class Verdict:
    sequent: str
    nlm: bool
    hl: str
    recognized: bool
    ops: int
    leaves: int
    seconds: float


@dataclass
class EquivalenceReport:
    spec: dict
    verdicts: list[Verdict] = field(default_factory=list)
    disagreements: list[dict] = field(default_factory=list)
    exhausted: list[str] = field(default_factory=list)
    lemma1_violations: list[str] = field(default_factory=list)
    probes_checked: int = 0
    lemma1_checked: int = 0
    seconds: float = 0.0

    @property
    def total(self) -> int:
        return len(self.verdicts)

    @property
    def derivable(self) -> int:
        return sum(v.nlm for v in self.verdicts)

    def merge(self, other: "EquivalenceReport") -> "EquivalenceReport":
        out = EquivalenceReport(self.spec)
        out.verdicts = sorted(self.verdicts + other.verdicts, key=lambda v: (v.ops, v.sequent))
        out.disagreements = sorted(self.disagreements + other.disagreements, key=lambda d: d["sequent"])
        out.exhausted = sorted(self.exhausted + other.exhausted)
        out.lemma1_violations = sorted(self.lemma1_violations + other.lemma1_violations)
        out.probes_checked = self.probes_checked + other.probes_checked
        out.lemma1_checked = self.lemma1_checked + other.lemma1_checked
        out.seconds = self.seconds + other.seconds
        return out

    def summary(self) -> dict:
        return {
            "total": self.total, "derivable": self.derivable,
            "disagreements": len(self.disagreements), "exhausted": len(self.exhausted),
            "lemma1_violations": len(self.lemma1_violations), "lemma1_checked": self.lemma1_checked,
            "probes_checked": self.probes_checked, "seconds": round(self.seconds, 3),
        }

    def to_json(self) -> dict:
        return {"spec": self.spec, "summary": self.summary(),
                "disagreements": self.disagreements, "exhausted": self.exhausted,
                "lemma1_violations": self.lemma1_violations,
                "verdicts": [asdict(v) for v in self.verdicts]}


# ---------------------------------------------------------------------------
# enumeration

def _ops(A: Any) -> int:
    if isinstance(A, Atom):
        return 0
    if isinstance(A, (Diamond, Box)):
        return 1 + _ops(A.body)
    if isinstance(A, Prod):
        return 1 + _ops(A.left) + _ops(A.right)
    return 1 + _ops(A.den) + _ops(A.num)


def _db_ops(P: Database) -> int:
    if isinstance(P, Leaf):
        return _ops(P.formula)
    if isinstance(P, Angle):
        return 1 + _db_ops(P.body)
    return 1 + _db_ops(P.left) + _db_ops(P.right)


def formulas(atoms: tuple[str, ...], sig: Signature, max_depth: int, max_ops: int | None = None
             ) -> list[Any]:
    """All formulas within the bounds, ordered by size then text."""
    cap = max_ops if max_ops is not None else 10 ** 9
    layers: list[list[Any]] = [[Atom(a) for a in sorted(atoms)]]
    everything = list(layers[0])
    for _ in range(max_depth):
        new = []
        for j in sorted(sig.modalities):
            for A in everything:
                new += [Diamond(j, A), Box(j, A)]
        for i in sorted(sig.modes):
            for A, B in product(everything, repeat=2):
                if _ops(A) + _ops(B) + 1 > cap:
                    continue
                new += [Prod(i, A, B), Under(i, A, B), Over(i, A, B)]
        new = [A for A in new if _ops(A) <= cap]
        seen = {str(A) for A in everything}
        everything += [A for A in new if str(A) not in seen]
    return sorted(set(everything), key=lambda A: (_ops(A), str(A)))


def _shapes(n: int, sig: Signature, budget: int) -> Iterator[tuple[Any, int]]:
    """Bracket skeletons with ``n`` holes, using at most ``budget`` brackets."""
    if budget < 0:
        return
    if n == 1:
        yield "_", 0
        for j in sorted(sig.modalities):
            for body, k in _shapes(1, sig, budget - 1):
                yield ("<>", j, body), k + 1
        return
    for k in range(1, n):
        for i in sorted(sig.modes):
            for l, a in _shapes(k, sig, budget - 1):
                for r, b in _shapes(n - k, sig, budget - 1 - a):
                    yield ("()", i, l, r), 1 + a + b
    for j in sorted(sig.modalities):
        for body, k in _shapes(n, sig, budget - 1):
            yield ("<>", j, body), k + 1


def _fill(shape: Any, leaves: list[Any]) -> Database:
    it = iter(leaves)

    def go(s: Any) -> Database:
        if s == "_":
            return Leaf(next(it))
        if s[0] == "<>":
            return Angle(s[1], go(s[2]))
        return Pair(s[1], go(s[2]), go(s[3]))

    return go(shape)


def sequents(spec: EnumerationSpec) -> list[NLMSequent]:
    """Sequents of the sweep, one per (structural class, succedent)."""
    if not spec.atoms:
        return []
    sig = spec.signature
    cap = spec.max_ops if spec.max_ops is not None else 10 ** 9
    pool = formulas(spec.atoms, sig, spec.max_depth, spec.max_ops)
    by_ops: dict[int, list[Any]] = {}
    for A in pool:
        by_ops.setdefault(_ops(A), []).append(A)
    seen: set[tuple[Database, Any]] = set()
    out: list[NLMSequent] = []
    for n in range(1, spec.max_leaves + 1):
        for shape, k in _shapes(n, sig, cap):
            for leaves in _leaf_choices(n, pool, cap - k):
                P = _fill(shape, list(leaves))
                used = k + sum(_ops(A) for A in leaves)
                for C in pool:
                    if used + _ops(C) > cap:
                        break
                    key = (canon(P, sig), C)
                    if key in seen:
                        continue
                    seen.add(key)
                    out.append(NLMSequent(P, C))
    out.sort(key=lambda s: (_db_ops(s.antecedent) + _ops(s.succedent), str(s)))
    return out


def _leaf_choices(n: int, pool: list[Any], budget: int) -> Iterator[tuple[Any, ...]]:
    if n == 0:
        yield ()
        return
    for A in pool:
        k = _ops(A)
        if k > budget:
            break
        for rest in _leaf_choices(n - 1, pool, budget - k):
            yield (A,) + rest


# ---------------------------------------------------------------------------
# probes: graphs over translated labels that are not translations

def probe_graphs(G: Hypergraph) -> Iterator[Hypergraph]:
    """Small distortions of a hypertree keeping its labels."""
    nodes = list(G.nodes)
    ext = set(G.ext)
    for a in nodes:
        for b in nodes:
            if a < b and not (a in ext and b in ext):
                keep, drop = (b, a) if a in ext else (a, b)
                m = {v: (keep if v == drop else v) for v in nodes}
                yield Hypergraph(tuple(v for v in nodes if v != drop),
                                 {e: tuple(m[v] for v in G.att[e]) for e in G.edges},
                                 dict(G.lab), tuple(m[v] for v in G.ext))
    for e in G.edges:
        att = G.att[e]
        if len(att) >= 2 and att[0] != att[-1]:
            rev = dict(G.att)
            rev[e] = tuple(reversed(att))
            yield Hypergraph(G.nodes, rev, dict(G.lab), G.ext)
    fresh = max(nodes, default=-1) + 1
    yield Hypergraph(G.nodes + (fresh,), dict(G.att), dict(G.lab), G.ext)


# ---------------------------------------------------------------------------
# the sweep

@lru_cache(maxsize=None)
def _workers_state(sig_json: str, budget: int) -> tuple[NLMProver, Prover, Signature]:
    sig = Signature.from_json(sig_json)
    return NLMProver(sig), Prover(budget), sig


def check_one(s: NLMSequent, sig: Signature, nlm_prover: NLMProver, hl_prover: Prover,
              probes: bool = True
              ) -> tuple[Verdict, list[dict], list[str], list[str], int, int]:
    """Verdict, disagreements, exhaustions, atomic-succedent failures, probes run
    and atomic-succedent checks."""
    t0 = time.perf_counter()
    problems: list[dict] = []
    lemma1: list[str] = []
    n_lemma1 = 0
    exhausted: list[str] = []
    nl = nlm_prover.derivable(s)
    if nl:
        ok, why = check_derivation_nlm(nlm_prover.prove(s), sig)
        if not ok:
            problems.append({"sequent": str(s), "kind": "nlm-replay", "reason": why})
    h = translate_sequent(s, sig)
    res = hl_prover.prove(h)
    if res.status is Status.EXHAUSTED:
        exhausted.append(str(s))
    if nl and not res.proved:
        problems.append({"sequent": str(s), "kind": "nlm-only", "hl": res.status.value})
    rec = recognize_all(h.antecedent, h.succedent, sig)
    target = canon(image_normal_db(s.antecedent, sig), sig)
    ok_rec = any(canon(P, sig) == target for P, _ in rec) and \
        all(T == image_normal(s.succedent, sig) for _, T in rec)
    if not ok_rec:
        problems.append({"sequent": str(s), "kind": "recognize-roundtrip",
                         "found": [str(P) for P, _ in rec]})
    if res.proved:
        if not any(nlm_prover.derivable(NLMSequent(P, T)) for P, T in rec):
            problems.append({"sequent": str(s), "kind": "hl-only"})
        replay = check_derivation(res.derivation)
        if not replay:
            problems.append({"sequent": str(s), "kind": "hl-replay", "reason": replay.reason})
        n, bad = lemma1_failures(res.derivation)
        n_lemma1 += n
        lemma1 += bad
    n_probes = 0
    if probes and res.proved:
        for G in probe_graphs(h.antecedent):
            if isomorphic(G, h.antecedent):
                continue
            n_probes += 1
            pr = hl_prover.prove(Sequent(G, h.succedent))
            if pr.status is Status.EXHAUSTED:
                exhausted.append(f"probe of {s}")
            if pr.proved:
                n, bad = lemma1_failures(pr.derivation)
                n_lemma1 += n
                lemma1 += bad
                back = recognize_all(G, h.succedent, sig)
                if not any(nlm_prover.derivable(NLMSequent(P, T)) for P, T in back):
                    problems.append({"sequent": str(s), "kind": "probe-hl-only",
                                     "graph": repr(G)})
    v = Verdict(str(s), nl, res.status.value, ok_rec, _db_ops(s.antecedent) + _ops(s.succedent),
                len(_leaves(s.antecedent)), time.perf_counter() - t0)
    return v, problems, exhausted, lemma1, n_probes, n_lemma1


def lemma1_failures(d: Derivation) -> tuple[int, list[str]]:
    """Checks every ``H -> p`` in ``d`` with ``p`` primitive; returns the number
    checked and those where ``H`` is not ``p•`` although the side conditions hold."""
    checked, out = 0, []
    for node in d.walk():
        seq = node.conclusion
        if isinstance(seq.succedent, Primitive):
            verdict = lemma1_conclusion_check(seq.antecedent, seq.succedent)
            checked += verdict is not None
            if verdict is False:
                out.append(str(seq))
    return checked, out


def _leaves(P: Database) -> list:
    if isinstance(P, Leaf):
        return [P]
    if isinstance(P, Angle):
        return _leaves(P.body)
    return _leaves(P.left) + _leaves(P.right)


def _run_chunk(args: tuple[str, int, bool, list[NLMSequent], dict]) -> EquivalenceReport:
    sig_json, budget, probes, chunk, spec_json = args
    nlm_prover, hl_prover, sig = _workers_state(sig_json, budget)
    rep = EquivalenceReport(spec_json)
    t0 = time.perf_counter()
    for s in chunk:
        v, problems, exhausted, lemma1, n, n_l1 = check_one(s, sig, nlm_prover, hl_prover, probes)
        rep.lemma1_checked += n_l1
        rep.verdicts.append(v)
        rep.disagreements += problems
        rep.exhausted += exhausted
        rep.lemma1_violations += lemma1
        rep.probes_checked += n
    rep.seconds = time.perf_counter() - t0
    return rep


def run_equivalence(spec: EnumerationSpec, workers: int = 1) -> EquivalenceReport:
    import json
    spec_json = spec.to_json()
    report = EquivalenceReport(spec_json)
    items = sequents(spec)
    if not items:
        return report
    sig_json = json.dumps(spec.signature.to_json())
    t0 = time.perf_counter()
    if workers <= 1:
        report = _run_chunk((sig_json, spec.budget, spec.probes, items, spec_json))
    else:
        chunks = [items[k::workers * 4] for k in range(workers * 4)]
        with ProcessPoolExecutor(workers) as pool:
            for part in pool.map(_run_chunk, [(sig_json, spec.budget, spec.probes, c, spec_json)
                                              for c in chunks if c]):
                report = report.merge(part)
    report.seconds = time.perf_counter() - t0
    return report


# ---------------------------------------------------------------------------
# golden corpus

def golden_corpus() -> list[tuple[str, NLMSequent, Signature]]:
    from .nlm.syntax import parse_sequent
    case1 = Signature(frozenset({"x", "y"}))
    case2 = Signature(frozenset({"x", "c"}), frozenset({"j"}), frozenset({"c"}))
    items = [
        ("left-nested product", "((p, q)^x, r)^y -> (p *x q) *y r", case1),
        ("right-nested product", "(p, (q, r)^y)^x -> p *x (q *y r)", case1),
        ("modal unit", "p -> []j <>j p", case2),
        ("commutative application", "q *c (p /c q) -> p", case2),
    ]
    return [(name, parse_sequent(text), sig) for name, text, sig in items]


def classical_corpus() -> list[tuple[str, list[Any], Any]]:
    """Sequents of the associative Lambek calculus, as (name, antecedent, succedent)."""
    from .hl.formulas import LCAtom, LCProd
    p, q, r, s = (LCAtom(a) for a in "pqrs")
    return [
        ("product right", [p, q, r, s], LCProd(LCProd(p, q), LCProd(r, s))),
        ("product left", [LCProd(p, q), r], LCProd(LCProd(p, q), r)),
    ]


def lambek_as_nlm(antecedent: list[Any], succedent: Any, mode: str = "a"
                  ) -> tuple[NLMSequent, Signature]:
    """The same sequent in NL♦ with a single associative mode."""
    from .hl.formulas import LCAtom, LCOver, LCProd, LCUnder

    def f(A: Any) -> Any:
        if isinstance(A, LCAtom):
            return Atom(A.name)
        if isinstance(A, LCProd):
            return Prod(mode, f(A.left), f(A.right))
        if isinstance(A, LCUnder):
            return Under(mode, f(A.den), f(A.num))
        if isinstance(A, LCOver):
            return Over(mode, f(A.num), f(A.den))
        raise TypeError(A)

    P: Database = Leaf(f(antecedent[-1]))
    for A in reversed(antecedent[:-1]):
        P = Pair(mode, Leaf(f(A)), P)
    return NLMSequent(P, f(succedent)), Signature(frozenset({mode}), associative=frozenset({mode}))


def htree_constant_on_class(P: Database, sig: Signature) -> bool:
    from .nlm.structure import structural_class
    base = htree(P, sig)
    return all(isomorphic(htree(Q, sig), base) for Q in structural_class(P, sig))

