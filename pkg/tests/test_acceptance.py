"""Acceptance gate: one test per criterion, each logged through ``record``."""
import random
import time
from collections import defaultdict

import pytest

from conftest import record
from generators import perturbed, random_graph, random_word, shuffled_copy, str_graph
from oracles import brute_isomorphic
from hyperlambek.embed import demonstrate_A2_collision, htree, mu, translate_sequent
from hyperlambek.harness import (EnumerationSpec, classical_corpus, golden_corpus, lambek_as_nlm,
                                 run_equivalence, sequents)
from hyperlambek.hl import Division, Prover, Sequent, residuation_check, tr_antecedent, tr_classic
from hyperlambek.hl.rules import check_derivation
from hyperlambek.hypergraph import (RankedLabel, canonical_key, handle, isomorphic, relabel, replace,
                                    replace_many, string_graph)
from hyperlambek.nlm import Box, NLMProver, Over, Signature, Under, canon, check_derivation_nlm
from hyperlambek.nlm import structural_class

from test_nlm import _dbs

CASE2 = Signature({"x", "c"}, {"j"}, {"c"})
CASE3 = Signature({"x", "O"}, {"j"}, {"O"}, {"O"})
CASE4 = Signature({"c", "O"}, {"j"}, {"c"}, {"O"})
# same cases restricted to the associative mode, swept one step deeper
CASE3_ASSOC = Signature({"O"}, commutative={"O"}, associative={"O"})
CASE4_ASSOC = Signature({"O"}, associative={"O"})

SWEEP_DEPTH, SWEEP_LEAVES, SWEEP_CAP = 2, 3, 3


@pytest.fixture(scope="module")
def case2_sweep():
    return run_equivalence(EnumerationSpec(("p", "q"), SWEEP_DEPTH, SWEEP_LEAVES, CASE2,
                                           max_ops=SWEEP_CAP))


def _sweep_detail(rep):
    s = rep.summary()
    return (f"{s['total']} sequents, {s['derivable']} derivable, {s['disagreements']} disagreements, "
            f"{s['exhausted']} exhausted, {s['seconds']:.0f} s")


def test_criterion_1_golden_corpus():
    t0 = time.perf_counter()
    failures = []
    hl = Prover()
    for name, seq, sig in golden_corpus():
        d = NLMProver(sig).prove(seq)
        if d is None or not check_derivation_nlm(d, sig)[0]:
            failures.append(f"{name}: NL")
        res = hl.prove(translate_sequent(seq, sig))
        if not res.proved or not check_derivation(res.derivation):
            failures.append(f"{name}: HL")
    for name, ante, succ in classical_corpus():
        seq, sig = lambek_as_nlm(ante, succ)
        d = NLMProver(sig).prove(seq)
        if d is None or not check_derivation_nlm(d, sig)[0]:
            failures.append(f"{name}: L")
        res = hl.prove(Sequent(tr_antecedent(ante), tr_classic(succ)))
        if not res.proved or not check_derivation(res.derivation):
            failures.append(f"{name}: HL")
    elapsed = time.perf_counter() - t0
    n = len(golden_corpus()) + len(classical_corpus())
    ok = not failures and elapsed < 5.0
    record(1, "golden corpus", ok, f"{n} sequents, {elapsed:.2f} s, failures={failures}")
    assert not failures
    assert elapsed < 5.0


@pytest.mark.slow
def test_criterion_2_case2_sweep(case2_sweep):
    rep = case2_sweep
    ok = not rep.disagreements and not rep.exhausted and rep.total > 0 and rep.seconds < 600
    record(2, "Case 2 equivalence sweep", ok, _sweep_detail(rep))
    assert rep.disagreements == []
    assert rep.exhausted == []
    assert rep.seconds < 600


@pytest.mark.slow
def test_criterion_3_case3_case4_sweeps():
    details, ok = [], True
    for label, sig, cap in [("case3", CASE3, SWEEP_CAP), ("case4", CASE4, SWEEP_CAP),
                            ("case3 assoc-only", CASE3_ASSOC, SWEEP_CAP + 1),
                            ("case4 assoc-only", CASE4_ASSOC, SWEEP_CAP + 1)]:
        rep = run_equivalence(EnumerationSpec(("p", "q"), SWEEP_DEPTH, SWEEP_LEAVES, sig,
                                              max_ops=cap))
        ok &= not rep.disagreements and not rep.exhausted and rep.total > 0
        details.append(f"{label}: {_sweep_detail(rep)}")
        assert rep.disagreements == [], label
    record(3, "Case 3 and Case 4 sweeps", ok, "; ".join(details))
    assert ok


def _residuation_instances(n=500, seed=0):
    """Division and box succedents from the Case 2 space; derivable ones oversampled."""
    spec = EnumerationSpec(("p", "q"), SWEEP_DEPTH, SWEEP_LEAVES, CASE2, max_ops=SWEEP_CAP)
    pool = [s for s in sequents(spec) if isinstance(s.succedent, (Under, Over, Box))]
    prover = NLMProver(CASE2)
    yes = [s for s in pool if prover.derivable(s)]
    no = [s for s in pool if not prover.derivable(s)]
    rng = random.Random(seed)
    picked = yes[: n // 2] + rng.sample(no, n - min(len(yes), n // 2))
    return picked, len(yes)


def test_criterion_4_residuation():
    instances, n_yes = _residuation_instances()
    agree = derivable = 0
    for s in instances:
        X = mu(s.succedent, CASE2)
        assert isinstance(X, Division)
        left, right = residuation_check(htree(s.antecedent, CASE2), X.numerator, X.denominator)
        agree += left == right
        derivable += left
    ok = len(instances) == 500 and agree == 500
    record(4, "residuation", ok,
           f"{agree}/{len(instances)} agree, {derivable} derivable ({n_yes} in the pool)")
    assert len(instances) == 500
    assert agree == 500


def test_criterion_5_hypergraph_core():
    rng = random.Random(2024)
    counts = defaultdict(int)
    N = 1000
    for _ in range(N):
        w1, w2 = random_word(rng), random_word(rng)
        G = replace_many(str_graph(), {1: string_graph(w1), 2: string_graph(w2)})
        counts["strings"] += G == string_graph(w1 + w2)
    done = 0
    while done < N:
        G = random_graph(rng, max_edges=5)
        if len(G.edges) < 2:
            continue
        e1, e2 = rng.sample(G.edges, 2)
        H1 = random_graph(rng, rank=G.edge_rank(e1))
        H2 = random_graph(rng, rank=G.edge_rank(e2))
        a = replace(replace(G, e1, H1), e2, H2)
        b = replace(replace(G, e2, H2), e1, H1)
        counts["order"] += a == b == replace_many(G, {e1: H1, e2: H2})
        done += 1
    done = 0
    while done < N:
        G = random_graph(rng)
        if not G.edges:
            continue
        e = rng.choice(G.edges)
        a = RankedLabel(rng.choice("xyz"), G.edge_rank(e))
        counts["handle"] += replace(G, e, handle(a)) == relabel(G, {e: a})
        done += 1
    for _ in range(N):
        G = random_graph(rng)
        H = shuffled_copy(rng, G) if rng.random() < 0.5 else perturbed(rng, G)
        K = shuffled_copy(rng, H)
        truth = brute_isomorphic(G, H)
        axioms = (isomorphic(G, G) and isomorphic(G, H) == isomorphic(H, G)
                  and isomorphic(H, K) and isomorphic(G, K) == isomorphic(G, H))
        keys = (canonical_key(G) == canonical_key(H)) == truth == isomorphic(G, H)
        counts["iso"] += axioms and keys
    ok = all(counts[k] == N for k in ("strings", "order", "handle", "iso"))
    record(5, "hypergraph core properties", ok,
           ", ".join(f"{k} {counts[k]}/{N}" for k in ("strings", "order", "handle", "iso")))
    assert ok, dict(counts)


def test_criterion_6_structural_absorption():
    details, violations = [], 0
    for label, sig in [("case3", CASE3), ("case4", CASE4)]:
        dbs = [t for n in range(1, 5) for t in _dbs(n, sorted(sig.modes))]
        by_graph, by_class = defaultdict(set), defaultdict(set)
        for t in dbs:
            by_graph[canonical_key(htree(t, sig))].add(t)
            by_class[canon(t, sig)].add(t)
        graph_blocks = {frozenset(b) for b in by_graph.values()}
        class_blocks = {frozenset(b) for b in by_class.values()}
        bad = len(graph_blocks ^ class_blocks)
        for rep, block in by_class.items():
            bad += block != structural_class(rep, sig)
        violations += bad
        details.append(f"{label}: {len(dbs)} databases, {len(class_blocks)} classes, {bad} violations")
    record(6, "structural absorption", violations == 0, "; ".join(details))
    assert violations == 0


@pytest.mark.slow
def test_criterion_7_lemma1(case2_sweep):
    rep = case2_sweep
    ok = not rep.lemma1_violations and rep.lemma1_checked > 0
    record(7, "atomic succedent lemma", ok,
           f"{rep.lemma1_checked} atomic-succedent nodes checked, {len(rep.lemma1_violations)} violations")
    assert rep.lemma1_violations == []
    assert rep.lemma1_checked > 0


def test_criterion_8_A2_collision():
    P1, P2, iso_both, iso_one = demonstrate_A2_collision()
    ok = iso_both is True and iso_one is False
    record(8, "two associative modes collide", ok,
           f"{P1} vs {P2}: isomorphic with both associative={iso_both}, with one={iso_one}")
    assert iso_both is True
    assert iso_one is False
