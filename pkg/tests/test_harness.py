import csv
import json

from hyperlambek.harness import (EnumerationSpec, _ops, check_one, classical_corpus, formulas,
                                 golden_corpus, lambek_as_nlm, probe_graphs, run_equivalence,
                                 sequents)
from hyperlambek.hl import Prover
from hyperlambek.hypergraph import isomorphic
from hyperlambek.embed import htree
from hyperlambek.nlm import NLMProver, Signature, parse_sequent
from hyperlambek.report import write_report

CASE2 = Signature({"x", "c"}, {"j"}, {"c"})


def test_empty_alphabet():
    rep = run_equivalence(EnumerationSpec((), 2, 3, CASE2))
    assert rep.total == 0 and rep.summary()["disagreements"] == 0


def test_formula_pool_respects_cap():
    pool = formulas(("p",), CASE2, 2, max_ops=1)
    assert all(_ops(A) <= 1 for A in pool)
    # p, three binary connectives per mode, diamond and box
    assert len(formulas(("p",), CASE2, 1)) == 1 + 2 * 3 + 2


def test_sequents_are_distinct_classes():
    spec = EnumerationSpec(("p", "q"), 1, 2, CASE2, max_ops=2)
    seqs = sequents(spec)
    assert len(seqs) == len({str(s) for s in seqs})
    assert parse_sequent("(q, p)^c -> p") not in seqs or parse_sequent("(p, q)^c -> p") not in seqs


def test_probes_differ_from_original():
    seq = parse_sequent("(p, <q>^j)^x -> p")
    G = htree(seq.antecedent, CASE2)
    probes = list(probe_graphs(G))
    assert probes and not any(isomorphic(P, G) for P in probes)


def test_check_one_reports_agreement():
    s = parse_sequent("q *c (p /c q) -> p")
    verdict, problems, exhausted, lemma1, n_probes, n_lemma1 = check_one(
        s, CASE2, NLMProver(CASE2), Prover())
    assert verdict.nlm and verdict.hl == "proved" and verdict.recognized
    assert problems == [] and not exhausted and lemma1 == [] and n_lemma1 > 0


def test_golden_and_classical_corpora():
    assert len(golden_corpus()) == 4
    for name, ante, succ in classical_corpus():
        seq, sig = lambek_as_nlm(ante, succ)
        assert sig.case == 4 and NLMProver(sig).derivable(seq), name


def test_report_files(tmp_path):
    rep = run_equivalence(EnumerationSpec(("p",), 1, 2, CASE2, max_ops=2))
    files = write_report(rep, tmp_path, "small")
    data = json.loads(files["json"].read_text())
    assert data["summary"]["total"] == rep.total
    with files["csv"].open() as fh:
        assert len(list(csv.DictReader(fh))) == rep.total
    assert files["figure"].stat().st_size > 1000
