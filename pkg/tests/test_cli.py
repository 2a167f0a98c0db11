import json

import pytest

from hyperlambek.cli import main

SIG2 = json.dumps({"modes": ["x"], "modalities": ["j"], "commutative": ["c"], "associative": []})


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_prove_nlm_derivable(capsys):
    code, out, _ = run(capsys, "prove-nlm", "q *c (p /c q) -> p", "--sig", SIG2)
    assert code == 0 and "/L" in out


def test_prove_nlm_underivable(capsys):
    code, out, _ = run(capsys, "prove-nlm", "(p, q)^x -> q *x p", "--sig", SIG2)
    assert code == 1 and out.startswith("underivable")


def test_prove_nlm_infers_signature(capsys):
    code, out, _ = run(capsys, "prove-nlm", "p -> []j <>j p", "--json")
    assert code == 0 and json.loads(out)["derivable"] is True


def test_parse_error_exit_code(capsys):
    code, _, err = run(capsys, "prove-nlm", "p -> (q", "--sig", SIG2)
    assert code == 2 and "column" in err


def test_unknown_mode_is_an_error(capsys):
    code, _, err = run(capsys, "prove-nlm", "p *z q -> p", "--sig", SIG2)
    assert code == 2 and err


def test_translate_then_prove_hl(capsys, tmp_path):
    code, out, _ = run(capsys, "translate", "q *c (p /c q) -> p", "--sig", SIG2, "--json")
    assert code == 0
    f = tmp_path / "seq.json"
    f.write_text(out)
    code, out, _ = run(capsys, "prove-hl", f"@{f}", "--json")
    assert code == 0
    proof = tmp_path / "proof.json"
    proof.write_text(out)
    code, out, _ = run(capsys, "show-derivation", f"@{proof}")
    assert code == 0 and out.rstrip().endswith("valid")


def test_prove_hl_text_syntax(capsys):
    code, out, _ = run(capsys, "prove-hl", "SG(p:2, q:2) -> x(SG(q:2, p:2))")
    assert code == 1 and out.startswith("refuted")


def test_show_derivation_detects_tampering(capsys, tmp_path):
    code, out, _ = run(capsys, "prove-nlm", "q *c (p /c q) -> p", "--sig", SIG2, "--json")
    data = json.loads(out)
    data["derivation"]["rule"] = "*R"
    f = tmp_path / "bad.json"
    f.write_text(json.dumps(data))
    code, out, _ = run(capsys, "show-derivation", f"@{f}")
    assert code == 1 and "invalid" in out


def test_recognize(capsys):
    code, out, _ = run(capsys, "translate", "(p, <q>^j)^c -> p", "--sig", SIG2)
    code, out, _ = run(capsys, "recognize", out.strip(), "--sig", SIG2)
    assert code == 0 and "-> p" in out
    code, out, _ = run(capsys, "recognize", "SG(p:2, q:2) -> p:2", "--sig", SIG2)
    assert code == 1


def test_render_dot(capsys, tmp_path):
    code, out, _ = run(capsys, "render-dot", "(p, q)^x -> p", "--nlm", "--sig", SIG2)
    assert code == 0 and out.startswith("digraph")
    target = tmp_path / "g.dot"
    code, out, _ = run(capsys, "render-dot", "SG(p:2, q:2)", "-o", str(target))
    assert code == 0 and target.read_text().startswith("digraph")


def test_equiv_writes_report(capsys, tmp_path):
    code, out, _ = run(capsys, "equiv", "--sig", SIG2, "--atoms", "p", "--depth", "1",
                       "--leaves", "2", "--max-ops", "2", "--out", str(tmp_path))
    assert code == 0
    lines = dict(line.split("\t", 1) for line in out.splitlines() if not line.startswith("file"))
    assert lines["disagreements"] == "0" and int(lines["total"]) > 0
    assert {p.suffix for p in tmp_path.iterdir()} == {".json", ".csv", ".png"}


def test_missing_file_is_an_error(capsys):
    code, _, err = run(capsys, "prove-hl", "@/nonexistent/seq.json")
    assert code == 2 and err
