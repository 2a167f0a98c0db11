"""Command line front end.

Exit status: 0 derivable / success, 1 underivable / nothing found, 2 error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Sequence

from . import embed
from .hl import rules as hl_rules
from .hl.search import DEFAULT_BUDGET, Prover, Status
from .hl.syntax import (HLParseError, format_label, parse_graph, parse_sequent as parse_hl,
                        sequent_from_json, sequent_to_json)
from .hypergraph import to_dot
from .nlm.prover import NLMDerivation, NLMProver, check_derivation_nlm
from .nlm.syntax import ParseError, parse_sequent as parse_nlm
from .nlm.terms import Signature, SignatureError, check_over, infer_signature


class CLIError(Exception):
    pass


def _text_arg(value: str) -> str:
    """``-`` reads stdin, ``@file`` reads a file, anything else is literal."""
    if value == "-":
        return sys.stdin.read()
    if value.startswith("@"):
        return Path(value[1:]).read_text()
    return value


def _signature(args: argparse.Namespace, seq: Any = None) -> Signature:
    if args.sig is None:
        if seq is None:
            raise CLIError("--sig is required")
        return infer_signature(seq)
    raw = args.sig.strip()
    sig = Signature.from_json(raw) if raw.startswith("{") else Signature.load(raw)
    if seq is not None:
        check_over(seq, sig)
    return sig


def _emit(args: argparse.Namespace, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print(text)


# ---------------------------------------------------------------------------
# derivation (de)serialization

def nlm_derivation_from_dict(data: dict) -> NLMDerivation:
    return NLMDerivation(parse_nlm(data["conclusion"]), data["rule"],
                         tuple(nlm_derivation_from_dict(p) for p in data["premises"]),
                         tuple(data.get("position", ())))


def hl_derivation_from_dict(data: dict) -> hl_rules.Derivation:
    return hl_rules.Derivation(sequent_from_json(data["conclusion"]), data["rule"],
                               tuple(hl_derivation_from_dict(p) for p in data["premises"]),
                               dict(data.get("meta", {})))


# ---------------------------------------------------------------------------
# commands

def cmd_prove_nlm(args: argparse.Namespace) -> int:
    seq = parse_nlm(_text_arg(args.sequent))
    sig = _signature(args, seq)
    d = NLMProver(sig).prove(seq)
    if d is None:
        _emit(args, {"calculus": "nlm", "sequent": str(seq), "derivable": False},
              f"underivable: {seq}")
        return 1
    ok, why = check_derivation_nlm(d, sig)
    if not ok:
        raise CLIError(f"internal error, derivation does not replay: {why}")
    _emit(args, {"calculus": "nlm", "sequent": str(seq), "derivable": True,
                 "signature": sig.to_json(), "derivation": d.to_dict()}, d.to_text())
    return 0


def cmd_prove_hl(args: argparse.Namespace) -> int:
    seq = parse_hl(_text_arg(args.sequent))
    res = Prover(args.budget).prove(seq)
    if not res.proved:
        _emit(args, {"calculus": "hl", "status": res.status.value,
                     "sequent": sequent_to_json(seq)}, f"{res.status.value}: {seq}")
        return 1
    d = res.derivation
    check = hl_rules.check_derivation(d)
    if not check:
        raise CLIError(f"internal error, derivation does not replay: {check.reason}")
    _emit(args, {"calculus": "hl", "status": Status.PROVED.value, "derivation": d.to_dict()},
          d.to_text())
    return 0


def cmd_translate(args: argparse.Namespace) -> int:
    seq = parse_nlm(_text_arg(args.sequent))
    sig = _signature(args, seq)
    h = embed.translate_sequent(seq, sig)
    _emit(args, sequent_to_json(h), str(h))
    return 0


def cmd_recognize(args: argparse.Namespace) -> int:
    sig = _signature(args)
    h = parse_hl(_text_arg(args.sequent))
    found = embed.recognize_all(h.antecedent, h.succedent, sig)
    if not found:
        _emit(args, {"recognized": []}, "no preimage")
        return 1
    lines = [f"{P} -> {T}" for P, T in found]
    _emit(args, {"recognized": lines}, "\n".join(lines))
    return 0


def cmd_equiv(args: argparse.Namespace) -> int:
    from .harness import EnumerationSpec, run_equivalence
    sig = _signature(args)
    atoms = tuple(a for a in args.atoms.split(",") if a)
    spec = EnumerationSpec(atoms, args.depth, args.leaves, sig, args.budget,
                           None if args.max_ops < 0 else args.max_ops, not args.no_probes)
    rep = run_equivalence(spec, workers=args.workers)
    files = {}
    if args.out:
        from .report import write_report
        files = {k: str(v) for k, v in write_report(rep, args.out, args.stem).items()}
    if args.json:
        print(json.dumps({"summary": rep.summary(), "disagreements": rep.disagreements,
                          "files": files}, indent=2))
    else:
        for k, v in rep.summary().items():
            print(f"{k}\t{v}")
        for d in rep.disagreements:
            print(f"disagreement\t{d['kind']}\t{d['sequent']}")
        for k, v in files.items():
            print(f"file\t{k}\t{v}")
    return 0 if not rep.disagreements else 1


def cmd_render_dot(args: argparse.Namespace) -> int:
    text = _text_arg(args.input)
    if args.nlm:
        seq = parse_nlm(text)
        G = embed.translate_sequent(seq, _signature(args, seq)).antecedent
    elif "->" in text:
        G = parse_hl(text).antecedent
    else:
        G = parse_graph(text)
    dot = to_dot(G, label_text=format_label)
    if args.output:
        Path(args.output).write_text(dot)
        print(args.output)
    else:
        sys.stdout.write(dot)
    return 0


def cmd_show_derivation(args: argparse.Namespace) -> int:
    data = json.loads(_text_arg(args.file))
    if "derivation" in data:
        calculus = data.get("calculus")
        body = data["derivation"]
    else:
        body = data
        calculus = "hl" if isinstance(body.get("conclusion"), dict) else "nlm"
    if calculus == "nlm":
        d = nlm_derivation_from_dict(body)
        if args.sig is None and "signature" in data:
            sig = Signature.from_json(data["signature"])
        else:
            sig = _signature(args, d.conclusion)
        ok, why = check_derivation_nlm(d, sig)
    else:
        d = hl_derivation_from_dict(body)
        ok, why = hl_rules.check_derivation(d)
    print(d.to_text())
    print("valid" if ok else f"invalid: {why}")
    return 0 if ok else 1


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hyperlambek", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp: argparse.ArgumentParser, sig: bool = True) -> None:
        if sig:
            sp.add_argument("--sig", help="signature JSON file (or inline JSON)")
        sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
        sp.add_argument("--json", action="store_true", help="machine-readable output")

    sp = sub.add_parser("prove-nlm", help="decide an NL♦ sequent")
    sp.add_argument("sequent")
    common(sp)
    sp.set_defaults(func=cmd_prove_nlm)

    sp = sub.add_parser("prove-hl", help="search an HL derivation")
    sp.add_argument("sequent", help="'graph -> formula', JSON, @file or -")
    common(sp, sig=False)
    sp.set_defaults(func=cmd_prove_hl)

    sp = sub.add_parser("translate", help="translate an NL♦ sequent into HL")
    sp.add_argument("sequent")
    common(sp)
    sp.set_defaults(func=cmd_translate)

    sp = sub.add_parser("recognize", help="recover NL♦ preimages of an HL sequent")
    sp.add_argument("sequent")
    common(sp)
    sp.set_defaults(func=cmd_recognize)

    sp = sub.add_parser("equiv", help="exhaustive comparison of the two calculi")
    common(sp)
    sp.add_argument("--atoms", default="p,q")
    sp.add_argument("--depth", type=int, default=2)
    sp.add_argument("--leaves", type=int, default=3)
    sp.add_argument("--max-ops", type=int, default=3, help="cap on connectives + brackets; -1 for none")
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--no-probes", action="store_true")
    sp.add_argument("--out", help="directory for JSON, CSV and PNG report files")
    sp.add_argument("--stem", default="equiv")
    sp.set_defaults(func=cmd_equiv)

    sp = sub.add_parser("render-dot", help="DOT drawing of a hypergraph")
    sp.add_argument("input", help="HL graph or sequent; with --nlm an NL♦ sequent")
    sp.add_argument("--nlm", action="store_true")
    sp.add_argument("-o", "--output")
    common(sp)
    sp.set_defaults(func=cmd_render_dot)

    sp = sub.add_parser("show-derivation", help="re-check and print a JSON derivation")
    sp.add_argument("file", help="JSON text, @file or -")
    common(sp)
    sp.set_defaults(func=cmd_show_derivation)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, HLParseError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
    except (CLIError, SignatureError, embed.EmbeddingError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return 2


if __name__ == "__main__":
    sys.exit(main())
