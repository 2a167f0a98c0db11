"""Text and JSON forms of HL formulas, graphs and sequents.

Text grammar::

    formula := NAME ':' RANK                      primitive, e.g. p:1 or mode:x:3
             | 'x' '(' graph ')'                  product
             | 'div' '(' formula ',' graph ')'    division
    slot    := formula | '$' RANK
    graph   := '[' N ';' NODE* ';' (slot '@' NODE* (',' slot '@' NODE*)*)? ']'
                                                  N nodes 0..N-1, external nodes, edges
             | JSON object                        edge labels are slot strings
             | 'h' '(' slot ')'                   handle
             | 'SG' '(' slot (',' slot)* ')'      string graph
             | GADGET ['[' NAME ']'] '(' slot (',' slot)* ')'
    sequent := graph '->' formula

GADGET is one of R, K, U, KO, Rb, Kb, Ub, RbO.
"""
from __future__ import annotations

import json
import re
from typing import Any

from ..hypergraph import Hypergraph, handle, string_graph
from .formulas import Division, Formula, FormulaError, Hole, Primitive, Product, Sequent

_PRIM = re.compile(r"([A-Za-z_][\w:.']*):(\d+)")
_NAME = re.compile(r"[A-Za-z_]\w*")


class HLParseError(ValueError):
    def __init__(self, message: str, text: str, offset: int) -> None:
        line = text.count("\n", 0, offset) + 1
        col = offset - (text.rfind("\n", 0, offset) + 1) + 1
        super().__init__(f"line {line}, column {col}: {message}")
        self.line, self.col = line, col


# ---------------------------------------------------------------------------
# printing

def format_label(a: Any) -> str:
    if isinstance(a, Hole):
        return f"${a.rank}"
    if isinstance(a, Formula):
        return format_formula(a)
    return str(a)


def format_graph(G: Hypergraph) -> str:
    """Compact bracket form; node ids are renumbered in order, edge ids dropped."""
    nid = {v: i for i, v in enumerate(G.nodes)}
    ext = " ".join(str(nid[v]) for v in G.ext)
    edges = ", ".join(f"{format_label(G.lab[e])} @ " + " ".join(str(nid[v]) for v in G.att[e])
                      for e in G.edges)
    return f"[{len(G.nodes)}; {ext}; {edges}]"


def format_formula(A: Formula) -> str:
    if isinstance(A, Primitive):
        return f"{A.name}:{A.rank}"
    if isinstance(A, Product):
        return f"x({format_graph(A.graph)})"
    if isinstance(A, Division):
        return f"div({format_formula(A.numerator)}, {format_graph(A.denominator)})"
    raise TypeError(A)


def graph_to_json(G: Hypergraph, encode=None) -> dict:
    encode = encode or label_to_json
    return {
        "nodes": list(G.nodes),
        "edges": [{"id": e, "label": encode(G.lab[e]), "rank": len(G.att[e]), "att": list(G.att[e])}
                  for e in G.edges],
        "ext": list(G.ext),
    }


def label_to_json(a: Any) -> Any:
    if isinstance(a, Hole):
        return {"hole": a.rank}
    if isinstance(a, Primitive):
        return {"prim": a.name, "rank": a.rank}
    if isinstance(a, Product):
        return {"prod": graph_to_json(a.graph)}
    if isinstance(a, Division):
        return {"div": [label_to_json(a.numerator), graph_to_json(a.denominator)]}
    raise TypeError(a)


formula_to_json = label_to_json


def label_from_json(data: Any) -> Any:
    if isinstance(data, str):
        return parse_slot(data)
    if "hole" in data:
        return Hole(int(data["hole"]))
    if "prim" in data:
        return Primitive(data["prim"], int(data["rank"]))
    if "prod" in data:
        return Product(graph_from_json(data["prod"]))
    if "div" in data:
        num, den = data["div"]
        return Division(label_from_json(num), graph_from_json(den))
    raise FormulaError(f"not a formula: {data!r}")


formula_from_json = label_from_json


def graph_from_json(data: dict | str) -> Hypergraph:
    if isinstance(data, str):
        data = json.loads(data)
    att, lab = {}, {}
    for item in data["edges"]:
        e = int(item["id"])
        att[e] = tuple(item["att"])
        lab[e] = label_from_json(item["label"])
    return Hypergraph(tuple(data["nodes"]), att, lab, tuple(data.get("ext", ())))


def sequent_to_json(s: Sequent) -> dict:
    return {"antecedent": graph_to_json(s.antecedent), "succedent": label_to_json(s.succedent)}


def sequent_from_json(data: dict | str) -> Sequent:
    if isinstance(data, str):
        data = json.loads(data)
    return Sequent(graph_from_json(data["antecedent"]), label_from_json(data["succedent"]))


# ---------------------------------------------------------------------------
# parsing

class _Parser:
    def __init__(self, text: str) -> None:
        self.text = text
        self.pos = 0

    def fail(self, msg: str) -> HLParseError:
        return HLParseError(msg, self.text, self.pos)

    def ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self, s: str) -> bool:
        self.ws()
        return self.text.startswith(s, self.pos)

    def eat(self, s: str) -> None:
        if not self.peek(s):
            raise self.fail(f"expected {s!r}")
        self.pos += len(s)

    def word(self) -> str | None:
        self.ws()
        m = _NAME.match(self.text, self.pos)
        return m.group(0) if m else None

    def formula(self) -> Formula:
        self.ws()
        w = self.word()
        after = self.pos + len(w) if w else self.pos
        if w == "x" and self.text.startswith("(", after):
            self.pos = after
            self.eat("(")
            G = self.graph()
            self.eat(")")
            return Product(G)
        if w == "div" and self.text.startswith("(", after):
            self.pos = after
            self.eat("(")
            N = self.formula()
            self.eat(",")
            D = self.graph()
            self.eat(")")
            try:
                return Division(N, D)
            except FormulaError as exc:
                raise self.fail(str(exc)) from exc
        m = _PRIM.match(self.text, self.pos)
        if m is None:
            raise self.fail("expected a formula")
        self.pos = m.end()
        return Primitive(m.group(1), int(m.group(2)))

    def slot(self) -> Any:
        if self.peek("$"):
            self.pos += 1
            m = re.compile(r"\d+").match(self.text, self.pos)
            if m is None:
                raise self.fail("expected a hole rank")
            self.pos = m.end()
            return Hole(int(m.group(0)))
        return self.formula()

    def args(self) -> list[Any]:
        self.eat("(")
        out = [self.slot()]
        while self.peek(","):
            self.pos += 1
            out.append(self.slot())
        self.eat(")")
        return out

    def graph(self) -> Hypergraph:
        from ..embed import GADGETS
        self.ws()
        if self.peek("{"):
            try:
                data, end = json.JSONDecoder().raw_decode(self.text, self.pos)
                G = graph_from_json(data)
            except (ValueError, KeyError, TypeError) as exc:
                raise self.fail(f"bad graph: {exc}") from exc
            self.pos = end
            return G
        if self.peek("["):
            return self.bracket_graph()
        start = self.pos
        w = self.word()
        if w is None:
            raise self.fail("expected a graph")
        self.pos += len(w)
        index = None
        if self.peek("["):
            self.pos += 1
            index = self.word()
            if index is None:
                raise self.fail("expected an index name")
            self.pos += len(index)
            self.eat("]")
        if not self.peek("("):
            self.pos = start
            raise self.fail(f"expected a graph, found {w!r}")
        args = self.args()
        try:
            if w == "h" and len(args) == 1 and index is None:
                return handle(args[0])
            if w == "SG" and index is None:
                return string_graph(args)
            if w in GADGETS:
                if w in ("KO", "RbO"):
                    return GADGETS[w](*args, **({"o": index} if index else {}))
                if index is None:
                    raise self.fail(f"gadget {w} needs an index, e.g. {w}[x]")
                return GADGETS[w](index, *args)
        except HLParseError:
            raise
        except TypeError as exc:
            self.pos = start
            raise self.fail(f"wrong number of arguments for {w}") from exc
        except ValueError as exc:
            self.pos = start
            raise self.fail(str(exc)) from exc
        self.pos = start
        raise self.fail(f"unknown graph constructor {w!r}")

    def nodes(self) -> list[int]:
        out = []
        while True:
            self.ws()
            m = re.compile(r"\d+").match(self.text, self.pos)
            if m is None:
                return out
            out.append(int(m.group(0)))
            self.pos = m.end()

    def bracket_graph(self) -> Hypergraph:
        start = self.pos
        self.eat("[")
        n = self.nodes()
        if len(n) != 1:
            raise self.fail("expected the node count")
        self.eat(";")
        ext = self.nodes()
        self.eat(";")
        att, lab = {}, {}
        if not self.peek("]"):
            while True:
                e = len(att)
                lab[e] = self.slot()
                self.eat("@")
                att[e] = tuple(self.nodes())
                if not self.peek(","):
                    break
                self.pos += 1
        self.eat("]")
        try:
            return Hypergraph(tuple(range(n[0])), att, lab, tuple(ext))
        except ValueError as exc:
            self.pos = start
            raise self.fail(str(exc)) from exc

    def end(self) -> None:
        self.ws()
        if self.pos != len(self.text):
            raise self.fail("trailing input")


def parse_formula(text: str) -> Formula:
    p = _Parser(text)
    A = p.formula()
    p.end()
    return A


def parse_slot(text: str) -> Any:
    p = _Parser(text)
    A = p.slot()
    p.end()
    return A


def parse_graph(text: str) -> Hypergraph:
    p = _Parser(text)
    G = p.graph()
    p.end()
    return G


def parse_sequent(text: str) -> Sequent:
    """Accepts ``graph -> formula`` or the JSON sequent form."""
    stripped = text.strip()
    if stripped.startswith("{"):
        try:
            data = json.loads(stripped)
        except ValueError:
            data = None
        if isinstance(data, dict) and "antecedent" in data:
            return sequent_from_json(data)
    p = _Parser(text)
    G = p.graph()
    p.eat("->")
    A = p.formula()
    p.end()
    try:
        return Sequent(G, A)
    except FormulaError as exc:
        raise HLParseError(str(exc), text, 0) from exc
