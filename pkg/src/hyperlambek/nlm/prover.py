"""Decision procedure for NL♦ by backward search modulo structural equivalence."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterator

from .structure import (AL, AR, P, STRUCTURAL, Path, apply_step, canon, contexts, key, nest,
                        plug, spine, structural_path, subterm)
from .terms import (Angle, Box, Database, Diamond, Formula, Leaf, NLMSequent, Over, Pair, Prod,
                    Signature, Under, check_over)

AX = "ax"
PROD_L, PROD_R = "*L", "*R"
UNDER_L, UNDER_R = "\\L", "\\R"
OVER_L, OVER_R = "/L", "/R"
DIA_L, DIA_R = "<>L", "<>R"
BOX_L, BOX_R = "[]L", "[]R"
LOGICAL = (AX, PROD_L, PROD_R, UNDER_L, UNDER_R, OVER_L, OVER_R, DIA_L, DIA_R, BOX_L, BOX_R)


@dataclass(frozen=True)
class NLMDerivation:
    conclusion: NLMSequent
    rule: str
    premises: tuple["NLMDerivation", ...] = ()
    position: Path = ()

    def walk(self) -> Iterator["NLMDerivation"]:
        yield self
        for p in self.premises:
            yield from p.walk()

    def size(self) -> int:
        return 1 + sum(p.size() for p in self.premises)

    def rules(self) -> list[str]:
        return [d.rule for d in self.walk()]

    def to_dict(self) -> dict:
        return {
            "rule": self.rule,
            "conclusion": str(self.conclusion),
            "position": list(self.position),
            "premises": [p.to_dict() for p in self.premises],
        }

    def to_text(self, indent: int = 0) -> str:
        pad = "  " * indent
        lines = [f"{pad}{self.conclusion}   [{self.rule}]"]
        lines += [p.to_text(indent + 1) for p in self.premises]
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# exact rule schemas (no structural reasoning)

def schema_premises(seq: NLMSequent, rule: str, pos: Path) -> list[NLMSequent] | None:
    """Premises of ``rule`` applied at ``pos`` of the antecedent, or None."""
    G, C = seq.antecedent, seq.succedent
    try:
        s = subterm(G, pos)
    except LookupError:
        return None
    if rule == AX:
        return [] if G == Leaf(C) and pos == () else None
    if rule == PROD_L and isinstance(s, Leaf) and isinstance(s.formula, Prod):
        A = s.formula
        return [NLMSequent(plug(G, pos, Pair(A.mode, Leaf(A.left), Leaf(A.right))), C)]
    if rule == DIA_L and isinstance(s, Leaf) and isinstance(s.formula, Diamond):
        return [NLMSequent(plug(G, pos, Angle(s.formula.mod, Leaf(s.formula.body))), C)]
    if rule == UNDER_L and isinstance(s, Pair) and isinstance(s.right, Leaf):
        A = s.right.formula
        if isinstance(A, Under) and A.mode == s.mode:
            return [NLMSequent(plug(G, pos, Leaf(A.num)), C), NLMSequent(s.left, A.den)]
    if rule == OVER_L and isinstance(s, Pair) and isinstance(s.left, Leaf):
        A = s.left.formula
        if isinstance(A, Over) and A.mode == s.mode:
            return [NLMSequent(plug(G, pos, Leaf(A.num)), C), NLMSequent(s.right, A.den)]
    if rule == BOX_L and isinstance(s, Angle) and isinstance(s.body, Leaf):
        A = s.body.formula
        if isinstance(A, Box) and A.mod == s.mod:
            return [NLMSequent(plug(G, pos, Leaf(A.body)), C)]
    if pos != ():
        return None
    if rule == PROD_R and isinstance(C, Prod) and isinstance(G, Pair) and G.mode == C.mode:
        return [NLMSequent(G.left, C.left), NLMSequent(G.right, C.right)]
    if rule == DIA_R and isinstance(C, Diamond) and isinstance(G, Angle) and G.mod == C.mod:
        return [NLMSequent(G.body, C.body)]
    if rule == UNDER_R and isinstance(C, Under):
        return [NLMSequent(Pair(C.mode, Leaf(C.den), G), C.num)]
    if rule == OVER_R and isinstance(C, Over):
        return [NLMSequent(Pair(C.mode, G, Leaf(C.den)), C.num)]
    if rule == BOX_R and isinstance(C, Box):
        return [NLMSequent(Angle(C.mod, G), C.body)]
    return None


def check_rule_nlm(d: NLMDerivation, sig: Signature) -> tuple[bool, str]:
    seq = d.conclusion
    prem = [p.conclusion for p in d.premises]
    try:
        check_over(seq, sig)
    except ValueError as exc:
        return False, str(exc)
    if d.rule in STRUCTURAL:
        if len(prem) != 1 or prem[0].succedent != seq.succedent:
            return False, f"({d.rule}) needs one premise with the same succedent"
        try:
            s = subterm(seq.antecedent, d.position)
            expected = apply_step(seq.antecedent, d.rule, d.position)
        except LookupError as exc:
            return False, f"({d.rule}) does not apply: {exc}"
        if d.rule == P and not sig.is_comm(s.mode):
            return False, f"(P) applied to non-commutative mode {s.mode}"
        if d.rule in (AL, AR) and not sig.is_assoc(s.mode):
            return False, f"({d.rule}) applied to non-associative mode {s.mode}"
        if expected != prem[0].antecedent:
            return False, f"({d.rule}) premise mismatch"
        return True, ""
    if d.rule not in LOGICAL:
        return False, f"unknown rule {d.rule!r}"
    expected = schema_premises(seq, d.rule, d.position)
    if expected is None:
        return False, f"({d.rule}) does not apply at {d.position}"
    if expected != prem:
        return False, f"({d.rule}) premises differ from the schema"
    return True, ""


def check_derivation_nlm(d: NLMDerivation, sig: Signature) -> tuple[bool, str]:
    for node in d.walk():
        ok, why = check_rule_nlm(node, sig)
        if not ok:
            return False, f"{why} at {node.conclusion}"
    return True, ""


# ---------------------------------------------------------------------------
# search

Plan = tuple[str, Database, Path]


def _spine_heads(t: Database, sig: Signature, path: Path = (), parent: str | None = None
                 ) -> Iterator[tuple[Path, Database]]:
    """Positions of maximal nodes, treating associative spines as one n-ary node."""
    if isinstance(t, Pair) and sig.is_assoc(t.mode) and t.mode == parent:
        return
    yield path, t
    if isinstance(t, Angle):
        yield from _spine_heads(t.body, sig, path + (0,))
    elif isinstance(t, Pair):
        if sig.is_assoc(t.mode):
            items = spine(t, t.mode)
            for k in range(len(items)):
                yield from _spine_heads(items[k], sig, _item_path(path, k, len(items)))
        else:
            yield from _spine_heads(t.left, sig, path + (0,))
            yield from _spine_heads(t.right, sig, path + (1,))


def _item_path(path: Path, k: int, n: int) -> Path:
    return path + (1,) * k + ((0,) if k < n - 1 else ())


def _subsets(n: int, exclude: int | None = None) -> Iterator[tuple[int, ...]]:
    pool = [i for i in range(n) if i != exclude]
    for r in range(1, len(pool) + 1):
        yield from combinations(pool, r)


def _candidates(t: Database, C: Formula, sig: Signature) -> Iterator[Plan]:
    """Rule applications to members of the class of canonical ``t``."""
    if t == Leaf(C):
        yield AX, t, ()
        return
    if isinstance(C, Under):
        yield UNDER_R, t, ()
        return
    if isinstance(C, Over):
        yield OVER_R, t, ()
        return
    if isinstance(C, Box):
        yield BOX_R, t, ()
        return
    for path, s in contexts(t):
        if isinstance(s, Leaf) and isinstance(s.formula, Prod):
            yield PROD_L, t, path
            return
        if isinstance(s, Leaf) and isinstance(s.formula, Diamond):
            yield DIA_L, t, path
            return
    if isinstance(C, Diamond) and isinstance(t, Angle) and t.mod == C.mod:
        yield DIA_R, t, ()
    if isinstance(C, Prod) and isinstance(t, Pair) and t.mode == C.mode:
        i = t.mode
        if sig.is_assoc(i):
            items = spine(t, i)
            n = len(items)
            if sig.is_comm(i):
                seen = set()
                for S in _subsets(n):
                    if len(S) == n:
                        continue
                    left = [items[k] for k in S]
                    right = [items[k] for k in range(n) if k not in S]
                    sig_ = (tuple(map(key, left)), tuple(map(key, right)))
                    if sig_ in seen:
                        continue
                    seen.add(sig_)
                    yield PROD_R, Pair(i, nest(i, left), nest(i, right)), ()
            else:
                for k in range(1, n):
                    yield PROD_R, Pair(i, nest(i, items[:k]), nest(i, items[k:])), ()
        else:
            yield PROD_R, t, ()
            if sig.is_comm(i) and t.left != t.right:
                yield PROD_R, Pair(i, t.right, t.left), ()
    for path, s in _spine_heads(t, sig):
        if isinstance(s, Angle) and isinstance(s.body, Leaf):
            A = s.body.formula
            if isinstance(A, Box) and A.mod == s.mod:
                yield BOX_L, t, path
        if not isinstance(s, Pair):
            continue
        i = s.mode
        if not sig.is_assoc(i):
            for swap in ((False, True) if sig.is_comm(i) else (False,)):
                node = Pair(i, s.right, s.left) if swap else s
                X = plug(t, path, node) if swap else t
                if isinstance(node.right, Leaf) and isinstance(node.right.formula, Under) \
                        and node.right.formula.mode == i:
                    yield UNDER_L, X, path
                if isinstance(node.left, Leaf) and isinstance(node.left.formula, Over) \
                        and node.left.formula.mode == i:
                    yield OVER_L, X, path
            continue
        items = spine(s, i)
        n = len(items)
        for k, x in enumerate(items):
            if not isinstance(x, Leaf):
                continue
            A = x.formula
            under = isinstance(A, Under) and A.mode == i
            over = isinstance(A, Over) and A.mode == i
            if not (under or over):
                continue
            if sig.is_comm(i):
                seen = set()
                for S in _subsets(n, exclude=k):
                    block = [items[m] for m in S]
                    rest = [items[m] for m in range(n) if m != k and m not in S]
                    sig_ = tuple(map(key, block))
                    if sig_ in seen:
                        continue
                    seen.add(sig_)
                    z = Pair(i, nest(i, block), x) if under else Pair(i, x, nest(i, block))
                    new = rest + [z]
                    yield (UNDER_L if under else OVER_L), plug(t, path, nest(i, new)), \
                        _item_path(path, len(new) - 1, len(new))
            else:
                blocks = ([(m, k) for m in range(k)] if under
                          else [(k + 1, m) for m in range(k + 2, n + 1)])
                for lo, hi in blocks:
                    block = items[lo:hi]
                    z = Pair(i, nest(i, block), x) if under else Pair(i, x, nest(i, block))
                    new = items[:min(lo, k)] + [z] + items[max(hi, k + 1):]
                    idx = min(lo, k)
                    yield (UNDER_L if under else OVER_L), plug(t, path, nest(i, new)), \
                        _item_path(path, idx, len(new))


class NLMProver:
    """Memoized decision procedure; memo keys are canonical class members."""

    def __init__(self, sig: Signature) -> None:
        self.sig = sig
        self._memo: dict[tuple[Database, Formula], Plan | None] = {}

    def derivable(self, seq: NLMSequent) -> bool:
        return self._solve(canon(seq.antecedent, self.sig), seq.succedent) is not None

    def _solve(self, t: Database, C: Formula) -> Plan | None:
        k = (t, C)
        if k in self._memo:
            return self._memo[k]
        self._memo[k] = None
        found = None
        for rule, X, pos in _candidates(t, C, self.sig):
            prem = schema_premises(NLMSequent(X, C), rule, pos)
            assert prem is not None, (rule, X, pos)
            if all(self._solve(canon(p.antecedent, self.sig), p.succedent) is not None
                   for p in prem):
                found = (rule, X, pos)
                break
        self._memo[k] = found
        return found

    def prove(self, seq: NLMSequent) -> NLMDerivation | None:
        check_over(seq, self.sig)
        if not self.derivable(seq):
            return None
        return self._materialize(seq.antecedent, seq.succedent)

    def _materialize(self, X: Database, C: Formula) -> NLMDerivation:
        plan = self._memo[(canon(X, self.sig), C)]
        assert plan is not None
        rule, target, pos = plan
        prem = schema_premises(NLMSequent(target, C), rule, pos)
        node = NLMDerivation(NLMSequent(target, C), rule,
                             tuple(self._materialize(p.antecedent, p.succedent) for p in prem), pos)
        steps = structural_path(X, target, self.sig)
        terms = [X]
        for r, p in steps:
            terms.append(apply_step(terms[-1], r, p))
        for (r, p), term in zip(reversed(steps), reversed(terms[:-1])):
            node = NLMDerivation(NLMSequent(term, C), r, (node,), p)
        return node


def prove_nlm(seq: NLMSequent, sig: Signature) -> NLMDerivation | None:
    return NLMProver(sig).prove(seq)
