"""Contexts and the structural postulates (P), (A_l), (A_r).

Structural equivalence is handled through a canonical member of each
class: commutative pairs are ordered by their textual key, associative
spines are flattened and rebuilt right-nested (and sorted when the mode
is also commutative).
"""
from __future__ import annotations

from itertools import permutations
from typing import Iterator

from .terms import Angle, Database, Leaf, Pair, Signature

P, AL, AR = "P", "Al", "Ar"
STRUCTURAL = (P, AL, AR)
Path = tuple[int, ...]


class PathError(LookupError):
    pass


def contexts(t: Database, path: Path = ()) -> list[tuple[Path, Database]]:
    out = [(path, t)]
    if isinstance(t, Pair):
        out += contexts(t.left, path + (0,))
        out += contexts(t.right, path + (1,))
    elif isinstance(t, Angle):
        out += contexts(t.body, path + (0,))
    return out


def subterm(t: Database, path: Path) -> Database:
    for k in path:
        if isinstance(t, Pair) and k in (0, 1):
            t = t.left if k == 0 else t.right
        elif isinstance(t, Angle) and k == 0:
            t = t.body
        else:
            raise PathError(path)
    return t


def plug(t: Database, path: Path, new: Database) -> Database:
    if not path:
        return new
    k, rest = path[0], path[1:]
    if isinstance(t, Pair) and k == 0:
        return Pair(t.mode, plug(t.left, rest, new), t.right)
    if isinstance(t, Pair) and k == 1:
        return Pair(t.mode, t.left, plug(t.right, rest, new))
    if isinstance(t, Angle) and k == 0:
        return Angle(t.mod, plug(t.body, rest, new))
    raise PathError(path)


def apply_step(t: Database, rule: str, path: Path) -> Database:
    """Read bottom-up: ``t`` is the conclusion, the result is the premise."""
    s = subterm(t, path)
    if not isinstance(s, Pair):
        raise PathError(f"{rule} at {path}: not a pair")
    if rule == P:
        return plug(t, path, Pair(s.mode, s.right, s.left))
    if rule == AL:
        if not (isinstance(s.left, Pair) and s.left.mode == s.mode):
            raise PathError(f"Al at {path}: no left nested pair")
        a, b, c = s.left.left, s.left.right, s.right
        return plug(t, path, Pair(s.mode, a, Pair(s.mode, b, c)))
    if rule == AR:
        if not (isinstance(s.right, Pair) and s.right.mode == s.mode):
            raise PathError(f"Ar at {path}: no right nested pair")
        a, b, c = s.left, s.right.left, s.right.right
        return plug(t, path, Pair(s.mode, Pair(s.mode, a, b), c))
    raise ValueError(rule)


def inverse(rule: str) -> str:
    return {P: P, AL: AR, AR: AL}[rule]


def single_steps(t: Database, sig: Signature) -> Iterator[tuple[str, Path, Database]]:
    for path, s in contexts(t):
        if not isinstance(s, Pair):
            continue
        if sig.is_comm(s.mode):
            yield P, path, apply_step(t, P, path)
        if sig.is_assoc(s.mode):
            if isinstance(s.left, Pair) and s.left.mode == s.mode:
                yield AL, path, apply_step(t, AL, path)
            if isinstance(s.right, Pair) and s.right.mode == s.mode:
                yield AR, path, apply_step(t, AR, path)


# ---------------------------------------------------------------------------
# canonical representatives

def key(t: Database) -> str:
    return str(t)


def spine(t: Database, mode: str) -> list[Database]:
    if isinstance(t, Pair) and t.mode == mode:
        return spine(t.left, mode) + spine(t.right, mode)
    return [t]


def nest(mode: str, items: list[Database]) -> Database:
    out = items[-1]
    for x in reversed(items[:-1]):
        out = Pair(mode, x, out)
    return out


def canon(t: Database, sig: Signature) -> Database:
    if isinstance(t, Leaf):
        return t
    if isinstance(t, Angle):
        return Angle(t.mod, canon(t.body, sig))
    left, right = canon(t.left, sig), canon(t.right, sig)
    if sig.is_assoc(t.mode):
        items = spine(left, t.mode) + spine(right, t.mode)
        if sig.is_comm(t.mode):
            items.sort(key=key)
        return nest(t.mode, items)
    if sig.is_comm(t.mode) and key(right) < key(left):
        left, right = right, left
    return Pair(t.mode, left, right)


def _shift(steps: list[tuple[str, Path]], prefix: Path) -> list[tuple[str, Path]]:
    return [(r, prefix + p) for r, p in steps]


def _merge(mode: str, left: Database, right: Database, path: Path) -> tuple[Database, list]:
    if isinstance(left, Pair) and left.mode == mode:
        sub, steps = _merge(mode, left.right, right, path + (1,))
        return Pair(mode, left.left, sub), [(AL, path)] + steps
    return Pair(mode, left, right), []


def _norm(t: Database, sig: Signature) -> tuple[Database, list[tuple[str, Path]]]:
    if isinstance(t, Leaf):
        return t, []
    if isinstance(t, Angle):
        b, steps = _norm(t.body, sig)
        return Angle(t.mod, b), _shift(steps, (0,))
    left, s1 = _norm(t.left, sig)
    right, s2 = _norm(t.right, sig)
    steps = _shift(s1, (0,)) + _shift(s2, (1,))
    if not sig.is_assoc(t.mode):
        if sig.is_comm(t.mode) and key(right) < key(left):
            return Pair(t.mode, right, left), steps + [(P, ())]
        return Pair(t.mode, left, right), steps
    cur, merge_steps = _merge(t.mode, left, right, ())
    steps += merge_steps
    if sig.is_comm(t.mode):
        items = spine(cur, t.mode)
        n = len(items)
        for end in range(n - 1, 0, -1):
            for k in range(end):
                if key(items[k + 1]) < key(items[k]):
                    q = (1,) * k
                    if k + 1 == n - 1:
                        steps.append((P, q))
                    else:
                        steps += [(AR, q), (P, q + (0,)), (AL, q)]
                    items[k], items[k + 1] = items[k + 1], items[k]
        cur = nest(t.mode, items)
    return cur, steps


def normalize_steps(t: Database, sig: Signature) -> list[tuple[str, Path]]:
    """Structural steps (read bottom-up) leading from ``t`` to ``canon(t)``."""
    return _norm(t, sig)[1]


def structural_path(src: Database, dst: Database, sig: Signature) -> list[tuple[str, Path]]:
    """Steps from ``src`` to ``dst``; both must be structurally equivalent."""
    there = normalize_steps(src, sig)
    back = normalize_steps(dst, sig)
    if canon(src, sig) != canon(dst, sig):
        raise ValueError(f"{src} and {dst} are not structurally equivalent")
    return there + [(inverse(r), p) for r, p in reversed(back)]


def replay(t: Database, steps: list[tuple[str, Path]]) -> list[Database]:
    terms = [t]
    for r, p in steps:
        terms.append(apply_step(terms[-1], r, p))
    return terms


# ---------------------------------------------------------------------------
# class enumeration

def _bracketings(mode: str, items: tuple[Database, ...]) -> Iterator[Database]:
    if len(items) == 1:
        yield items[0]
        return
    for k in range(1, len(items)):
        for l in _bracketings(mode, items[:k]):
            for r in _bracketings(mode, items[k:]):
                yield Pair(mode, l, r)


def _members(t: Database, sig: Signature) -> set[Database]:
    if isinstance(t, Leaf):
        return {t}
    if isinstance(t, Angle):
        return {Angle(t.mod, b) for b in _members(t.body, sig)}
    if sig.is_assoc(t.mode):
        items = spine(t, t.mode)
        choices = [sorted(_members(x, sig), key=key) for x in items]
        out: set[Database] = set()

        def pick(k: int, acc: list[Database]) -> None:
            if k == len(choices):
                orders = set(permutations(acc)) if sig.is_comm(t.mode) else {tuple(acc)}
                for order in orders:
                    out.update(_bracketings(t.mode, order))
                return
            for c in choices[k]:
                pick(k + 1, acc + [c])

        pick(0, [])
        return out
    out = set()
    for l in _members(t.left, sig):
        for r in _members(t.right, sig):
            out.add(Pair(t.mode, l, r))
            if sig.is_comm(t.mode):
                out.add(Pair(t.mode, r, l))
    return out


def structural_class(t: Database, sig: Signature) -> set[Database]:
    return _members(t, sig)


def equivalent(a: Database, b: Database, sig: Signature) -> bool:
    return canon(a, sig) == canon(b, sig)
