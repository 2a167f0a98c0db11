"""Formulas, structured databases, signatures and sequents of NL♦."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Union


class SignatureError(ValueError):
    pass


class UnsupportedSignature(SignatureError):
    """More than one associative mode: no embedding is available."""


@dataclass(frozen=True)
class Signature:
    modes: frozenset[str] = frozenset()
    modalities: frozenset[str] = frozenset()
    commutative: frozenset[str] = frozenset()
    associative: frozenset[str] = frozenset()
    allow_multi_assoc: bool = field(default=False, compare=False)

    def __post_init__(self) -> None:
        for name in ("modes", "modalities", "commutative", "associative"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        object.__setattr__(self, "modes", self.modes | self.commutative | self.associative)
        if self.modes & self.modalities:
            raise SignatureError(f"modes and modalities overlap: {sorted(self.modes & self.modalities)}")
        if len(self.associative) > 1 and not self.allow_multi_assoc:
            raise UnsupportedSignature(
                f"at most one associative mode is supported, got {sorted(self.associative)}")

    @property
    def case(self) -> int:
        if len(self.associative) > 1:
            raise UnsupportedSignature("no translation case for |A| > 1")
        if not self.associative:
            return 1 if not self.commutative and not self.modalities else 2
        (o,) = self.associative
        return 3 if o in self.commutative else 4

    @property
    def assoc_mode(self) -> str | None:
        return next(iter(self.associative), None) if len(self.associative) == 1 else None

    def is_comm(self, i: str) -> bool:
        return i in self.commutative

    def is_assoc(self, i: str) -> bool:
        return i in self.associative

    def to_json(self) -> dict:
        return {
            "modes": sorted(self.modes - self.commutative - self.associative),
            "modalities": sorted(self.modalities),
            "commutative": sorted(self.commutative),
            "associative": sorted(self.associative),
        }

    @classmethod
    def from_json(cls, data: dict | str, allow_multi_assoc: bool = False) -> "Signature":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(frozenset(data.get("modes", ())), frozenset(data.get("modalities", ())),
                   frozenset(data.get("commutative", ())), frozenset(data.get("associative", ())),
                   allow_multi_assoc=allow_multi_assoc)

    @classmethod
    def load(cls, path: str | Path) -> "Signature":
        return cls.from_json(Path(path).read_text())

    def merged(self, modes: Iterable[str] = (), modalities: Iterable[str] = ()) -> "Signature":
        return Signature(self.modes | set(modes), self.modalities | set(modalities),
                         self.commutative, self.associative, self.allow_multi_assoc)


# ---------------------------------------------------------------------------
# formulas

@dataclass(frozen=True)
class Atom:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Prod:
    mode: str
    left: "Formula"
    right: "Formula"

    def __str__(self) -> str:
        return f"({self.left} *{self.mode} {self.right})"


@dataclass(frozen=True)
class Under:
    """``B \\_i A``: looks for ``B`` on the left."""
    mode: str
    den: "Formula"
    num: "Formula"

    def __str__(self) -> str:
        return f"({self.den} \\{self.mode} {self.num})"


@dataclass(frozen=True)
class Over:
    """``A /_i B``: looks for ``B`` on the right."""
    mode: str
    num: "Formula"
    den: "Formula"

    def __str__(self) -> str:
        return f"({self.num} /{self.mode} {self.den})"


@dataclass(frozen=True)
class Diamond:
    mod: str
    body: "Formula"

    def __str__(self) -> str:
        return f"<>{self.mod} {self.body}"


@dataclass(frozen=True)
class Box:
    mod: str
    body: "Formula"

    def __str__(self) -> str:
        return f"[]{self.mod} {self.body}"


Formula = Union[Atom, Prod, Under, Over, Diamond, Box]


def fsize(A: Formula) -> int:
    """Symbol count: atoms plus connectives."""
    if isinstance(A, Atom):
        return 1
    if isinstance(A, (Diamond, Box)):
        return 1 + fsize(A.body)
    a, b = _binary_parts(A)
    return 1 + fsize(a) + fsize(b)


def fdepth(A: Formula) -> int:
    if isinstance(A, Atom):
        return 0
    if isinstance(A, (Diamond, Box)):
        return 1 + fdepth(A.body)
    a, b = _binary_parts(A)
    return 1 + max(fdepth(a), fdepth(b))


def _binary_parts(A: Formula) -> tuple[Formula, Formula]:
    if isinstance(A, Prod):
        return A.left, A.right
    if isinstance(A, Under):
        return A.den, A.num
    if isinstance(A, Over):
        return A.num, A.den
    raise TypeError(A)


def formula_indices(A: Formula) -> tuple[set[str], set[str]]:
    """Modes and modalities occurring in ``A``."""
    if isinstance(A, Atom):
        return set(), set()
    if isinstance(A, (Diamond, Box)):
        m, j = formula_indices(A.body)
        return m, j | {A.mod}
    a, b = _binary_parts(A)
    m1, j1 = formula_indices(a)
    m2, j2 = formula_indices(b)
    return m1 | m2 | {A.mode}, j1 | j2


def atoms_of(A: Formula) -> list[str]:
    if isinstance(A, Atom):
        return [A.name]
    if isinstance(A, (Diamond, Box)):
        return atoms_of(A.body)
    a, b = _binary_parts(A)
    return atoms_of(a) + atoms_of(b)


# ---------------------------------------------------------------------------
# structured databases

@dataclass(frozen=True)
class Leaf:
    formula: Formula

    def __str__(self) -> str:
        s = str(self.formula)
        return s[1:-1] if isinstance(self.formula, (Prod, Under, Over)) else s


@dataclass(frozen=True)
class Pair:
    mode: str
    left: "Database"
    right: "Database"

    def __str__(self) -> str:
        return f"({self.left}, {self.right})^{self.mode}"


@dataclass(frozen=True)
class Angle:
    mod: str
    body: "Database"

    def __str__(self) -> str:
        return f"<{self.body}>^{self.mod}"


Database = Union[Leaf, Pair, Angle]
Path_ = tuple[int, ...]


def leaves(P: Database) -> list[Formula]:
    if isinstance(P, Leaf):
        return [P.formula]
    if isinstance(P, Angle):
        return leaves(P.body)
    return leaves(P.left) + leaves(P.right)


def db_indices(P: Database) -> tuple[set[str], set[str]]:
    if isinstance(P, Leaf):
        return formula_indices(P.formula)
    if isinstance(P, Angle):
        m, j = db_indices(P.body)
        return m, j | {P.mod}
    m1, j1 = db_indices(P.left)
    m2, j2 = db_indices(P.right)
    return m1 | m2 | {P.mode}, j1 | j2


def db_size(P: Database) -> int:
    return sum(fsize(A) for A in leaves(P))


@dataclass(frozen=True)
class NLMSequent:
    antecedent: Database
    succedent: Formula

    def __str__(self) -> str:
        return f"{self.antecedent} -> {_top(self.succedent)}"

    def indices(self) -> tuple[set[str], set[str]]:
        m1, j1 = db_indices(self.antecedent)
        m2, j2 = formula_indices(self.succedent)
        return m1 | m2, j1 | j2

    def size(self) -> int:
        return db_size(self.antecedent) + fsize(self.succedent)


def _top(A: Formula) -> str:
    s = str(A)
    return s[1:-1] if isinstance(A, (Prod, Under, Over)) else s


def check_over(seq: NLMSequent, sig: Signature) -> None:
    modes, mods = seq.indices()
    if not modes <= sig.modes:
        raise SignatureError(f"modes {sorted(modes - sig.modes)} not in signature")
    if not mods <= sig.modalities:
        raise SignatureError(f"modalities {sorted(mods - sig.modalities)} not in signature")


def infer_signature(seq: NLMSequent) -> Signature:
    modes, mods = seq.indices()
    return Signature(frozenset(modes), frozenset(mods))
