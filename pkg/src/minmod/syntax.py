"""Concept language, knowledge bases, and their text format.

Concepts are immutable trees. Every node carries a structural key that
doubles as a total order, so conjunctions and disjunctions can keep their
children sorted and deduplicated; two concepts are equal exactly when
their keys are.

Text format, one axiom or assertion per line::

    Fan [= exists likes. Movie
    (Critic and {bob}) [= exists dislikes^-. TOP
    Fan(ann)
    likes(ann, m)      # comments run to end of line
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence, Union

IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class ParseError(ValueError):
    """Raised on malformed input; carries 1-based line and column."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


def _check_name(name: str) -> str:
    if not isinstance(name, str) or not IDENT.match(name):
        raise ValueError(f"invalid name {name!r}")
    return name


@dataclass(frozen=True, order=True)
class Role:
    name: str
    inverse: bool = False

    def __post_init__(self):
        _check_name(self.name)

    def __str__(self) -> str:
        return self.name + ("^-" if self.inverse else "")


class Concept:
    """Base class for concept nodes.

    Subclasses set ``key`` (a nested tuple starting with a tag rank) in
    ``__post_init__``; equality, hashing and ordering all go through it.
    """

    __slots__ = ()
    key: tuple
    hash_: int

    def _seal(self, key: tuple) -> None:
        object.__setattr__(self, "key", key)
        object.__setattr__(self, "hash_", hash(key))

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Concept):
            return NotImplemented
        return self.hash_ == other.hash_ and self.key == other.key

    def __hash__(self):
        return self.hash_

    def __lt__(self, other: "Concept") -> bool:
        return self.key < other.key

    def __str__(self) -> str:
        return render_concept(self)

    def children(self) -> tuple["Concept", ...]:
        return ()


_TOP, _BOT, _NAME, _NOMINAL, _NOT, _AND, _OR, _EXISTS, _FORALL = range(9)


@dataclass(frozen=True, eq=False, repr=False)
class Top(Concept):
    def __post_init__(self):
        self._seal((_TOP,))

    def __repr__(self):
        return "Top()"


@dataclass(frozen=True, eq=False, repr=False)
class Bot(Concept):
    def __post_init__(self):
        self._seal((_BOT,))

    def __repr__(self):
        return "Bot()"


@dataclass(frozen=True, eq=False, repr=False)
class Name(Concept):
    name: str

    def __post_init__(self):
        _check_name(self.name)
        self._seal((_NAME, self.name))

    def __repr__(self):
        return f"Name({self.name!r})"


@dataclass(frozen=True, eq=False, repr=False)
class Nominal(Concept):
    individual: str

    def __post_init__(self):
        _check_name(self.individual)
        self._seal((_NOMINAL, self.individual))

    def __repr__(self):
        return f"Nominal({self.individual!r})"


@dataclass(frozen=True, eq=False, repr=False)
class Not(Concept):
    child: Concept

    def __post_init__(self):
        self._seal((_NOT, self.child.key))

    def children(self):
        return (self.child,)

    def __repr__(self):
        return f"Not({self.child!r})"


def _normalize_operands(cls, items: Iterable[Concept]) -> tuple[Concept, ...]:
    flat: set[Concept] = set()
    for c in items:
        if not isinstance(c, Concept):
            raise TypeError(f"expected a concept, got {c!r}")
        if isinstance(c, cls):
            flat.update(c.operands)
        else:
            flat.add(c)
    return tuple(sorted(flat))


@dataclass(frozen=True, eq=False, repr=False)
class And(Concept):
    """Flattened, sorted, duplicate-free conjunction of at least two concepts."""

    operands: tuple[Concept, ...]

    def __post_init__(self):
        ops = _normalize_operands(And, self.operands)
        if len(ops) < 2:
            raise ValueError("And needs at least two distinct operands; use conj()")
        object.__setattr__(self, "operands", ops)
        self._seal((_AND, tuple(c.key for c in ops)))

    def children(self):
        return self.operands

    def __repr__(self):
        return f"And({self.operands!r})"


@dataclass(frozen=True, eq=False, repr=False)
class Or(Concept):
    """Flattened, sorted, duplicate-free disjunction of at least two concepts."""

    operands: tuple[Concept, ...]

    def __post_init__(self):
        ops = _normalize_operands(Or, self.operands)
        if len(ops) < 2:
            raise ValueError("Or needs at least two distinct operands; use disj()")
        object.__setattr__(self, "operands", ops)
        self._seal((_OR, tuple(c.key for c in ops)))

    def children(self):
        return self.operands

    def __repr__(self):
        return f"Or({self.operands!r})"


@dataclass(frozen=True, eq=False, repr=False)
class Exists(Concept):
    role: Role
    child: Concept

    def __post_init__(self):
        self._seal((_EXISTS, self.role.name, self.role.inverse, self.child.key))

    def children(self):
        return (self.child,)

    def __repr__(self):
        return f"Exists({self.role!r}, {self.child!r})"


@dataclass(frozen=True, eq=False, repr=False)
class Forall(Concept):
    role: Role
    child: Concept

    def __post_init__(self):
        self._seal((_FORALL, self.role.name, self.role.inverse, self.child.key))

    def children(self):
        return (self.child,)

    def __repr__(self):
        return f"Forall({self.role!r}, {self.child!r})"


TOP = Top()
BOT = Bot()


def conj(*items: Concept) -> Concept:
    """Conjunction that collapses to its single operand (or TOP when empty)."""
    ops = _normalize_operands(And, items)
    if not ops:
        return TOP
    return ops[0] if len(ops) == 1 else And(ops)


def disj(*items: Concept) -> Concept:
    """Disjunction that collapses to its single operand (or BOT when empty)."""
    ops = _normalize_operands(Or, items)
    if not ops:
        return BOT
    return ops[0] if len(ops) == 1 else Or(ops)


def exists(role: Union[str, Role], child: Concept) -> Exists:
    return Exists(role if isinstance(role, Role) else Role(role), child)


def forall(role: Union[str, Role], child: Concept) -> Forall:
    return Forall(role if isinstance(role, Role) else Role(role), child)


def inv(role: str) -> Role:
    return Role(role, True)


@dataclass(frozen=True)
class Axiom:
    lhs: Concept
    rhs: Concept

    def __str__(self):
        return f"{render_concept(self.lhs)} [= {render_concept(self.rhs)}"


@dataclass(frozen=True)
class ConceptAssertion:
    concept: str
    individual: str

    def __post_init__(self):
        _check_name(self.concept)
        _check_name(self.individual)

    def __str__(self):
        return f"{self.concept}({self.individual})"


@dataclass(frozen=True)
class RoleAssertion:
    role: str
    subject: str
    object: str

    def __post_init__(self):
        _check_name(self.role)
        _check_name(self.subject)
        _check_name(self.object)

    def __str__(self):
        return f"{self.role}({self.subject}, {self.object})"


Assertion = Union[ConceptAssertion, RoleAssertion]


def _dedupe(items: Iterable) -> tuple:
    return tuple(dict.fromkeys(items))


@dataclass(frozen=True, eq=False)
class KnowledgeBase:
    """A TBox plus an ABox.

    Insertion order is kept (it drives fresh-name generation and the
    element ids given to individuals), but equality ignores it.
    """

    tbox: tuple[Axiom, ...] = ()
    abox: tuple[Assertion, ...] = ()
    concept_names: frozenset[str] = field(init=False)
    role_names: frozenset[str] = field(init=False)
    individuals: tuple[str, ...] = field(init=False)

    def __post_init__(self):
        tbox = _dedupe(self.tbox)
        abox = _dedupe(self.abox)
        for ax in tbox:
            if not isinstance(ax, Axiom):
                raise TypeError(f"not an axiom: {ax!r}")
        object.__setattr__(self, "tbox", tbox)
        object.__setattr__(self, "abox", abox)
        concepts: set[str] = set()
        roles: set[str] = set()
        inds: dict[str, None] = {}
        for a in abox:
            if isinstance(a, ConceptAssertion):
                concepts.add(a.concept)
                inds[a.individual] = None
            elif isinstance(a, RoleAssertion):
                roles.add(a.role)
                inds[a.subject] = None
                inds[a.object] = None
            else:
                raise TypeError(f"not an assertion: {a!r}")
        for ax in tbox:
            for c in (ax.lhs, ax.rhs):
                _collect(c, concepts, roles, inds)
        object.__setattr__(self, "concept_names", frozenset(concepts))
        object.__setattr__(self, "role_names", frozenset(roles))
        object.__setattr__(self, "individuals", tuple(inds))

    def __eq__(self, other):
        if not isinstance(other, KnowledgeBase):
            return NotImplemented
        return set(self.tbox) == set(other.tbox) and set(self.abox) == set(other.abox)

    def __hash__(self):
        return hash((frozenset(self.tbox), frozenset(self.abox)))

    def __str__(self):
        return render_kb(self)


def _collect(c: Concept, concepts: set, roles: set, inds: dict) -> None:
    for node in subconcepts(c):
        if isinstance(node, Name):
            concepts.add(node.name)
        elif isinstance(node, Nominal):
            inds[node.individual] = None
        elif isinstance(node, (Exists, Forall)):
            roles.add(node.role.name)


def signature(c: Concept) -> tuple[frozenset[str], frozenset[str], tuple[str, ...]]:
    """Concept names, role names and individuals occurring in ``c``."""
    concepts: set[str] = set()
    roles: set[str] = set()
    inds: dict[str, None] = {}
    _collect(c, concepts, roles, inds)
    return frozenset(concepts), frozenset(roles), tuple(inds)


def subconcepts(c: Concept) -> Iterator[Concept]:
    """Pre-order traversal, children left to right."""
    stack = [c]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(node.children()))


# ---------------------------------------------------------------- structure


def nnf(c: Concept) -> Concept:
    return _nnf(c, False)


def _nnf(c: Concept, neg: bool) -> Concept:
    if isinstance(c, Not):
        return _nnf(c.child, not neg)
    if isinstance(c, Top):
        return BOT if neg else TOP
    if isinstance(c, Bot):
        return TOP if neg else BOT
    if isinstance(c, (Name, Nominal)):
        return Not(c) if neg else c
    if isinstance(c, And):
        parts = [_nnf(x, neg) for x in c.operands]
        return disj(*parts) if neg else conj(*parts)
    if isinstance(c, Or):
        parts = [_nnf(x, neg) for x in c.operands]
        return conj(*parts) if neg else disj(*parts)
    if isinstance(c, Exists):
        return Forall(c.role, _nnf(c.child, True)) if neg else Exists(c.role, _nnf(c.child, False))
    if isinstance(c, Forall):
        return Exists(c.role, _nnf(c.child, True)) if neg else Forall(c.role, _nnf(c.child, False))
    raise TypeError(f"unknown concept node {c!r}")


def simplify(c: Concept) -> Concept:
    """Absorb ⊤ and ⊥: ⊥ ⊓ C = ⊥, ⊤ ⊔ C = ⊤, ∃r.⊥ = ⊥, ∀r.⊤ = ⊤, and neutral operands vanish."""
    if isinstance(c, Not):
        child = simplify(c.child)
        if isinstance(child, (Top, Bot)):
            return BOT if isinstance(child, Top) else TOP
        return Not(child)
    if isinstance(c, (And, Or)):
        absorbing, neutral = (Bot, Top) if isinstance(c, And) else (Top, Bot)
        parts = [simplify(x) for x in c.operands]
        if any(isinstance(x, absorbing) for x in parts):
            return parts[[isinstance(x, absorbing) for x in parts].index(True)]
        parts = [x for x in parts if not isinstance(x, neutral)]
        return conj(*parts) if isinstance(c, And) else disj(*parts)
    if isinstance(c, Exists):
        child = simplify(c.child)
        return BOT if isinstance(child, Bot) else Exists(c.role, child)
    if isinstance(c, Forall):
        child = simplify(c.child)
        return TOP if isinstance(child, Top) else Forall(c.role, child)
    return c


def is_nnf(c: Concept) -> bool:
    return all(
        not isinstance(n, Not) or isinstance(n.child, (Name, Nominal)) for n in subconcepts(c)
    )


def modal_depth(x: Union[Concept, KnowledgeBase]) -> int:
    if isinstance(x, KnowledgeBase):
        return max((max(modal_depth(a.lhs), modal_depth(a.rhs)) for a in x.tbox), default=0)
    if isinstance(x, (Exists, Forall)):
        return 1 + modal_depth(x.child)
    return max((modal_depth(ch) for ch in x.children()), default=0)


class DlFragment(enum.Enum):
    EL = "EL"
    ELbot = "ELbot"
    ELIO = "ELIO"
    ELIObot = "ELIObot"
    ALC = "ALC"
    ALCIO = "ALCIO"

    def within(self, other: "DlFragment") -> bool:
        """Inclusion order among the fragments."""
        return other in _SUPERSETS[self]

    def __str__(self):
        return self.value


_SUPERSETS = {
    DlFragment.EL: set(DlFragment),
    DlFragment.ELbot: {DlFragment.ELbot, DlFragment.ELIObot, DlFragment.ALC, DlFragment.ALCIO},
    DlFragment.ELIO: {DlFragment.ELIO, DlFragment.ELIObot, DlFragment.ALCIO},
    DlFragment.ELIObot: {DlFragment.ELIObot, DlFragment.ALCIO},
    DlFragment.ALC: {DlFragment.ALC, DlFragment.ALCIO},
    DlFragment.ALCIO: {DlFragment.ALCIO},
}


def _features(concepts: Iterable[Concept]) -> tuple[bool, bool, bool]:
    boolean = io = bottom = False
    for c in concepts:
        for n in subconcepts(c):
            if isinstance(n, Bot):
                bottom = True
            elif isinstance(n, Not):
                if isinstance(n.child, Top):
                    bottom = True
                else:
                    boolean = True
            elif isinstance(n, (Or, Forall)):
                boolean = True
            elif isinstance(n, Nominal):
                io = True
            if isinstance(n, (Exists, Forall)) and n.role.inverse:
                io = True
    return boolean, io, bottom


def _fragment(boolean: bool, io: bool, bottom: bool) -> DlFragment:
    if boolean:
        return DlFragment.ALCIO if io else DlFragment.ALC
    if io:
        return DlFragment.ELIObot if bottom else DlFragment.ELIO
    return DlFragment.ELbot if bottom else DlFragment.EL


def classify_fragment(kb: KnowledgeBase) -> DlFragment:
    return _fragment(*_features(c for ax in kb.tbox for c in (ax.lhs, ax.rhs)))


def classify_concept(c: Concept) -> DlFragment:
    return _fragment(*_features([c]))


# ------------------------------------------------------------------ printing


def render_concept(c: Concept) -> str:
    if isinstance(c, Top):
        return "TOP"
    if isinstance(c, Bot):
        return "BOT"
    if isinstance(c, Name):
        return c.name
    if isinstance(c, Nominal):
        return "{" + c.individual + "}"
    if isinstance(c, Not):
        return "not " + render_concept(c.child)
    if isinstance(c, And):
        return "(" + " and ".join(render_concept(x) for x in c.operands) + ")"
    if isinstance(c, Or):
        return "(" + " or ".join(render_concept(x) for x in c.operands) + ")"
    if isinstance(c, Exists):
        return f"exists {c.role}. {render_concept(c.child)}"
    if isinstance(c, Forall):
        return f"forall {c.role}. {render_concept(c.child)}"
    raise TypeError(f"unknown concept node {c!r}")


def render_kb(kb: KnowledgeBase) -> str:
    lines = [str(ax) for ax in kb.tbox] + [str(a) for a in kb.abox]
    return "".join(line + "\n" for line in lines)


# ------------------------------------------------------------------- parsing

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>\#.*)
  | (?P<sub>\[=)
  | (?P<inv>\^-)
  | (?P<punct>[(){},.])
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
    """,
    re.VERBOSE,
)
_KEYWORDS = {"TOP", "BOT", "not", "and", "or", "exists", "forall"}


def _tokenize(line: str, lineno: int) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    while pos < len(line):
        m = _TOKEN.match(line, pos)
        if not m:
            raise ParseError(f"unexpected character {line[pos]!r}", lineno, pos + 1)
        kind = m.lastgroup
        if kind == "comment":
            break
        if kind != "ws":
            tokens.append((m.group(), pos + 1))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, tokens: list[tuple[str, int]], lineno: int, width: int):
        self.tokens = tokens
        self.i = 0
        self.lineno = lineno
        self.width = width

    def peek(self) -> str | None:
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def error(self, message: str) -> ParseError:
        col = self.tokens[self.i][1] if self.i < len(self.tokens) else self.width + 1
        return ParseError(message, self.lineno, col)

    def take(self, expected: str | None = None) -> str:
        tok = self.peek()
        if tok is None:
            raise self.error(f"expected {expected or 'a token'}, found end of line")
        if expected is not None and tok != expected:
            raise self.error(f"expected {expected!r}, found {tok!r}")
        self.i += 1
        return tok

    def name(self, what: str) -> str:
        tok = self.peek()
        if tok is None or tok in _KEYWORDS or not IDENT.match(tok):
            found = "end of line" if tok is None else repr(tok)
            raise self.error(f"expected {what}, found {found}")
        self.i += 1
        return tok

    def role(self) -> Role:
        name = self.name("a role name")
        if self.peek() == "^-":
            self.i += 1
            return Role(name, True)
        return Role(name)

    def concept(self) -> Concept:
        tok = self.peek()
        if tok == "TOP":
            self.i += 1
            return TOP
        if tok == "BOT":
            self.i += 1
            return BOT
        if tok == "not":
            self.i += 1
            return Not(self.concept())
        if tok == "{":
            self.i += 1
            ind = self.name("an individual name")
            self.take("}")
            return Nominal(ind)
        if tok in ("exists", "forall"):
            self.i += 1
            r = self.role()
            self.take(".")
            child = self.concept()
            return Exists(r, child) if tok == "exists" else Forall(r, child)
        if tok == "(":
            self.i += 1
            first = self.concept()
            op = self.peek()
            if op == ")":
                self.i += 1
                return first
            if op not in ("and", "or"):
                raise self.error("expected 'and', 'or' or ')'")
            parts = [first]
            while self.peek() == op:
                self.i += 1
                parts.append(self.concept())
            if self.peek() in ("and", "or"):
                raise self.error("mixing 'and' and 'or' needs parentheses")
            self.take(")")
            return conj(*parts) if op == "and" else disj(*parts)
        return Name(self.name("a concept"))

    def done(self) -> None:
        if self.peek() is not None:
            raise self.error(f"unexpected {self.peek()!r}")


def _parse_line(tokens: list[tuple[str, int]], lineno: int, width: int):
    p = _Parser(tokens, lineno, width)
    if any(t == "[=" for t, _ in tokens):
        lhs = p.concept()
        p.take("[=")
        rhs = p.concept()
        p.done()
        return Axiom(lhs, rhs)
    pred = p.name("an axiom or assertion")
    inverse = False
    if p.peek() == "^-":
        p.i += 1
        inverse = True
    p.take("(")
    first = p.name("an individual name")
    if p.peek() == ",":
        p.i += 1
        second = p.name("an individual name")
        p.take(")")
        p.done()
        if inverse:
            return RoleAssertion(pred, second, first)
        return RoleAssertion(pred, first, second)
    p.take(")")
    p.done()
    if inverse:
        raise ParseError("inverse marker on a concept assertion", lineno, tokens[1][1])
    return ConceptAssertion(pred, first)


def parse_kb(text: str) -> KnowledgeBase:
    tbox: list[Axiom] = []
    abox: list[Assertion] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        tokens = _tokenize(line, lineno)
        if not tokens:
            continue
        item = _parse_line(tokens, lineno, len(line))
        (tbox if isinstance(item, Axiom) else abox).append(item)
    return KnowledgeBase(tuple(tbox), tuple(abox))


def parse_concept(text: str) -> Concept:
    tokens = _tokenize(text, 1)
    p = _Parser(tokens, 1, len(text))
    c = p.concept()
    p.done()
    return c


def kb(tbox: Sequence[Axiom] = (), abox: Sequence[Assertion] = ()) -> KnowledgeBase:
    return KnowledgeBase(tuple(tbox), tuple(abox))
