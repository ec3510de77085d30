"""Finite interpretations and concept evaluation.

Element ids are dense integers ``0..n-1``; ``domain`` holds their display
labels. Extensions are stored without empty entries, so two
interpretations are equal iff they assign the same facts.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .syntax import (
    And,
    Bot,
    Concept,
    ConceptAssertion,
    Exists,
    Forall,
    IDENT,
    KnowledgeBase,
    Name,
    Nominal,
    Not,
    Or,
    RoleAssertion,
    Top,
)


class EvaluationError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Interpretation:
    domain: tuple[str, ...]
    individuals: Mapping[str, int] = field(default_factory=dict)
    concepts: Mapping[str, frozenset[int]] = field(default_factory=dict)
    roles: Mapping[str, frozenset[tuple[int, int]]] = field(default_factory=dict)

    def __post_init__(self):
        domain = tuple(self.domain)
        if not domain:
            raise ValueError("domain must be non-empty")
        if len(set(domain)) != len(domain):
            raise ValueError("duplicate domain element labels")
        n = len(domain)
        inds = dict(self.individuals)
        concepts = {k: frozenset(v) for k, v in self.concepts.items() if v}
        roles = {k: frozenset((int(a), int(b)) for a, b in v) for k, v in self.roles.items() if v}
        for name, e in inds.items():
            if not 0 <= e < n:
                raise ValueError(f"individual {name} mapped outside the domain")
        for name, ext in concepts.items():
            if any(not 0 <= e < n for e in ext):
                raise ValueError(f"extension of {name} leaves the domain")
        for name, ext in roles.items():
            if any(not (0 <= a < n and 0 <= b < n) for a, b in ext):
                raise ValueError(f"extension of {name} leaves the domain")
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "individuals", inds)
        object.__setattr__(self, "concepts", concepts)
        object.__setattr__(self, "roles", roles)

    @classmethod
    def of_size(cls, n: int, individuals=None, concepts=None, roles=None) -> "Interpretation":
        return cls(tuple(f"d{i}" for i in range(n)), individuals or {}, concepts or {}, roles or {})

    @property
    def size(self) -> int:
        return len(self.domain)

    def satisfies_una(self) -> bool:
        return len(set(self.individuals.values())) == len(self.individuals)

    def facts(self) -> frozenset[tuple]:
        """All atomic facts: ``(A, d)`` for concepts and ``(r, d, e)`` for roles."""
        out = {(a, d) for a, ext in self.concepts.items() for d in ext}
        out.update((r, d, e) for r, ext in self.roles.items() for d, e in ext)
        return frozenset(out)

    @classmethod
    def from_facts(cls, domain: Sequence[str], individuals: Mapping[str, int],
                   facts: Iterable[tuple]) -> "Interpretation":
        concepts: dict[str, set[int]] = {}
        roles: dict[str, set[tuple[int, int]]] = {}
        for f in facts:
            if len(f) == 2:
                concepts.setdefault(f[0], set()).add(f[1])
            else:
                roles.setdefault(f[0], set()).add((f[1], f[2]))
        return cls(tuple(domain), individuals, concepts, roles)

    def with_facts(self, facts: Iterable[tuple]) -> "Interpretation":
        return Interpretation.from_facts(self.domain, self.individuals, facts)

    def restrict(self, concept_names: Iterable[str], role_names: Iterable[str]) -> "Interpretation":
        cs, rs = set(concept_names), set(role_names)
        return Interpretation(
            self.domain,
            self.individuals,
            {k: v for k, v in self.concepts.items() if k in cs},
            {k: v for k, v in self.roles.items() if k in rs},
        )

    def __eq__(self, other):
        if not isinstance(other, Interpretation):
            return NotImplemented
        return (
            self.domain == other.domain
            and self.individuals == other.individuals
            and self.concepts == other.concepts
            and self.roles == other.roles
        )

    def __hash__(self):
        return hash((self.domain, frozenset(self.individuals.items()), self.facts()))

    def __str__(self):
        return render_interpretation(self)


class _Evaluator:
    """Bitmask evaluator; bit ``d`` of a mask stands for element ``d``."""

    def __init__(self, i: Interpretation):
        self.i = i
        self.n = i.size
        self.full = (1 << self.n) - 1
        self.memo: dict[Concept, int] = {}
        self.succ: dict[tuple[str, bool], list[int]] = {}

    def successors(self, role: str, inverse: bool) -> list[int]:
        key = (role, inverse)
        if key not in self.succ:
            table = [0] * self.n
            for a, b in self.i.roles.get(role, ()):
                if inverse:
                    a, b = b, a
                table[a] |= 1 << b
            self.succ[key] = table
        return self.succ[key]

    def eval(self, c: Concept) -> int:
        hit = self.memo.get(c)
        if hit is not None:
            return hit
        if isinstance(c, Top):
            m = self.full
        elif isinstance(c, Bot):
            m = 0
        elif isinstance(c, Name):
            m = 0
            for d in self.i.concepts.get(c.name, ()):
                m |= 1 << d
        elif isinstance(c, Nominal):
            if c.individual not in self.i.individuals:
                raise EvaluationError(f"unknown individual {c.individual}")
            m = 1 << self.i.individuals[c.individual]
        elif isinstance(c, Not):
            m = self.full & ~self.eval(c.child)
        elif isinstance(c, And):
            m = self.full
            for x in c.operands:
                m &= self.eval(x)
        elif isinstance(c, Or):
            m = 0
            for x in c.operands:
                m |= self.eval(x)
        elif isinstance(c, (Exists, Forall)):
            inner = self.eval(c.child)
            table = self.successors(c.role.name, c.role.inverse)
            m = 0
            if isinstance(c, Exists):
                for d, s in enumerate(table):
                    if s & inner:
                        m |= 1 << d
            else:
                for d, s in enumerate(table):
                    if not s & ~inner:
                        m |= 1 << d
        else:
            raise TypeError(f"unknown concept node {c!r}")
        self.memo[c] = m
        return m


def _elements(mask: int) -> frozenset[int]:
    out = []
    d = 0
    while mask:
        if mask & 1:
            out.append(d)
        mask >>= 1
        d += 1
    return frozenset(out)


def eval_concept(i: Interpretation, c: Concept) -> frozenset[int]:
    return _elements(_Evaluator(i).eval(c))


def model_violations(i: Interpretation, kb: KnowledgeBase) -> list[str]:
    """Human-readable reasons why ``i`` is not a model of ``kb``."""
    problems = []
    ev = _Evaluator(i)
    for a in kb.abox:
        if isinstance(a, ConceptAssertion):
            if a.individual not in i.individuals:
                problems.append(f"{a}: individual {a.individual} is not mapped")
            elif i.individuals[a.individual] not in i.concepts.get(a.concept, ()):
                problems.append(f"{a} does not hold")
        elif isinstance(a, RoleAssertion):
            missing = [x for x in (a.subject, a.object) if x not in i.individuals]
            if missing:
                problems.append(f"{a}: individual {missing[0]} is not mapped")
            elif (i.individuals[a.subject], i.individuals[a.object]) not in i.roles.get(a.role, ()):
                problems.append(f"{a} does not hold")
    for ax in kb.tbox:
        try:
            bad = ev.eval(ax.lhs) & ~ev.eval(ax.rhs)
        except EvaluationError as exc:
            problems.append(f"{ax}: {exc}")
            continue
        if bad:
            labels = ", ".join(i.domain[d] for d in sorted(_elements(bad)))
            problems.append(f"{ax} fails at {labels}")
    return problems


def is_model(i: Interpretation, kb: KnowledgeBase) -> bool:
    return not model_violations(i, kb)


class Comparison(enum.Enum):
    Equal = "Equal"
    StrictlySmaller = "StrictlySmaller"
    StrictlyLarger = "StrictlyLarger"
    Incomparable = "Incomparable"


def compare(i: Interpretation, j: Interpretation) -> Comparison:
    """How ``i`` relates to ``j``: StrictlySmaller means ``i`` ⊊ ``j``."""
    if i.domain != j.domain or i.individuals != j.individuals:
        return Comparison.Incomparable
    fi, fj = i.facts(), j.facts()
    if fi == fj:
        return Comparison.Equal
    if fi < fj:
        return Comparison.StrictlySmaller
    if fi > fj:
        return Comparison.StrictlyLarger
    return Comparison.Incomparable


# ------------------------------------------------------------------ file I/O


def render_interpretation(i: Interpretation) -> str:
    lab = i.domain
    lines = ["domain: " + " ".join(lab)]
    for name in sorted(i.individuals):
        lines.append(f"ind {name} = {lab[i.individuals[name]]}")
    for name in sorted(i.concepts):
        lines.append(f"conc {name} : " + " ".join(lab[d] for d in sorted(i.concepts[name])))
    for name in sorted(i.roles):
        pairs = " ".join(f"{lab[a]}->{lab[b]}" for a, b in sorted(i.roles[name]))
        lines.append(f"role {name} : {pairs}")
    return "\n".join(lines) + "\n"


def parse_interpretation(text: str) -> Interpretation:
    domain: list[str] | None = None
    index: dict[str, int] = {}
    inds: dict[str, int] = {}
    concepts: dict[str, set[int]] = {}
    roles: dict[str, set[tuple[int, int]]] = {}

    def elem(tok: str, lineno: int) -> int:
        if tok not in index:
            raise ValueError(f"line {lineno}: unknown element {tok!r}")
        return index[tok]

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("domain:"):
            if domain is not None:
                raise ValueError(f"line {lineno}: domain declared twice")
            domain = line[len("domain:"):].split()
            index = {e: k for k, e in enumerate(domain)}
            continue
        if domain is None:
            raise ValueError(f"line {lineno}: the domain line must come first")
        head, _, rest = line.partition(" ")
        if head == "ind":
            name, eq, e = rest.partition("=")
            name = name.strip()
            if not eq or not IDENT.match(name):
                raise ValueError(f"line {lineno}: expected 'ind NAME = ELEM'")
            inds[name] = elem(e.strip(), lineno)
        elif head in ("conc", "role"):
            name, colon, body = rest.partition(":")
            name = name.strip()
            if not colon or not IDENT.match(name):
                raise ValueError(f"line {lineno}: expected '{head} NAME : ...'")
            if head == "conc":
                concepts.setdefault(name, set()).update(elem(t, lineno) for t in body.split())
            else:
                ext = roles.setdefault(name, set())
                for tok in body.split():
                    a, arrow, b = tok.partition("->")
                    if not arrow:
                        raise ValueError(f"line {lineno}: expected ELEM->ELEM, found {tok!r}")
                    ext.add((elem(a, lineno), elem(b, lineno)))
        else:
            raise ValueError(f"line {lineno}: unknown directive {head!r}")
    if domain is None:
        raise ValueError("missing domain line")
    return Interpretation(tuple(domain), inds, concepts, roles)
