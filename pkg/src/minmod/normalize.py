"""Rewriting ELIO⊥ knowledge bases to modal depth at most one.

Input of depth at most one is returned as is. Otherwise ⊤ and ⊥ are
absorbed, axioms that hold vacuously are dropped, and right-hand sides are
split into conjuncts. Then, until nothing changes:

* an existential ∃r.B of depth one nested under another quantifier on a
  left-hand side is replaced by a fresh name N, with ∃r.B ⊑ N added;
  equal subterms share one name;
* a right-hand ∃r.B with B of positive depth becomes ∃r.N, with N ⊑ B
  added (one fresh name per occurrence).

Fresh names are ``__n1``, ``__n2``, ... in order of creation, skipping any
name already in use. Left-to-right means the canonical operand order.
"""

from __future__ import annotations

from collections import deque

from .syntax import (
    And,
    Axiom,
    Bot,
    Concept,
    DlFragment,
    Exists,
    KnowledgeBase,
    Name,
    Top,
    classify_fragment,
    conj,
    modal_depth,
    simplify,
)

FRESH_PREFIX = "__n"


class FragmentError(ValueError):
    pass


class _Namer:
    def __init__(self, taken: frozenset[str]):
        self.taken = taken
        self.counter = 0
        self.shared: dict[Concept, Name] = {}

    def fresh(self) -> Name:
        while True:
            self.counter += 1
            name = f"{FRESH_PREFIX}{self.counter}"
            if name not in self.taken:
                return Name(name)

    def for_lhs(self, c: Exists) -> tuple[Name, bool]:
        if c in self.shared:
            return self.shared[c], False
        n = self.fresh()
        self.shared[c] = n
        return n, True


def _split_rhs(ax: Axiom) -> list[Axiom]:
    if isinstance(ax.rhs, And):
        return [Axiom(ax.lhs, part) for part in ax.rhs.operands]
    return [ax]


def _simplified(tbox) -> list[Axiom]:
    out = []
    for ax in tbox:
        lhs, rhs = simplify(ax.lhs), simplify(ax.rhs)
        if not (isinstance(lhs, Bot) or isinstance(rhs, Top)):
            out.append(Axiom(lhs, rhs))
    return out


def _flatten_lhs(c: Concept, namer: _Namer, companions: list[Axiom], nested: bool) -> Concept:
    """Replace depth-one existentials that sit under another quantifier."""
    if isinstance(c, Exists):
        if nested and modal_depth(c) == 1:
            name, new = namer.for_lhs(c)
            if new:
                companions.append(Axiom(c, name))
            return name
        return Exists(c.role, _flatten_lhs(c.child, namer, companions, True))
    if isinstance(c, And):
        return conj(*(_flatten_lhs(x, namer, companions, nested) for x in c.operands))
    return c


def normalize_md1(kb: KnowledgeBase) -> KnowledgeBase:
    if not classify_fragment(kb).within(DlFragment.ELIObot):
        raise FragmentError("fragment not supported")
    if modal_depth(kb) <= 1:
        return kb
    namer = _Namer(kb.concept_names | kb.role_names | frozenset(kb.individuals))
    done: list[Axiom] = []
    queue = deque(part for ax in _simplified(kb.tbox) for part in _split_rhs(ax))
    while queue:
        ax = queue.popleft()
        lhs, rhs = ax.lhs, ax.rhs
        if modal_depth(lhs) > 1:
            companions: list[Axiom] = []
            while modal_depth(lhs) > 1:
                lhs = _flatten_lhs(lhs, namer, companions, False)
            done.extend(companions)
        if isinstance(rhs, Exists) and modal_depth(rhs.child) >= 1:
            d = namer.fresh()
            done.append(Axiom(lhs, Exists(rhs.role, d)))
            queue.extendleft(reversed(_split_rhs(Axiom(d, rhs.child))))
            continue
        done.append(Axiom(lhs, rhs))
    return KnowledgeBase(tuple(done), kb.abox)


def is_fresh(name: str) -> bool:
    return name.startswith(FRESH_PREFIX)

