"""Brute-force reference procedures.

Nothing here shares code with the SAT-based search: models are found by
evaluating every fact subset at once with numpy, and minimality by a
subset-sum (zeta) transform over the resulting bit table. These routines
exist to cross-check the real implementation on small instances.
"""

from __future__ import annotations

import itertools
from typing import Iterator, Optional, Sequence

import numpy as np

from .semantics import Interpretation, is_model
from .syntax import (
    And,
    Bot,
    Concept,
    ConceptAssertion,
    Exists,
    Forall,
    KnowledgeBase,
    Name,
    Nominal,
    Not,
    Or,
    Top,
    signature,
)

DEFAULT_CAP = 24
_CHUNK_BITS = 18


class OracleTooLarge(ValueError):
    pass


def _required(kb: KnowledgeBase, individuals: dict[str, int]) -> set[tuple]:
    out = set()
    for a in kb.abox:
        if isinstance(a, ConceptAssertion):
            out.add((a.concept, individuals[a.individual]))
        else:
            out.add((a.role, individuals[a.subject], individuals[a.object]))
    return out


class _TableEvaluator:
    """Evaluates concepts at one element over a whole chunk of fact subsets."""

    def __init__(self, n: int, individuals: dict[str, int], columns: dict[tuple, np.ndarray],
                 width: int):
        self.n = n
        self.individuals = individuals
        self.columns = columns
        self.ones = np.ones(width, dtype=bool)
        self.zeros = np.zeros(width, dtype=bool)
        self.memo: dict[tuple[Concept, int], np.ndarray] = {}

    def fact(self, f: tuple) -> np.ndarray:
        return self.columns.get(f, self.zeros)

    def at(self, c: Concept, d: int) -> np.ndarray:
        key = (c, d)
        if key in self.memo:
            return self.memo[key]
        if isinstance(c, Top):
            out = self.ones
        elif isinstance(c, Bot):
            out = self.zeros
        elif isinstance(c, Name):
            out = self.fact((c.name, d))
        elif isinstance(c, Nominal):
            out = self.ones if self.individuals[c.individual] == d else self.zeros
        elif isinstance(c, Not):
            out = ~self.at(c.child, d)
        elif isinstance(c, And):
            out = self.ones
            for x in c.operands:
                out = out & self.at(x, d)
        elif isinstance(c, Or):
            out = self.zeros
            for x in c.operands:
                out = out | self.at(x, d)
        elif isinstance(c, (Exists, Forall)):
            r = c.role.name
            acc = self.zeros if isinstance(c, Exists) else self.ones
            for e in range(self.n):
                edge = self.fact((r, e, d) if c.role.inverse else (r, d, e))
                if isinstance(c, Exists):
                    acc = acc | (edge & self.at(c.child, e))
                else:
                    acc = acc & (~edge | self.at(c.child, e))
            out = acc
        else:
            raise TypeError(f"unknown concept node {c!r}")
        self.memo[key] = out
        return out


def _model_table(kb: KnowledgeBase, n: int, individuals: dict[str, int], forced: set[tuple],
                 free: Sequence[tuple]) -> np.ndarray:
    """Boolean table over all 2^k subsets of ``free``: does forced + subset satisfy the TBox?"""
    k = len(free)
    total = 1 << k
    out = np.empty(total, dtype=bool)
    chunk = 1 << min(k, _CHUNK_BITS)
    for start in range(0, total, chunk):
        masks = np.arange(start, start + chunk, dtype=np.int64)
        columns = {f: np.ones(chunk, dtype=bool) for f in forced}
        for j, f in enumerate(free):
            columns[f] = ((masks >> j) & 1).astype(bool)
        ev = _TableEvaluator(n, individuals, columns, chunk)
        ok = np.ones(chunk, dtype=bool)
        for ax in kb.tbox:
            for d in range(n):
                ok &= ~ev.at(ax.lhs, d) | ev.at(ax.rhs, d)
        out[start:start + chunk] = ok
    return out


def _minimal_subsets(models: np.ndarray, k: int) -> np.ndarray:
    """Indices S with models[S] and no model at any proper subset of S."""
    below_or_equal = models.copy()
    for j in range(k):
        view = below_or_equal.reshape(-1, 2, 1 << j)
        view[:, 1, :] |= view[:, 0, :]
    strictly_below = np.zeros_like(models)
    for j in range(k):
        src = below_or_equal.reshape(-1, 2, 1 << j)
        dst = strictly_below.reshape(-1, 2, 1 << j)
        dst[:, 1, :] |= src[:, 0, :]
    return np.flatnonzero(models & ~strictly_below)


def _canonical(n: int, individuals: dict[str, int], facts: frozenset, movable: Sequence[int]):
    best = None
    fixed = [d for d in range(n) if d not in set(movable)]
    for perm in itertools.permutations(movable):
        relabel = dict(zip(fixed, fixed))
        relabel.update(zip(movable, perm))
        key = (
            tuple(sorted((a, relabel[d]) for a, d in individuals.items())),
            tuple(sorted((f[0], *(relabel[x] for x in f[1:])) for f in facts)),
        )
        if best is None or key < best:
            best = key
    return best


def _individual_maps(inds: Sequence[str], n: int, una: bool) -> Iterator[dict[str, int]]:
    if una:
        yield {a: k for k, a in enumerate(inds)}
    else:
        for image in itertools.product(range(n), repeat=len(inds)):
            yield dict(zip(inds, image))


def enumerate_minimal_models(kb: KnowledgeBase, domain_size: int, una: bool = True, *,
                             cap: int = DEFAULT_CAP, concept_names: Sequence[str] = (),
                             role_names: Sequence[str] = ()) -> Iterator[Interpretation]:
    """All minimal models over ``domain_size`` elements, one per isomorphism class.

    Under UNA individuals occupy ids ``0..m-1`` in input order and only the
    remaining elements are renamed during deduplication; without UNA every
    individual map is tried and every element may be renamed. Extra
    predicate names may be supplied to widen the signature.
    """
    n = domain_size
    inds = list(kb.individuals)
    if n < 1:
        raise ValueError("domain size must be positive")
    if una and n < len(inds):
        raise ValueError("domain smaller than the number of individuals")
    concepts = sorted(set(kb.concept_names) | set(concept_names))
    roles = sorted(set(kb.role_names) | set(role_names))
    universe = [(a, d) for a in concepts for d in range(n)]
    universe += [(r, d, e) for r in roles for d in range(n) for e in range(n)]
    found: dict[tuple, Interpretation] = {}
    labels = tuple(f"d{k}" for k in range(n))
    for individuals in _individual_maps(inds, n, una):
        forced = _required(kb, individuals)
        free = [f for f in universe if f not in forced]
        if len(free) > cap:
            raise OracleTooLarge("oracle instance too large")
        table = _model_table(kb, n, individuals, forced, free)
        movable = list(range(len(inds), n)) if una else list(range(n))
        for s in _minimal_subsets(table, len(free)):
            facts = frozenset(forced) | {free[j] for j in range(len(free)) if (int(s) >> j) & 1}
            key = _canonical(n, individuals, facts, movable)
            if key not in found:
                found[key] = Interpretation.from_facts(labels, dict(key[0]), key[1])
    for key in sorted(found):
        yield found[key]


def goal_satisfiable(kb: KnowledgeBase, goal: Concept, max_domain: int, una: bool = True, *,
                     cap: int = DEFAULT_CAP) -> Optional[Interpretation]:
    """A minimal model of size at most ``max_domain`` where ``goal`` is non-empty, if any."""
    from .semantics import eval_concept

    gc, gr, _ = signature(goal)
    start = max(1, len(kb.individuals)) if una else 1
    for n in range(start, max_domain + 1):
        for m in enumerate_minimal_models(kb, n, una, cap=cap, concept_names=sorted(gc),
                                          role_names=sorted(gr)):
            if eval_concept(m, goal):
                return m
    return None


def is_minimal_by_enumeration(i: Interpretation, kb: KnowledgeBase) -> bool:
    """Definition-level check: try every proper subset of the non-ABox facts."""
    forced = _required(kb, dict(i.individuals))
    free = sorted(f for f in i.facts() if f not in forced)
    for size in range(len(free)):
        for subset in itertools.combinations(free, size):
            if is_model(i.with_facts(forced | set(subset)), kb):
                return False
    return True
