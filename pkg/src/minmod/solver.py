"""Deciding whether a concept is non-empty in some minimal model.

``solve_bounded`` searches domain sizes in increasing order. For each
size it runs a guess-and-check loop over a SAT encoding of the grounded
KB:

1. guess a model whose goal extension is non-empty;
2. shrink it to a minimal model J below it;
3. if J still satisfies the goal, done; otherwise learn two clauses that
   rule the guess out: "do not contain J" (J would sit below any such
   model) and "if any fact of M \\ J holds, removing all of them must break
   some axiom".

Predicates that never occur positively in an axiom are pinned to their
ABox facts, since a minimal model never contains anything else for them.
Anonymous elements are used in id order to avoid isomorphic guesses.

``solve_no_una`` is the polynomial fixpoint for ELIO without the unique
name assumption: everything collapses onto one element and axioms fire
until nothing changes.
"""

from __future__ import annotations

import enum
import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

from .acyclicity import Acyclicity, axiom_occurrences, classify_acyclicity
from .circuit import TRUE, Circuit, Encoder, Grounder
from .minimality import ShrinkSession, abox_facts
from .normalize import FragmentError, normalize_md1
from .sat import SatSolver
from .semantics import Interpretation, eval_concept
from .syntax import (
    Concept,
    DlFragment,
    KnowledgeBase,
    classify_concept,
    classify_fragment,
    signature,
)


class Status(enum.Enum):
    Sat = "Sat"
    UnsatWithinBound = "UnsatWithinBound"
    Unsat = "Unsat"

    def __str__(self):
        return self.value


@dataclass
class SolveOutcome:
    status: Status
    witness: Optional[Interpretation] = None
    bound: Optional[int] = None
    stats: Counter = field(default_factory=Counter)

    @property
    def sat(self) -> bool:
        return self.status is Status.Sat


def small_model_bound(kb: KnowledgeBase) -> int:
    """Individuals × (|T| · 2^|T|)^|T| with |T| counted after normalization (0^0 = 1)."""
    try:
        t = len(normalize_md1(kb).tbox)
    except FragmentError:
        t = len(kb.tbox)
    return max(1, len(kb.individuals)) * (t * 2**t) ** t


def _labels(individuals: list[str], n: int) -> tuple[str, ...]:
    taken = set(individuals)
    out = list(individuals)
    k = 0
    while len(out) < n:
        label = f"_{k}"
        k += 1
        if label not in taken:
            out.append(label)
    return tuple(out)


def derivable_predicates(kb: KnowledgeBase) -> set[str]:
    """Names that occur positively in some axiom; all others stay at their ABox facts."""
    out = set()
    for ax in kb.tbox:
        pos, _, _ = axiom_occurrences(ax)
        out.update(node.name for node in pos if node.kind in ("concept", "role"))
    return out


class _SizeSearch:
    def __init__(self, kb: KnowledgeBase, goal: Concept, individuals: list[str], n: int,
                 stats: Counter):
        self.kb = kb
        self.goal = goal
        self.n = n
        self.stats = stats
        self.individuals = {a: k for k, a in enumerate(individuals)}
        self.labels = _labels(individuals, n)
        self.forced = abox_facts(kb, self.individuals)

        gc, gr, _ = signature(goal)
        derivable = derivable_predicates(kb)
        concepts = sorted(kb.concept_names | gc)
        roles = sorted(kb.role_names | gr)
        cir = self.circuit = Circuit()
        lits: dict[tuple, int] = {}
        for f in [(a, d) for a in concepts for d in range(n)] + \
                 [(r, d, e) for r in roles for d in range(n) for e in range(n)]:
            if f in self.forced:
                lits[f] = TRUE
            elif f[0] in derivable:
                lits[f] = cir.var(f)
        self.lits = lits
        self.free = sorted(f for f, lit in lits.items() if lit != TRUE)

        self.solver = SatSolver()
        self.enc = Encoder(cir, self.solver)
        grounder = Grounder(cir, n, self.individuals, lits)
        self.constraints = [g.literal for g in grounder.constraints(kb.tbox) if g.literal != TRUE]
        for lit in self.constraints:
            self.enc.require(lit)
        self.enc.require(cir.or_(grounder.at(goal, d) for d in range(n)))

        active = []
        for e in range(len(individuals), n):
            active.append(cir.or_(lit for f, lit in lits.items() if lit != TRUE and e in f[1:]))
        for a, b in zip(active, active[1:]):
            self.enc.require(cir.or_((-b, a)))

        self.solver.prefer([-self.enc.lit(lits[f]) for f in self.free])

    def _candidate(self) -> Interpretation:
        facts = set(self.forced)
        facts.update(f for f in self.free if self.solver.model_value(self.enc.lit(self.lits[f])))
        return Interpretation.from_facts(self.labels, self.individuals, facts)

    def _refine(self, m: Interpretation, j: Interpretation) -> None:
        cir = self.circuit
        kept = j.facts() - self.forced
        self.solver.add_clause([-self.enc.lit(self.lits[f]) for f in sorted(kept)])
        dropped = sorted(m.facts() - j.facts())
        values = {self.lits[f]: False for f in dropped}
        memo: dict = {}
        broken = []
        for lit in self.constraints:
            cof = cir.substitute(lit, values, memo)
            if cof != lit:
                broken.append(-cof)
        none_dropped = cir.and_(-self.lits[f] for f in dropped)
        self.enc.require(cir.or_([none_dropped, *broken]))

    def run(self) -> Optional[Interpretation]:
        while self.solver.solve():
            self.stats["candidates"] += 1
            m = self._candidate()
            session = ShrinkSession(m, self.kb, m.facts() - self.forced)
            self.stats["minimality_checks"] += 1
            j = m
            while (smaller := session.next()) is not None:
                self.stats["minimality_checks"] += 1
                j = smaller
            if eval_concept(j, self.goal):
                return j
            self._refine(m, j)
        return None


def _goal_individuals(kb: KnowledgeBase, goal: Concept) -> list[str]:
    extra = [a for a in signature(goal)[2] if a not in kb.individuals]
    return list(kb.individuals) + extra


def solve_bounded(kb: KnowledgeBase, goal: Concept, max_domain: int, una: bool = True) -> SolveOutcome:
    if not una:
        raise ValueError("bounded search assumes unique names; use solve_no_una without them")
    individuals = _goal_individuals(kb, goal)
    if max_domain < len(individuals):
        raise ValueError(f"max_domain {max_domain} is below the {len(individuals)} individuals")
    stats: Counter = Counter()
    started = time.perf_counter()
    for n in range(max(1, len(individuals)), max_domain + 1):
        stats["domains_tried"] += 1
        witness = _SizeSearch(kb, goal, individuals, n, stats).run()
        if witness is not None:
            stats["seconds"] = round(time.perf_counter() - started, 3)
            return SolveOutcome(Status.Sat, witness, max_domain, stats)
    stats["seconds"] = round(time.perf_counter() - started, 3)
    status = Status.UnsatWithinBound
    if _bound_is_definitive(kb, goal, max_domain):
        status = Status.Unsat
    return SolveOutcome(status, None, max_domain, stats)


def _bound_is_definitive(kb: KnowledgeBase, goal: Concept, max_domain: int) -> bool:
    if not classify_fragment(kb).within(DlFragment.ELIObot):
        return False
    if not classify_concept(goal).within(DlFragment.ELIObot):
        return False
    if classify_acyclicity(kb.tbox).classification is Acyclicity.Cyclic:
        return False
    return max_domain >= small_model_bound(kb)


def solve_no_una(kb: KnowledgeBase, goal: Concept) -> SolveOutcome:
    if not classify_fragment(kb).within(DlFragment.ELIO) or \
            not classify_concept(goal).within(DlFragment.ELIO):
        raise FragmentError("requires ELIO without ⊥")
    individuals = {a: 0 for a in _goal_individuals(kb, goal)}
    facts = {(f[0], *(0 for _ in f[1:])) for f in abox_facts(kb, individuals)}
    fired = [False] * len(kb.tbox)
    stats: Counter = Counter(domains_tried=1)
    changed = True
    while changed:
        changed = False
        current = Interpretation.from_facts(("e",), individuals, facts)
        for k, ax in enumerate(kb.tbox):
            if fired[k]:
                continue
            if eval_concept(current, ax.lhs) and not eval_concept(current, ax.rhs):
                concepts, roles, _ = signature(ax.rhs)
                facts.update((a, 0) for a in concepts)
                facts.update((r, 0, 0) for r in roles)
                fired[k] = True
                stats["fired"] += 1
                changed = True
                break
    final = Interpretation.from_facts(("e",), individuals, facts)
    if eval_concept(final, goal):
        return SolveOutcome(Status.Sat, final, 1, stats)
    return SolveOutcome(Status.Unsat, None, 1, stats)

