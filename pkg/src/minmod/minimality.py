"""Global and pointwise minimality of finite models.

A model I is minimal when no model J over the same domain and individual
map has strictly fewer facts. Facts required verbatim by the ABox can
never be dropped; for the rest the question "does some proper subset
still satisfy every axiom?" is compiled into a SAT instance over one
keep/drop variable per fact, with the axioms grounded at every element.
Variables are decided in fact order, dropping first.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .circuit import TRUE, Circuit, Encoder, Grounder
from .sat import SatSolver
from .semantics import Interpretation, model_violations
from .syntax import ConceptAssertion, KnowledgeBase, RoleAssertion


class NotAModelError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class FactAtom:
    predicate: str
    args: tuple[int, ...]
    forced: bool = field(default=False, compare=False)

    @property
    def fact(self) -> tuple:
        return (self.predicate, *self.args)

    @property
    def is_role(self) -> bool:
        return len(self.args) == 2


def abox_facts(kb: KnowledgeBase, individuals) -> set[tuple]:
    """Facts the ABox requires under the given individual map."""
    out = set()
    for a in kb.abox:
        if isinstance(a, ConceptAssertion):
            if a.individual in individuals:
                out.add((a.concept, individuals[a.individual]))
        elif isinstance(a, RoleAssertion):
            if a.subject in individuals and a.object in individuals:
                out.add((a.role, individuals[a.subject], individuals[a.object]))
    return out


def fact_atoms(i: Interpretation, kb: KnowledgeBase) -> list[FactAtom]:
    forced = abox_facts(kb, i.individuals)
    return sorted(FactAtom(f[0], tuple(f[1:]), f in forced) for f in i.facts())


def _require_model(i: Interpretation, kb: KnowledgeBase) -> None:
    problems = model_violations(i, kb)
    if problems:
        raise NotAModelError("not a model: " + problems[0])


class ShrinkSession:
    """Incremental search for ever smaller models below a fixed model.

    Each successful :meth:`next` fixes the facts it dropped and demands a
    further drop next time, so repeated calls walk down to a minimal model.
    """

    def __init__(self, i: Interpretation, kb: KnowledgeBase, droppable: Iterable[tuple]):
        self.i = i
        facts = sorted(i.facts())
        drop = set(droppable)
        self.circuit = Circuit()
        lits = {f: (self.circuit.var(f) if f in drop else TRUE) for f in facts}
        self.solver = SatSolver()
        self.encoder = Encoder(self.circuit, self.solver)
        grounder = Grounder(self.circuit, i.size, i.individuals, lits)
        for gc in grounder.constraints(kb.tbox):
            self.encoder.require(gc.literal)
        self.vars = {f: self.encoder.lit(lits[f]) for f in facts if f in drop}
        self.alive = dict(self.vars)
        self.solver.prefer([-v for v in self.vars.values()])

    def next(self) -> Optional[Interpretation]:
        if not self.alive:
            return None
        if not self.solver.add_clause([-v for v in self.alive.values()]):
            return None
        if not self.solver.solve():
            return None
        dropped = [f for f, v in self.alive.items() if not self.solver.model_value(v)]
        for f in dropped:
            self.solver.add_clause([-self.alive.pop(f)])
        gone = set(dropped) | (set(self.vars) - set(self.alive))
        return self.i.with_facts(f for f in self.i.facts() if f not in gone)


def _droppable(i: Interpretation, kb: KnowledgeBase) -> list[tuple]:
    forced = abox_facts(kb, i.individuals)
    return sorted(f for f in i.facts() if f not in forced)


def exists_smaller_model(i: Interpretation, kb: KnowledgeBase) -> Optional[Interpretation]:
    """Some model strictly below ``i``, or None when ``i`` is minimal."""
    _require_model(i, kb)
    drop = _droppable(i, kb)
    if not drop:
        return None
    return ShrinkSession(i, kb, drop).next()


def minimize(i: Interpretation, kb: KnowledgeBase) -> Interpretation:
    """A minimal model below (or equal to) the model ``i``."""
    _require_model(i, kb)
    drop = _droppable(i, kb)
    if not drop:
        return i
    session = ShrinkSession(i, kb, drop)
    current = i
    while (smaller := session.next()) is not None:
        current = smaller
    return current


def is_minimal(i: Interpretation, kb: KnowledgeBase) -> bool:
    return exists_smaller_model(i, kb) is None


def pointwise_smaller_model(i: Interpretation, kb: KnowledgeBase) -> Optional[tuple[int, Interpretation]]:
    """A smaller model that differs from ``i`` only in facts touching one element.

    Returns ``(element, model)`` or None when ``i`` is pointwise minimal.
    """
    _require_model(i, kb)
    drop = _droppable(i, kb)
    for e in range(i.size):
        local = [f for f in drop if e in f[1:]]
        if local:
            j = ShrinkSession(i, kb, local).next()
            if j is not None:
                return e, j
    return None


def is_pointwise_minimal(i: Interpretation, kb: KnowledgeBase) -> bool:
    return pointwise_smaller_model(i, kb) is None


from .oracle import enumerate_minimal_models  # noqa: E402  (re-export)
