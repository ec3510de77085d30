"""Dependency graphs of TBoxes and their acyclicity classes.

For an axiom C ⊑ D the occurrence sets are read off the NNF of ¬C ⊔ D.
Every predicate occurring negatively gets an edge to every predicate
occurring positively; the edge is starred when the target occurs
positively under an existential. ⊤ counts as a positive occurrence of the
top node and ⊥ as a negative one, so only axioms with ⊤ on the left give
the top node outgoing edges. Axioms are simplified first (⊤ and ⊥ are
absorbed), and an axiom that holds vacuously contributes nothing.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Optional

import networkx as nx

from .syntax import (
    And,
    Axiom,
    Bot,
    Concept,
    Exists,
    Forall,
    Name,
    Nominal,
    Not,
    Or,
    Top,
    disj,
    is_nnf,
    nnf,
    simplify,
)


@dataclass(frozen=True, order=True)
class DgNode:
    kind: str  # "concept", "role", "nominal" or "top"
    name: str = ""

    def __str__(self):
        if self.kind == "nominal":
            return "{" + self.name + "}"
        if self.kind == "top":
            return "TOP"
        return self.name


TOP_NODE = DgNode("top")


def concept_node(name: str) -> DgNode:
    return DgNode("concept", name)


def role_node(name: str) -> DgNode:
    return DgNode("role", name)


def nominal_node(name: str) -> DgNode:
    return DgNode("nominal", name)


Occurrences = tuple[frozenset[DgNode], frozenset[DgNode], frozenset[DgNode]]
_EMPTY: frozenset[DgNode] = frozenset()


def occurrence_sets(c: Concept) -> Occurrences:
    """(positive, negative, positive-under-existential) occurrences of an NNF concept."""
    if not is_nnf(c):
        raise ValueError("occurrence sets need a concept in negation normal form")
    return _occ(c, True)


def _occ(c: Concept, top: bool) -> Occurrences:
    # ⊥ stands for a negated ⊤ only as a top-level disjunct, where it
    # constrains every element; under ⊓ or a quantifier it does not
    if isinstance(c, Name):
        return frozenset({concept_node(c.name)}), _EMPTY, _EMPTY
    if isinstance(c, Nominal):
        return frozenset({nominal_node(c.individual)}), _EMPTY, _EMPTY
    if isinstance(c, Top):
        return frozenset({TOP_NODE}), _EMPTY, _EMPTY
    if isinstance(c, Bot):
        return _EMPTY, frozenset({TOP_NODE}) if top else _EMPTY, _EMPTY
    if isinstance(c, Not):
        if isinstance(c.child, Name):
            return _EMPTY, frozenset({concept_node(c.child.name)}), _EMPTY
        return _EMPTY, _EMPTY, _EMPTY  # negated nominal
    if isinstance(c, (And, Or)):
        pos, neg, star = set(), set(), set()
        for x in c.operands:
            p, n, s = _occ(x, top and isinstance(c, Or))
            pos |= p
            neg |= n
            star |= s
        return frozenset(pos), frozenset(neg), frozenset(star)
    if isinstance(c, Exists):
        p, n, _ = _occ(c.child, False)
        r = role_node(c.role.name)
        return p | {r}, n, p | {r}
    if isinstance(c, Forall):
        p, n, s = _occ(c.child, False)
        return p, n | {role_node(c.role.name)}, s
    raise TypeError(f"unknown concept node {c!r}")


def axiom_occurrences(ax: Axiom) -> Occurrences:
    lhs, rhs = simplify(ax.lhs), simplify(ax.rhs)
    if isinstance(lhs, Bot) or isinstance(rhs, Top):
        return _EMPTY, _EMPTY, _EMPTY  # holds vacuously
    return occurrence_sets(nnf(disj(Not(lhs), rhs)))


def _nodes_of(ax: Axiom) -> set[DgNode]:
    out = set()
    for side in (ax.lhs, ax.rhs):
        stack = [side]
        while stack:
            c = stack.pop()
            if isinstance(c, Name):
                out.add(concept_node(c.name))
            elif isinstance(c, Nominal):
                out.add(nominal_node(c.individual))
            elif isinstance(c, (Top, Bot)):
                out.add(TOP_NODE)
            elif isinstance(c, (Exists, Forall)):
                out.add(role_node(c.role.name))
            stack.extend(c.children())
    return out


@dataclass(frozen=True)
class DependencyGraph:
    nodes: frozenset[DgNode]
    edges: frozenset[tuple[DgNode, DgNode, bool]]

    def plain_edges(self) -> set[tuple[DgNode, DgNode]]:
        return {(a, b) for a, b, _ in self.edges}

    def star_edges(self) -> set[tuple[DgNode, DgNode]]:
        return {(a, b) for a, b, star in self.edges if star}

    def lines(self) -> list[str]:
        """``EDGE src dst [STAR]`` lines; a starred edge is listed once, with STAR."""
        stars = self.star_edges()
        out = []
        for a, b in sorted(self.plain_edges()):
            out.append(f"EDGE {a} {b}" + (" STAR" if (a, b) in stars else ""))
        return out


def build_dependency_graph(tbox: Iterable[Axiom]) -> DependencyGraph:
    nodes: set[DgNode] = set()
    edges: set[tuple[DgNode, DgNode, bool]] = set()
    for ax in tbox:
        nodes |= _nodes_of(ax)
        pos, neg, star = axiom_occurrences(ax)
        for a in neg:
            for b in pos:
                edges.add((a, b, False))
            for b in star:
                edges.add((a, b, True))
    return DependencyGraph(frozenset(nodes), frozenset(edges))


class Acyclicity(enum.Enum):
    StronglyAcyclic = "StronglyAcyclic"
    WeaklyAcyclic = "WeaklyAcyclic"
    Cyclic = "Cyclic"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class AcyclicityReport:
    classification: Acyclicity
    cycle: Optional[tuple[DgNode, ...]] = None
    top_path: Optional[tuple[DgNode, ...]] = None
    star_edge: Optional[tuple[DgNode, DgNode]] = None
    graph: Optional[DependencyGraph] = field(default=None, compare=False, repr=False)

    def witness_text(self) -> str:
        parts = []
        if self.cycle:
            parts.append("cycle:" + "->".join(map(str, self.cycle)))
        if self.top_path:
            parts.append("top-path:" + "->".join(map(str, self.top_path)))
        return ";".join(parts)


def _digraph(g: DependencyGraph) -> nx.DiGraph:
    dg = nx.DiGraph()
    dg.add_nodes_from(sorted(g.nodes))
    dg.add_edges_from(sorted(g.plain_edges()))
    return dg


def classify_acyclicity(tbox: Iterable[Axiom]) -> AcyclicityReport:
    g = build_dependency_graph(tbox)
    dg = _digraph(g)

    top_path = None
    if TOP_NODE in dg and dg.out_degree(TOP_NODE):
        succ = min(dg.successors(TOP_NODE))
        top_path = (TOP_NODE, succ)

    component = {}
    for k, scc in enumerate(nx.strongly_connected_components(dg)):
        for v in scc:
            component[v] = k
    # self-loops first so witnesses are as short as possible
    cyclic_edges = sorted(
        ((a, b) for a, b in g.plain_edges() if a == b or component[a] == component[b]),
        key=lambda e: (e[0] != e[1], e),
    )
    star_cycle_edges = [e for e in cyclic_edges if e in g.star_edges()]

    def cycle_through(a: DgNode, b: DgNode) -> tuple[DgNode, ...]:
        if a == b:
            return (a, a)
        back = nx.shortest_path(dg, b, a)
        return (a, *back)

    if star_cycle_edges or top_path:
        cycle = star = None
        if star_cycle_edges:
            star = star_cycle_edges[0]
            cycle = cycle_through(*star)
        return AcyclicityReport(Acyclicity.Cyclic, cycle, top_path, star, g)
    if cyclic_edges:
        return AcyclicityReport(Acyclicity.WeaklyAcyclic, cycle_through(*cyclic_edges[0]), graph=g)
    return AcyclicityReport(Acyclicity.StronglyAcyclic, graph=g)


def is_closed_walk(g: DependencyGraph, walk: tuple[DgNode, ...]) -> bool:
    edges = g.plain_edges()
    return (
        len(walk) >= 2
        and walk[0] == walk[-1]
        and all((a, b) in edges for a, b in zip(walk, walk[1:]))
    )
