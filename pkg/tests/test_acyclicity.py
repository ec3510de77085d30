import pytest
from hypothesis import given, strategies as st

from minmod.acyclicity import (
    TOP_NODE,
    Acyclicity,
    build_dependency_graph,
    classify_acyclicity,
    concept_node,
    is_closed_walk,
    nominal_node,
    occurrence_sets,
    role_node,
)
from minmod.generators import WangTileSet, gen_btree, gen_gadget, gen_recttile
from minmod.syntax import (
    And,
    Axiom,
    Bot,
    Exists,
    Forall,
    Name,
    Nominal,
    Not,
    Or,
    Top,
    parse_concept,
    parse_kb,
)

from strategies import concepts

A, B = concept_node("A"), concept_node("B")
R = role_node("r")


def constant(c):
    """True or False when ``c`` is ⊤ or ⊥ by plain constant folding, else None."""
    if isinstance(c, (Top, Bot)):
        return isinstance(c, Top)
    if isinstance(c, Not):
        k = constant(c.child)
        return None if k is None else not k
    if isinstance(c, (And, Or)):
        ks = [constant(x) for x in c.operands]
        absorbing = isinstance(c, Or)
        if absorbing in ks:
            return absorbing
        return None if None in ks else not absorbing
    if isinstance(c, Exists):
        return False if constant(c.child) is False else None
    if isinstance(c, Forall):
        return True if constant(c.child) is True else None
    return None


def naive_occurrences(ax):
    """Occurrences read off the raw axiom by tracking polarity, without NNF."""
    pos, neg, star = set(), set(), set()
    if constant(ax.lhs) is False or constant(ax.rhs) is True:
        return pos, neg, star

    def walk(c, positive, under_exists, top_level):
        k = constant(c)
        if k is not None:
            if k == positive:
                pos.add(TOP_NODE)
                if under_exists:
                    star.add(TOP_NODE)
            elif top_level:
                neg.add(TOP_NODE)
        elif isinstance(c, Not):
            walk(c.child, not positive, under_exists, top_level)
        elif isinstance(c, Name):
            (pos if positive else neg).add(concept_node(c.name))
            if positive and under_exists:
                star.add(concept_node(c.name))
        elif isinstance(c, Nominal):
            if positive:
                pos.add(nominal_node(c.individual))
                if under_exists:
                    star.add(nominal_node(c.individual))
        elif isinstance(c, (And, Or)):
            disjunctive = isinstance(c, Or) == positive
            for x in c.operands:
                # neutral operands vanish
                if constant(x) != (not isinstance(c, Or)):
                    walk(x, positive, under_exists, top_level and disjunctive)
        else:
            existential = isinstance(c, Exists) == positive
            r = role_node(c.role.name)
            if existential:
                pos.add(r)
                star.add(r)
            else:
                neg.add(r)
            walk(c.child, positive, under_exists or existential, False)

    walk(ax.lhs, False, False, True)
    walk(ax.rhs, True, False, True)
    return pos, neg, star


def naive_edges(tbox):
    edges = set()
    for ax in tbox:
        pos, neg, star = naive_occurrences(ax)
        edges |= {(a, b, False) for a in neg for b in pos}
        edges |= {(a, b, True) for a in neg for b in star}
    return edges


def test_occurrences_of_exists():
    assert occurrence_sets(parse_concept("exists r. A")) == ({R, A}, set(), {R, A})


def test_occurrences_of_forall():
    assert occurrence_sets(parse_concept("forall r. not A")) == (set(), {R, A}, set())


def test_occurrences_of_nominal():
    assert occurrence_sets(parse_concept("{a}")) == ({nominal_node("a")}, set(), set())


def test_occurrences_need_nnf():
    with pytest.raises(ValueError):
        occurrence_sets(parse_concept("not (A and B)"))


def test_loop_graph():
    g = build_dependency_graph(parse_kb("exists r. A [= A").tbox)
    assert g.plain_edges() == {(R, A), (A, A)}
    assert g.star_edges() == set()
    assert g.lines() == ["EDGE A A", "EDGE r A"]


def test_existential_rhs_gives_star_edges():
    g = build_dependency_graph(parse_kb("A [= exists r. B").tbox)
    assert g.star_edges() == {(A, R), (A, B)}


def test_empty_tbox():
    g = build_dependency_graph(())
    assert not g.nodes and not g.edges
    assert classify_acyclicity(()).classification is Acyclicity.StronglyAcyclic


@pytest.mark.parametrize("text, verdict", [
    ("exists r. A [= A", Acyclicity.WeaklyAcyclic),
    ("A [= exists r. A", Acyclicity.Cyclic),
    ("A [= B\nB [= exists r. C", Acyclicity.StronglyAcyclic),
    ("TOP [= A", Acyclicity.Cyclic),
    ("(TOP and B) [= A", Acyclicity.StronglyAcyclic),
    ("(A and BOT) [= exists r. A", Acyclicity.StronglyAcyclic),
    ("A [= (B or TOP)", Acyclicity.StronglyAcyclic),
    ("BOT [= BOT", Acyclicity.StronglyAcyclic),
    ("A [= BOT", Acyclicity.StronglyAcyclic),
    ("A [= (B and BOT)", Acyclicity.StronglyAcyclic),
])
def test_verdicts(text, verdict):
    assert classify_acyclicity(parse_kb(text).tbox).classification is verdict


def test_weak_report_has_cycle():
    rep = classify_acyclicity(parse_kb("exists r. A [= A").tbox)
    assert rep.cycle == (A, A)
    assert rep.witness_text() == "cycle:A->A"


def test_top_path_reported():
    rep = classify_acyclicity(parse_kb("TOP [= A").tbox)
    assert rep.top_path == (TOP_NODE, A)


def test_generator_verdicts():
    assert classify_acyclicity(gen_btree(2)[0].tbox).classification is Acyclicity.StronglyAcyclic
    assert classify_acyclicity(gen_gadget()[0].tbox).classification is Acyclicity.StronglyAcyclic
    kb, _, _ = gen_recttile(WangTileSet(((0, 0, 0, 0),), 0))
    rep = classify_acyclicity(kb.tbox)
    assert rep.classification is Acyclicity.Cyclic
    assert concept_node("Node") in rep.cycle
    assert rep.star_edge in rep.graph.star_edges()


axioms = st.builds(Axiom, concepts(max_leaves=6), concepts(max_leaves=6))


@given(st.lists(axioms, max_size=3))
def test_edges_match_naive_polarity_walk(tbox):
    assert build_dependency_graph(tbox).edges == naive_edges(tbox)


@given(st.lists(axioms, max_size=3))
def test_star_edges_are_edges(tbox):
    g = build_dependency_graph(tbox)
    assert g.star_edges() <= g.plain_edges()


@given(st.lists(axioms, max_size=3))
def test_report_witnesses(tbox):
    rep = classify_acyclicity(tbox)
    g = rep.graph
    if rep.cycle:
        assert is_closed_walk(g, rep.cycle)
    if rep.classification is Acyclicity.Cyclic:
        assert rep.top_path or rep.star_edge
        if rep.star_edge:
            assert rep.star_edge in zip(rep.cycle, rep.cycle[1:])
    if rep.classification is Acyclicity.StronglyAcyclic:
        assert not rep.cycle


def reachable(edges):
    reach = set(edges)
    while True:
        more = {(a, d) for a, b in reach for c, d in reach if b == c} - reach
        if not more:
            return reach
        reach |= more


@given(st.lists(axioms, max_size=3))
def test_verdict_matches_definition(tbox):
    g = build_dependency_graph(tbox)
    reach = reachable(g.plain_edges())
    star_cycle = any((b, a) in reach or a == b for a, b in g.star_edges())
    top_out = any(a == TOP_NODE for a, _ in g.plain_edges())
    if star_cycle or top_out:
        expected = Acyclicity.Cyclic
    elif any(a == b for a, b in reach):
        expected = Acyclicity.WeaklyAcyclic
    else:
        expected = Acyclicity.StronglyAcyclic
    assert classify_acyclicity(tbox).classification is expected
