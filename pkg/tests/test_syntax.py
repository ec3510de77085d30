import pytest
from hypothesis import given

from minmod.syntax import (
    BOT,
    TOP,
    And,
    Axiom,
    DlFragment,
    KnowledgeBase,
    Name,
    Not,
    ParseError,
    RoleAssertion,
    classify_concept,
    classify_fragment,
    conj,
    disj,
    exists,
    forall,
    is_nnf,
    modal_depth,
    nnf,
    parse_concept,
    parse_kb,
    render_concept,
    render_kb,
    simplify,
)

from strategies import concepts, knowledge_bases

A, B, C = Name("A"), Name("B"), Name("C")


def test_parse_fan_kb():
    kb = parse_kb("Fan [= exists likes. Movie\nFan(ann)")
    assert len(kb.tbox) == 1 and len(kb.abox) == 1
    assert kb.concept_names == {"Fan", "Movie"}
    assert kb.role_names == {"likes"}
    assert kb.individuals == ("ann",)


def test_parse_empty():
    kb = parse_kb("")
    assert kb.tbox == () and kb.abox == ()
    assert not kb.concept_names and not kb.role_names and not kb.individuals


def test_inverse_role_assertion_is_flipped():
    kb = parse_kb("likes^-(m, ann)")
    assert kb.abox == (RoleAssertion("likes", "ann", "m"),)


def test_duplicates_are_dropped():
    kb = parse_kb("A [= B\nA [= B\nA(a)\nA(a)\n")
    assert len(kb.tbox) == 1 and len(kb.abox) == 1


def test_signature_includes_nominals():
    kb = parse_kb("{c} [= exists r^-. B\n")
    assert kb.individuals == ("c",)
    assert kb.role_names == {"r"}


def test_render_simple():
    assert render_kb(KnowledgeBase((Axiom(A, B),))) == "A [= B\n"


def test_render_roundtrip_fans(fans_k2):
    assert parse_kb(render_kb(fans_k2)) == fans_k2


@given(knowledge_bases())
def test_render_parse_roundtrip(kb):
    assert parse_kb(render_kb(kb)) == kb


@given(concepts())
def test_concept_roundtrip(c):
    assert parse_concept(render_concept(c)) == c


@pytest.mark.parametrize("text, column", [
    ("A [= (B and C", 14),
    ("A [= exists . B", 13),
    ("A [= (B and C or D)", 15),
    ("A [= B $", 8),
])
def test_parse_errors_carry_position(text, column):
    with pytest.raises(ParseError) as info:
        parse_kb("\n" + text)
    assert info.value.line == 2
    assert info.value.column == column


def test_mixed_connectives_need_parentheses():
    assert parse_concept("((A and B) or C)") == disj(conj(A, B), C)


def test_conjunction_is_flat_sorted_and_deduplicated():
    assert conj(B, conj(A, B)) == conj(A, B)
    assert isinstance(conj(A, B), And)
    assert conj(A) == A
    assert conj() == TOP and disj() == BOT


def test_nnf_de_morgan():
    c = Not(conj(A, exists("r", B)))
    assert nnf(c) == disj(Not(A), forall("r", Not(B)))


def test_nnf_of_negated_top():
    assert nnf(Not(TOP)) == BOT
    assert nnf(Not(BOT)) == TOP


def test_nnf_keeps_negated_nominal():
    c = parse_concept("not {a}")
    assert nnf(c) == c and is_nnf(c)


@given(concepts())
def test_nnf_idempotent_and_normal(c):
    n = nnf(c)
    assert is_nnf(n)
    assert nnf(n) == n


@given(concepts())
def test_nnf_keeps_depth(c):
    assert modal_depth(nnf(c)) == modal_depth(c)


def test_modal_depth():
    assert modal_depth(conj(A, B)) == 0
    assert modal_depth(parse_concept("exists r. exists s. A")) == 2


def test_modal_depth_fans(fans_k1):
    assert modal_depth(fans_k1) == 1


def test_fragments(fans_k2, loop_kb):
    assert classify_fragment(fans_k2) is DlFragment.EL
    assert classify_fragment(loop_kb) is DlFragment.EL
    assert classify_fragment(parse_kb("A [= (B or C)")) is DlFragment.ALC
    assert classify_fragment(parse_kb("A [= BOT")) is DlFragment.ELbot
    assert classify_fragment(parse_kb("A [= exists r^-. {a}")) is DlFragment.ELIO
    assert classify_fragment(parse_kb("{a} [= BOT")) is DlFragment.ELIObot
    assert classify_fragment(parse_kb("A [= forall r. {a}")) is DlFragment.ALCIO


def test_goal_classified_separately(fans_goal):
    assert classify_concept(fans_goal) is DlFragment.ELIO


def test_fragment_order():
    assert DlFragment.EL.within(DlFragment.ALCIO)
    assert DlFragment.ELbot.within(DlFragment.ELIObot)
    assert not DlFragment.ELIO.within(DlFragment.ALC)
    assert not DlFragment.ALC.within(DlFragment.ELIObot)


def test_invalid_names_rejected():
    with pytest.raises(ValueError):
        Name("1abc")


def test_simplify_absorbs_constants():
    assert simplify(parse_concept("(A and BOT)")) == BOT
    assert simplify(parse_concept("(A or TOP)")) == TOP
    assert simplify(parse_concept("(TOP and A)")) == A
    assert simplify(parse_concept("exists r. (B and BOT)")) == BOT
    assert simplify(parse_concept("forall r. (B or not BOT)")) == TOP
    assert simplify(parse_concept("exists r. TOP")) == exists("r", TOP)


@given(concepts())
def test_simplify_is_idempotent(c):
    assert simplify(simplify(c)) == simplify(c)
