import itertools
import random

import pytest
from hypothesis import given, strategies as st

from minmod.acyclicity import Acyclicity, classify_acyclicity
from minmod.generators import (
    BooleanCircuit,
    Edge,
    Input,
    LabeledGraph,
    Literal,
    Not,
    Vocabulary,
    WangTileSet,
    btree_witness,
    cert3col_counterexample,
    cert3col_positive,
    find_tiling,
    gen_btree,
    gen_cert3col_alc,
    gen_cert3col_el,
    gen_circuit,
    gen_gadget,
    gen_recttile,
    grid_position,
    is_3colorable,
    iter_seeds,
    parse_circuit,
    parse_graph,
    parse_tiles,
    parse_tiling,
    random_circuit,
    random_concept,
    random_kb,
    random_labeled_graph,
    random_model,
    random_strongly_acyclic_kb,
    render_circuit,
    render_graph,
    render_tiles,
    tiling_violations,
)
from minmod.minimality import is_minimal
from minmod.semantics import eval_concept, is_model
from minmod.solver import solve_bounded, solve_no_una
from minmod.syntax import (
    ConceptAssertion,
    DlFragment,
    RoleAssertion,
    classify_fragment,
    modal_depth,
    parse_concept,
    parse_kb,
    render_kb,
)

seeds = st.integers(0, 10**9)
ONE_TILE = WangTileSet(((0, 0, 0, 0),), 0)


def test_three_colourability():
    triangle = [(0, 1), (1, 2), (0, 2)]
    assert is_3colorable(3, triangle)
    assert not is_3colorable(4, list(itertools.combinations(range(4), 2)))
    assert not is_3colorable(1, [(0, 0)])


def test_cert3col_counterexample_selects_self_loop():
    g = LabeledGraph(1, (Edge(0, 0, Literal((0, 0)), Literal((0, 0))),))
    assert cert3col_counterexample(g) == {(0, 0): True}
    assert not cert3col_positive(g)


def test_cert3col_abox_wiring():
    g = LabeledGraph(2, (Edge(0, 1, Literal((0, 1)), Literal((1, 1), False)),))
    kb, goal = gen_cert3col_alc(g)
    abox = set(kb.abox)
    assert RoleAssertion("l1", "e0_1", "u0") in abox
    assert RoleAssertion("l2", "e0_1", "u1") in abox
    assert RoleAssertion("p1", "e0_1", "v0_1") in abox
    assert ConceptAssertion("pos1", "e0_1") in abox
    assert ConceptAssertion("neg2", "e0_1") in abox
    assert goal == parse_concept("(C1 and C2)")


def test_cert3col_alc_flooding_is_a_plain_cycle():
    kb, _ = gen_cert3col_alc(LabeledGraph(1))
    assert classify_fragment(kb) is DlFragment.ALC
    rep = classify_acyclicity(kb.tbox)
    assert rep.classification is Acyclicity.WeaklyAcyclic
    assert rep.witness_text() == "cycle:C1->C1"


def test_cert3col_el_tbox_is_fixed():
    a, _ = gen_cert3col_el(LabeledGraph(1))
    b, _ = gen_cert3col_el(random_labeled_graph(random.Random(3)))
    assert a.tbox == b.tbox
    assert classify_fragment(a) is DlFragment.EL


@pytest.mark.parametrize("gen", [gen_cert3col_alc, gen_cert3col_el])
def test_cert3col_single_vertex(gen):
    kb, goal = gen(LabeledGraph(1))
    assert not solve_bounded(kb, goal, len(kb.individuals)).sat


@pytest.mark.parametrize("gen", [gen_cert3col_alc, gen_cert3col_el])
def test_cert3col_forced_self_loop(gen):
    g = LabeledGraph(1, (Edge(0, 0, Literal((0, 0)), Literal((0, 0), False)),))
    kb, goal = gen(g)
    out = solve_bounded(kb, goal, len(kb.individuals))
    assert out.sat and is_minimal(out.witness, kb)


def test_graph_roundtrip():
    g = random_labeled_graph(random.Random(1), n=3)
    assert parse_graph(render_graph(g)) == g


def test_graph_validation():
    with pytest.raises(ValueError):
        LabeledGraph(1, (Edge(0, 1, Literal((0, 0)), Literal((0, 0))),))
    with pytest.raises(ValueError):
        LabeledGraph(2, (Edge(0, 1, Literal((0, 0)), Literal((0, 0))),
                         Edge(1, 0, Literal((0, 0)), Literal((0, 0)))))


def test_grid_positions():
    assert [grid_position(i, 1, 3, 3) for i in (1, 2, 3)] == ["SW", "S", "SE"]
    assert grid_position(2, 2, 3, 3) == "C"
    assert grid_position(1, 3, 3, 3) == "NW"


def test_recttile_rejects_bad_tiling():
    t = WangTileSet(((0, 0, 0, 0), (1, 1, 1, 1)), 0)
    _, _, build = gen_recttile(t)
    with pytest.raises(ValueError, match="invalid tiling"):
        build(2, 2, lambda i, j: 1 if (i, j) == (1, 1) else 0)


def test_recttile_witness():
    kb, goal, build = gen_recttile(ONE_TILE)
    w = build(2, 2, lambda i, j: 0)
    assert is_model(w, kb)
    assert eval_concept(w, goal)
    for pair in ("(isX and H)", "(isX and V)", "(H and V)"):
        assert not eval_concept(w, parse_concept(pair))
    assert is_minimal(w, kb)


def test_recttile_kb_roundtrip():
    kb, _, _ = gen_recttile(ONE_TILE)
    assert parse_kb(render_kb(kb)) == kb
    assert classify_fragment(kb) is DlFragment.EL


def test_tiles_roundtrip():
    t = WangTileSet(((0, 1, 0, 1), (1, 0, 1, 0)), 0)
    assert parse_tiles(render_tiles(t)) == t


def test_tiling_file():
    assert parse_tiling("1 0\n0 0\n") == {(1, 2): 1, (2, 2): 0, (1, 1): 0, (2, 1): 0}


def test_tile_validation():
    with pytest.raises(ValueError):
        WangTileSet(((0, 0, 0),), 0)
    with pytest.raises(ValueError, match="border"):
        parse_tiles("tile 0 0 0 0\n")


tile_sets = st.builds(
    WangTileSet,
    st.lists(st.tuples(*[st.integers(0, 1)] * 4), min_size=1, max_size=3).map(tuple),
    st.integers(0, 1),
)


@given(tile_sets, st.integers(2, 3), st.integers(2, 2))
def test_find_tiling_matches_brute_force(t, width, height):
    cells = [(i, j) for j in range(1, height + 1) for i in range(1, width + 1)]
    brute = any(
        not tiling_violations(t, width, height, lambda i, j, m=dict(zip(cells, combo)): m[i, j])
        for combo in itertools.product(range(len(t.tiles)), repeat=len(cells))
    )
    found = find_tiling(t, width, height)
    assert (found is not None) == brute
    if found:
        assert not tiling_violations(t, width, height, lambda i, j: found[i, j])


def test_btree_shape():
    kb, goal = gen_btree(2)
    assert len(kb.tbox) == 11
    assert classify_acyclicity(kb.tbox).classification is Acyclicity.StronglyAcyclic
    assert classify_fragment(kb) is DlFragment.EL
    with pytest.raises(ValueError):
        gen_btree(0)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_btree_witness(n):
    kb, goal = gen_btree(n)
    w = btree_witness(n)
    assert is_model(w, kb)
    assert eval_concept(w, goal)
    assert len(eval_concept(w, parse_concept(f"L{n}"))) == 2 ** n


def test_gadget_witness_reads_matching_value():
    kb, goal = gen_gadget()
    assert classify_acyclicity(kb.tbox).classification is Acyclicity.StronglyAcyclic
    out = solve_bounded(kb, goal, 4)
    assert out.sat
    w = out.witness
    a, b = w.individuals["a"], w.individuals["b"]
    assert (a, b) in w.roles["read"]
    tp, fp = eval_concept(w, parse_concept("Tp")), eval_concept(w, parse_concept("Fp"))
    assert {a, b} <= tp or {a, b} <= fp


def test_circuit_not():
    kb, goal = gen_circuit(BooleanCircuit((Input(0), Not(0))), [1])
    assert not solve_no_una(kb, goal).sat
    kb, goal = gen_circuit(BooleanCircuit((Input(0), Not(0))), [0])
    assert solve_no_una(kb, goal).sat


def test_circuit_validation():
    with pytest.raises(ValueError):
        BooleanCircuit(())
    with pytest.raises(ValueError):
        BooleanCircuit((Not(0),))
    with pytest.raises(ValueError):
        gen_circuit(BooleanCircuit((Input(2),)), [1])
    with pytest.raises(ValueError, match="line 2"):
        parse_circuit("input 0\nxor 0 0\n")


@given(seeds)
def test_circuit_roundtrip_and_reduction(seed):
    rng = random.Random(seed)
    c = random_circuit(rng, gates=rng.randint(1, 12), inputs=3)
    assert parse_circuit(render_circuit(c)) == c
    bits = [rng.randint(0, 1) for _ in range(c.arity)]
    kb, goal = gen_circuit(c, bits)
    assert classify_fragment(kb) is DlFragment.EL
    assert solve_no_una(kb, goal).sat == c.evaluate(bits)


@given(seeds)
def test_random_kb_roundtrip(seed):
    rng = random.Random(seed)
    kb = random_kb(rng, depth=rng.randint(1, 3), bottom=True, boolean=rng.random() < 0.5)
    assert parse_kb(render_kb(kb)) == kb


@given(seeds)
def test_random_kb_exact_depth(seed):
    rng = random.Random(seed)
    assert modal_depth(random_kb(rng, depth=2, exact_depth=True)) == 2


@given(seeds)
def test_random_concept_respects_flags(seed):
    rng = random.Random(seed)
    c = random_concept(rng, 2, Vocabulary(), inverse=False, nominals=False)
    assert modal_depth(c) <= 2
    assert classify_fragment(parse_kb(f"X [= {c}")).within(DlFragment.EL)


@given(seeds)
def test_random_strongly_acyclic_kb(seed):
    kb = random_strongly_acyclic_kb(random.Random(seed))
    assert classify_acyclicity(kb.tbox).classification is Acyclicity.StronglyAcyclic
    assert modal_depth(kb) <= 1
    assert classify_fragment(kb).within(DlFragment.EL)


@given(seeds)
def test_random_model_is_model(seed):
    rng = random.Random(seed)
    kb = random_kb(rng)
    m = random_model(rng, kb, 3)
    if m is not None:
        assert is_model(m, kb)
        assert m.individuals == {a: k for k, a in enumerate(kb.individuals)}


def test_seeds_are_reproducible():
    a = [r.random() for r in iter_seeds(4, 3)]
    b = [r.random() for r in iter_seeds(4, 3)]
    assert a == b and len(set(a)) == 3
