"""Reduction constructions emitted as concrete knowledge bases.

Each ``gen_*`` function returns ``(kb, goal)``; ``gen_recttile`` also
returns a builder for the intended witness of a concrete tiling. Next to
every construction sits a direct decision procedure for the source
problem (3-colouring certificates, tilings, circuit evaluation) so tests
can compare verdicts. Small text formats for graphs, tile sets and
circuits are parsed here too, along with seeded random instances.
"""

from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass
from typing import Callable, Iterator, Optional, Sequence, Union

from .acyclicity import Acyclicity, classify_acyclicity
from .minimality import abox_facts
from .semantics import Interpretation, is_model
from .syntax import (
    BOT,
    TOP,
    Axiom,
    Concept,
    ConceptAssertion,
    KnowledgeBase,
    Name,
    Nominal,
    RoleAssertion,
    conj,
    disj,
    exists,
    forall,
    inv,
    modal_depth,
    parse_concept,
)
from .syntax import Not as NotC


def _ax(lhs: str, rhs: str) -> Axiom:
    return Axiom(parse_concept(lhs), parse_concept(rhs))


def _c(concept: str, ind: str) -> ConceptAssertion:
    return ConceptAssertion(concept, ind)


def _r(role: str, subject: str, obj: str) -> RoleAssertion:
    return RoleAssertion(role, subject, obj)


# ------------------------------------------------------------ labelled graphs


@dataclass(frozen=True)
class Literal:
    var: tuple[int, int]
    positive: bool = True

    def holds(self, assignment: dict[tuple[int, int], bool]) -> bool:
        return assignment[self.var] == self.positive

    def __str__(self):
        k1, k2 = self.var
        return f"lit({k1},{k2},{'+' if self.positive else '-'})"


@dataclass(frozen=True)
class Edge:
    i: int
    j: int
    first: Literal
    second: Literal

    def selected(self, assignment: dict[tuple[int, int], bool]) -> bool:
        return self.first.holds(assignment) or self.second.holds(assignment)


@dataclass(frozen=True)
class LabeledGraph:
    """Undirected graph on ``0..n-1`` whose edges carry a two-literal clause.

    Variables are pairs ``(k1, k2)`` with both indices below ``n``. Edges
    are stored with ``i <= j``; at most one label per vertex pair.
    """

    n: int
    edges: tuple[Edge, ...] = ()

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("a graph needs at least one vertex")
        seen: dict[tuple[int, int], Edge] = {}
        for e in self.edges:
            if not (0 <= e.i < self.n and 0 <= e.j < self.n):
                raise ValueError(f"edge ({e.i},{e.j}) leaves the vertex set")
            for lit in (e.first, e.second):
                if not all(0 <= k < self.n for k in lit.var):
                    raise ValueError(f"variable {lit.var} out of range")
            if e.i > e.j:
                e = Edge(e.j, e.i, e.first, e.second)
            if (e.i, e.j) in seen:
                raise ValueError(f"duplicate edge ({e.i},{e.j})")
            seen[e.i, e.j] = e
        object.__setattr__(self, "edges", tuple(seen[k] for k in sorted(seen)))

    @property
    def variables(self) -> list[tuple[int, int]]:
        return [(k1, k2) for k1 in range(self.n) for k2 in range(self.n)]


def is_3colorable(n: int, edges: Sequence[tuple[int, int]]) -> bool:
    for colors in itertools.product(range(3), repeat=n):
        if all(colors[i] != colors[j] for i, j in edges):
            return True
    return False


def cert3col_positive(g: LabeledGraph) -> bool:
    """True when every assignment leaves a 3-colourable graph of selected edges."""
    return cert3col_counterexample(g) is None


def cert3col_counterexample(g: LabeledGraph) -> Optional[dict[tuple[int, int], bool]]:
    variables = g.variables
    for values in itertools.product((False, True), repeat=len(variables)):
        t = dict(zip(variables, values))
        chosen = [(e.i, e.j) for e in g.edges if e.selected(t)]
        if not is_3colorable(g.n, chosen):
            return t
    return None


def _vertex(i: int) -> str:
    return f"u{i}"


def _var(v: tuple[int, int]) -> str:
    return f"v{v[0]}_{v[1]}"


def _edge(i: int, j: int) -> str:
    return f"e{i}_{j}"


def _cert3col_abox(g: LabeledGraph) -> list:
    abox: list = [_c("N", _vertex(i)) for i in range(g.n)]
    abox += [_c("V", _var(v)) for v in g.variables]
    pairs = [(i, j) for i in range(g.n) for j in range(g.n)]
    for i, j in pairs:
        e = _edge(i, j)
        abox += [_c("E", e), _r("l1", e, _vertex(i)), _r("l2", e, _vertex(j))]
    for edge in g.edges:
        e = _edge(edge.i, edge.j)
        for k, lit in ((1, edge.first), (2, edge.second)):
            abox.append(_r(f"p{k}", e, _var(lit.var)))
            abox.append(_c(f"{'pos' if lit.positive else 'neg'}{k}", e))
    return abox


def _selection_axioms(split: bool) -> list[Axiom]:
    out = []
    for k in (1, 2):
        pos, neg = f"(pos{k} and exists p{k}. T)", f"(neg{k} and exists p{k}. F)"
        if split:
            out += [_ax(pos, "Sel"), _ax(neg, "Sel")]
        else:
            out.append(_ax(f"({pos} or {neg})", "Sel"))
    return out


def gen_cert3col_alc(g: LabeledGraph) -> tuple[KnowledgeBase, Concept]:
    abox = _cert3col_abox(g)
    abox += [_r("s", _vertex(k), _edge(i, j))
             for k in range(g.n) for i in range(g.n) for j in range(g.n)]
    tbox = [_ax("V", "(T or F)"), _ax("N", "(C1 or C2 or C3)")]
    tbox += _selection_axioms(split=False)
    tbox += [_ax(f"exists s. (Sel and exists l1. C{i} and exists l2. C{i})", "(C1 and C2 and C3)")
             for i in (1, 2, 3)]
    return KnowledgeBase(tuple(tbox), tuple(abox)), parse_concept("(C1 and C2)")


def _cert3col_el_tbox() -> list[Axiom]:
    tbox = [_ax("V", "exists hasValue. TOP")]
    for v in ("T", "F"):
        tbox += [_ax(f"exists hasValue. {v}", v), _ax(f"exists hasValue. {v}", "Ok")]
    tbox.append(_ax("N", "exists hascolor. Choice"))
    tbox += [_ax(f"exists hascolor. (Choice and Cp{i})", f"C{i}") for i in (1, 2, 3)]
    tbox += [_ax("(Last and Ok)", "Marked"), _ax("(Ok and exists next. Marked)", "Marked")]
    tbox += _selection_axioms(split=True)
    tbox += [_ax(f"exists s. (Sel and exists l1. C{i} and exists l2. C{i})", "Choice")
             for i in (1, 2, 3)]
    return tbox


def gen_cert3col_el(g: LabeledGraph) -> tuple[KnowledgeBase, Concept]:
    abox = _cert3col_abox(g)
    abox += [_c("T", "t1"), _c("F", "t2")]
    colors = [f"c{i}_{q}" for i in range(g.n) for q in (1, 2, 3)]
    for i in range(g.n):
        for q in (1, 2, 3):
            abox += [_r("hascolor", _vertex(i), f"c{i}_{q}"), _c(f"Cp{q}", f"c{i}_{q}")]
    chain = [_vertex(i) for i in range(g.n)] + [_var(v) for v in g.variables]
    abox += [_r("next", a, b) for a, b in zip(chain, chain[1:])]
    abox += [_c("First", chain[0]), _c("Last", chain[-1])]
    abox += [_r("s", c, _edge(i, j)) for c in colors for i in range(g.n) for j in range(g.n)]
    kb = KnowledgeBase(tuple(_cert3col_el_tbox()), tuple(abox))
    return kb, parse_concept("(First and C1 and C2)")


def random_labeled_graph(rng: random.Random, n: int = 2, p_edge: float = 0.5) -> LabeledGraph:
    """Random graph over all pairs ``i <= j`` (self-loops included)."""
    variables = [(k1, k2) for k1 in range(n) for k2 in range(n)]

    def lit() -> Literal:
        return Literal(rng.choice(variables), rng.random() < 0.5)

    edges = [Edge(i, j, lit(), lit())
             for i in range(n) for j in range(i, n) if rng.random() < p_edge]
    return LabeledGraph(n, tuple(edges))


_LIT = re.compile(r"lit\((\d+),(\d+),([+-])\)\Z")


def parse_graph(text: str) -> LabeledGraph:
    """``n <count>`` then ``edge i j lit(k1,k2,±) lit(k3,k4,±)`` lines; ``#`` comments."""
    n = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        words = raw.split("#", 1)[0].split()
        if not words:
            continue
        try:
            if words[0] == "n" and len(words) == 2:
                n = int(words[1])
            elif words[0] == "edge" and len(words) == 5:
                lits = []
                for w in words[3:]:
                    m = _LIT.match(w)
                    if not m:
                        raise ValueError(f"bad literal {w!r}")
                    lits.append(Literal((int(m[1]), int(m[2])), m[3] == "+"))
                edges.append(Edge(int(words[1]), int(words[2]), *lits))
            else:
                raise ValueError(f"unrecognized line {raw.strip()!r}")
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    if n is None:
        raise ValueError("missing 'n <count>' line")
    return LabeledGraph(n, tuple(edges))


def render_graph(g: LabeledGraph) -> str:
    lines = [f"n {g.n}"] + [f"edge {e.i} {e.j} {e.first} {e.second}" for e in g.edges]
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------------ tiling

POSITIONS = ("C", "S", "N", "E", "W", "SE", "SW", "NE", "NW")
_LAYOUT = (("NW", "N", "NE"), ("W", "C", "E"), ("SW", "S", "SE"))


def _successors(horizontal: bool) -> list[tuple[str, str]]:
    """Pairs (p, q) where q may follow p to the right (or above).

    Within a row ``x y z`` of the layout: x -> y, x -> z, y -> y, y -> z.
    """
    lines = _LAYOUT if horizontal else tuple(zip(*reversed(_LAYOUT)))
    out = []
    for x, y, z in lines:
        out += [(x, y), (x, z), (y, y), (y, z)]
    return out


H_SUCC = _successors(True)
V_SUCC = _successors(False)
_NO_H = ("SE", "E", "NE")
_NO_V = ("NW", "N", "NE")
# sides (north, east, south, west) that must carry the border colour
_BORDER_SIDES = {"C": (), "N": (0,), "E": (1,), "S": (2,), "W": (3,),
                 "NE": (0, 1), "NW": (0, 3), "SE": (1, 2), "SW": (2, 3)}
_CHOICES = {"isX": ("C", "N", "E"), "H": ("C", "N", "S", "W", "SW"),
            "V": ("C", "E", "S", "W", "SW")}


@dataclass(frozen=True)
class WangTileSet:
    tiles: tuple[tuple[int, int, int, int], ...]  # (north, east, south, west)
    border: int

    def __post_init__(self):
        tiles = tuple(tuple(int(x) for x in t) for t in self.tiles)
        if any(len(t) != 4 for t in tiles):
            raise ValueError("a tile has exactly four sides")
        if self.border < 0 or any(x < 0 for t in tiles for x in t):
            raise ValueError("colours are non-negative integers")
        object.__setattr__(self, "tiles", tiles)

    def h_pairs(self) -> list[tuple[int, int]]:
        return [(a, b) for a, ta in enumerate(self.tiles) for b, tb in enumerate(self.tiles)
                if ta[1] == tb[3]]

    def v_pairs(self) -> list[tuple[int, int]]:
        return [(a, b) for a, ta in enumerate(self.tiles) for b, tb in enumerate(self.tiles)
                if ta[0] == tb[2]]

    def border_ok(self, tile: int, position: str) -> bool:
        return all(self.tiles[tile][side] == self.border for side in _BORDER_SIDES[position])


def grid_position(i: int, j: int, width: int, height: int) -> str:
    """Position class of cell (i, j), 1-based, with (1, 1) the south-west corner."""
    ns = "N" if j == height else "S" if j == 1 else ""
    ew = "E" if i == width else "W" if i == 1 else ""
    return (ns + ew) or "C"


def tiling_violations(t: WangTileSet, width: int, height: int,
                      tiling: Callable[[int, int], int]) -> list[str]:
    out = []
    if width < 2 or height < 2:
        out.append("rectangle must be at least 2x2")
        return out
    h, v = set(t.h_pairs()), set(t.v_pairs())
    for i in range(1, width + 1):
        for j in range(1, height + 1):
            tile = tiling(i, j)
            if not 0 <= tile < len(t.tiles):
                out.append(f"cell ({i},{j}) has no tile {tile}")
                continue
            if not t.border_ok(tile, grid_position(i, j, width, height)):
                out.append(f"cell ({i},{j}) breaks the border colour")
            if i < width and (tile, tiling(i + 1, j)) not in h:
                out.append(f"cells ({i},{j}) and ({i + 1},{j}) do not match")
            if j < height and (tile, tiling(i, j + 1)) not in v:
                out.append(f"cells ({i},{j}) and ({i},{j + 1}) do not match")
    return out


def find_tiling(t: WangTileSet, width: int, height: int) -> Optional[dict[tuple[int, int], int]]:
    """Exhaustive search, row by row from the south-west corner."""
    cells = [(i, j) for j in range(1, height + 1) for i in range(1, width + 1)]
    h, v = set(t.h_pairs()), set(t.v_pairs())
    placed: dict[tuple[int, int], int] = {}

    def fits(i: int, j: int, tile: int) -> bool:
        if not t.border_ok(tile, grid_position(i, j, width, height)):
            return False
        if i > 1 and (placed[i - 1, j], tile) not in h:
            return False
        return j == 1 or (placed[i, j - 1], tile) in v

    def place(k: int) -> bool:
        if k == len(cells):
            return True
        i, j = cells[k]
        for tile in range(len(t.tiles)):
            if fits(i, j, tile):
                placed[i, j] = tile
                if place(k + 1):
                    return True
                del placed[i, j]
        return False

    return dict(placed) if place(0) else None


def _tile(k: int) -> str:
    return f"Tile{k}"


def _recttile_tbox(t: WangTileSet) -> list[Axiom]:
    tiles = range(len(t.tiles))
    tb = [_ax("Node", "exists pos. Any"), _ax("Node", "exists tile. Any")]
    tb += [_ax(f"(Node and exists pos. {p})", "exists h. Node") for p in POSITIONS if p not in _NO_H]
    tb += [_ax(f"(Node and exists pos. {p})", "exists v. Node") for p in POSITIONS if p not in _NO_V]

    tb += [_ax(f"exists pos. {p}", "HGoodP") for p in _NO_H]
    tb += [_ax(f"(exists pos. {p} and exists h. (GoodP and exists pos. {q}))", "HGoodP")
           for p, q in H_SUCC]
    tb += [_ax(f"exists pos. {p}", "VGoodP") for p in _NO_V]
    tb += [_ax(f"(exists pos. {p} and exists v. (GoodP and exists pos. {q}))", "VGoodP")
           for p, q in V_SUCC]
    tb += [_ax("(HGoodP and VGoodP)", "GoodP"), _ax("(GoodP and Root)", "Subgoal1")]

    tb += [_ax(f"exists pos. {p}", "HGoodT") for p in _NO_H]
    tb += [_ax(f"(exists pos. {p} and exists tile. {_tile(a)} and "
               f"exists h. (GoodT and exists tile. {_tile(b)}))", "HGoodT")
           for p in POSITIONS if p not in _NO_H for a, b in t.h_pairs()]
    tb += [_ax(f"exists pos. {p}", "VGoodT") for p in _NO_V]
    tb += [_ax(f"(exists pos. {p} and exists tile. {_tile(a)} and "
               f"exists v. (GoodT and exists tile. {_tile(b)}))", "VGoodT")
           for p in POSITIONS if p not in _NO_V for a, b in t.v_pairs()]
    tb.append(_ax("exists pos. C", "BGoodT"))
    tb += [_ax(f"(exists pos. {p} and exists tile. {_tile(k)})", "BGoodT")
           for p in POSITIONS if p != "C" for k in tiles if t.border_ok(k, p)]
    tb += [_ax("(HGoodT and VGoodT and BGoodT)", "GoodT"), _ax("(GoodT and Root)", "Subgoal2")]

    tb.append(_ax("(Root and Subgoal1 and Subgoal2)", "PX"))
    tb += [_ax("(PX and exists pos. NE)", "X"),
           _ax("(Node and PX and exists pos. NW)", "exists h. (Node and PX)"),
           _ax("(Node and PX and exists pos. SE)", "exists v. (Node and PX)")]
    for choice, places in _CHOICES.items():
        tb += [_ax(f"(exists pos. {p} and PX)", f"exists s. {choice}") for p in places]
    tb += [_ax(f"(exists pos. {p} and PX)", "exists s. Ch")
           for p in POSITIONS if p not in ("NE", "NW", "SE")]
    tb += [_ax("exists s. (Ch and isX)", "X"),
           _ax("(Node and exists s. (Ch and H))", "exists h. (Node and PX)"),
           _ax("(Node and exists s. (Ch and V))", "exists v. (Node and PX)")]

    tb += [_ax(f"exists s. ({a} and {b})", "Err") for a, b in (("isX", "H"), ("isX", "V"), ("H", "V"))]
    tb += [_ax("exists h. Err", "Err"), _ax("exists v. Err", "Err"), _ax("exists spy. Err", "Node")]

    tb += [_ax("(exists h. exists v. X and exists v. exists h. X)", "Flood"),
           _ax("exists h. Flood", "Flood"), _ax("exists v. Flood", "Flood"),
           _ax("exists pos. exists aux. Flood", "Flood"),
           _ax("Flood", "(X and PX)")]
    for choice, places in _CHOICES.items():
        tb += [_ax(f"(exists pos. {p} and Flood)", f"exists s. ({choice} and Ch)") for p in places]
    tb.append(_ax("(Flood and Root)", "Goal"))
    return tb


def _recttile_abox(t: WangTileSet) -> list:
    abox = [_c(p, f"a_{p}") for p in POSITIONS]
    abox += [_c(_tile(k), f"a_t{k}") for k in range(len(t.tiles))]
    abox += [_c("Node", "a"), _c("Any", "a"), _r("pos", "a", "a_SW"), _c("Root", "a")]
    abox += [_r("h", "a", "c"), _r("v", "a", "c"), _c("PX", "c"), _r("pos", "c", "c"),
             _r("tile", "c", "c"), _c("Any", "c"), _r("spy", "c", "a")]
    abox.append(_r("aux", "a_NE", "a"))
    return abox


WitnessBuilder = Callable[[int, int, Callable[[int, int], int]], Interpretation]


def gen_recttile(t: WangTileSet) -> tuple[KnowledgeBase, Concept, WitnessBuilder]:
    kb = KnowledgeBase(tuple(_recttile_tbox(t)), tuple(_recttile_abox(t)))

    def build(width: int, height: int, tiling: Callable[[int, int], int]) -> Interpretation:
        problems = tiling_violations(t, width, height, tiling)
        if problems:
            raise ValueError("invalid tiling: " + problems[0])
        return _recttile_witness(kb, t, width, height, tiling)

    return kb, Name("Goal"), build


def _recttile_witness(kb: KnowledgeBase, t: WangTileSet, width: int, height: int,
                      tiling: Callable[[int, int], int]) -> Interpretation:
    grid = [(i, j) for j in range(1, height + 1) for i in range(1, width + 1)]
    labels = ["a" if g == (1, 1) else f"g{g[0]}_{g[1]}" for g in grid]
    labels += [f"a_{p}" for p in POSITIONS] + [f"a_t{k}" for k in range(len(t.tiles))]
    labels += ["c", "c_isX", "c_H", "c_V"]
    ids = {lab: k for k, lab in enumerate(labels)}
    cell = {g: k for k, g in enumerate(grid)}
    individuals = {lab: ids[lab] for lab in labels if not lab.startswith(("g", "c_"))}

    facts = set(abox_facts(kb, individuals))
    a = individuals["a"]
    facts |= {("Subgoal1", a), ("Subgoal2", a), ("Goal", a)}
    for name in ("Node", "Flood", "X", "PX", "GoodP", "HGoodP", "VGoodP",
                 "GoodT", "HGoodT", "VGoodT", "BGoodT"):
        facts |= {(name, cell[g]) for g in grid}
    for (i, j), d in cell.items():
        p = grid_position(i, j, width, height)
        k = tiling(i, j)
        facts |= {("pos", d, ids[f"a_{p}"]), ("tile", d, ids[f"a_t{k}"]),
                  ("Any", ids[f"a_{p}"]), ("Any", ids[f"a_t{k}"])}
        if i < width:
            facts.add(("h", d, cell[i + 1, j]))
        if j < height:
            facts.add(("v", d, cell[i, j + 1]))
        for choice, places in _CHOICES.items():
            if p in places:
                target = ids[f"c_{choice}"]
                facts |= {("s", d, target), (choice, target), ("Ch", target)}
    return Interpretation.from_facts(labels, individuals, facts)


def parse_tiles(text: str) -> WangTileSet:
    """``tile N E S W`` lines plus one ``border b`` line; ``#`` comments."""
    tiles = []
    border = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        words = raw.split("#", 1)[0].split()
        if not words:
            continue
        try:
            if words[0] == "tile" and len(words) == 5:
                tiles.append(tuple(int(w) for w in words[1:]))
            elif words[0] == "border" and len(words) == 2:
                border = int(words[1])
            else:
                raise ValueError(f"unrecognized line {raw.strip()!r}")
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    if border is None:
        raise ValueError("missing 'border <colour>' line")
    return WangTileSet(tuple(tiles), border)


def render_tiles(t: WangTileSet) -> str:
    lines = [f"tile {n} {e} {s} {w}" for n, e, s, w in t.tiles] + [f"border {t.border}"]
    return "\n".join(lines) + "\n"


def parse_tiling(text: str) -> dict[tuple[int, int], int]:
    """Rows of tile indices, northmost row first."""
    rows = [line.split() for line in text.splitlines() if line.split("#", 1)[0].strip()]
    height = len(rows)
    out = {}
    for r, row in enumerate(rows):
        for i, tok in enumerate(row, 1):
            out[i, height - r] = int(tok)
    return out


# ------------------------------------------------------------- small gadgets


def gen_btree(n: int) -> tuple[KnowledgeBase, Concept]:
    """Forward tree of depth ``n`` below ``a`` and a reverse tree rebuilt from its leaves.

    Each reverse level gets its own ``pick{j}`` role; a single shared role
    would close a cycle through the dependency graph.
    """
    if n <= 0:
        raise ValueError("tree depth must be positive")
    tbox = [_ax(f"L{i}", f"(exists r{i}. L{i + 1} and exists l{i}. L{i + 1})") for i in range(n)]
    for j in range(n):
        nxt = j + 1
        tbox += [
            _ax(f"Lp{j}", f"exists pick{j}. TOP"),
            _ax(f"(Lp{j} and exists pick{j}. Left)", f"exists lp{j}. Lp{nxt}l"),
            _ax(f"(Lp{j} and exists pick{j}. Right)", f"exists rp{j}. Lp{nxt}r"),
            _ax(f"(Lp{nxt}l and Lp{nxt}r)", f"Lp{nxt}"),
        ]
    tbox.append(_ax(f"L{n}", "Lp0"))
    abox = [_c("L0", "a"), _c("Left", "o"), _c("Right", "op")]
    return KnowledgeBase(tuple(tbox), tuple(abox)), Name(f"Lp{n}")


def btree_witness(n: int) -> Interpretation:
    """A model of ``gen_btree(n)`` with two full trees sharing 2^n leaves.

    The forward tree hangs below ``a``; the reverse tree is rebuilt from
    the leaves upward, every reverse node being its own element.
    """
    if n <= 0:
        raise ValueError("tree depth must be positive")
    labels = ["a", "o", "op"]
    facts: set[tuple] = set()
    ids = {"a": 0, "o": 1, "op": 2}

    def new(label: str) -> int:
        ids[label] = len(labels)
        labels.append(label)
        return ids[label]

    level = [ids["a"]]
    facts.add(("L0", ids["a"]))
    for i in range(n):
        nxt = []
        for k, d in enumerate(level):
            left, right = new(f"f{i + 1}_{2 * k}"), new(f"f{i + 1}_{2 * k + 1}")
            facts |= {(f"r{i}", d, right), (f"l{i}", d, left),
                      (f"L{i + 1}", left), (f"L{i + 1}", right)}
            nxt += [left, right]
        level = nxt
    facts |= {("Left", ids["o"]), ("Right", ids["op"])}
    for j in range(n):
        facts |= {(f"Lp{j}", d) for d in level}
        parents = []
        for k in range(0, len(level), 2):
            left, right = level[k], level[k + 1]
            up = new(f"b{j + 1}_{k // 2}")
            facts |= {(f"pick{j}", left, ids["o"]), (f"pick{j}", right, ids["op"]),
                      (f"lp{j}", left, up), (f"rp{j}", right, up),
                      (f"Lp{j + 1}l", up), (f"Lp{j + 1}r", up), (f"Lp{j + 1}", up)}
            parents.append(up)
        level = parents
    return Interpretation.from_facts(labels, {a: ids[a] for a in ("a", "o", "op")}, facts)


def gen_gadget() -> tuple[KnowledgeBase, Concept]:
    tbox = [_ax("N1", "exists val. TV"), _ax("N2", "exists val. TV"), _ax("N1", "exists read. TOP")]
    for v in ("T", "F"):
        tbox += [_ax(f"exists val. {v}", f"{v}p"),
                 _ax(f"({v}p and exists read. (N2 and {v}p))", "Goal")]
    abox = [_c("N1", "a"), _c("N2", "b"), _c("T", "v1"), _c("F", "v2")]
    return KnowledgeBase(tuple(tbox), tuple(abox)), Name("Goal")


# ------------------------------------------------------------------ circuits


@dataclass(frozen=True)
class Input:
    index: int


@dataclass(frozen=True)
class And:
    left: int
    right: int


@dataclass(frozen=True)
class Or:
    left: int
    right: int


@dataclass(frozen=True)
class Not:
    arg: int


Gate = Union[Input, And, Or, Not]


@dataclass(frozen=True)
class BooleanCircuit:
    gates: tuple[Gate, ...]
    output: int = -1

    def __post_init__(self):
        gates = tuple(self.gates)
        if not gates:
            raise ValueError("a circuit needs at least one gate")
        for k, g in enumerate(gates):
            refs = (g.left, g.right) if isinstance(g, (And, Or)) else \
                (g.arg,) if isinstance(g, Not) else ()
            if any(not 0 <= r < k for r in refs):
                raise ValueError(f"gate {k} refers to a later or missing gate")
            if isinstance(g, Input) and g.index < 0:
                raise ValueError(f"gate {k} reads a negative input index")
        out = self.output if self.output >= 0 else len(gates) + self.output
        if not 0 <= out < len(gates):
            raise ValueError("output gate out of range")
        object.__setattr__(self, "gates", gates)
        object.__setattr__(self, "output", out)

    @property
    def arity(self) -> int:
        return 1 + max((g.index for g in self.gates if isinstance(g, Input)), default=-1)

    def evaluate(self, bits: Sequence[int]) -> bool:
        values: list[bool] = []
        for g in self.gates:
            if isinstance(g, Input):
                values.append(bool(bits[g.index]))
            elif isinstance(g, And):
                values.append(values[g.left] and values[g.right])
            elif isinstance(g, Or):
                values.append(values[g.left] or values[g.right])
            else:
                values.append(not values[g.arg])
        return values[self.output]


def gen_circuit(c: BooleanCircuit, bits: Sequence[int]) -> tuple[KnowledgeBase, Concept]:
    if len(bits) < c.arity:
        raise ValueError(f"circuit reads {c.arity} input bits, got {len(bits)}")
    abox = []
    tbox = []
    for k, g in enumerate(c.gates):
        me, bar = f"G{k}", f"Gbar{k}"
        if isinstance(g, Input):
            abox.append(_c(me if bits[g.index] else bar, "a"))
        elif isinstance(g, And):
            x, y = g.left, g.right
            tbox += [_ax(f"(G{x} and G{y})", me), _ax(f"Gbar{x}", bar), _ax(f"Gbar{y}", bar)]
        elif isinstance(g, Or):
            x, y = g.left, g.right
            tbox += [_ax(f"G{x}", me), _ax(f"G{y}", me), _ax(f"(Gbar{x} and Gbar{y})", bar)]
        else:
            tbox += [_ax(f"Gbar{g.arg}", me), _ax(f"G{g.arg}", bar)]
    return KnowledgeBase(tuple(tbox), tuple(abox)), Name(f"G{c.output}")


def random_circuit(rng: random.Random, gates: int = 10, inputs: int = 3) -> BooleanCircuit:
    if gates < 1:
        raise ValueError("need at least one gate")
    inputs = max(1, min(inputs, gates))
    out: list[Gate] = [Input(k) for k in range(inputs)]
    while len(out) < gates:
        k = len(out)
        kind = rng.choice(("and", "or", "not"))
        if kind == "not":
            out.append(Not(rng.randrange(k)))
        else:
            cls = And if kind == "and" else Or
            out.append(cls(rng.randrange(k), rng.randrange(k)))
    return BooleanCircuit(tuple(out))


def parse_circuit(text: str) -> BooleanCircuit:
    """One gate per line: ``input i``, ``and g h``, ``or g h``, ``not g``; optional ``output g``.

    Gates are numbered from 0 in order of appearance; the last gate is the
    output unless stated otherwise.
    """
    gates: list[Gate] = []
    output = -1
    for lineno, raw in enumerate(text.splitlines(), 1):
        words = raw.split("#", 1)[0].split()
        if not words:
            continue
        try:
            op, args = words[0], [int(w) for w in words[1:]]
            if op == "input" and len(args) == 1:
                gates.append(Input(args[0]))
            elif op in ("and", "or") and len(args) == 2:
                gates.append((And if op == "and" else Or)(*args))
            elif op == "not" and len(args) == 1:
                gates.append(Not(args[0]))
            elif op == "output" and len(args) == 1:
                output = args[0]
            else:
                raise ValueError(f"unrecognized line {raw.strip()!r}")
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    return BooleanCircuit(tuple(gates), output)


def render_circuit(c: BooleanCircuit) -> str:
    lines = []
    for g in c.gates:
        if isinstance(g, Input):
            lines.append(f"input {g.index}")
        elif isinstance(g, (And, Or)):
            lines.append(f"{'and' if isinstance(g, And) else 'or'} {g.left} {g.right}")
        else:
            lines.append(f"not {g.arg}")
    lines.append(f"output {c.output}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------- random instances


@dataclass(frozen=True)
class Vocabulary:
    concepts: tuple[str, ...] = ("A", "B", "C")
    roles: tuple[str, ...] = ("r",)
    individuals: tuple[str, ...] = ("a", "b")


def random_concept(rng: random.Random, depth: int, voc: Vocabulary, *, size: int = 3,
                   inverse: bool = True, nominals: bool = True, bottom: bool = False,
                   boolean: bool = False) -> Concept:
    """An EL-style concept with at most ``depth`` nested quantifiers.

    ``size`` bounds the number of nested connectives. The flags widen the
    language: inverse roles, nominals, ⊥, and (for ``boolean``) negation,
    disjunction and universal restrictions.
    """
    opts = dict(inverse=inverse, nominals=nominals, bottom=bottom, boolean=boolean)
    leaves: list[Callable[[], Concept]] = [lambda: Name(rng.choice(voc.concepts))] * 4
    leaves.append(lambda: TOP)
    if nominals and voc.individuals:
        leaves.append(lambda: Nominal(rng.choice(voc.individuals)))
    if bottom:
        leaves.append(lambda: BOT)
    kinds = ["leaf", "leaf"]
    if size > 0:
        kinds.append("and")
        if depth > 0 and voc.roles:
            kinds += ["exists", "exists"]
        if boolean:
            kinds += ["not", "or"] + (["forall"] if depth > 0 and voc.roles else [])
    kind = rng.choice(kinds)
    if kind == "leaf":
        return rng.choice(leaves)()
    sub = size - 1
    if kind == "and":
        return conj(*(random_concept(rng, depth, voc, size=sub, **opts) for _ in range(2)))
    if kind == "or":
        return disj(*(random_concept(rng, depth, voc, size=sub, **opts) for _ in range(2)))
    if kind == "not":
        return NotC(random_concept(rng, depth, voc, size=sub, **opts))
    name = rng.choice(voc.roles)
    role = inv(name) if inverse and rng.random() < 0.3 else name
    child = random_concept(rng, depth - 1, voc, size=sub, **opts)
    return exists(role, child) if kind == "exists" else forall(role, child)


def random_abox(rng: random.Random, voc: Vocabulary, size: int) -> list:
    out = []
    for _ in range(size):
        if voc.roles and rng.random() < 0.4:
            out.append(_r(rng.choice(voc.roles), rng.choice(voc.individuals),
                          rng.choice(voc.individuals)))
        else:
            out.append(_c(rng.choice(voc.concepts), rng.choice(voc.individuals)))
    return out


def random_kb(rng: random.Random, *, axioms: int = 3, depth: int = 1, voc: Vocabulary = Vocabulary(),
              abox_size: int = 2, exact_depth: bool = False, **language) -> KnowledgeBase:
    """Random TBox plus ABox over ``voc``; ``language`` goes to :func:`random_concept`.

    With ``exact_depth`` the KB is redrawn until its modal depth equals ``depth``.
    """
    while True:
        tbox = []
        for _ in range(rng.randint(1, axioms)):
            tbox.append(Axiom(random_concept(rng, depth, voc, **language),
                              random_concept(rng, depth, voc, **language)))
        inds = voc.individuals
        abox = random_abox(rng, voc, rng.randint(1, abox_size)) if inds else []
        kb = KnowledgeBase(tuple(tbox), tuple(abox))
        if not exact_depth or modal_depth(kb) == depth:
            return kb


def random_strongly_acyclic_kb(rng: random.Random, *, axioms: int = 3,
                               voc: Vocabulary = Vocabulary(), abox_size: int = 2) -> KnowledgeBase:
    """EL KB of modal depth at most one whose dependency graph has no cycle.

    Predicates are ranked at random; each axiom reads only predicates ranked
    below a cut point and writes only those at or above it.
    """
    preds = [("c", x) for x in voc.concepts] + [("r", x) for x in voc.roles]
    while True:
        rng.shuffle(preds)
        tbox = []
        for _ in range(rng.randint(1, axioms)):
            cut = rng.randint(1, len(preds) - 1)
            tbox.append(Axiom(_side(rng, preds[:cut]), _side(rng, preds[cut:])))
        kb = KnowledgeBase(tuple(tbox), tuple(random_abox(rng, voc, rng.randint(1, abox_size))))
        if classify_acyclicity(kb.tbox).classification is Acyclicity.StronglyAcyclic:
            return kb


def _side(rng: random.Random, preds: list[tuple[str, str]]) -> Concept:
    concepts = [x for k, x in preds if k == "c"]
    roles = [x for k, x in preds if k == "r"]
    parts = []
    for _ in range(rng.randint(1, 2)):
        if roles and rng.random() < 0.5:
            child = Name(rng.choice(concepts)) if concepts and rng.random() < 0.6 else TOP
            parts.append(exists(rng.choice(roles), child))
        elif concepts:
            parts.append(Name(rng.choice(concepts)))
    return conj(*parts) if parts else exists(roles[0], TOP)


def random_model(rng: random.Random, kb: KnowledgeBase, size: int, *, max_free: int = 12,
                 density: float = 0.6, tries: int = 200) -> Optional[Interpretation]:
    """A model of ``kb`` over ``size`` elements (UNA) with at most ``max_free`` non-ABox facts.

    Rejection sampling: random fact sets on top of the ABox until one is a
    model. Returns None when every try fails.
    """
    inds = {a: k for k, a in enumerate(kb.individuals)}
    if size < len(inds):
        raise ValueError("domain smaller than the number of individuals")
    labels = tuple(f"d{k}" for k in range(size))
    forced = abox_facts(kb, inds)
    universe = [(a, d) for a in sorted(kb.concept_names) for d in range(size)]
    universe += [(r, d, e) for r in sorted(kb.role_names) for d in range(size) for e in range(size)]
    universe = [f for f in universe if f not in forced]
    for _ in range(tries):
        facts = [f for f in universe if rng.random() < density]
        if len(facts) > max_free:
            facts = rng.sample(facts, max_free)
        i = Interpretation.from_facts(labels, inds, forced | set(facts))
        if is_model(i, kb):
            return i
    return None


def iter_seeds(seed: int, count: int) -> Iterator[random.Random]:
    """``count`` independent generators derived from one seed."""
    root = random.Random(seed)
    for _ in range(count):
        yield random.Random(root.getrandbits(64))
