import io
import subprocess
import sys

import pytest

from minmod.cli import Report, run, split_goal
from minmod.semantics import parse_interpretation, render_interpretation
from minmod.syntax import parse_kb, render_kb

FANS = "Fan [= exists likes. Movie\nCritic [= exists dislikes. TOP\nFan(ann)\nCritic(bob)\n"
GOAL = "(Movie and exists dislikes^-. TOP)"


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def files(tmp_path, loop_kb, loop_model):
    def write(name, text):
        path = tmp_path / name
        path.write_text(text)
        return path

    return {
        "loop": write("loop.kb", render_kb(loop_kb)),
        "loop_model": write("loop.model", render_interpretation(loop_model)),
        "fans": write("fans.kb", FANS + f"GOAL: {GOAL}\n"),
        "bad": write("bad.kb", "A [= (B and\n"),
        "tmp": tmp_path,
    }


def test_check(files):
    code, out, _ = cli("check", files["loop"])
    assert code == 0
    assert out.splitlines()[0] == "fragment=EL md=1 acyclicity=WeaklyAcyclic"
    report = Report.from_text(out)
    assert report.get("dg_witness") == "cycle:A->A"
    assert report.get("individuals") == "2"


def test_check_emits_graph(files):
    _, out, _ = cli("check", files["loop"], "--emit-graph")
    assert Report.from_text(out).sections["graph"] == "EDGE A A\nEDGE r A\n"


def test_normalize(files, tmp_path):
    kb = tmp_path / "deep.kb"
    kb.write_text("A [= exists r. exists s. B\n")
    target = tmp_path / "flat.kb"
    code, _, _ = cli("normalize", kb, "-o", target)
    assert code == 0
    assert target.read_text() == "A [= exists r. __n1\n__n1 [= exists s. B\n"


def test_normalize_rejects_alc(tmp_path):
    kb = tmp_path / "alc.kb"
    kb.write_text("A [= (B or C)\n")
    code, _, err = cli("normalize", kb)
    assert code == 2 and "fragment not supported" in err


def test_minimal_reports_witness(files):
    code, out, _ = cli("minimal", files["loop"], files["loop_model"])
    assert code == 1
    report = Report.from_text(out)
    assert report.get("minimal") == "no" and report.get("dropped") == "2"
    smaller = parse_interpretation(report.sections["witness"])
    assert not smaller.concepts.get("A")


def test_minimal_pointwise(files):
    code, out, _ = cli("minimal", files["loop"], files["loop_model"], "--pointwise")
    assert code == 0
    assert out.startswith("mode=pointwise minimal=yes")


def test_minimal_rejects_non_model(files, tmp_path):
    model = tmp_path / "empty.model"
    model.write_text("domain: d e\nind a = d\nind b = e\n")
    code, _, err = cli("minimal", files["loop"], model)
    assert code == 2 and "not a model" in err


def test_solve_witness_is_minimal(files):
    witness = files["tmp"] / "w.model"
    code, out, _ = cli("solve", files["fans"], "--max-domain", 4, "--witness-out", witness, "--stats")
    assert code == 0
    report = Report.from_text(out)
    assert report.get("status") == "Sat" and report.get("bound") == "128"
    assert report.get("domains_tried") is not None
    code, out, _ = cli("minimal", files["fans"], witness)
    assert code == 0 and "minimal=yes" in out


def test_solve_unsat_within_bound(files):
    kb = files["tmp"] / "k1.kb"
    kb.write_text(FANS.replace("Critic(bob)\n", ""))
    code, out, _ = cli("solve", kb, "--goal", GOAL, "--max-domain", 4)
    assert code == 1 and "status=UnsatWithinBound" in out


def test_solve_no_una(files):
    code, out, _ = cli("solve", files["fans"], "--goal", "Movie", "--no-una")
    assert code == 0 and "una=no" in out


def test_oracle(files):
    code, out, _ = cli("oracle", files["fans"], "--max-domain", 2)
    assert code == 0 and "status=Sat" in out
    code, _, err = cli("oracle", files["fans"], "--max-domain", 4, "--cap", 5)
    assert code == 2 and "oracle instance too large" in err


def test_gen_btree_roundtrips(files):
    code, out, _ = cli("gen", "btree", "--n", 2)
    assert code == 0
    text, goal = split_goal(out)
    assert goal == "Lp2" and len(parse_kb(text).tbox) == 11


def test_gen_recttile_witness(files):
    tiles = files["tmp"] / "one.tiles"
    tiles.write_text("tile 0 0 0 0\nborder 0\n")
    kb, model = files["tmp"] / "rt.kb", files["tmp"] / "rt.model"
    code, _, _ = cli("gen", "recttile", tiles, "--width", 2, "--height", 2,
                     "-o", kb, "--witness-out", model)
    assert code == 0
    code, out, _ = cli("minimal", kb, model)
    assert code == 0 and "minimal=yes" in out


def test_gen_circuit(files):
    gates = files["tmp"] / "and.gates"
    gates.write_text("input 0\ninput 1\nand 0 1\n")
    kb = files["tmp"] / "and.kb"
    assert cli("gen", "circuit", gates, "--bits", "11", "-o", kb)[0] == 0
    assert cli("solve", kb, "--no-una")[0] == 0
    assert cli("gen", "circuit", gates, "--bits", "10", "-o", kb)[0] == 0
    assert cli("solve", kb, "--no-una")[0] == 1


def test_gen_cert3col(files):
    graph = files["tmp"] / "g.graph"
    graph.write_text("n 1\nedge 0 0 lit(0,0,+) lit(0,0,-)\n")
    for what in ("cert3col", "cert3col-el"):
        code, out, _ = cli("gen", what, graph)
        assert code == 0 and "GOAL:" in out


def test_gen_random_is_seeded():
    assert cli("gen", "random", "--seed", 3)[1] == cli("gen", "random", "--seed", 3)[1]


def test_report_roundtrip():
    r = Report()
    r.add(("status", "Sat"), ("note", "two words"))
    r.sections["witness"] = "domain: d\n"
    back = Report.from_text(r.to_text())
    assert back.lines == r.lines and back.sections == r.sections


@pytest.mark.parametrize("argv, message", [
    (["check", "missing.kb"], "cannot read"),
    (["solve", "{bad}", "--goal", "A"], "--max-domain is required"),
    (["check", "{bad}"], "line 1"),
    (["solve", "{loop}", "--max-domain", "3"], "no goal"),
    (["frobnicate"], "invalid choice"),
])
def test_errors_exit_two(files, argv, message):
    argv = [a.format(**files) for a in argv]
    code, _, err = cli(*argv)
    assert code == 2
    assert err.startswith("error:") and message in err


def test_module_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "minmod", "check", str(files["loop"])],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "acyclicity=WeaklyAcyclic" in proc.stdout
