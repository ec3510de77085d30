"""Command-line interface.

Every command prints a report: ``key=value`` tokens (shell-quoted when
needed), one group per line, optionally followed by ``[name]`` sections
holding multi-line bodies such as a witness model. Exit codes: 0 for Sat
or minimal, 1 for Unsat, UnsatWithinBound or not minimal, 2 for errors.

KB files may carry a ``GOAL: <concept>`` line, used when ``--goal`` is
absent.
"""

from __future__ import annotations

import argparse
import math
import random
import shlex
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from . import generators as gen
from .acyclicity import classify_acyclicity
from .minimality import NotAModelError, exists_smaller_model, pointwise_smaller_model
from .normalize import FragmentError, normalize_md1
from .oracle import OracleTooLarge, goal_satisfiable
from .semantics import Interpretation, parse_interpretation, render_interpretation
from .solver import Status, small_model_bound, solve_bounded, solve_no_una
from .syntax import (
    Concept,
    KnowledgeBase,
    ParseError,
    classify_fragment,
    modal_depth,
    parse_concept,
    parse_kb,
    render_concept,
    render_kb,
)

EXIT_SAT, EXIT_UNSAT, EXIT_ERROR = 0, 1, 2
GOAL_PREFIX = "GOAL:"


class CliError(Exception):
    pass


@dataclass
class Report:
    lines: list[list[tuple[str, str]]] = field(default_factory=list)
    sections: dict[str, str] = field(default_factory=dict)

    def add(self, *pairs: tuple[str, object]) -> None:
        self.lines.append([(k, str(v)) for k, v in pairs])

    def get(self, key: str) -> Optional[str]:
        for line in self.lines:
            for k, v in line:
                if k == key:
                    return v
        return None

    def to_text(self) -> str:
        out = [" ".join(f"{k}={shlex.quote(v)}" for k, v in line) for line in self.lines]
        for name, body in self.sections.items():
            out.append(f"[{name}]")
            out.extend(body.rstrip("\n").split("\n"))
        return "\n".join(out) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Report":
        report = cls()
        current = None
        body: list[str] = []
        for raw in text.rstrip("\n").split("\n"):
            if raw.startswith("[") and raw.endswith("]"):
                if current is not None:
                    report.sections[current] = "\n".join(body) + "\n"
                current, body = raw[1:-1], []
            elif current is not None:
                body.append(raw)
            elif raw.strip():
                pairs = []
                for tok in shlex.split(raw):
                    key, eq, value = tok.partition("=")
                    if not eq:
                        raise ValueError(f"not a key=value token: {tok!r}")
                    pairs.append((key, value))
                report.lines.append(pairs)
        if current is not None:
            report.sections[current] = "\n".join(body) + "\n"
        return report


# ------------------------------------------------------------------ file I/O


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror or exc}") from None


def split_goal(text: str) -> tuple[str, Optional[str]]:
    """Blank out ``GOAL:`` lines (keeping line numbers) and return the last goal."""
    goal = None
    lines = []
    for line in text.splitlines():
        if line.strip().startswith(GOAL_PREFIX):
            goal = line.strip()[len(GOAL_PREFIX):].strip()
            lines.append("")
        else:
            lines.append(line)
    return "\n".join(lines) + "\n", goal


def load_kb(path: str) -> tuple[KnowledgeBase, Optional[str]]:
    text, goal = split_goal(_read(path))
    try:
        return parse_kb(text), goal
    except ParseError as exc:
        raise CliError(f"{path}: {exc}") from None


def _goal(args, file_goal: Optional[str]) -> Concept:
    text = args.goal or file_goal
    if not text:
        raise CliError("no goal: pass --goal or add a 'GOAL:' line to the KB file")
    try:
        return parse_concept(text)
    except ParseError as exc:
        raise CliError(f"goal: {exc}") from None


def load_model(path: str) -> Interpretation:
    try:
        return parse_interpretation(_read(path))
    except ValueError as exc:
        raise CliError(f"{path}: {exc}") from None


def kb_text(kb: KnowledgeBase, goal: Optional[Concept]) -> str:
    text = render_kb(kb)
    if goal is not None:
        text += f"{GOAL_PREFIX} {render_concept(goal)}\n"
    return text


def _emit(text: str, path: Optional[str], out) -> None:
    if path:
        try:
            Path(path).write_text(text)
        except OSError as exc:
            raise CliError(f"cannot write {path}: {exc.strerror or exc}") from None
    else:
        out.write(text)


def _bound_text(bound: int) -> str:
    if bound < 10**30:
        return str(bound)
    return f"~1e{int(math.log10(bound))}"


# ---------------------------------------------------------------- commands


def _summary(report: Report, kb: KnowledgeBase) -> None:
    acy = classify_acyclicity(kb.tbox)
    report.add(("fragment", classify_fragment(kb)), ("md", modal_depth(kb)),
               ("acyclicity", acy.classification))
    if acy.witness_text():
        report.add(("dg_witness", acy.witness_text()))


def cmd_check(args, out) -> int:
    kb, _ = load_kb(args.kb)
    report = Report()
    _summary(report, kb)
    report.add(("axioms", len(kb.tbox)), ("assertions", len(kb.abox)),
               ("individuals", len(kb.individuals)), ("bound", _bound_text(small_model_bound(kb))))
    if args.emit_graph:
        lines = classify_acyclicity(kb.tbox).graph.lines()
        report.sections["graph"] = "".join(line + "\n" for line in lines)
    out.write(report.to_text())
    return EXIT_SAT


def cmd_normalize(args, out) -> int:
    kb, goal = load_kb(args.kb)
    try:
        result = normalize_md1(kb)
    except FragmentError as exc:
        raise CliError(str(exc)) from None
    text = render_kb(result) + (f"{GOAL_PREFIX} {goal}\n" if goal else "")
    _emit(text, args.output, out)
    return EXIT_SAT


def _witness(report: Report, witness: Interpretation, path: Optional[str]) -> None:
    text = render_interpretation(witness)
    if path:
        _emit(text, path, None)
        report.add(("witness", path))
    else:
        report.sections["witness"] = text


def _stats(report: Report, stats) -> None:
    report.add(*sorted(stats.items()))


def cmd_solve(args, out) -> int:
    kb, file_goal = load_kb(args.kb)
    goal = _goal(args, file_goal)
    report = Report()
    _summary(report, kb)
    try:
        if args.no_una:
            outcome = solve_no_una(kb, goal)
        else:
            outcome = solve_bounded(kb, goal, args.max_domain)
    except FragmentError as exc:
        raise CliError(str(exc)) from None
    except ValueError as exc:
        raise CliError(str(exc)) from None
    line = [("status", outcome.status), ("una", "no" if args.no_una else "yes")]
    if not args.no_una:
        line += [("max_domain", args.max_domain), ("bound", _bound_text(small_model_bound(kb)))]
    if outcome.witness is not None:
        line.append(("domain", outcome.witness.size))
    report.add(*line)
    if args.stats:
        _stats(report, outcome.stats)
    if outcome.witness is not None:
        _witness(report, outcome.witness, args.witness_out)
    out.write(report.to_text())
    return EXIT_SAT if outcome.status is Status.Sat else EXIT_UNSAT


def cmd_minimal(args, out) -> int:
    kb, _ = load_kb(args.kb)
    model = load_model(args.model)
    missing = [a for a in kb.individuals if a not in model.individuals]
    if missing:
        raise CliError(f"model does not interpret individual {missing[0]}")
    report = Report()
    try:
        if args.pointwise:
            found = pointwise_smaller_model(model, kb)
            element, smaller = found if found else (None, None)
        else:
            element, smaller = None, exists_smaller_model(model, kb)
    except NotAModelError as exc:
        raise CliError(str(exc)) from None
    line = [("mode", "pointwise" if args.pointwise else "global"),
            ("minimal", "yes" if smaller is None else "no")]
    if element is not None:
        line.append(("element", model.domain[element]))
    report.add(*line)
    if smaller is not None:
        dropped = sorted(model.facts() - smaller.facts())
        report.add(("dropped", len(dropped)))
        _witness(report, smaller, args.witness_out)
    out.write(report.to_text())
    return EXIT_SAT if smaller is None else EXIT_UNSAT


def cmd_oracle(args, out) -> int:
    kb, file_goal = load_kb(args.kb)
    goal = _goal(args, file_goal)
    try:
        witness = goal_satisfiable(kb, goal, args.max_domain, una=not args.no_una, cap=args.cap)
    except OracleTooLarge as exc:
        raise CliError(str(exc)) from None
    except ValueError as exc:
        raise CliError(str(exc)) from None
    report = Report()
    status = Status.Sat if witness is not None else Status.UnsatWithinBound
    report.add(("status", status), ("una", "no" if args.no_una else "yes"),
               ("max_domain", args.max_domain))
    if witness is not None:
        _witness(report, witness, args.witness_out)
    out.write(report.to_text())
    return EXIT_SAT if witness is not None else EXIT_UNSAT


def _graph(path: str) -> gen.LabeledGraph:
    try:
        return gen.parse_graph(_read(path))
    except ValueError as exc:
        raise CliError(f"{path}: {exc}") from None


def cmd_gen(args, out) -> int:
    what = args.what
    witness = None
    try:
        if what == "cert3col":
            kb, goal = gen.gen_cert3col_alc(_graph(args.file))
        elif what == "cert3col-el":
            kb, goal = gen.gen_cert3col_el(_graph(args.file))
        elif what == "recttile":
            kb, goal, witness = _gen_recttile(args)
        elif what == "btree":
            kb, goal = gen.gen_btree(args.n)
        elif what == "gadget":
            kb, goal = gen.gen_gadget()
        elif what == "circuit":
            kb, goal = _gen_circuit(args)
        else:
            rng = random.Random(args.seed)
            kb = gen.random_kb(rng, axioms=args.axioms, depth=args.depth, bottom=True)
            goal = gen.random_concept(rng, 1, gen.Vocabulary())
    except ValueError as exc:
        raise CliError(str(exc)) from None
    _emit(kb_text(kb, goal), args.output, out)
    if witness is not None:
        if not args.witness_out:
            raise CliError("recttile: --witness-out is required with --tiling or --width/--height")
        _emit(render_interpretation(witness), args.witness_out, None)
    return EXIT_SAT


def _gen_recttile(args):
    tiles = gen.parse_tiles(_read(args.file))
    kb, goal, build = gen.gen_recttile(tiles)
    if args.tiling:
        cells = gen.parse_tiling(_read(args.tiling))
        width = max(i for i, _ in cells)
        height = max(j for _, j in cells)
        if len(cells) != width * height:
            raise ValueError("tiling file rows have different lengths")
        return kb, goal, build(width, height, lambda i, j: cells[i, j])
    if args.width or args.height:
        if not (args.width and args.height):
            raise ValueError("--width and --height go together")
        cells = gen.find_tiling(tiles, args.width, args.height)
        if cells is None:
            raise ValueError(f"no tiling of the {args.width}x{args.height} rectangle")
        return kb, goal, build(args.width, args.height, lambda i, j: cells[i, j])
    return kb, goal, None


def _gen_circuit(args):
    if args.random:
        rng = random.Random(args.seed)
        circuit = gen.random_circuit(rng, args.gates, args.inputs)
        bits = [rng.randint(0, 1) for _ in range(circuit.arity)]
    else:
        if not args.file:
            raise ValueError("circuit: give a gate-list file or --random")
        circuit = gen.parse_circuit(_read(args.file))
        if args.bits is None or any(b not in "01" for b in args.bits):
            raise ValueError("circuit: --bits must be a string of 0s and 1s")
        bits = [int(b) for b in args.bits]
    return gen.gen_circuit(circuit, bits)


# ------------------------------------------------------------------ parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="minmod", description="Minimal-model reasoning for lightweight DLs.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("check", help="fragment, modal depth, acyclicity and size bound")
    c.add_argument("kb")
    c.add_argument("--emit-graph", action="store_true", help="list dependency-graph edges")
    c.set_defaults(func=cmd_check)

    c = sub.add_parser("normalize", help="rewrite to modal depth at most one")
    c.add_argument("kb")
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_normalize)

    for name, func, text in (("solve", cmd_solve, "is the goal non-empty in some minimal model?"),
                             ("oracle", cmd_oracle, "brute-force version of solve")):
        c = sub.add_parser(name, help=text)
        c.add_argument("kb")
        c.add_argument("--goal", help="goal concept (default: the file's GOAL line)")
        c.add_argument("--max-domain", type=int, default=None)
        c.add_argument("--no-una", action="store_true", help="drop the unique name assumption")
        c.add_argument("--witness-out")
        if name == "solve":
            c.add_argument("--stats", action="store_true")
        else:
            c.add_argument("--cap", type=int, default=24, help="largest free-fact count")
        c.set_defaults(func=func)

    c = sub.add_parser("minimal", help="check a model for (pointwise) minimality")
    c.add_argument("kb")
    c.add_argument("model")
    c.add_argument("--pointwise", action="store_true")
    c.add_argument("--witness-out")
    c.set_defaults(func=cmd_minimal)

    g = sub.add_parser("gen", help="emit a reduction instance")
    gsub = g.add_subparsers(dest="what", required=True, parser_class=_Parser)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-o", "--output", help="KB file (default: stdout)")
    for name in ("cert3col", "cert3col-el"):
        x = gsub.add_parser(name, parents=[common], help="labelled-graph file: 'n K' and 'edge i j lit(..) lit(..)'")
        x.add_argument("file")
    x = gsub.add_parser("recttile", parents=[common], help="tile file: 'tile N E S W' lines and 'border b'")
    x.add_argument("file")
    x.add_argument("--tiling", help="rows of tile indices, northmost first")
    x.add_argument("--width", type=int)
    x.add_argument("--height", type=int)
    x.add_argument("--witness-out")
    x = gsub.add_parser("btree", parents=[common])
    x.add_argument("--n", type=int, required=True)
    gsub.add_parser("gadget", parents=[common])
    x = gsub.add_parser("circuit", parents=[common], help="gate list: 'input i', 'and g h', 'or g h', 'not g'")
    x.add_argument("file", nargs="?")
    x.add_argument("--bits")
    x.add_argument("--random", action="store_true")
    x.add_argument("--gates", type=int, default=10)
    x.add_argument("--inputs", type=int, default=3)
    x.add_argument("--seed", type=int, default=0)
    x = gsub.add_parser("random", parents=[common], help="random KB with a goal")
    x.add_argument("--seed", type=int, default=0)
    x.add_argument("--axioms", type=int, default=3)
    x.add_argument("--depth", type=int, default=1)
    g.set_defaults(func=cmd_gen)
    return p


def run(argv: Sequence[str], out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(list(argv))
        if args.command in ("solve", "oracle") and not args.no_una and args.max_domain is None:
            raise CliError(f"{args.command}: --max-domain is required")
        if args.command == "oracle" and args.max_domain is None:
            raise CliError("oracle: --max-domain is required")
        return args.func(args, out)
    except CliError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_ERROR


def main() -> None:
    sys.exit(run(sys.argv[1:]))
