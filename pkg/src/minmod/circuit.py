"""Hash-consed AND/NOT circuits over fact variables, and their CNF encoding.

A circuit literal is a signed node index; node 1 is the constant true, so
``TRUE == 1`` and ``FALSE == -1``. Gates are built with constant folding
and structural hashing, which keeps grounded constraints small.

:class:`Grounder` compiles "element d belongs to concept C" into a circuit
literal over atomic facts, the same facts :meth:`Interpretation.facts`
produces: ``(A, d)`` and ``(r, d, e)``.
"""

from __future__ import annotations

from typing import Iterable, Mapping, NamedTuple

from .sat import SatSolver
from .semantics import EvaluationError
from .syntax import And, Axiom, Bot, Concept, Exists, Forall, Name, Nominal, Not, Or, Top

TRUE = 1
FALSE = -1


class Circuit:
    def __init__(self):
        self.args: list = [None, None]
        self.keys: list = [None, None]
        self.gates: dict[tuple[int, ...], int] = {}
        self.vars: dict[object, int] = {}

    def var(self, key) -> int:
        node = self.vars.get(key)
        if node is None:
            node = len(self.args)
            self.args.append(None)
            self.keys.append(key)
            self.vars[key] = node
        return node

    def and_(self, lits: Iterable[int]) -> int:
        out: set[int] = set()
        for lit in lits:
            if lit == TRUE:
                continue
            if lit == FALSE or -lit in out:
                return FALSE
            out.add(lit)
        if not out:
            return TRUE
        if len(out) == 1:
            return next(iter(out))
        key = tuple(sorted(out))
        node = self.gates.get(key)
        if node is None:
            node = len(self.args)
            self.args.append(key)
            self.keys.append(None)
            self.gates[key] = node
        return node

    def or_(self, lits: Iterable[int]) -> int:
        return -self.and_(-lit for lit in lits)

    def is_var(self, lit: int) -> bool:
        node = abs(lit)
        return node > 1 and self.args[node] is None

    def substitute(self, lit: int, values: Mapping[int, bool], memo: dict) -> int:
        """Cofactor: replace the given variable nodes by constants."""
        node = abs(lit)
        sign = 1 if lit > 0 else -1
        if node == 1:
            return lit
        hit = memo.get(node)
        if hit is None:
            args = self.args[node]
            if args is None:
                hit = (TRUE if values[node] else FALSE) if node in values else node
            else:
                hit = self.and_(self.substitute(a, values, memo) for a in args)
            memo[node] = hit
        return hit * sign


class Encoder:
    """Tseitin encoding of circuit literals into a :class:`SatSolver`."""

    def __init__(self, circuit: Circuit, solver: SatSolver):
        self.circuit = circuit
        self.solver = solver
        self.node_var: dict[int, int] = {}
        self.true_var = 0

    def lit(self, lit: int) -> int:
        node = abs(lit)
        if node == 1:
            if not self.true_var:
                self.true_var = self.solver.new_var()
                self.solver.add_clause([self.true_var])
            v = self.true_var
        else:
            v = self.node_var.get(node)
            if v is None:
                v = self._encode(node)
        return v if lit > 0 else -v

    def _encode(self, root: int) -> int:
        args = self.circuit.args
        stack = [root]
        while stack:
            node = stack[-1]
            if node in self.node_var:
                stack.pop()
                continue
            kids = args[node]
            if kids is None:
                self.node_var[node] = self.solver.new_var()
                stack.pop()
                continue
            todo = [abs(k) for k in kids if abs(k) not in self.node_var]
            if todo:
                stack.extend(todo)
                continue
            stack.pop()
            g = self.solver.new_var()
            self.node_var[node] = g
            ks = [self.node_var[abs(k)] * (1 if k > 0 else -1) for k in kids]
            for k in ks:
                self.solver.add_clause([-g, k])
            self.solver.add_clause([g] + [-k for k in ks])
        return self.node_var[root]

    def require(self, lit: int) -> bool:
        """Assert a circuit literal; top-level conjunctions become separate clauses."""
        if lit == TRUE:
            return self.solver.ok
        if lit == FALSE:
            return self.solver.add_clause([])
        kids = self.circuit.args[abs(lit)]
        if kids is not None and lit > 0:
            for k in kids:
                self.require(k)
            return self.solver.ok
        if kids is not None:
            return self.solver.add_clause([self.lit(-k) for k in kids])
        return self.solver.add_clause([self.lit(lit)])


class GroundConstraint(NamedTuple):
    """``element`` satisfies ``axiom`` iff ``literal`` evaluates to true."""

    axiom: Axiom
    element: int
    literal: int


class Grounder:
    def __init__(self, circuit: Circuit, size: int, individuals: Mapping[str, int],
                 fact_lits: Mapping[tuple, int]):
        self.circuit = circuit
        self.size = size
        self.individuals = individuals
        self.fact_lits = fact_lits
        self.succ: dict[tuple[str, bool], list[list[tuple[int, int]]]] = {}
        self.memo: dict[tuple[Concept, int], int] = {}
        self._roles: dict[str, list[tuple[int, int, int]]] = {}
        for fact, lit in fact_lits.items():
            if len(fact) == 3 and lit != FALSE:
                self._roles.setdefault(fact[0], []).append((fact[1], fact[2], lit))

    def successors(self, role: str, inverse: bool) -> list[list[tuple[int, int]]]:
        key = (role, inverse)
        table = self.succ.get(key)
        if table is None:
            table = [[] for _ in range(self.size)]
            for a, b, lit in sorted(self._roles.get(role, ())):
                if inverse:
                    table[b].append((a, lit))
                else:
                    table[a].append((b, lit))
            self.succ[key] = table
        return table

    def at(self, c: Concept, d: int) -> int:
        key = (c, d)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        cir = self.circuit
        if isinstance(c, Top):
            out = TRUE
        elif isinstance(c, Bot):
            out = FALSE
        elif isinstance(c, Name):
            out = self.fact_lits.get((c.name, d), FALSE)
        elif isinstance(c, Nominal):
            if c.individual not in self.individuals:
                raise EvaluationError(f"unknown individual {c.individual}")
            out = TRUE if self.individuals[c.individual] == d else FALSE
        elif isinstance(c, Not):
            out = -self.at(c.child, d)
        elif isinstance(c, And):
            out = FALSE
            parts = []
            for x in c.operands:
                lit = self.at(x, d)
                if lit == FALSE:
                    break
                parts.append(lit)
            else:
                out = cir.and_(parts)
        elif isinstance(c, Or):
            out = TRUE
            parts = []
            for x in c.operands:
                lit = self.at(x, d)
                if lit == TRUE:
                    break
                parts.append(lit)
            else:
                out = cir.or_(parts)
        elif isinstance(c, Exists):
            table = self.successors(c.role.name, c.role.inverse)
            out = cir.or_(cir.and_((lit, self.at(c.child, e))) for e, lit in table[d])
        elif isinstance(c, Forall):
            table = self.successors(c.role.name, c.role.inverse)
            out = cir.and_(cir.or_((-lit, self.at(c.child, e))) for e, lit in table[d])
        else:
            raise TypeError(f"unknown concept node {c!r}")
        self.memo[key] = out
        return out

    def constraint(self, axiom: Axiom, d: int) -> GroundConstraint:
        lhs = self.at(axiom.lhs, d)
        lit = TRUE if lhs == FALSE else self.circuit.or_((-lhs, self.at(axiom.rhs, d)))
        return GroundConstraint(axiom, d, lit)

    def constraints(self, tbox: Iterable[Axiom]) -> list[GroundConstraint]:
        return [self.constraint(ax, d) for ax in tbox for d in range(self.size)]
