"""Evaluation of ∃R̄-formulas with a free relation X.

The first-order matrix is grounded over the finite universe into a
propositional circuit (Tseitin), with one variable per R̄-tuple and per
X-tuple.  X is fixed by assumptions, so one encoding answers every
candidate X.  A plain relation-enumeration evaluator is kept as the oracle.
"""
from __future__ import annotations

import itertools

from pysat.formula import IDPool
from pysat.solvers import Solver

from ..core import Relation, Structure, all_relations
from ..errors import BudgetExceeded, DomainError, UnsupportedFormula
from ..formulas import (And, Eq, Exists, Forall, Lit, Or, SOFormula,
                        free_variables, walk)
from .classical import eval_classical
from .teamsat import SOLVER_NAME

MAX_RELATION_BITS = 16


class _Grounding:
    def __init__(self, structure: Structure, phi: SOFormula, env: dict):
        self.structure = structure
        self.phi = phi
        self.qrels = dict(phi.relations)
        self.pool = IDPool()
        self.clauses = []
        self.fv = {id(n): tuple(sorted(free_variables(n))) for _, n in walk(phi.matrix)}
        self.memo = {}
        top = self.ground(phi.matrix, dict(env))
        if top is True:
            self.const = True
        elif top is False:
            self.const = False
        else:
            self.const = None
            self.clauses.append([top])
        self._solver = None

    def xvar(self, tup):
        return self.pool.id(("X", tup))

    def ground(self, node, env):
        key = (id(node), tuple(env[v] for v in self.fv[id(node)]))
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        r = self._ground(node, env)
        self.memo[key] = r
        return r

    def _ground(self, node, env):
        if isinstance(node, Lit):
            tup = tuple(env[t] for t in node.terms)
            if node.symbol == self.phi.free:
                v = self.xvar(tup)
            elif node.symbol in self.qrels:
                v = self.pool.id(("R", node.symbol, tup))
            else:
                return self.structure.holds(node.symbol, tup) == node.positive
            return v if node.positive else -v
        if isinstance(node, Eq):
            return (env[node.left] == env[node.right]) == node.positive
        if isinstance(node, (And, Or)):
            parts = [self.ground(node.left, env), self.ground(node.right, env)]
            return self._gate(isinstance(node, And), parts)
        if isinstance(node, (Exists, Forall)):
            parts = []
            for a in self.structure.universe:
                env2 = dict(env)
                env2[node.var] = a
                parts.append(self.ground(node.body, env2))
            return self._gate(isinstance(node, Forall), parts)
        raise UnsupportedFormula(f"cannot ground {node!r}")

    def _gate(self, conj: bool, parts):
        absorbing, neutral = (False, True) if conj else (True, False)
        lits = []
        for p in parts:
            if p is absorbing:
                return absorbing
            if p is not neutral:
                lits.append(p)
        if not lits:
            return neutral
        if len(lits) == 1:
            return lits[0]
        g = self.pool.id(("gate", len(self.pool.obj2id)))
        if conj:
            for x in lits:
                self.clauses.append([-g, x])
            self.clauses.append([g] + [-x for x in lits])
        else:
            self.clauses.append([-g] + lits)
            for x in lits:
                self.clauses.append([g, -x])
        return g

    def satisfiable(self, relation) -> bool:
        if self.const is not None:
            return self.const
        if self._solver is None:
            self._solver = Solver(name=SOLVER_NAME, bootstrap_with=self.clauses)
        assume = []
        for obj, v in self.pool.obj2id.items():
            if obj[0] == "X":
                assume.append(v if obj[1] in relation else -v)
        return self._solver.solve(assumptions=assume)

    def witness(self, relation):
        if not self.satisfiable(relation):
            return None
        model = set(self._solver.get_model()) if self._solver else set()
        out = {n: set() for n in self.qrels}
        for obj, v in self.pool.obj2id.items():
            if obj[0] == "R" and v in model:
                out[obj[1]].add(obj[2])
        return {n: frozenset(ts) for n, ts in out.items()}

    def close(self):
        if self._solver is not None:
            self._solver.delete()
            self._solver = None


def _as_tuples(relation) -> frozenset:
    if isinstance(relation, Relation):
        return relation.tuples
    return frozenset(tuple(t) for t in relation)


class SOEvaluator:
    """Reusable evaluator for one (structure, formula) pair."""

    def __init__(self, structure: Structure, phi: SOFormula):
        self.structure = structure
        self.phi = phi
        free = free_variables(phi.matrix) - set(phi.guard or ())
        if free:
            raise DomainError(f"matrix has unexpected free variables {sorted(free)}")
        self._groundings = {}

    def _grounding(self, anchor=()):
        g = self._groundings.get(anchor)
        if g is None:
            env = dict(zip(self.phi.guard or (), anchor))
            g = self._groundings[anchor] = _Grounding(self.structure, self.phi, env)
        return g

    def __call__(self, relation) -> bool:
        rel = _as_tuples(relation)
        _check_relation(self.structure, rel, self.phi.free_arity)
        if self.phi.guard is None:
            return self._grounding().satisfiable(rel)
        return all(self._grounding(a).satisfiable(rel) for a in rel)

    def witnesses(self, relation):
        """Witness relations for R̄ (per guard tuple in the guarded form) or None."""
        rel = _as_tuples(relation)
        if self.phi.guard is None:
            return self._grounding().witness(rel)
        out = {}
        for a in sorted(rel):
            w = self._grounding(a).witness(rel)
            if w is None:
                return None
            out[a] = w
        return out

    def close(self):
        for g in self._groundings.values():
            g.close()


def _check_relation(structure, rel, arity):
    for t in rel:
        if len(t) != arity:
            raise DomainError(f"tuple {t} does not have arity {arity}")
        for a in t:
            if a not in structure._index:
                raise DomainError(f"element {a!r} is not in the universe")


def eval_so(structure: Structure, relation, phi: SOFormula) -> bool:
    ev = SOEvaluator(structure, phi)
    try:
        return ev(relation)
    finally:
        ev.close()


def _relation_space(structure, arity, max_bits):
    bits = len(structure.universe) ** arity
    if bits > max_bits:
        raise BudgetExceeded(f"{bits} candidate tuples exceed the enumeration budget of {max_bits}")
    return all_relations(structure, arity)


def satisfying_relations(structure: Structure, phi: SOFormula, max_bits=MAX_RELATION_BITS) -> set:
    """{Y ⊆ A^r : (A, Y) ⊨ φ}, as a set of frozensets of tuples."""
    ev = SOEvaluator(structure, phi)
    try:
        return {rel for rel in _relation_space(structure, phi.free_arity, max_bits) if ev(rel)}
    finally:
        ev.close()


def eval_so_bruteforce(structure: Structure, relation, phi: SOFormula, max_bits=MAX_RELATION_BITS) -> bool:
    """Enumerate interpretations of R̄ and evaluate the matrix classically."""
    rel = _as_tuples(relation)
    spaces = [list(_relation_space(structure, a, max_bits)) for _, a in phi.relations]
    names = [n for n, _ in phi.relations]

    def holds(env):
        for choice in itertools.product(*spaces):
            extra = dict(zip(names, choice))
            extra[phi.free] = rel
            if eval_classical(structure, env, phi.matrix, extra):
                return True
        return False

    if phi.guard is None:
        return holds({})
    return all(holds(dict(zip(phi.guard, a))) for a in rel)


def satisfying_relations_bruteforce(structure, phi, max_bits=MAX_RELATION_BITS) -> set:
    return {rel for rel in _relation_space(structure, phi.free_arity, max_bits)
            if eval_so_bruteforce(structure, rel, phi, max_bits)}
