"""Model-checking games for second-order, myopic and exclusion formulas, and the CNF game.

Positions are plain strings so the games can be printed and parsed:
``(<occ>|x=a,y=b|)`` for a formula position, ``(<occ>|x=a|copy=a)`` inside
the copy for ā of a union game, ``T(a,b)`` for the target ā and
``T(x=a,y=b)`` for a team row in the exclusion game.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass

from ..core import Structure
from ..errors import DomainError, InvalidInput
from ..formulas import (And, Dep, Eq, Exc, Exists, Forall, Inc, Indep, Lit, Or,
                        SOFormula, UGame, check_myopic_so, free_variables,
                        is_nnf, rename_bound, to_nnf, walk)
from ..formulas.classify import _match_desugared_guard
from ..games import Game, enumerate_targets


@dataclass(frozen=True)
class FormulaPos:
    occ: str
    assignment: tuple          # sorted (var, value) pairs over free(θ)
    copy: tuple | None = None

    def __str__(self):
        s = ",".join(f"{v}={a}" for v, a in self.assignment)
        tag = "" if self.copy is None else "copy=" + ",".join(self.copy)
        return f"({self.occ}|{s}|{tag})"


@dataclass(frozen=True)
class TargetPos:
    elements: tuple

    def __str__(self):
        return "T(" + ",".join(self.elements) + ")"


@dataclass(frozen=True)
class TeamRowPos:
    assignment: tuple          # sorted (var, value) pairs

    def __str__(self):
        return "T(" + ",".join(f"{v}={a}" for v, a in self.assignment) + ")"


def _restrict(env, vars):
    return tuple((v, env[v]) for v in sorted(vars))


class _Builder:
    """Shared position/edge bookkeeping for the formula games."""

    def __init__(self, structure: Structure, matrix, free_rel=None, qrels=(), exclusion_atoms=False):
        self.A = structure
        self.matrix = matrix
        self.free_rel = free_rel
        self.qrels = set(qrels)
        self.exclusion_atoms = exclusion_atoms
        self.nodes = dict(walk(matrix))
        self.fv = {occ: free_variables(n) for occ, n in self.nodes.items()}
        self.v0, self.v1, self.edges = [], [], set()
        self.seen = set()
        self.queue = deque()
        self.rlits = {}            # (copy, symbol, tuple, positive) -> [positions]
        self.neg_x = []            # (position, tuple)
        self.exc_pos = {}          # (copy, occ) -> [(position, env)]
        self.x_edges = []          # (position, tuple) for positive X literals

    def pos(self, occ, env, copy=None) -> str:
        p = FormulaPos(occ, _restrict(env, self.fv[occ]), copy)
        name = str(p)
        if name not in self.seen:
            self.seen.add(name)
            self.queue.append((occ, dict(p.assignment), copy, name))
        return name

    def run(self):
        while self.queue:
            self._expand(*self.queue.popleft())

    def _kid(self, occ, i):
        return occ.rstrip("/") + f"/{i}"

    def _expand(self, occ, env, copy, name):
        node = self.nodes[occ]
        if isinstance(node, (And, Or)):
            (self.v1 if isinstance(node, And) else self.v0).append(name)
            for i in (0, 1):
                self.edges.add((name, self.pos(self._kid(occ, i), env, copy)))
        elif isinstance(node, (Exists, Forall)):
            (self.v1 if isinstance(node, Forall) else self.v0).append(name)
            k = self._kid(occ, 0)
            for a in self.A.universe:
                env2 = dict(env)
                env2[node.var] = a
                self.edges.add((name, self.pos(k, env2, copy)))
        elif isinstance(node, Eq):
            ok = (env[node.left] == env[node.right]) == node.positive
            (self.v1 if ok else self.v0).append(name)
        elif isinstance(node, Lit):
            tup = tuple(env[t] for t in node.terms)
            if node.symbol == self.free_rel:
                if node.positive:
                    self.v0.append(name)
                    self.x_edges.append((name, tup))
                else:
                    self.v1.append(name)
                    self.neg_x.append((name, tup))
            elif node.symbol in self.qrels:
                self.v1.append(name)
                self.rlits.setdefault((copy, node.symbol, tup, node.positive), []).append(name)
            else:
                if node.symbol not in self.A.relations:
                    raise DomainError(f"structure has no relation {node.symbol!r}")
                ok = self.A.holds(node.symbol, tup) == node.positive
                (self.v1 if ok else self.v0).append(name)
        elif isinstance(node, Exc) and self.exclusion_atoms:
            self.v1.append(name)
            self.exc_pos.setdefault((copy, occ), []).append((name, env))
        else:
            raise InvalidInput(f"no game positions for {node}")

    def rel_conflicts(self):
        out = set()
        for (copy, sym, tup, positive), ps in self.rlits.items():
            if positive:
                for q in self.rlits.get((copy, sym, tup, False), ()):
                    out.update((p, q) for p in ps)
        return out

    def exc_conflicts(self):
        out = set()
        for (_, occ), entries in self.exc_pos.items():
            node = self.nodes[occ]
            by_right = {}
            for name, env in entries:
                by_right.setdefault(tuple(env[v] for v in node.right), []).append(name)
            for name, env in entries:
                for q in by_right.get(tuple(env[v] for v in node.left), ()):
                    out.add((name, q))
        return out


def _all_envs(structure, vars):
    vars = sorted(vars)
    for vals in itertools.product(structure.universe, repeat=len(vars)):
        yield dict(zip(vars, vals))


def _prepare(matrix):
    return matrix if is_nnf(matrix) else to_nnf(matrix)


def to_prenex_so(phi: SOFormula) -> SOFormula:
    """Bring a guarded ∀ḡ(Xḡ → ∃R̄ φ) into the form ∃R̄′ ∀ḡ(¬Xḡ ∨ (Xḡ ∧ φ′)).

    Each R of arity a is lifted to arity |ḡ|+a with the guard tuple in front
    (Skolemisation of the second-order quantifier); other formulas pass
    through unchanged.
    """
    if phi.guard is None:
        return phi
    g = phi.guard
    matrix = rename_bound(_prepare(phi.matrix), g)
    names = set(phi.relation_names)

    def lift(node):
        if isinstance(node, Lit) and node.symbol in names:
            return Lit(node.symbol, g + node.terms, node.positive)
        if isinstance(node, (And, Or)):
            return type(node)(lift(node.left), lift(node.right))
        if isinstance(node, (Exists, Forall)):
            return type(node)(node.var, lift(node.body))
        return node

    guard = Lit(phi.free, g)
    body = Or(guard.negate(), And(guard, lift(matrix)))
    for v in reversed(g):
        body = Forall(v, body)
    rels = tuple((n, a + len(g)) for n, a in phi.relations)
    return SOFormula(phi.free, phi.free_arity, rels, body)


def _targets(structure, arity):
    return {TargetPos(t): str(TargetPos(t)) for t in structure.tuples(arity)}


def mc_game_so(structure: Structure, phi: SOFormula) -> Game:
    """The inclusion-exclusion game whose target family is {Y : (A, Y) ⊨ φ}."""
    phi = to_prenex_so(phi)
    matrix = _prepare(phi.matrix)
    if free_variables(matrix):
        raise InvalidInput(f"matrix has free variables {sorted(free_variables(matrix))}")
    b = _Builder(structure, matrix, phi.free, phi.relation_names)
    for occ in b.nodes:
        for env in _all_envs(structure, b.fv[occ]):
            b.pos(occ, env)
    b.run()
    root = b.pos("/", {})
    targets = _targets(structure, phi.free_arity)
    tname = {t.elements: n for t, n in targets.items()}
    edges = set(b.edges)
    edges.update((p, tname[t]) for p, t in b.x_edges)
    exc = b.rel_conflicts() | {(p, tname[t]) for p, t in b.neg_x}
    return Game(tuple(b.v0), tuple(b.v1) + tuple(tname[t] for t in sorted(tname)), frozenset(edges),
                frozenset([root]), frozenset(tname.values()), frozenset(exc),
                tuple((n, t.elements) for t, n in targets.items()))


def myopic_parts(mu: SOFormula):
    """(guard, relations, matrix) of a myopic formula in either accepted shape."""
    v = check_myopic_so(mu)
    if not v.ok:
        raise InvalidInput(f"not a myopic formula: {v.summary()}")
    if mu.guard is not None:
        return mu.guard, mu.relation_names, _prepare(mu.matrix)
    g, psi = _match_desugared_guard(mu.matrix, mu.free)
    return g, (), _prepare(psi)


def mc_game_myopic(structure: Structure, mu: SOFormula) -> Game:
    """The union game for a myopic formula: one copy of the game per target ā.

    Only positions reachable from the copy roots are built; unreachable
    positions can never matter for a strategy.
    """
    guard, rels, matrix = myopic_parts(mu)
    matrix = rename_bound(matrix, guard)
    b = _Builder(structure, matrix, mu.free, rels)
    targets = _targets(structure, mu.free_arity)
    edges = set()
    for t, n in targets.items():
        root = b.pos("/", dict(zip(guard, t.elements)), t.elements)
        edges.add((n, root))
    b.run()
    tname = {t.elements: n for t, n in targets.items()}
    edges |= b.edges
    edges.update((p, tname[t]) for p, t in b.x_edges)
    if b.neg_x:
        raise InvalidInput("the free relation occurs negatively")
    return Game(tuple(b.v0), tuple(b.v1) + tuple(tname[t] for t in sorted(tname)), frozenset(edges),
                frozenset(), frozenset(tname.values()), frozenset(b.rel_conflicts()),
                tuple((n, t.elements) for t, n in targets.items()))


def mc_game_exclusion(structure: Structure, phi, domain) -> Game:
    """The exclusion game: targets are the assignments over ``domain``."""
    domain = tuple(domain)
    phi = _prepare(phi)
    for _, n in walk(phi):
        if isinstance(n, (Inc, Dep, Indep, UGame)):
            raise InvalidInput(f"the exclusion game only supports exclusion atoms, found {n}")
    extra = free_variables(phi) - set(domain)
    if extra:
        raise DomainError(f"free variables {sorted(extra)} are not in the domain")
    b = _Builder(structure, phi, exclusion_atoms=True)
    for occ in b.nodes:
        for env in _all_envs(structure, b.fv[occ]):
            b.pos(occ, env)
    edges = set()
    rows = []
    for vals in itertools.product(structure.universe, repeat=len(domain)):
        env = dict(zip(domain, vals))
        r = TeamRowPos(tuple(sorted(env.items())))
        rows.append((str(r), vals))
        edges.add((str(r), b.pos("/", env)))
    b.run()
    edges |= b.edges
    names = [n for n, _ in rows]
    return Game(tuple(b.v0), tuple(b.v1) + tuple(names), frozenset(edges), frozenset(),
                frozenset(names), frozenset(b.exc_conflicts()), tuple(rows))


def cnf_to_game(cnf) -> Game:
    """Clause vertices c1.. of player 0 point to literal vertices xi / nxi of player 1."""
    clauses = [list(c) for c in cnf]
    lits = sorted({abs(l) for c in clauses for l in c})
    v1, exc = [], set()
    for x in lits:
        v1 += [f"x{x}", f"nx{x}"]
        exc.add((f"x{x}", f"nx{x}"))
    v0 = [f"c{j}" for j in range(1, len(clauses) + 1)]
    edges = set()
    for j, c in enumerate(clauses, 1):
        for l in c:
            if l == 0:
                raise InvalidInput("0 is not a literal")
            edges.add((f"c{j}", f"x{l}" if l > 0 else f"nx{-l}"))
    return Game(tuple(v0), tuple(v1), frozenset(edges), frozenset(), frozenset(v0), frozenset(exc))


def parse_dimacs(text: str) -> list[list[int]]:
    from ..errors import ParseError
    clauses, cur = [], []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line[0] in "cp%":
            continue
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise ParseError(f"bad literal {tok!r}", lineno, 0) from None
            if lit == 0:
                clauses.append(cur)
                cur = []
            else:
                cur.append(lit)
    if cur:
        clauses.append(cur)
    return clauses


def cnf_satisfiable(clauses) -> bool:
    from pysat.solvers import Solver
    from ..semantics.teamsat import SOLVER_NAME
    if any(not c for c in clauses):
        return False
    with Solver(name=SOLVER_NAME, bootstrap_with=[list(c) for c in clauses]) as s:
        return s.solve()


def target_relations(game: Game, max_targets: int = 16, solver=None) -> set:
    """T(G) with each target vertex replaced by its payload tuple."""
    pm = game.payload_map
    return {frozenset(pm[v] for v in X) for X in enumerate_targets(game, max_targets, solver)}


def relation_to_targets(game: Game, relation) -> frozenset:
    inv = {t: v for v, t in game.payload_map.items()}
    try:
        return frozenset(inv[tuple(t)] for t in relation)
    except KeyError as e:
        raise DomainError(f"tuple {e.args[0]} has no target vertex") from None


def game_as_structure(game: Game) -> Structure:
    """Vertices as elements with V0, V1, E, I, T and Eex (the symmetric closure)."""
    if not game.vertices:
        raise DomainError("a game without vertices has no structure (universes are non-empty)")
    conflicts = {(u, w) for u, ws in game.conflicts.items() for w in ws}
    rels = {"V0": {(v,) for v in game.v0}, "V1": {(v,) for v in game.v1},
            "E": set(game.edges), "I": {(v,) for v in game.initial},
            "T": {(v,) for v in game.targets}, "Eex": conflicts}
    ar = {"V0": 1, "V1": 1, "E": 2, "I": 1, "T": 1, "Eex": 2}
    return Structure(game.vertices, rels, ar)


def structure_as_game(structure: Structure) -> Game:
    """Inverse of game_as_structure (exclusion edges come back symmetric)."""
    get = lambda n: structure.relations[n].tuples
    v0 = [a for a in structure.universe if (a,) in get("V0")]
    v1 = [a for a in structure.universe if (a,) in get("V1")]
    exc = {tuple(sorted(e, key=structure.index)) for e in get("Eex")}
    return Game(tuple(v0), tuple(v1), get("E"), {a for (a,) in get("I")}, {a for (a,) in get("T")}, exc)
