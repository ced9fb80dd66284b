"""Classical and team semantics, second-order evaluation and brute-force oracles."""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from ..core import Relation, Structure, Team, all_teams, components
from ..errors import BudgetExceeded, DomainError, InvalidInput, UnsupportedFormula
from ..formulas import (And, Exists, Forall, Inc, Or, Exc, Dep, Indep, Lit, Eq,
                        UGame, free_variables, is_first_order, to_nnf, walk,
                        is_nnf)
from .classical import eval_classical, relation_lookup
from .direct import DEFAULT_BUDGET, DirectEvaluator, EvalBudget, eval_team_direct
from .so import (SOEvaluator, eval_so, eval_so_bruteforce, satisfying_relations,
                 satisfying_relations_bruteforce)
from .teamsat import TeamEncoding

MAX_TEAM_BITS = 16

__all__ = [
    "EvalBudget", "DEFAULT_BUDGET", "TeamEvaluator", "eval_classical", "eval_team",
    "eval_team_direct", "eval_so", "eval_so_bruteforce", "satisfying_relations",
    "satisfying_relations_bruteforce", "satisfying_teams", "find_witness_labelling",
    "check_labelling", "check_union_closed_empirical", "union_closure",
    "is_union_closed", "eval_normalform_myopic", "SOEvaluator", "UnionClosure",
]


def _uses_game_atom(phi) -> bool:
    return any(isinstance(n, UGame) for _, n in walk(phi))


class TeamEvaluator:
    """Evaluates one formula on many teams; picks the SAT encoding unless told otherwise."""

    def __init__(self, structure: Structure, phi, budget: EvalBudget | None = None, method: str = "auto"):
        if method not in ("auto", "sat", "direct"):
            raise ValueError(f"unknown evaluation method {method!r}")
        if not is_nnf(phi):
            phi = to_nnf(phi)
        self.structure = structure
        self.phi = phi
        self.budget = budget or DEFAULT_BUDGET
        if method == "auto":
            method = "direct" if _uses_game_atom(phi) else "sat"
        self.method = method
        self.free = tuple(sorted(free_variables(phi)))
        self._enc = None
        self._cache = {}

    @property
    def encoding(self) -> TeamEncoding:
        if self._enc is None:
            self._enc = TeamEncoding(self.structure, self.phi)
        return self._enc

    def _key(self, team: Team):
        missing = set(self.free) - set(team.domain)
        if missing:
            raise DomainError(f"free variables {sorted(missing)} are not in the team domain")
        cols = team.columns(self.free)
        return frozenset(tuple(r[c] for c in cols) for r in team.rows)

    def __call__(self, team: Team) -> bool:
        key = self._key(team)
        if not key:
            return True
        hit = self._cache.get(key)
        if hit is None:
            proj = Team(self.free, key)
            if self.method == "sat":
                hit = self.encoding.satisfiable(proj)
            else:
                hit = DirectEvaluator(self.structure, self.phi, self.budget).evaluate(proj)
            self._cache[key] = hit
        return hit

    def witness(self, team: Team):
        self._key(team)
        if _uses_game_atom(self.phi):
            if not isinstance(self.phi, UGame):
                raise UnsupportedFormula("witness labellings for compound formulas with game atoms are not supported")
            return {"/": team} if self(team) else None
        return self.encoding.witness(team)

    def close(self):
        if self._enc is not None:
            self._enc.close()


def eval_team(structure: Structure, team: Team, phi, budget: EvalBudget | None = None, method="auto") -> bool:
    """Lax team semantics; the empty team satisfies every formula."""
    ev = TeamEvaluator(structure, phi, budget, method)
    try:
        return ev(team)
    finally:
        ev.close()


def _team_space(structure, domain, max_bits):
    bits = len(structure.universe) ** len(domain)
    if bits > max_bits:
        raise BudgetExceeded(f"{bits} candidate rows exceed the team enumeration budget of {max_bits}")
    return all_teams(structure, domain)


def satisfying_teams(structure: Structure, phi, domain, budget=None, method="auto",
                     max_bits=MAX_TEAM_BITS) -> set:
    """All teams over ``domain`` that satisfy ``phi``."""
    domain = tuple(domain)
    ev = TeamEvaluator(structure, phi, budget, method)
    try:
        return {t for t in _team_space(structure, domain, max_bits) if ev(t)}
    finally:
        ev.close()


def find_witness_labelling(structure: Structure, team: Team, phi, budget=None):
    """A labelling (occurrence id -> Team) witnessing satisfaction, or None."""
    ev = TeamEvaluator(structure, phi, budget)
    try:
        return ev.witness(team)
    finally:
        ev.close()


def check_labelling(structure: Structure, team: Team, phi, labelling) -> list[str]:
    """Problems found when checking a labelling against the semantic rules (empty if valid)."""
    if not is_nnf(phi):
        phi = to_nnf(phi)
    problems = []
    holds = relation_lookup(structure)
    if labelling.get("/") != team:
        problems.append("/: root label differs from the team")

    def label(occ):
        t = labelling.get(occ)
        if t is None:
            problems.append(f"{occ}: missing label")
        return t

    for occ, node in walk(phi):
        X = label(occ)
        if X is None:
            continue
        kid = lambda i: occ.rstrip("/") + f"/{i}"
        if isinstance(node, And):
            for i in (0, 1):
                if label(kid(i)) != X:
                    problems.append(f"{kid(i)}: conjunct label differs from parent")
        elif isinstance(node, Or):
            a, b = label(kid(0)), label(kid(1))
            if a is not None and b is not None:
                try:
                    if a.union(b) != X:
                        problems.append(f"{occ}: disjunct labels do not cover the parent")
                except DomainError:
                    problems.append(f"{occ}: disjunct labels have the wrong domain")
        elif isinstance(node, (Exists, Forall)):
            Y = label(kid(0))
            if Y is None:
                continue
            if not _is_extension(structure, X, Y, node.var, universal=isinstance(node, Forall)):
                kind = "X[x->A]" if isinstance(node, Forall) else "X[x->F]"
                problems.append(f"{kid(0)}: label is not of the form {kind}")
        elif X.rows and not DirectEvaluator(structure, node).evaluate(X):
            problems.append(f"{occ}: atom {node} fails on its label")
    return problems


def _is_extension(structure, X, Y, var, universal):
    dom = X.domain if var in X.domain else X.domain + (var,)
    if set(Y.domain) != set(dom):
        return False
    Y = Y.aligned(Team(dom))
    c = dom.index(var)
    base = [v for v in dom if v != var]
    bx = X.columns(base)
    by = [dom.index(v) for v in base]
    chosen = {}
    for r in Y.rows:
        chosen.setdefault(tuple(r[i] for i in by), set()).add(r[c])
    xk = {tuple(r[i] for i in bx) for r in X.rows}
    if set(chosen) != xk:
        return False
    if universal:
        return all(v == set(structure.universe) for v in chosen.values())
    return True


def union_closure(family, empty=None) -> set:
    """Close a family of teams (or frozensets) under unions, including the empty union.

    ``empty`` supplies the empty member when the family itself is empty.
    """
    family = list(family)
    if not family:
        return {empty if empty is not None else frozenset()}
    sample = family[0]
    if isinstance(sample, Team):
        empty = Team(sample.domain, ())
        join = lambda a, b: a.union(b)
    else:
        empty = frozenset()
        join = lambda a, b: frozenset(a) | frozenset(b)
    closed = {empty} | set(family)
    frontier = list(closed)
    while frontier:
        new = []
        for a in frontier:
            for b in list(closed):
                u = join(a, b)
                if u not in closed:
                    closed.add(u)
                    new.append(u)
        frontier = new
    return closed


def is_union_closed(family) -> tuple:
    """(True, None) or (False, (A, B)) for a violating pair."""
    fam = set(family)
    items = sorted(fam, key=lambda t: (len(t), sorted(t.rows) if isinstance(t, Team) else sorted(t)))
    for a, b in itertools.combinations(items, 2):
        u = a.union(b) if isinstance(a, Team) else frozenset(a) | frozenset(b)
        if u not in fam:
            return False, (a, b)
    return True, None


@dataclass
class UnionClosure:
    closed: bool
    pair: tuple | None
    family_size: int
    note: str = "binary unions suffice for finite families"

    def __bool__(self):
        return self.closed


def check_union_closed_empirical(structure: Structure, phi, domain, budget=None) -> UnionClosure:
    fam = satisfying_teams(structure, phi, domain, budget)
    ok, pair = is_union_closed(fam)
    return UnionClosure(ok, pair, len(fam))


def eval_normalform_myopic(structure: Structure, team: Team, phi, anchor, budget=None) -> bool:
    """Componentwise evaluation of an anchored ∃s̄(s̄ ⊆ x̄ ∧ ψ).

    Searches a choice F with F(s) ⊆ X(x̄) and checks the unguarded ψ on
    every component X[s̄ ↦ F]↾x̄=ā separately.
    """
    from ..transforms.guards import unguard_atoms
    anchor = tuple(anchor)
    svars, body = [], phi
    while isinstance(body, Exists):
        svars.append(body.var)
        body = body.body
    if not (isinstance(body, And) and isinstance(body.left, Inc)
            and body.left.left == tuple(svars) and body.left.right == anchor):
        raise InvalidInput("expected the shape E s̄. (inc(s̄; x̄) & ψ)")
    psi = body.right
    for _, n in walk(psi):
        if isinstance(n, Inc) and n.right == anchor and n.left[:len(anchor)] != anchor:
            raise InvalidInput(f"ψ must not contain unguarded inclusion atoms such as {n}")
    psi_u = unguard_atoms(psi, anchor)
    if not team.rows:
        return True
    values = frozenset(tuple(r[c] for c in team.columns(anchor)) for r in team.rows)
    rel_name = "__fresh_XS"
    expanded = structure.expand({rel_name: Relation(len(anchor), values)})
    from ..formulas import Lit as _Lit, exists as _exists
    inner = _exists(svars, And(_Lit(rel_name, tuple(svars)), psi_u))
    ev = TeamEvaluator(expanded, inner, budget)
    try:
        for _, comp in components(team, anchor).items():
            if not ev(comp):
                return False
        return True
    finally:
        ev.close()
