"""Direct recursive team evaluation, following the semantic clauses literally.

Teams are handled in projected form: a node is evaluated on the set of value
tuples over its (sorted) free variables, which is sound because lax team
semantics only looks at the free variables of a formula.  This evaluator is
exponential and guarded by an EvalBudget; it serves as the reference oracle
and as the fallback for the game atom.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from ..core import Structure, Team
from ..errors import BudgetExceeded, UnsupportedFormula
from .classical import eval_classical
from ..formulas import (And, Dep, Eq, Exc, Exists, Forall, Inc, Indep, Lit,
                        Not, Or, UGame, free_variables, has_team_atoms, to_nnf)


@dataclass(frozen=True)
class EvalBudget:
    max_split_rows: int = 12        # rows a disjunction may split
    max_choice_universe: int = 4    # universe size for existential choice search
    max_steps: int = 5_000_000      # total enumeration steps per call
    time_limit: float | None = None

    def __post_init__(self):
        if self.max_split_rows < 1 or self.max_choice_universe < 1 or self.max_steps < 1:
            raise ValueError("budget limits must be positive")


DEFAULT_BUDGET = EvalBudget()


def downward_closed_syntax(phi) -> bool:
    """No inclusion, independence or game atoms, so the formula is downward closed."""
    from ..formulas import walk
    return not any(isinstance(n, (Inc, Indep, UGame)) for _, n in walk(phi))


class _Node:
    __slots__ = ("f", "vars", "kids", "maps", "dc", "occ", "nec", "flat")


def _necessary(phi):
    """A first-order formula implied by ``phi`` (used to prune choices), or None."""
    if not has_team_atoms(phi):
        return phi
    if isinstance(phi, And):
        a, b = _necessary(phi.left), _necessary(phi.right)
        if a is None or b is None:
            return a or b
        return And(a, b)
    if isinstance(phi, Or):
        a, b = _necessary(phi.left), _necessary(phi.right)
        return None if a is None or b is None else Or(a, b)
    if isinstance(phi, (Exists, Forall)):
        a = _necessary(phi.body)
        return None if a is None else type(phi)(phi.var, a)
    return None


def _compile(phi, occ="/"):
    n = _Node()
    n.f = phi
    n.occ = occ
    n.vars = tuple(sorted(free_variables(phi)))
    n.dc = downward_closed_syntax(phi)
    n.flat = not has_team_atoms(phi)
    n.nec = _necessary(phi)
    n.kids, n.maps = [], []
    if isinstance(phi, (And, Or)):
        for i, c in enumerate((phi.left, phi.right)):
            k = _compile(c, occ.rstrip("/") + f"/{i}")
            n.kids.append(k)
            n.maps.append(tuple(n.vars.index(v) for v in k.vars))
    elif isinstance(phi, (Exists, Forall)):
        k = _compile(phi.body, occ.rstrip("/") + "/0")
        ext = n.vars + (phi.var,)
        n.kids.append(k)
        n.maps.append(tuple(ext.index(v) for v in k.vars))
    return n


class DirectEvaluator:
    def __init__(self, structure: Structure, phi, budget: EvalBudget = DEFAULT_BUDGET):
        if any(isinstance(x, Not) for x in _nodes(phi)):
            phi = to_nnf(phi)
        self.structure = structure
        self.phi = phi
        self.budget = budget
        self.root = _compile(phi)
        self.memo: dict = {}
        self.steps = 0
        self._deadline = None
        from .classical import relation_lookup
        self.holds = relation_lookup(structure)

    def _tick(self, n=1):
        self.steps += n
        if self.steps > self.budget.max_steps:
            raise BudgetExceeded(f"direct evaluation exceeded {self.budget.max_steps} steps")
        if self._deadline is not None and self.steps % 4096 == 0:
            import time
            if time.monotonic() > self._deadline:
                raise BudgetExceeded("direct evaluation exceeded its time limit")

    def evaluate(self, team: Team) -> bool:
        rows = frozenset(tuple(r[c] for c in team.columns(self.root.vars)) for r in team.rows)
        if self.budget.time_limit is not None:
            import time
            self._deadline = time.monotonic() + self.budget.time_limit
        return self.sat(self.root, rows)

    def sat(self, node: _Node, rows: frozenset) -> bool:
        if not rows:
            return True
        key = (node.occ, rows)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        self._tick()
        r = self._sat(node, rows)
        self.memo[key] = r
        return r

    @staticmethod
    def _proj(rows, idx):
        return frozenset(tuple(t[i] for i in idx) for t in rows)

    def _sat(self, node, rows):
        f = node.f
        pos = {v: i for i, v in enumerate(node.vars)}
        if isinstance(f, Lit):
            idx = [pos[t] for t in f.terms]
            return all(self.holds(f.symbol, tuple(t[i] for i in idx)) == f.positive for t in rows)
        if isinstance(f, Eq):
            i, j = pos[f.left], pos[f.right]
            return all((t[i] == t[j]) == f.positive for t in rows)
        if isinstance(f, Inc):
            a = self._proj(rows, [pos[v] for v in f.left])
            b = self._proj(rows, [pos[v] for v in f.right])
            return a <= b
        if isinstance(f, Exc):
            a = self._proj(rows, [pos[v] for v in f.left])
            b = self._proj(rows, [pos[v] for v in f.right])
            return not (a & b)
        if isinstance(f, Dep):
            li, ri = [pos[v] for v in f.left], pos[f.right]
            seen = {}
            for t in rows:
                k = tuple(t[i] for i in li)
                if seen.setdefault(k, t[ri]) != t[ri]:
                    return False
            return True
        if isinstance(f, Indep):
            li, ri = [pos[v] for v in f.left], [pos[v] for v in f.right]
            pairs = {(tuple(t[i] for i in li), tuple(t[i] for i in ri)) for t in rows}
            lefts = {p for p, _ in pairs}
            rights = {q for _, q in pairs}
            return all((p, q) in pairs for p in lefts for q in rights)
        if isinstance(f, UGame):
            from ..constructions.codec import eval_ugame_atom
            return eval_ugame_atom(self.structure, Team(node.vars, rows), f)
        if isinstance(f, And):
            return all(self.sat(k, self._proj(rows, m)) for k, m in zip(node.kids, node.maps))
        if isinstance(f, Or):
            return self._split(node, rows)
        if isinstance(f, Forall):
            k, m = node.kids[0], node.maps[0]
            ext = {t + (a,) for t in rows for a in self.structure.universe}
            return self.sat(k, self._proj(ext, m))
        if isinstance(f, Exists):
            return self._choose(node, rows)
        raise UnsupportedFormula(f"cannot evaluate {f!r}")

    def _admits(self, kid, m, row) -> bool:
        if kid.nec is None:
            return True
        env = dict(zip(kid.vars, (row[i] for i in m)))
        return eval_classical(self.structure, env, kid.nec)

    def _split(self, node, rows):
        rows = sorted(rows)
        (kl, kr), (ml, mr) = node.kids, node.maps
        per_row = []
        for t in rows:
            okl, okr = self._admits(kl, ml, t), self._admits(kr, mr, t)
            if not (okl or okr):
                return False
            if not okr:
                opts = (0,)
            elif not okl:
                opts = (1,)
            elif kl.flat:
                # a flat side takes every row it admits; the other side may share it
                opts = (0,) if kr.dc else (0, 2)
            elif kr.flat:
                opts = (1,) if kl.dc else (1, 2)
            elif kl.dc or kr.dc:
                # with a downward-closed side, disjoint splits are enough
                opts = (0, 1)
            else:
                opts = (0, 1, 2)
            per_row.append(opts)
        free = sum(1 for o in per_row if len(o) > 1)
        if free > self.budget.max_split_rows:
            raise BudgetExceeded(f"disjunction split over {free} rows exceeds the budget of {self.budget.max_split_rows}")
        tried = set()
        for labels in itertools.product(*per_row):
            self._tick()
            left = frozenset(t for t, l in zip(rows, labels) if l != 1)
            right = frozenset(t for t, l in zip(rows, labels) if l != 0)
            pl, pr = self._proj(left, ml), self._proj(right, mr)
            if (pl, pr) in tried:
                continue
            tried.add((pl, pr))
            if self.sat(kl, pl) and self.sat(kr, pr):
                return True
        return False

    def _choose(self, node, rows):
        universe = self.structure.universe
        k, m = node.kids[0], node.maps[0]
        rows = sorted(rows)
        per_row = []
        for t in rows:
            allowed = [a for a in universe if self._admits(k, m, t + (a,))]
            if not allowed:
                return False
            if k.dc:
                # downward closed body: one witness per row suffices
                per_row.append([(a,) for a in allowed])
                continue
            if len(allowed) > self.budget.max_choice_universe:
                raise BudgetExceeded(f"choice search over {len(allowed)} candidate values exceeds "
                                     f"the budget of {self.budget.max_choice_universe}")
            per_row.append([c for r in range(1, len(allowed) + 1) for c in itertools.combinations(allowed, r)])
        total = 1
        for o in per_row:
            total *= len(o)
        if total > self.budget.max_steps:
            raise BudgetExceeded(f"choice search needs {total} candidates")
        tried = set()
        for pick in itertools.product(*per_row):
            self._tick()
            ext = frozenset(t + (a,) for t, vals in zip(rows, pick) for a in vals)
            child = self._proj(ext, m)
            if child in tried:
                continue
            tried.add(child)
            if self.sat(k, child):
                return True
        return False


def _nodes(phi):
    from ..formulas import walk
    return (n for _, n in walk(phi))


def eval_team_direct(structure, team, phi, budget=DEFAULT_BUDGET) -> bool:
    return DirectEvaluator(structure, phi, budget).evaluate(team)
