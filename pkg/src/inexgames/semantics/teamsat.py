"""Team semantics by reduction to propositional satisfiability.

Every subformula occurrence gets one label variable per tuple over its free
variables; a model of the clause set is a (projected) witness labelling.  The
clauses transcribe the semantic rules: conjunction children carry the
parent's projection, disjunction children the projections of a cover, and
quantifier children the projection of X[x ↦ F] or X[x ↦ A].  Team atoms
become constraints on the label of their node.

The root labels are left open, so a single encoding decides every team over
the same variables (they are fixed through solver assumptions).
"""
from __future__ import annotations

import itertools

from pysat.formula import IDPool
from pysat.solvers import Solver

from ..core import Structure, Team, extend_choice, extend_universal
from ..errors import UnsupportedFormula
from ..formulas import (And, Dep, Eq, Exc, Exists, Forall, Inc, Indep, Lit,
                        Or, UGame, free_variables, is_nnf, to_nnf, walk)
from .classical import relation_lookup

SOLVER_NAME = "m22"


class TeamEncoding:
    """Clause set for one formula over one structure."""

    def __init__(self, structure: Structure, phi):
        if not is_nnf(phi):
            phi = to_nnf(phi)
        if any(isinstance(n, UGame) for _, n in walk(phi)):
            raise UnsupportedFormula("the game atom is evaluated by the direct evaluator")
        self.structure = structure
        self.phi = phi
        self.universe = structure.universe
        self.pool = IDPool()
        self.clauses: list[list[int]] = []
        self.holds = relation_lookup(structure)
        self.labels: dict[str, dict] = {}
        self.vars_of: dict[str, tuple] = {}
        self.choice: dict[str, dict] = {}
        self.root_vars = tuple(sorted(free_variables(phi)))
        root = self._fresh_label("/", self.root_vars)
        self._encode(phi, "/", root)
        self._solver = None

    # variables
    def _new(self):
        return self.pool.id(("aux", len(self.pool.obj2id)))

    def _fresh_label(self, occ, vars):
        lab = {t: self._new() for t in itertools.product(self.universe, repeat=len(vars))}
        self.labels[occ] = lab
        self.vars_of[occ] = vars
        return lab

    def _project(self, occ, vars, sources):
        """Label ``occ`` over ``vars`` as the projection of {u : sources}.

        ``sources`` maps each tuple u (over ``vars``) to the list of
        literals whose truth puts u in the child team.
        """
        if all(len(v) == 1 for v in sources.values()) and len(sources) == len(self.universe) ** len(vars):
            lab = {u: lits[0] for u, lits in sources.items()}
            self.labels[occ] = lab
            self.vars_of[occ] = vars
            return lab
        lab = self._fresh_label(occ, vars)
        for u, x in lab.items():
            lits = sources.get(u, [])
            for s in lits:
                self.clauses.append([-s, x])
            self.clauses.append([-x] + list(lits))
        return lab

    def _encode(self, f, occ, lab):
        vars = self.vars_of[occ]
        pos = {v: i for i, v in enumerate(vars)}
        c = self.clauses
        if isinstance(f, Lit):
            idx = [pos[t] for t in f.terms]
            for t, x in lab.items():
                if self.holds(f.symbol, tuple(t[i] for i in idx)) != f.positive:
                    c.append([-x])
        elif isinstance(f, Eq):
            i, j = pos[f.left], pos[f.right]
            for t, x in lab.items():
                if (t[i] == t[j]) != f.positive:
                    c.append([-x])
        elif isinstance(f, And):
            for k, child in enumerate((f.left, f.right)):
                cv = tuple(sorted(free_variables(child)))
                idx = [pos[v] for v in cv]
                src = {}
                for t, x in lab.items():
                    src.setdefault(tuple(t[i] for i in idx), []).append(x)
                cocc = occ.rstrip("/") + f"/{k}"
                self._encode(child, cocc, self._project(cocc, cv, src))
        elif isinstance(f, Or):
            cl = {t: self._new() for t in lab}
            cr = {t: self._new() for t in lab}
            self.choice[occ] = (cl, cr)
            for t, x in lab.items():
                c.append([-x, cl[t], cr[t]])
                c.append([-cl[t], x])
                c.append([-cr[t], x])
            for k, (child, ch) in enumerate(((f.left, cl), (f.right, cr))):
                cv = tuple(sorted(free_variables(child)))
                idx = [pos[v] for v in cv]
                src = {}
                for t in lab:
                    src.setdefault(tuple(t[i] for i in idx), []).append(ch[t])
                cocc = occ.rstrip("/") + f"/{k}"
                self._encode(child, cocc, self._project(cocc, cv, src))
        elif isinstance(f, (Exists, Forall)):
            if isinstance(f, Exists):
                ch = {}
                for t, x in lab.items():
                    row = [self._new() for _ in self.universe]
                    for y in row:
                        c.append([-y, x])
                    c.append([-x] + row)
                    for a, y in zip(self.universe, row):
                        ch[t + (a,)] = y
                self.choice[occ] = ch
            else:
                ch = {t + (a,): x for t, x in lab.items() for a in self.universe}
            ext = vars + (f.var,)
            cv = tuple(sorted(free_variables(f.body)))
            idx = [ext.index(v) for v in cv]
            src = {}
            for t, y in ch.items():
                src.setdefault(tuple(t[i] for i in idx), []).append(y)
            cocc = occ.rstrip("/") + "/0"
            self._encode(f.body, cocc, self._project(cocc, cv, src))
        elif isinstance(f, Inc):
            li = [pos[v] for v in f.left]
            ri = [pos[v] for v in f.right]
            right = {}
            for t, x in lab.items():
                right.setdefault(tuple(t[i] for i in ri), []).append(x)
            for t, x in lab.items():
                # every left value needs a row realising it on the right
                c.append([-x] + right.get(tuple(t[i] for i in li), []))
        elif isinstance(f, Exc):
            li = [pos[v] for v in f.left]
            ri = [pos[v] for v in f.right]
            ql, qr = {}, {}
            for t, x in lab.items():
                ql.setdefault(tuple(t[i] for i in li), []).append(x)
                qr.setdefault(tuple(t[i] for i in ri), []).append(x)
            for v, xs in ql.items():
                ys = qr.get(v, [])
                if not ys:
                    continue
                a, b = self._new(), self._new()
                for x in xs:
                    c.append([-x, a])
                for y in ys:
                    c.append([-y, b])
                c.append([-a, -b])
        elif isinstance(f, Dep):
            li = [pos[v] for v in f.left]
            ri = pos[f.right]
            groups = {}
            for t, x in lab.items():
                groups.setdefault(tuple(t[i] for i in li), {}).setdefault(t[ri], []).append(x)
            for by_value in groups.values():
                ds = []
                for xs in by_value.values():
                    d = self._new()
                    for x in xs:
                        c.append([-x, d])
                    ds.append(d)
                for d1, d2 in itertools.combinations(ds, 2):
                    c.append([-d1, -d2])
        elif isinstance(f, Indep):
            li = [pos[v] for v in f.left]
            ri = [pos[v] for v in f.right]
            py, pz, pyz = {}, {}, {}
            for t, x in lab.items():
                a, b = tuple(t[i] for i in li), tuple(t[i] for i in ri)
                py.setdefault(a, []).append(x)
                pz.setdefault(b, []).append(x)
                pyz.setdefault((a, b), []).append(x)
            # a row showing ȳ = a and a row showing z̄ = b demand a row with both
            ay = {a: self._or(xs) for a, xs in py.items()}
            bz = {b: self._or(xs) for b, xs in pz.items()}
            for a, ya in ay.items():
                for b, zb in bz.items():
                    c.append([-ya, -zb] + pyz.get((a, b), []))
        else:
            raise UnsupportedFormula(f"cannot encode {f!r}")

    def _or(self, lits):
        """A fresh variable equivalent to the disjunction of ``lits``."""
        y = self._new()
        for x in lits:
            self.clauses.append([-x, y])
        self.clauses.append([-y] + list(lits))
        return y

    # solving
    @property
    def solver(self):
        if self._solver is None:
            self._solver = Solver(name=SOLVER_NAME, bootstrap_with=self.clauses)
        return self._solver

    def close(self):
        if self._solver is not None:
            self._solver.delete()
            self._solver = None

    def __del__(self):
        try:
            self.close()
        except Exception:
            pass

    def _assumptions(self, rows):
        root = self.labels["/"]
        return [x if t in rows else -x for t, x in root.items()]

    def _root_rows(self, team: Team):
        cols = team.columns(self.root_vars)
        return {tuple(r[c] for c in cols) for r in team.rows}

    def satisfiable(self, team: Team) -> bool:
        if not team.rows:
            return True
        return self.solver.solve(assumptions=self._assumptions(self._root_rows(team)))

    def model(self, team: Team):
        if not self.satisfiable(team) or not team.rows:
            return None
        return set(x for x in self.solver.get_model() if x > 0)

    def witness(self, team: Team):
        """A full team labelling (occurrence id -> Team) or None."""
        if not team.rows:
            return _empty_labelling(self.phi, team)
        m = self.model(team)
        if m is None:
            return None
        out = {}
        self._build(self.phi, "/", team, m, out)
        return out

    def _build(self, f, occ, team, m, out):
        out[occ] = team
        vars = self.vars_of[occ]

        def key(row, domain):
            d = dict(zip(domain, row))
            return tuple(d[v] for v in vars)

        if isinstance(f, And):
            self._build(f.left, occ.rstrip("/") + "/0", team, m, out)
            self._build(f.right, occ.rstrip("/") + "/1", team, m, out)
        elif isinstance(f, Or):
            cl, cr = self.choice[occ]
            left = Team(team.domain, [r for r in team.rows if cl[key(r, team.domain)] in m])
            right = Team(team.domain, [r for r in team.rows if cr[key(r, team.domain)] in m])
            self._build(f.left, occ.rstrip("/") + "/0", left, m, out)
            self._build(f.right, occ.rstrip("/") + "/1", right, m, out)
        elif isinstance(f, Exists):
            ch = self.choice[occ]

            def pick(s):
                k = tuple(s[v] for v in vars)
                return [a for a in self.universe if ch[k + (a,)] in m]

            self._build(f.body, occ.rstrip("/") + "/0", extend_choice(team, f.var, pick), m, out)
        elif isinstance(f, Forall):
            self._build(f.body, occ.rstrip("/") + "/0", extend_universal(team, f.var, self.structure), m, out)


def _empty_labelling(phi, team):
    out = {}

    # domains grow along quantifier paths
    def go(node, occ, domain):
        out[occ] = Team(domain, ())
        if isinstance(node, (And, Or)):
            go(node.left, occ.rstrip("/") + "/0", domain)
            go(node.right, occ.rstrip("/") + "/1", domain)
        elif isinstance(node, (Exists, Forall)):
            d = domain if node.var in domain else domain + (node.var,)
            go(node.body, occ.rstrip("/") + "/0", d)
    go(phi, "/", tuple(team.domain))
    return out
