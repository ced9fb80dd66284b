"""Syntactic fragment checks: myopic second-order formulas and x̄-myopic team formulas."""
from __future__ import annotations

from dataclasses import dataclass, field

from .ast import (And, Dep, Exc, Exists, Forall, Inc, Indep, Lit, Or, SOFormula,
                  UGame, free_variables, walk)


@dataclass
class Verdict:
    ok: bool
    problems: list = field(default_factory=list)  # (clause, occurrence id, message)
    notes: list = field(default_factory=list)

    def __bool__(self):
        return self.ok

    def fail(self, clause, occ, msg):
        self.ok = False
        self.problems.append((clause, occ, msg))

    def summary(self) -> str:
        if self.ok:
            return "ok" + "".join(f"; note: {n}" for n in self.notes)
        c, o, m = self.problems[0]
        return f"violates {c} at {o}: {m}"


def literal_polarities(phi, symbol) -> list[tuple[str, bool]]:
    return [(o, n.positive) for o, n in walk(phi) if isinstance(n, Lit) and n.symbol == symbol]


def _match_desugared_guard(phi, free):
    """Recognise ∀x̄(¬Xx̄ ∨ (Xx̄ ∧ ψ)); returns (x̄, ψ) or None."""
    qvars = []
    node = phi
    while isinstance(node, Forall):
        qvars.append(node.var)
        node = node.body
    if not qvars or not isinstance(node, Or):
        return None
    neg, conj = node.left, node.right
    g = Lit(free, tuple(qvars))
    if neg == g.negate() and isinstance(conj, And) and conj.left == g:
        return tuple(qvars), conj.right
    return None


def check_myopic_so(phi) -> Verdict:
    v = Verdict(True)
    if not isinstance(phi, SOFormula):
        v.fail("shape", "/", "not a second-order formula with a free relation")
        return v
    if phi.guard is not None:
        matrix = phi.matrix
    else:
        m = _match_desugared_guard(phi.matrix, phi.free) if not phi.relations else None
        if m is None:
            v.fail("shape", "/", f"expected the shape A x̄. ({phi.free}(x̄) -> EX R̄. φ')")
            return v
        matrix = m[1]
    for occ, positive in literal_polarities(matrix, phi.free):
        if not positive:
            v.fail("positivity", occ, f"{phi.free} occurs negatively in the matrix")
            break
    return v


def check_x_myopic(phi, anchor) -> Verdict:
    anchor = tuple(anchor)
    n = len(anchor)
    v = Verdict(True)

    def go(node, occ, under_or):
        if isinstance(node, (Exists, Forall)):
            if node.var in anchor:
                v.fail("no-anchor-quantifier", occ, f"anchor variable {node.var} is quantified")
            go(node.body, occ.rstrip("/") + "/0", under_or)
        elif isinstance(node, Or):
            go(node.left, occ.rstrip("/") + "/0", True)
            go(node.right, occ.rstrip("/") + "/1", True)
        elif isinstance(node, And):
            go(node.left, occ.rstrip("/") + "/0", under_or)
            go(node.right, occ.rstrip("/") + "/1", under_or)
        elif isinstance(node, Exc):
            if not (node.left[:n] == anchor and node.right[:n] == anchor and len(node.left) > n):
                v.fail("guarded-exclusion", occ, f"exclusion atom {node} is not anchor-guarded")
        elif isinstance(node, Inc):
            guarded = node.left[:n] == anchor and node.right[:n] == anchor and len(node.left) > n
            if guarded:
                return
            if node.right == anchor:
                if under_or:
                    v.fail("unguarded-inclusion", occ, f"{node} lies in the scope of a disjunction")
                return
            v.fail("guarded-inclusion", occ, f"inclusion atom {node} is neither guarded nor of the form ȳ ⊆ x̄")
        elif isinstance(node, (Dep, Indep, UGame)):
            v.fail("fragment", occ, f"{type(node).__name__} atoms are outside FO(⊆,|)")

    go(phi, "/", False)
    extra = free_variables(phi) - set(anchor)
    if extra:
        v.fail("free-variables", "/", f"free variables {sorted(extra)} outside the anchor")
    missing = set(anchor) - free_variables(phi)
    if missing:
        v.notes.append(f"anchor variables {sorted(missing)} do not occur free (only inclusion is required)")
    return v
