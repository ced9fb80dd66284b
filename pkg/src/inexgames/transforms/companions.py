"""Union-closure companions: myopic formulas whose families are the union closures."""
from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import InvalidInput
from ..formulas import (And, Dep, Forall, Inc, Indep, Lit, Or, SOFormula, UGame,
                        all_variables, check_myopic_so, check_x_myopic, exists,
                        free_variables, fresh_name, rename_bound, rename_free,
                        rename_relation, to_nnf, walk)
from .guards import expand_dependence, guard_atoms


@dataclass
class TransformReport:
    input: object
    output: object
    fresh: tuple = ()
    check: object = None          # classifier Verdict on the output
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.check is None or self.check.ok


def _fresh_vars(base, n, taken):
    out = []
    for i in range(1, n + 1):
        v = fresh_name(f"{base}{i}", taken)
        taken.add(v)
        out.append(v)
    return tuple(out)


def myopic_companion_so_report(phi: SOFormula) -> TransformReport:
    from ..constructions.mcgames import to_prenex_so
    flat = to_prenex_so(phi)
    matrix = to_nnf(flat.matrix)
    taken_rel = set(flat.relation_names) | {flat.free}
    taken_rel |= {n.symbol for _, n in walk(matrix) if isinstance(n, Lit)}
    Y = fresh_name("__fresh_Y", taken_rel)
    r = flat.free_arity
    taken = set(all_variables(matrix))
    xs = _fresh_vars("__fresh_x", r, taken)
    ys = _fresh_vars("__fresh_z", r, taken)
    sub = Forall(ys[-1], Or(Lit(Y, ys, False), Lit(flat.free, ys)))
    for v in reversed(ys[:-1]):
        sub = Forall(v, sub)
    body = And(And(sub, Lit(Y, xs)), rename_relation(matrix, {flat.free: Y}))
    out = SOFormula(flat.free, r, ((Y, r),) + flat.relations, body, guard=xs)
    return TransformReport(phi, out, (Y,) + xs + ys, check_myopic_so(out))


def myopic_companion_so(phi: SOFormula) -> SOFormula:
    """∀x̄(Xx̄ → ∃Y ∃R̄ (∀ȳ(Yȳ → Xȳ) ∧ Yx̄ ∧ φ′(Y, R̄)))."""
    return myopic_companion_so_report(phi).output


def team_myopic_companion_report(phi, anchor, expand_dep=False) -> TransformReport:
    anchor = tuple(anchor)
    if not anchor or len(set(anchor)) != len(anchor):
        raise InvalidInput("the anchor must be a non-empty tuple of distinct variables")
    phi = to_nnf(phi)
    extra = free_variables(phi) - set(anchor)
    if extra:
        raise InvalidInput(f"free variables {sorted(extra)} are not in the anchor {', '.join(anchor)}")
    for _, n in walk(phi):
        if isinstance(n, (Indep, UGame)):
            raise InvalidInput(f"{type(n).__name__} atoms have no myopic companion")
    notes = []
    if any(isinstance(n, Dep) for _, n in walk(phi)):
        if not expand_dep:
            raise InvalidInput("dependence atoms need expand_dep=True (exclusion-logic expansion)")
        phi = expand_dependence(phi, anchor)
        notes.append("dependence atoms expanded into exclusion form")
    taken = set(all_variables(phi)) | set(anchor)
    ys = _fresh_vars("__fresh_y", len(anchor), taken)
    star = rename_bound(phi, set(anchor) | set(ys), taken)
    star = rename_free(star, dict(zip(anchor, ys)))
    star = guard_atoms(star, anchor)
    body = And(Inc(ys, anchor), And(Inc(anchor + anchor, anchor + ys), star))
    out = exists(ys, body)
    return TransformReport(phi, out, ys, check_x_myopic(out, anchor), notes)


def team_myopic_companion(phi, anchor, expand_dep=False):
    """∃ȳ(ȳ ⊆ x̄ ∧ x̄x̄ ⊆ x̄ȳ ∧ φ*(x̄, ȳ)), φ* being φ(ȳ) with x̄-guarded atoms."""
    return team_myopic_companion_report(phi, anchor, expand_dep).output
