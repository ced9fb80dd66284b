"""Formula syntax trees.

Terms are variables (strings).  Conjunction and disjunction are binary so
that occurrence ids are plain tree addresses.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from ..errors import ArityError, UnsupportedFormula

RESERVED_PREFIX = "__fresh_"

# The eighteen variable groups of a game-in-team layout, in canonical order.
UGAME_GROUPS = ("u", "v0", "v1", "v", "w", "t", "vex", "wex", "eps1", "eps2",
                "uc", "vc", "wc", "tc", "vexc", "wexc", "eps1c", "eps2c")


class Formula:
    __slots__ = ()

    def __and__(self, other):
        return And(self, other)

    def __or__(self, other):
        return Or(self, other)

    def __str__(self):
        from .printer import format_formula
        return format_formula(self)


@dataclass(frozen=True, eq=True, repr=False)
class Lit(Formula):
    symbol: str
    terms: tuple
    positive: bool = True

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))

    def negate(self):
        return Lit(self.symbol, self.terms, not self.positive)

    def __repr__(self):
        return f"Lit({str(self)})"


@dataclass(frozen=True, eq=True, repr=False)
class Eq(Formula):
    left: str
    right: str
    positive: bool = True

    def negate(self):
        return Eq(self.left, self.right, not self.positive)

    def __repr__(self):
        return f"Eq({str(self)})"


def _tuple_pair(node, left, right, name):
    object.__setattr__(node, "left", tuple(left))
    object.__setattr__(node, "right", tuple(right))
    if len(node.left) != len(node.right):
        raise ArityError(f"{name} atom sides have widths {len(node.left)} and {len(node.right)}")
    if not node.left:
        raise ArityError(f"{name} atom needs at least one variable per side")


@dataclass(frozen=True, eq=True, repr=False)
class Inc(Formula):
    left: tuple
    right: tuple

    def __post_init__(self):
        _tuple_pair(self, self.left, self.right, "inclusion")

    def __repr__(self):
        return f"Inc({str(self)})"


@dataclass(frozen=True, eq=True, repr=False)
class Exc(Formula):
    left: tuple
    right: tuple

    def __post_init__(self):
        _tuple_pair(self, self.left, self.right, "exclusion")

    def __repr__(self):
        return f"Exc({str(self)})"


@dataclass(frozen=True, eq=True, repr=False)
class Dep(Formula):
    left: tuple
    right: str

    def __post_init__(self):
        object.__setattr__(self, "left", tuple(self.left))

    def __repr__(self):
        return f"Dep({str(self)})"


@dataclass(frozen=True, eq=True, repr=False)
class Indep(Formula):
    left: tuple
    right: tuple

    def __post_init__(self):
        object.__setattr__(self, "left", tuple(self.left))
        object.__setattr__(self, "right", tuple(self.right))

    def __repr__(self):
        return f"Indep({str(self)})"


@dataclass(frozen=True, eq=True, repr=False)
class UGame(Formula):
    """The game atom; its layout variables are implied by ``k``."""
    k: int
    target: tuple

    def __post_init__(self):
        object.__setattr__(self, "target", tuple(self.target))
        if self.k < 1:
            raise ArityError("ugame width k must be positive")
        if len(self.target) != self.k:
            raise ArityError(f"ugame target has width {len(self.target)}, expected {self.k}")

    def layout_vars(self) -> tuple:
        return ugame_layout_vars(self.k)

    def __repr__(self):
        return f"UGame({str(self)})"


def ugame_group(name: str, k: int) -> tuple:
    return tuple(f"{name}_{i}" for i in range(1, k + 1))


def ugame_layout_vars(k: int) -> tuple:
    return tuple(v for g in UGAME_GROUPS for v in ugame_group(g, k))


@dataclass(frozen=True, eq=True, repr=False)
class And(Formula):
    left: Formula
    right: Formula

    def __repr__(self):
        return f"And({str(self)})"


@dataclass(frozen=True, eq=True, repr=False)
class Or(Formula):
    left: Formula
    right: Formula

    def __repr__(self):
        return f"Or({str(self)})"


@dataclass(frozen=True, eq=True, repr=False)
class Exists(Formula):
    var: str
    body: Formula

    def __repr__(self):
        return f"Exists({str(self)})"


@dataclass(frozen=True, eq=True, repr=False)
class Forall(Formula):
    var: str
    body: Formula

    def __repr__(self):
        return f"Forall({str(self)})"


@dataclass(frozen=True, eq=True, repr=False)
class Not(Formula):
    """General negation; only present before negation normal form."""
    body: Formula

    def __repr__(self):
        return f"Not({str(self)})"


TEAM_ATOMS = (Inc, Exc, Dep, Indep, UGame)
LITERALS = (Lit, Eq)


def children(phi) -> tuple:
    if isinstance(phi, (And, Or)):
        return (phi.left, phi.right)
    if isinstance(phi, (Exists, Forall)):
        return (phi.body,)
    if isinstance(phi, Not):
        return (phi.body,)
    return ()


def child_id(parent: str, i: int) -> str:
    return parent.rstrip("/") + f"/{i}"


ROOT = "/"


def walk(phi, occ: str = ROOT) -> Iterator[tuple[str, Formula]]:
    """Pre-order traversal yielding (occurrence id, node)."""
    stack = [(occ, phi)]
    while stack:
        o, node = stack.pop()
        yield o, node
        kids = children(node)
        for i in reversed(range(len(kids))):
            stack.append((child_id(o, i), kids[i]))


def subformula_multiset(phi) -> list[tuple[str, Formula]]:
    return list(walk(phi))


def subformula_at(phi, occ: str):
    node = phi
    for part in occ.strip("/").split("/"):
        if part == "":
            continue
        node = children(node)[int(part)]
    return node


def atom_variables(phi) -> tuple:
    if isinstance(phi, Lit):
        return phi.terms
    if isinstance(phi, Eq):
        return (phi.left, phi.right)
    if isinstance(phi, (Inc, Exc, Indep)):
        return phi.left + phi.right
    if isinstance(phi, Dep):
        return phi.left + (phi.right,)
    if isinstance(phi, UGame):
        return phi.layout_vars() + phi.target
    raise UnsupportedFormula(f"not an atom: {phi!r}")


def free_variables(phi) -> frozenset:
    memo = {}

    def fv(node):
        key = id(node)
        if key in memo:
            return memo[key][1]
        if isinstance(node, (And, Or)):
            r = fv(node.left) | fv(node.right)
        elif isinstance(node, (Exists, Forall)):
            r = fv(node.body) - {node.var}
        elif isinstance(node, Not):
            r = fv(node.body)
        else:
            r = frozenset(atom_variables(node))
        memo[key] = (node, r)
        return r

    return fv(phi)


def bound_variables(phi) -> set:
    return {n.var for _, n in walk(phi) if isinstance(n, (Exists, Forall))}


def all_variables(phi) -> set:
    out = set()
    for _, n in walk(phi):
        if isinstance(n, (Exists, Forall)):
            out.add(n.var)
        elif not children(n):
            out.update(atom_variables(n))
    return out


def relation_symbols(phi) -> dict[str, int]:
    out = {}
    for _, n in walk(phi):
        if isinstance(n, Lit):
            if out.setdefault(n.symbol, len(n.terms)) != len(n.terms):
                raise ArityError(f"relation {n.symbol!r} used with arities {out[n.symbol]} and {len(n.terms)}")
    return out


def has_team_atoms(phi) -> bool:
    return any(isinstance(n, TEAM_ATOMS) for _, n in walk(phi))


def is_first_order(phi) -> bool:
    return not has_team_atoms(phi)


def is_nnf(phi) -> bool:
    return not any(isinstance(n, Not) for _, n in walk(phi))


def conj(*parts):
    """Left-nested conjunction of the given formulas."""
    parts = [p for p in parts if p is not None]
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disj(*parts):
    parts = [p for p in parts if p is not None]
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


def exists(vars, body):
    for v in reversed(tuple(vars)):
        body = Exists(v, body)
    return body


def forall(vars, body):
    for v in reversed(tuple(vars)):
        body = Forall(v, body)
    return body


def rename_free(phi, mapping: dict):
    """Substitute free variables; binders are assumed not to capture."""
    if not mapping:
        return phi
    m = lambda v: mapping.get(v, v)
    if isinstance(phi, Lit):
        return Lit(phi.symbol, tuple(map(m, phi.terms)), phi.positive)
    if isinstance(phi, Eq):
        return Eq(m(phi.left), m(phi.right), phi.positive)
    if isinstance(phi, Inc):
        return Inc(tuple(map(m, phi.left)), tuple(map(m, phi.right)))
    if isinstance(phi, Exc):
        return Exc(tuple(map(m, phi.left)), tuple(map(m, phi.right)))
    if isinstance(phi, Dep):
        return Dep(tuple(map(m, phi.left)), m(phi.right))
    if isinstance(phi, Indep):
        return Indep(tuple(map(m, phi.left)), tuple(map(m, phi.right)))
    if isinstance(phi, UGame):
        if any(v in mapping for v in phi.layout_vars()):
            raise UnsupportedFormula("cannot rename the layout variables of a ugame atom")
        return UGame(phi.k, tuple(map(m, phi.target)))
    if isinstance(phi, And):
        return And(rename_free(phi.left, mapping), rename_free(phi.right, mapping))
    if isinstance(phi, Or):
        return Or(rename_free(phi.left, mapping), rename_free(phi.right, mapping))
    if isinstance(phi, (Exists, Forall)):
        inner = {k: v for k, v in mapping.items() if k != phi.var}
        return type(phi)(phi.var, rename_free(phi.body, inner))
    if isinstance(phi, Not):
        return Not(rename_free(phi.body, mapping))
    raise UnsupportedFormula(f"unknown node {phi!r}")


def fresh_name(base: str, taken) -> str:
    if base not in taken:
        return base
    i = 1
    while f"{base}_{i}" in taken:
        i += 1
    return f"{base}_{i}"


def rename_bound(phi, avoid, taken=None):
    """Rename binders so no bound variable lies in ``avoid`` or shadows an enclosing one."""
    avoid = set(avoid)
    taken = set(taken or ()) | all_variables(phi) | avoid

    def go(node, scope, sub):
        if isinstance(node, (Exists, Forall)):
            v = node.var
            if v in scope:
                nv = fresh_name(v, taken)
                taken.add(nv)
            else:
                nv = v
            inner = dict(sub)
            if nv != v:
                inner[v] = nv
            else:
                inner.pop(v, None)
            return type(node)(nv, go(node.body, scope | {nv}, inner))
        if isinstance(node, (And, Or)):
            return type(node)(go(node.left, scope, sub), go(node.right, scope, sub))
        if isinstance(node, Not):
            return Not(go(node.body, scope, sub))
        return rename_free(node, sub)

    return go(phi, frozenset(avoid | free_variables(phi)), {})


def rename_relation(phi, mapping: dict):
    if isinstance(phi, Lit):
        return Lit(mapping.get(phi.symbol, phi.symbol), phi.terms, phi.positive)
    if isinstance(phi, (And, Or)):
        return type(phi)(rename_relation(phi.left, mapping), rename_relation(phi.right, mapping))
    if isinstance(phi, (Exists, Forall)):
        return type(phi)(phi.var, rename_relation(phi.body, mapping))
    if isinstance(phi, Not):
        return Not(rename_relation(phi.body, mapping))
    return phi


@dataclass(frozen=True, repr=False)
class SOFormula:
    """∃R̄ matrix with one free relation symbol.

    With ``guard`` set to a variable tuple ḡ the formula reads
    ∀ḡ(free(ḡ) → ∃R̄ matrix) and the matrix may mention ḡ freely.
    """

    free: str
    free_arity: int
    relations: tuple
    matrix: Formula
    guard: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "relations", tuple((n, int(a)) for n, a in self.relations))
        if self.guard is not None:
            object.__setattr__(self, "guard", tuple(self.guard))
            if len(self.guard) != self.free_arity:
                raise ArityError(f"guard has width {len(self.guard)} but {self.free} has arity {self.free_arity}")
        if self.free_arity < 1:
            raise ArityError("free relation arity must be positive")
        names = [n for n, _ in self.relations]
        if len(set(names)) != len(names) or self.free in names:
            raise ArityError("quantified relation symbols must be distinct from each other and the free symbol")
        for n, a in self.relations:
            if a < 1:
                raise ArityError(f"relation {n} has non-positive arity")
        syms = relation_symbols(self.matrix)
        declared = dict(self.relations)
        declared[self.free] = self.free_arity
        for n, a in syms.items():
            if n in declared and declared[n] != a:
                raise ArityError(f"relation {n!r} declared with arity {declared[n]} but used with {a}")
        if has_team_atoms(self.matrix):
            raise UnsupportedFormula("second-order matrices must not contain team atoms")

    @property
    def relation_names(self) -> tuple:
        return tuple(n for n, _ in self.relations)

    def __str__(self):
        from .printer import format_so_formula
        return format_so_formula(self)

    def __repr__(self):
        return f"SOFormula({str(self)})"
