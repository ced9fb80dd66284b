"""Anchor-guarding of team atoms and the exclusion form of dependence atoms."""
from __future__ import annotations

from ..errors import InvalidInput
from ..formulas import (And, Dep, Eq, Exc, Exists, Forall, Inc, Indep, Lit, Not, Or,
                        UGame, all_variables, fresh_name, to_nnf)


def _map_atoms(phi, f):
    if isinstance(phi, (And, Or)):
        return type(phi)(_map_atoms(phi.left, f), _map_atoms(phi.right, f))
    if isinstance(phi, (Exists, Forall)):
        return type(phi)(phi.var, _map_atoms(phi.body, f))
    if isinstance(phi, Not):
        return Not(_map_atoms(phi.body, f))
    return f(phi)


def guard_atoms(phi, anchor):
    """Prefix the anchor to both sides of every inclusion/exclusion atom.

    Dependence atoms are left alone (expand them first to guard them);
    independence and game atoms are rejected.
    """
    anchor = tuple(anchor)
    clash = set(anchor) & all_variables(phi)
    if clash:
        raise InvalidInput(f"anchor variables {sorted(clash)} already occur in the formula")

    def g(node):
        if isinstance(node, Inc):
            return Inc(anchor + node.left, anchor + node.right)
        if isinstance(node, Exc):
            return Exc(anchor + node.left, anchor + node.right)
        if isinstance(node, (Indep, UGame)):
            raise InvalidInput(f"cannot guard {node}")
        return node

    return _map_atoms(phi, g)


def unguard_atoms(phi, anchor):
    """Inverse of guard_atoms; every inclusion/exclusion atom must carry the anchor prefix."""
    anchor = tuple(anchor)
    n = len(anchor)

    def strip(side, node):
        if side[:n] != anchor or len(side) == n:
            raise InvalidInput(f"atom {node} is not guarded by {', '.join(anchor)}")
        return side[n:]

    def u(node):
        if isinstance(node, Inc):
            return Inc(strip(node.left, node), strip(node.right, node))
        if isinstance(node, Exc):
            return Exc(strip(node.left, node), strip(node.right, node))
        if isinstance(node, (Indep, UGame)):
            raise InvalidInput(f"cannot unguard {node}")
        return node

    return _map_atoms(phi, u)


def expand_dependence(phi, taken=()):
    """Replace dep(w̄; z) by ∀v(exc(w̄,v; w̄,z) | z = v) with a fresh v."""
    taken = set(taken) | all_variables(phi)

    def e(node):
        if isinstance(node, Dep):
            v = fresh_name("__fresh_v", taken)
            taken.add(v)
            left = node.left + (v,)
            right = node.left + (node.right,)
            return Forall(v, Or(Exc(left, right), Eq(node.right, v)))
        return node

    return _map_atoms(to_nnf(phi), e)
