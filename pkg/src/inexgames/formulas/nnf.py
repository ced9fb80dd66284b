"""Negation normal form and the implication shorthand."""
from __future__ import annotations

from ..errors import InvalidGuard, UnsupportedFormula
from .ast import (TEAM_ATOMS, And, Eq, Exists, Forall, Lit, Not, Or,
                  has_team_atoms)


def to_nnf(phi):
    """Push negations down to literals."""
    return _nnf(phi, True)


def _nnf(phi, pos):
    if isinstance(phi, Not):
        return _nnf(phi.body, not pos)
    if isinstance(phi, (Lit, Eq)):
        return phi if pos else phi.negate()
    if isinstance(phi, TEAM_ATOMS):
        if not pos:
            raise UnsupportedFormula(f"negation of the team atom {phi} is not supported")
        return phi
    if isinstance(phi, And):
        op = And if pos else Or
        return op(_nnf(phi.left, pos), _nnf(phi.right, pos))
    if isinstance(phi, Or):
        op = Or if pos else And
        return op(_nnf(phi.left, pos), _nnf(phi.right, pos))
    if isinstance(phi, Exists):
        return (Exists if pos else Forall)(phi.var, _nnf(phi.body, pos))
    if isinstance(phi, Forall):
        return (Forall if pos else Exists)(phi.var, _nnf(phi.body, pos))
    raise UnsupportedFormula(f"unknown formula node {phi!r}")


def negate(phi):
    """nnf(¬φ) for a first-order φ."""
    if has_team_atoms(phi):
        raise InvalidGuard(f"cannot negate {phi}: it contains team atoms")
    return _nnf(phi, False)


def arrow(guard, body):
    """φ → ψ, i.e. nnf(¬φ) ∨ (φ ∧ ψ); φ must be first-order."""
    if has_team_atoms(guard):
        raise InvalidGuard(f"the guard {guard} of an implication must be first-order")
    g = to_nnf(guard)
    return Or(_nnf(g, False), And(g, body))
