"""Tarski semantics for first-order formulas."""
from __future__ import annotations

from ..core import Assignment, Structure
from ..errors import DomainError, UnsupportedFormula
from ..formulas import (TEAM_ATOMS, And, Eq, Exists, Forall, Lit, Not, Or)


def relation_lookup(structure: Structure, extra=None):
    """A function (symbol, tuple) -> bool over the structure plus extra relations."""
    extra = {k: frozenset(tuple(t) for t in v) for k, v in (extra or {}).items()}
    rels = structure.relations

    def holds(symbol, tup):
        if symbol in extra:
            return tup in extra[symbol]
        try:
            return tup in rels[symbol].tuples
        except KeyError:
            raise DomainError(f"relation symbol {symbol!r} is not interpreted") from None

    return holds


def eval_classical(structure: Structure, assignment, phi, extra=None) -> bool:
    """Truth of ``phi`` under one assignment; ``extra`` interprets additional symbols."""
    if isinstance(assignment, Assignment):
        env = assignment.as_dict()
    else:
        env = dict(assignment)
    holds = relation_lookup(structure, extra)
    universe = structure.universe

    def val(v):
        try:
            return env[v]
        except KeyError:
            raise DomainError(f"variable {v!r} is not assigned") from None

    def ev(node):
        if isinstance(node, Lit):
            r = holds(node.symbol, tuple(val(t) for t in node.terms))
            return r if node.positive else not r
        if isinstance(node, Eq):
            return (val(node.left) == val(node.right)) == node.positive
        if isinstance(node, And):
            return ev(node.left) and ev(node.right)
        if isinstance(node, Or):
            return ev(node.left) or ev(node.right)
        if isinstance(node, Not):
            return not ev(node.body)
        if isinstance(node, (Exists, Forall)):
            old = env.get(node.var, _MISSING)
            want = isinstance(node, Exists)
            result = not want
            for a in universe:
                env[node.var] = a
                if ev(node.body) == want:
                    result = want
                    break
            if old is _MISSING:
                del env[node.var]
            else:
                env[node.var] = old
            return result
        if isinstance(node, TEAM_ATOMS):
            raise UnsupportedFormula(f"team atom {node} has no classical semantics")
        raise UnsupportedFormula(f"unknown formula node {node!r}")

    return ev(phi)


_MISSING = object()
