"""Canonical concrete syntax.

Binary operators are left-associative; a right operand of the same operator
and any quantified operand are parenthesized, so parsing the output gives
back the same tree.
"""
from __future__ import annotations

from .ast import (And, Dep, Eq, Exc, Exists, Forall, Inc, Indep, Lit, Not, Or,
                  UGame)

_PREC = {Or: 1, And: 2}


def _vars(vs) -> str:
    return ", ".join(vs)


def format_formula(phi) -> str:
    if isinstance(phi, Lit):
        return ("" if phi.positive else "~") + f"{phi.symbol}({_vars(phi.terms)})"
    if isinstance(phi, Eq):
        return f"{phi.left} {'=' if phi.positive else '!='} {phi.right}"
    if isinstance(phi, Inc):
        return f"inc({_vars(phi.left)}; {_vars(phi.right)})"
    if isinstance(phi, Exc):
        return f"exc({_vars(phi.left)}; {_vars(phi.right)})"
    if isinstance(phi, Dep):
        return f"dep({_vars(phi.left)}; {phi.right})"
    if isinstance(phi, Indep):
        return f"indep({_vars(phi.left)}; {_vars(phi.right)})"
    if isinstance(phi, UGame):
        return f"ugame({phi.k}; {_vars(phi.target)})"
    if isinstance(phi, (And, Or)):
        op = " & " if isinstance(phi, And) else " | "
        return _operand(phi.left, phi, False) + op + _operand(phi.right, phi, True)
    if isinstance(phi, (Exists, Forall)):
        q = "E" if isinstance(phi, Exists) else "A"
        return f"{q} {phi.var}. {format_formula(phi.body)}"
    if isinstance(phi, Not):
        return f"~({format_formula(phi.body)})"
    raise TypeError(f"cannot print {type(phi).__name__}")


def _operand(child, parent, right: bool) -> str:
    text = format_formula(child)
    if isinstance(child, (Exists, Forall)):
        return f"({text})"
    if isinstance(child, (And, Or)):
        cp, pp = _PREC[type(child)], _PREC[type(parent)]
        if cp < pp or (right and cp == pp):
            return f"({text})"
    return text


def format_so_formula(phi) -> str:
    prefix = ""
    if phi.relations:
        prefix = "EX " + ", ".join(f"{n}/{a}" for n, a in phi.relations) + ". "
    body = prefix + format_formula(phi.matrix)
    if phi.guard is None:
        return body
    qs = "".join(f"A {v}. " for v in phi.guard)
    return f"{qs}({phi.free}({_vars(phi.guard)}) -> {body})"
