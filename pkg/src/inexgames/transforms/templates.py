"""Formulas describing winning strategies and targets of games.

They are meant for structures produced by game_as_structure, with unary
V0, V1, I, T and binary E, Eex.  Built as ASTs so occurrence ids stay stable.
"""
from __future__ import annotations

from ..formulas import And, Exc, Exists, Forall, Inc, Lit, Or, arrow, conj
from .companions import team_myopic_companion


def _l(sym, *terms):
    return Lit(sym, terms)


def template_phi_win(W="W"):
    """First-order: the set W (a relation symbol) is a winning strategy."""
    move = Or(And(_l("V0", "v"), Exists("w", And(_l("E", "v", "w"), _l(W, "w")))),
              And(_l("V1", "v"), Forall("w", arrow(_l("E", "v", "w"), _l(W, "w")))))
    moves = Forall("v", arrow(_l(W, "v"), move))
    init = Forall("v", arrow(_l("I", "v"), _l(W, "v")))
    both = And(_l(W, "v"), _l(W, "w"))
    exc = Forall("v", Forall("w", arrow(both, Lit("Eex", ("v", "w"), False))))
    return conj(moves, init, exc)


def template_psi_init(y="y"):
    return Forall("z", arrow(_l("I", "z"), Inc(("z",), (y,))))


def template_psi_move(y="y"):
    v0 = And(_l("V0", y), Exists("z1", And(_l("E", y, "z1"), Inc(("z1",), ("z",)))))
    v1 = And(_l("V1", y), Forall("z1", arrow(_l("E", y, "z1"), Inc(("z1",), ("z",)))))
    return Exists("z", And(Or(v0, v1), Inc(("z",), (y,))))


def template_psi_eex(y="y"):
    return Forall("z", arrow(Or(_l("Eex", y, "z"), _l("Eex", "z", y)), Exc((y,), ("z",))))


def template_psi_win(y="y"):
    """Team formula: Y(y) is the vertex set of a winning strategy (non-empty teams)."""
    return conj(template_psi_init(y), template_psi_move(y), template_psi_eex(y))


def template_psi_target(z="x"):
    """Team formula: X(z) is the target of a winning strategy (non-empty teams)."""
    y = "y" if z != "y" else "y0"
    inner = conj(template_psi_win(y), Inc((z,), (y,)), arrow(_l("T", y), Inc((y,), (z,))))
    return And(_l("T", z), Exists(y, inner))


def template_theta_target(x="x"):
    """x-myopic definition of the targets of a union game."""
    return team_myopic_companion(template_psi_target(x), (x,))
