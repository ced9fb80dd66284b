import itertools

import pytest

from inexgames.constructions import game_as_structure
from inexgames.core import Relation, Structure, Team, all_relations, all_teams
from inexgames.errors import InvalidInput
from inexgames.fixtures import TEAM_FORMULAS, team_fixtures
from inexgames.formulas import (Dep, Exc, Exists, Inc, check_myopic_so, check_x_myopic, free_variables,
                                parse_formula, parse_so_formula, walk)
from inexgames.games import Game, enumerate_targets, is_winning_strategy
from inexgames.semantics import (eval_classical, eval_so, eval_team, satisfying_relations,
                                 satisfying_teams, union_closure)
from inexgames.transforms import (expand_dependence, guard_atoms, myopic_companion_so,
                                  myopic_companion_so_report, team_myopic_companion,
                                  team_myopic_companion_report, template_phi_win, template_psi_target,
                                  template_psi_win, template_theta_target, unguard_atoms)

AB = Structure(["a", "b"], {"P": [("a",)], "E": [("a", "b")]})


def family(S, phi, domain):
    return {frozenset(X.rows) for X in satisfying_teams(S, phi, domain)}


class TestSOCompanion:
    def test_singleton(self):
        comp = myopic_companion_so(parse_so_formula("E x. X(x) & A y. (~X(y) | x = y)"))
        assert check_myopic_so(comp)
        assert satisfying_relations(AB, comp) == set(all_relations(AB, 1))

    def test_already_closed(self):
        phi = parse_so_formula("A x. (~X(x) | P(x))")
        comp = myopic_companion_so(phi)
        assert satisfying_relations(AB, comp) == satisfying_relations(AB, phi) | {frozenset()}

    def test_idempotent_family(self):
        phi = parse_so_formula("E x. E y. X(x) & X(y) & x != y")
        once = myopic_companion_so(phi)
        assert satisfying_relations(AB, myopic_companion_so(once)) == satisfying_relations(AB, once)

    def test_report(self):
        rep = myopic_companion_so_report(parse_so_formula("A x. X(x)"))
        assert rep.ok and all(n.startswith("__fresh_") for n in rep.fresh)

    @pytest.mark.parametrize("text", ["E x. X(x)", "A x. A y. (~X(x) | ~X(y) | x = y)",
                                      "EX R/1. E x. R(x) & A y. (~R(y) | ~X(y))"])
    def test_family_is_union_closure(self, text):
        phi = parse_so_formula(text)
        fam = satisfying_relations(AB, phi)
        closed = union_closure(fam, empty=frozenset())
        assert satisfying_relations(AB, myopic_companion_so(phi)) == closed


class TestGuards:
    def test_guard_inclusion(self):
        assert guard_atoms(parse_formula("inc(v; w)"), ("x",)) == Inc(("x", "v"), ("x", "w"))

    @pytest.mark.parametrize("name,phi,anchor", team_fixtures())
    def test_roundtrip(self, name, phi, anchor):
        assert unguard_atoms(guard_atoms(phi, ("g",)), ("g",)) == phi

    def test_dependence_untouched(self):
        phi = parse_formula("dep(x; y)")
        assert guard_atoms(phi, ("g",)) == phi

    def test_anchor_collision(self):
        with pytest.raises(InvalidInput):
            guard_atoms(parse_formula("inc(x; y)"), ("x",))

    def test_unguard_requires_prefix(self):
        with pytest.raises(InvalidInput):
            unguard_atoms(parse_formula("inc(x; y)"), ("g",))

    def test_independence_rejected(self):
        with pytest.raises(InvalidInput):
            guard_atoms(parse_formula("indep(x; y)"), ("g",))

    def test_expand_dependence(self):
        phi = parse_formula("dep(x; y)")
        ex = expand_dependence(phi)
        assert not any(isinstance(n, Dep) for _, n in walk(ex))
        for X in all_teams(AB, ("x", "y")):
            assert eval_team(AB, X, ex) == eval_team(AB, X, phi)


class TestTeamCompanion:
    def test_flat(self):
        phi = parse_formula("P(x)")
        assert family(AB, team_myopic_companion(phi, ("x",)), ("x",)) == family(AB, phi, ("x",))

    @pytest.mark.parametrize("name,phi,anchor", team_fixtures())
    def test_union_closure(self, name, phi, anchor):
        comp = team_myopic_companion(phi, anchor)
        assert check_x_myopic(comp, anchor)
        expected = union_closure(family(AB, phi, anchor), empty=frozenset())
        assert family(AB, comp, anchor) == expected

    def test_shape(self):
        out = team_myopic_companion(parse_formula("exc(x; y)"), ("x", "y"))
        assert isinstance(out, Exists)
        inner = out
        while isinstance(inner, Exists):
            inner = inner.body
        atoms = [n for _, n in walk(inner) if isinstance(n, (Inc, Exc))]
        assert any(a.left == ("__fresh_y1", "__fresh_y2") for a in atoms)
        guarded = [a for a in atoms if a.left[:2] == ("x", "y")]
        assert guarded

    def test_dependence_needs_flag(self):
        phi = parse_formula("dep(x; y)")
        with pytest.raises(InvalidInput):
            team_myopic_companion(phi, ("x", "y"))
        rep = team_myopic_companion_report(phi, ("x", "y"), expand_dep=True)
        assert rep.ok and rep.notes

    def test_free_outside_anchor(self):
        with pytest.raises(InvalidInput):
            team_myopic_companion(parse_formula("exc(x; y)"), ("x",))


def vertex_team(game, var, W):
    return Team((var,), [(v,) for v in W])


GAMES = [
    Game(("v",), ("t",), {("v", "t")}, targets={"t"}),
    Game(("t",), ("p", "q"), {("t", "p"), ("t", "q")}, targets={"t"}, exclusion={("p", "q")}),
    Game(("t", "s"), ("p",), {("t", "p"), ("s", "p"), ("p", "s")}, targets={"t", "s"}),
    Game(("a",), ("b", "c"), {("a", "b"), ("b", "c"), ("c", "a")}, initial={"a"}, targets={"a", "c"}),
]


def subsets(xs):
    xs = sorted(xs)
    return [frozenset(c) for r in range(len(xs) + 1) for c in itertools.combinations(xs, r)]


class TestTemplates:
    @pytest.mark.parametrize("g", GAMES)
    def test_phi_win(self, g):
        S = game_as_structure(g)
        phi = template_phi_win("W")
        for W in subsets(g.vertices):
            Sw = S.expand({"W": Relation(1, [(v,) for v in W])})
            assert eval_classical(Sw, {}, phi) == bool(is_winning_strategy(g, W))

    @pytest.mark.parametrize("g", GAMES)
    def test_psi_win(self, g):
        S = game_as_structure(g)
        psi = template_psi_win("y")
        for W in subsets(g.vertices):
            if W:
                assert eval_team(S, vertex_team(g, "y", W), psi) == bool(is_winning_strategy(g, W))

    @pytest.mark.parametrize("g", GAMES)
    def test_psi_target(self, g):
        S = game_as_structure(g)
        fam = enumerate_targets(g)
        psi = template_psi_target("x")
        for Q in subsets(g.vertices):
            if Q:
                assert eval_team(S, vertex_team(g, "x", Q), psi) == (Q in fam)

    @pytest.mark.parametrize("g", GAMES[:3])
    def test_theta_target(self, g):
        S = game_as_structure(g)
        fam = enumerate_targets(g)
        theta = template_theta_target("x")
        for Q in subsets(g.vertices):
            assert eval_team(S, vertex_team(g, "x", Q), theta) == (Q in fam)
