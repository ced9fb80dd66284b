import itertools

import pytest
from hypothesis import given, strategies as st

from inexgames.core import Relation, Structure, Team, all_relations, all_teams, component_team
from inexgames.errors import BudgetExceeded
from inexgames.fixtures import OPTIMALITY_MU, STRUCTURES, TEAM_FORMULAS, team_fixtures
from inexgames.formulas import free_variables, has_team_atoms, parse_formula, parse_so_formula
from inexgames.semantics import (EvalBudget, check_labelling, check_union_closed_empirical,
                                 eval_classical, eval_normalform_myopic, eval_so, eval_so_bruteforce,
                                 eval_team, eval_team_direct, find_witness_labelling,
                                 satisfying_relations, satisfying_teams)
from inexgames.transforms import guard_atoms, team_myopic_companion
from test_formulas import formulas

AB = Structure(["a", "b"], {"P": [("a",)], "E": [("a", "b"), ("b", "b")]})


def teams_of(S, domain):
    return list(all_teams(S, domain))


class TestClassical:
    def test_literal(self):
        assert eval_classical(AB, {"x": "a"}, parse_formula("P(x)"))

    def test_inequality(self):
        assert not eval_classical(AB, {"x": "a"}, parse_formula("x != x"))


class TestTeam:
    def test_evil_disjunctions(self, evil):
        A, phi, _, _ = evil
        X1 = Team(("x",), [("a",), ("b",)])
        X2 = Team(("x",), [("b",), ("c",)])
        assert eval_team(A, X1, phi)
        assert eval_team(A, X2, phi)
        assert not eval_team(A, X1 | X2, phi)

    @pytest.mark.parametrize("name,text,anchor", TEAM_FORMULAS)
    def test_empty_team_property(self, name, text, anchor):
        assert eval_team(AB, Team.empty(anchor), parse_formula(text))

    def test_singleton_team(self):
        X = Team(("x", "y"), [("a", "a")])
        assert not eval_team(AB, X, parse_formula("exc(x; y)"))
        assert eval_team(AB, X, parse_formula("inc(x; y)"))

    def test_dependence_and_independence(self):
        dep = parse_formula("dep(x; y)")
        assert eval_team(AB, Team(("x", "y"), [("a", "b"), ("b", "b")]), dep)
        assert not eval_team(AB, Team(("x", "y"), [("a", "a"), ("a", "b")]), dep)
        ind = parse_formula("indep(x; y)")
        assert eval_team(AB, Team(("x", "y"), itertools.product("ab", "ab")), ind)
        assert not eval_team(AB, Team(("x", "y"), [("a", "a"), ("b", "b")]), ind)

    @pytest.mark.parametrize("name,phi,anchor", team_fixtures())
    def test_sat_agrees_with_direct(self, name, phi, anchor):
        for X in teams_of(AB, anchor):
            assert eval_team(AB, X, phi, method="sat") == eval_team_direct(AB, X, phi)

    @given(formulas())
    def test_flatness(self, phi):
        if has_team_atoms(phi):
            return
        dom = tuple(sorted(free_variables(phi)))
        for X in teams_of(AB, dom)[::3]:
            expected = all(eval_classical(AB, dict(zip(dom, r)), phi) for r in X.rows)
            assert eval_team(AB, X, phi) == expected

    @given(formulas())
    def test_random_formulas_sat_vs_direct(self, phi):
        dom = tuple(sorted(free_variables(phi)))
        for X in teams_of(AB, dom)[::5]:
            assert eval_team(AB, X, phi, method="sat") == eval_team_direct(AB, X, phi)

    @pytest.mark.parametrize("text", ["exc(x; y)", "E(x,y) | exc(x; y)", "E z. exc(x; z) & E(z,y)"])
    def test_downward_closure_of_exclusion_formulas(self, text):
        phi = parse_formula(text)
        fam = satisfying_teams(AB, phi, ("x", "y"))
        for X in fam:
            for r in X.rows:
                assert Team(X.domain, [s for s in X.rows if s != r]) in fam

    def test_budget_is_enforced(self):
        with pytest.raises(BudgetExceeded):
            eval_team(STRUCTURES["path3"], Team(("x", "y"), itertools.product("abc", "abc")),
                      parse_formula("P(x) | exc(x; y) | inc(y; x)"), EvalBudget(max_steps=3), method="direct")


class TestGuardedLaws:
    @pytest.mark.parametrize("name,phi,anchor", team_fixtures())
    def test_guarded_version(self, name, phi, anchor):
        star = guard_atoms(phi, ("w",))
        S = Structure(["a", "b"], {"P": [("a",)], "E": [("a", "b")]})
        dom = ("w",) + anchor
        teams = teams_of(S, dom)
        for X in teams[:: max(1, len(teams) // 60)]:
            comps = [component_team(X, ("w",), (a,)) for a in S.universe]
            expected = all(eval_team(S, C.restrict_domain(anchor), phi) for C in comps)
            assert eval_team(S, X, star) == expected

    def test_componentwise_inclusion(self):
        guarded, plain = parse_formula("inc(x, y; x, z)"), parse_formula("inc(y; z)")
        for X in teams_of(AB, ("x", "y", "z"))[::7]:
            comps = [component_team(X, ("x",), (a,)) for a in "ab"]
            assert eval_team(AB, X, guarded) == all(eval_team(AB, C, plain) for C in comps)


class TestSO:
    def test_witness_full_relation(self):
        phi = parse_so_formula("EX R/1. A x. (~X(x) | R(x))")
        assert all(eval_so(AB, Relation(1, r), phi) for r in all_relations(AB, 1))

    def test_all_false(self):
        assert not eval_so(AB, Relation(1, [("a",)]), parse_so_formula("A x. X(x)"))

    def test_inside_p(self):
        phi = parse_so_formula("A x. (X(x) -> P(x))")
        assert satisfying_relations(AB, phi) == {frozenset(), frozenset({("a",)})}

    def test_all(self):
        assert satisfying_relations(AB, parse_so_formula("A x. X(x)")) == {frozenset({("a",), ("b",)})}

    def test_nonempty(self):
        fam = satisfying_relations(AB, parse_so_formula("E y. X(y)"))
        assert fam == {frozenset(r) for r in all_relations(AB, 1) if r}

    def test_singleton_myopic_variant(self):
        mu = parse_so_formula("A x. (X(x) -> EX Y/1. A z. (~Y(z) | X(z)) & Y(x) & "
                              "A u. A v. (~Y(u) | ~Y(v) | u = v))")
        assert satisfying_relations(AB, mu) == set(all_relations(AB, 1))

    @pytest.mark.parametrize("text", ["EX R/1. A x. (~X(x) | R(x)) & A x. (~R(x) | P(x))",
                                      "EX R/2. A x. (~X(x) | E y. R(x,y)) & A x. A y. A z. (~R(x,y) | ~R(x,z) | y = z)",
                                      "A x. (X(x) -> EX R/1. R(x) & A y. (E(x,y) -> ~R(y) | X(y)))"])
    def test_sat_agrees_with_bruteforce(self, text):
        phi = parse_so_formula(text)
        for r in all_relations(AB, phi.free_arity):
            assert eval_so(AB, Relation(phi.free_arity, r), phi) == eval_so_bruteforce(AB, Relation(phi.free_arity, r), phi)


class TestFamilies:
    def test_flat_family(self):
        fam = satisfying_teams(AB, parse_formula("P(x)"), ("x",))
        assert fam == {Team.empty(("x",)), Team(("x",), [("a",)])}

    def test_self_exclusion(self):
        assert satisfying_teams(AB, parse_formula("exc(x; x)"), ("x",)) == {Team.empty(("x",))}

    def test_optimality_mu(self, fork):
        fam = satisfying_teams(fork, parse_formula(OPTIMALITY_MU), ("x",))
        expected = {X for X in all_teams(fork, ("x",))
                    if ("a",) not in X.rows or {("b",), ("c",)} <= set(X.rows)}
        assert fam == expected


class TestWitness:
    def test_flat_labelling(self):
        X = Team(("x",), [("a",)])
        lab = find_witness_labelling(AB, X, parse_formula("P(x) & P(x)"))
        assert all(t == X for t in lab.values())

    def test_evil_none(self, evil):
        A, phi, _, _ = evil
        assert find_witness_labelling(A, Team(("x",), [("a",), ("b",), ("c",)]), phi) is None

    def test_empty_team(self):
        lab = find_witness_labelling(AB, Team.empty(("x",)), parse_formula("P(x) | inc(x; x)"))
        assert all(len(t) == 0 for t in lab.values())

    @pytest.mark.parametrize("name,phi,anchor", team_fixtures())
    def test_soundness(self, name, phi, anchor):
        for X in teams_of(AB, anchor):
            lab = find_witness_labelling(AB, X, phi)
            assert (lab is not None) == eval_team(AB, X, phi)
            if lab is not None:
                assert check_labelling(AB, X, phi, lab) == []


class TestUnionClosure:
    def test_flat_closed(self):
        assert check_union_closed_empirical(AB, parse_formula("P(x)"), ("x",))

    def test_evil_counterexample(self, evil):
        A, phi, _, _ = evil
        res = check_union_closed_empirical(A, phi, ("x",))
        assert not res
        X1, X2 = res.pair
        assert eval_team(A, X1, phi) and eval_team(A, X2, phi) and not eval_team(A, X1 | X2, phi)

    def test_exclusion_two_singletons(self):
        res = check_union_closed_empirical(AB, parse_formula("exc(x; y)"), ("x", "y"))
        assert not res and all(len(t) == 1 for t in res.pair)


class TestNormalForm:
    def test_companion_of_flat_formula(self):
        phi = parse_formula("P(x)")
        comp = team_myopic_companion(phi, ("x",))
        for X in teams_of(AB, ("x",)):
            assert eval_normalform_myopic(AB, X, comp, ("x",)) == eval_team(AB, X, phi)

    def test_empty_team(self):
        comp = team_myopic_companion(parse_formula("exc(x; y)"), ("x", "y"))
        assert eval_normalform_myopic(AB, Team.empty(("x", "y")), comp, ("x", "y"))
