import pytest
from hypothesis import given, strategies as st

from inexgames.core import (Relation, Structure, Team, all_teams, component_team, components,
                            extend_choice, extend_universal, format_structure, format_team,
                            parse_structure, parse_team, project_team, restrict_team)
from inexgames.errors import DomainError, InvalidChoice, InvalidGuard, ParseError
from inexgames.formulas import parse_formula

S3 = Structure(["a", "b", "c"], {"P": [("a",), ("b",)], "E": [("a", "b")]})


def team(rows, domain=("x", "y")):
    return Team(domain, rows)


rows_xy = st.sets(st.tuples(st.sampled_from("abc"), st.sampled_from("abc")), max_size=9)


class TestTeam:
    def test_rows_deduplicate(self):
        assert len(team([("a", "b"), ("a", "b")])) == 1

    def test_equality_is_set_equality(self):
        assert team([("a", "b"), ("b", "a")]) == team([("b", "a"), ("a", "b")])

    def test_equality_ignores_column_order(self):
        assert team([("a", "b")]) == Team(("y", "x"), [("b", "a")])

    def test_union(self):
        u = team([("a", "a")]) | team([("b", "b")])
        assert len(u) == 2

    def test_empty_universe_rejected(self):
        with pytest.raises(DomainError):
            Structure([])

    def test_nullary_relation_rejected(self):
        with pytest.raises(Exception):
            Structure(["a"], {"R": [()]})


class TestProjectRestrict:
    def test_project(self):
        X = team([("a", "b"), ("a", "c")])
        assert set(project_team(X, ("x",))) == {("a",)}
        assert set(project_team(X, ("y", "x"))) == {("b", "a"), ("c", "a")}

    def test_project_empty(self):
        assert set(project_team(team([]), ("x",))) == set()

    def test_project_unknown_variable(self):
        with pytest.raises(DomainError):
            project_team(team([("a", "b")]), ("z",))

    def test_restrict(self):
        X = team([("a", "b"), ("c", "a")])
        assert restrict_team(S3, X, parse_formula("P(x)")) == team([("a", "b")])

    def test_restrict_tautology_and_contradiction(self):
        X = team([("a", "b"), ("c", "a")])
        assert restrict_team(S3, X, parse_formula("x = x")) == X
        assert restrict_team(S3, X, parse_formula("x != x")) == team([])

    def test_restrict_rejects_team_atoms(self):
        with pytest.raises(InvalidGuard):
            restrict_team(S3, team([("a", "b")]), parse_formula("inc(x; y)"))

    def test_restrict_free_variable_outside_domain(self):
        with pytest.raises(DomainError):
            restrict_team(S3, team([("a", "b")]), parse_formula("P(z)"))


class TestComponents:
    def test_component(self):
        X = team([("a", "b"), ("a", "c"), ("b", "a")])
        assert component_team(X, ("x",), ("a",)) == team([("a", "b"), ("a", "c")])
        assert component_team(X, ("x",), ("c",)) == team([])

    def test_component_length_mismatch(self):
        with pytest.raises(DomainError):
            component_team(team([("a", "b")]), ("x",), ("a", "b"))

    @given(rows_xy, st.sampled_from([("x",), ("y",), ("x", "y"), ()]))
    def test_partition(self, rows, anchor):
        X = team(rows)
        parts = [component_team(X, anchor, a) for a in project_team(X, anchor)]
        assert sum(len(p) for p in parts) == len(X)
        assert Team(X.domain, [r for p in parts for r in p.rows]) == X
        assert set(components(X, anchor)) == set(project_team(X, anchor))


class TestExtend:
    def test_universal(self):
        X = Team(("x",), [("a",)])
        assert len(extend_universal(X, "y", S3)) == 3

    def test_universal_of_empty(self):
        assert len(extend_universal(Team(("x",), []), "y", S3)) == 0

    def test_universal_overwrites_existing(self):
        X = team([("a", "b")])
        assert extend_universal(X, "x", S3) == team([("a", "b"), ("b", "b"), ("c", "b")])

    def test_choice_constant(self):
        X = team([("a", "b"), ("b", "b")])
        Y = extend_choice(X, "z", lambda s: ["a"])
        assert Y == Team(("x", "y", "z"), [("a", "b", "a"), ("b", "b", "a")])

    def test_choice_two_rows(self):
        X = Team(("x",), [("a",), ("b",)])
        Y = extend_choice(X, "y", lambda s: ["a"] if s["x"] == "a" else ["a", "b"])
        assert len(Y) == 3

    def test_choice_full_universe_is_universal(self):
        X = team([("a", "b"), ("c", "c")])
        assert extend_choice(X, "z", lambda s: S3.universe) == extend_universal(X, "z", S3)

    def test_choice_empty_value(self):
        with pytest.raises(InvalidChoice):
            extend_choice(Team(("x",), [("a",)]), "y", lambda s: [])

    @given(st.sets(st.sampled_from("abc"), min_size=1))
    def test_universal_keeps_old_projection(self, xs):
        X = Team(("x",), [(a,) for a in xs])
        Y = extend_universal(X, "y", S3)
        assert set(project_team(Y, ("x",))) == set(project_team(X, ("x",)))


class TestFormats:
    def test_structure_roundtrip(self):
        assert parse_structure(format_structure(S3)) == S3

    def test_team_roundtrip(self):
        X = team([("a", "b"), ("c", "a")])
        assert parse_team(format_team(X)) == X

    def test_structure_parse_error_position(self):
        with pytest.raises(ParseError) as e:
            parse_structure("universe: a b\nP: (a) (d)\n")
        assert e.value.line == 2

    def test_all_teams_count(self):
        assert sum(1 for _ in all_teams(Structure(["a", "b"]), ("x",))) == 4
