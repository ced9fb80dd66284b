import pytest
from hypothesis import given, strategies as st

from inexgames.core import Structure, Team, all_teams
from inexgames.errors import ArityError, ParseError
from inexgames.fixtures import corpus_formulas, load_evil
from inexgames.formulas import (And, Exc, Exists, Forall, Inc, Lit, Not, Or, arrow, check_myopic_so,
                                check_x_myopic, format_formula, format_so_formula, free_variables,
                                is_nnf, parse_formula, parse_so_formula, subformula_at,
                                subformula_multiset, to_nnf)
from inexgames.semantics import eval_classical, eval_team
from inexgames.transforms import team_myopic_companion, template_theta_target

VARS = ("x", "y", "z")


def formulas(team_atoms=True):
    v = st.sampled_from(VARS)
    lits = st.one_of(
        st.builds(lambda a, pos: Lit("P", (a,), pos), v, st.booleans()),
        st.builds(lambda a, b, pos: Lit("E", (a, b), pos), v, v, st.booleans()),
    )
    if team_atoms:
        lits = st.one_of(lits, st.builds(lambda a, b: Inc((a,), (b,)), v, v),
                         st.builds(lambda a, b: Exc((a,), (b,)), v, v))

    def grow(sub):
        return st.one_of(st.builds(And, sub, sub), st.builds(Or, sub, sub),
                         st.builds(Exists, v, sub), st.builds(Forall, v, sub))
    return st.recursive(lits, grow, max_leaves=5)


class TestParse:
    def test_conjunction_of_literal_and_inclusion(self):
        phi = parse_formula("P(x) & inc(y; x)")
        assert isinstance(phi, And)
        assert isinstance(phi.left, Lit) and isinstance(phi.right, Inc)

    def test_quantified_inclusion(self):
        phi = parse_formula("E x. (E(z,x) & inc(x; z))")
        assert isinstance(phi, Exists) and phi.var == "x"
        assert free_variables(phi) == {"z"}

    def test_arity_mismatch(self):
        with pytest.raises(ArityError):
            parse_formula("inc(x, y; z)")

    @pytest.mark.parametrize("text", ["E x. (P(x) &", "P(x) | | Q(x)", "A . P(x)", "exc(x;)"])
    def test_syntax_errors_have_positions(self, text):
        with pytest.raises(ParseError) as e:
            parse_formula(text)
        assert e.value.line == 1 and e.value.column >= 1

    def test_inconsistent_relation_arity(self):
        with pytest.raises(ArityError):
            parse_formula("P(x) & P(x, y)")

    @pytest.mark.parametrize("text", corpus_formulas())
    def test_corpus_roundtrip(self, text):
        try:
            phi = parse_formula(text)
        except Exception:
            phi = parse_so_formula(text)
            assert parse_so_formula(format_so_formula(phi)) == phi
            return
        assert parse_formula(format_formula(phi)) == phi

    @given(formulas())
    def test_print_parse_roundtrip(self, phi):
        # parsing renames bound variables that clash with free ones, once
        once = parse_formula(format_formula(phi))
        assert parse_formula(format_formula(once)) == once
        assert free_variables(once) == free_variables(phi)


class TestNNF:
    def test_de_morgan(self):
        assert to_nnf(parse_formula("~(P(x) & Q(y))")) == parse_formula("~P(x) | ~Q(y)")

    def test_double_negation(self):
        assert to_nnf(parse_formula("~~P(x)")) == parse_formula("P(x)")

    def test_negated_forall(self):
        assert to_nnf(parse_formula("~A x. P(x)")) == parse_formula("E x. ~P(x)")

    def test_negated_team_atom_rejected(self):
        with pytest.raises(Exception):
            to_nnf(Not(Inc(("x",), ("y",))))

    @given(formulas(team_atoms=False))
    def test_nnf_of_negation_is_classical_negation(self, phi):
        S = Structure(["a", "b"], {"P": [("a",)], "E": [("a", "b"), ("b", "b")]})
        neg = to_nnf(Not(phi))
        assert is_nnf(neg)
        for s in [{"x": a, "y": b, "z": c} for a in "ab" for b in "ab" for c in "ab"]:
            assert eval_classical(S, s, neg) != eval_classical(S, s, phi)


class TestArrow:
    S = Structure(["a", "b"], {"P": [("a",)]})

    def test_trivial_guard(self):
        body = parse_formula("inc(y; x)")
        phi = arrow(parse_formula("x = x"), body)
        for X in all_teams(self.S, ("x", "y")):
            assert eval_team(self.S, X, phi) == eval_team(self.S, X, body)

    def test_contradictory_guard(self):
        phi = arrow(parse_formula("x != x"), parse_formula("exc(x; x)"))
        assert all(eval_team(self.S, X, phi) for X in all_teams(self.S, ("x",)))

    def test_guard_restricts_rows(self):
        phi = arrow(parse_formula("P(x)"), parse_formula("inc(y; x)"))
        for X in all_teams(self.S, ("x", "y")):
            kept = Team(X.domain, [r for r in X.rows if r[0] == "a"])
            expected = {r[1] for r in kept.rows} <= {r[0] for r in kept.rows}
            assert eval_team(self.S, X, phi) == expected


class TestClassifiers:
    def test_guarded_selection_is_myopic(self):
        mu = parse_so_formula("A x. (X(x) -> EX Y/1. A z. (~Y(z) | X(z)) & Y(x))")
        assert check_myopic_so(mu)

    def test_negative_occurrence(self):
        v = check_myopic_so(parse_so_formula("A x. (X(x) -> ~X(x))"))
        assert not v and v.problems[0][0] == "positivity"

    def test_shape_violation(self):
        v = check_myopic_so(parse_so_formula("EX R/1. A x. R(x) & E y. X(y)"))
        assert not v and v.problems[0][0] == "shape"

    def test_evil_formulas_not_x_myopic(self, evil):
        _, phi, _, psi = evil
        assert not check_x_myopic(phi, ("x",))
        assert not check_x_myopic(psi, ("x",))

    def test_theta_target_is_x_myopic(self):
        assert check_x_myopic(template_theta_target("x"), ("x",))

    @pytest.mark.parametrize("text", ["P(x)", "exc(x; y)", "inc(x; y)", "E z. exc(x; z) & inc(z; y)"])
    def test_companion_output_is_x_myopic(self, text):
        phi = parse_formula(text)
        anchor = tuple(sorted(free_variables(phi)))
        assert check_x_myopic(team_myopic_companion(phi, anchor), anchor)

    def test_unguarded_inclusion_rejected(self):
        assert not check_x_myopic(parse_formula("inc(x; y)"), ("x",))


class TestOccurrences:
    def test_repeated_subformula_has_two_occurrences(self):
        occ = subformula_multiset(parse_formula("P(x) | P(x)"))
        lits = [o for o, f in occ if f == Lit("P", ("x",))]
        assert len(lits) == 2 and lits[0] != lits[1]

    def test_literal_is_singleton(self):
        assert len(subformula_multiset(parse_formula("P(x)"))) == 1

    def test_free_variables(self):
        assert free_variables(parse_formula("E y. E(x,y)")) == {"x"}

    @given(formulas())
    def test_occurrence_lookup(self, phi):
        for occ, f in subformula_multiset(phi):
            assert subformula_at(phi, occ) == f
