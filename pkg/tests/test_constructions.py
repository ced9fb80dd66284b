import itertools

import pytest
from hypothesis import given, strategies as st

from inexgames.constructions import (GameCodecLayout, cnf_satisfiable, cnf_to_game, decode_game_from_team,
                                     encode_game_in_team, eval_ugame_atom, game_as_structure,
                                     is_complete_team, mc_game_exclusion, mc_game_myopic, mc_game_so,
                                     parse_dimacs, relation_to_targets, structure_as_game, target_relations,
                                     to_prenex_so)
from inexgames.core import Structure, Team, all_relations, all_teams
from inexgames.errors import DomainError, InvalidInput
from inexgames.fixtures import (STRUCTURES, exclusion_fixtures, myopic_fixtures, so_fixtures,
                                structures_for)
from inexgames.formulas import UGame, parse_formula, parse_so_formula
from inexgames.games import (Game, enumerate_targets, solve_membership, validate_exclusion_game,
                             validate_union_game)
from inexgames.semantics import eval_so, satisfying_relations, satisfying_teams
from inexgames.verify import truth_table_sat

AB = Structure(["a", "b"], {"P": [("a",)], "E": [("a", "b")]})
ABCD = Structure(["a", "b", "c", "d"], {})
# one component: t must move to p or q, which exclude each other
SMALL = Game(("t",), ("p", "q"), {("t", "p"), ("t", "q")}, targets={"t"}, exclusion={("p", "q")})
L1 = GameCodecLayout(1)


def rows_of(team):
    return {tuple(r) for r in team.rows}


class TestSOGame:
    def test_all(self):
        g = mc_game_so(AB, parse_so_formula("A x. X(x)"))
        assert target_relations(g) == {frozenset({("a",), ("b",)})}

    def test_free_witness(self):
        g = mc_game_so(AB, parse_so_formula("EX R/1. A x. (~X(x) | R(x))"))
        assert target_relations(g) == set(all_relations(AB, 1))

    @pytest.mark.parametrize("name,phi", so_fixtures())
    def test_targets_are_satisfying_relations(self, name, phi):
        S = structures_for(phi.free_arity)[0]
        assert target_relations(mc_game_so(S, phi)) == satisfying_relations(S, phi)

    def test_relation_to_targets(self):
        g = mc_game_so(AB, parse_so_formula("E x. X(x)"))
        assert len(relation_to_targets(g, {("a",)})) == 1

    @pytest.mark.parametrize("name,phi", myopic_fixtures())
    def test_prenex_form_is_equivalent(self, name, phi):
        S = structures_for(phi.free_arity)[0]
        pre = to_prenex_so(phi)
        assert pre.guard is None
        for r in all_relations(S, phi.free_arity):
            from inexgames.core import Relation
            R = Relation(phi.free_arity, r)
            assert eval_so(S, R, pre) == eval_so(S, R, phi)


class TestMyopicGame:
    @pytest.mark.parametrize("name,mu", myopic_fixtures())
    def test_targets(self, name, mu):
        for S in structures_for(mu.free_arity):
            g = mc_game_myopic(S, mu)
            assert validate_union_game(g)
            fam = target_relations(g)
            assert frozenset() in fam
            assert fam == satisfying_relations(S, mu)

    def test_rejects_non_myopic(self):
        with pytest.raises(InvalidInput):
            mc_game_myopic(AB, parse_so_formula("A x. X(x)"))


class TestExclusionGame:
    @pytest.mark.parametrize("name,phi,domain", exclusion_fixtures())
    def test_targets_are_satisfying_teams(self, name, phi, domain):
        g = mc_game_exclusion(AB, phi, domain)
        assert validate_exclusion_game(g)
        teams = {frozenset(rows_of(X)) for X in satisfying_teams(AB, phi, domain)}
        assert target_relations(g) == teams

    def test_first_order_downward(self):
        phi = parse_formula("E(x,y) | x = y")
        fam = target_relations(mc_game_exclusion(AB, phi, ("x", "y")))
        full = frozenset(r for r in itertools.product("ab", "ab") if r in {("a", "b"), ("a", "a"), ("b", "b")})
        assert fam == {frozenset(c) for n in range(4) for c in itertools.combinations(sorted(full), n)}

    @pytest.mark.parametrize("text", ["inc(x; y)", "dep(x; y)"])
    def test_rejects_inclusion(self, text):
        with pytest.raises(InvalidInput):
            mc_game_exclusion(AB, parse_formula(text), ("x", "y"))

    def test_free_variable_outside_domain(self):
        with pytest.raises(DomainError):
            mc_game_exclusion(AB, parse_formula("exc(x; y)"), ("x",))


class TestCNF:
    def test_contradiction(self):
        g = cnf_to_game([[1], [-1]])
        fam = enumerate_targets(g)
        assert frozenset({"c1"}) in fam and frozenset({"c1", "c2"}) not in fam

    def test_satisfiable(self):
        g = cnf_to_game([[1, -2], [2]])
        assert solve_membership(g, g.targets) is not None

    def test_empty(self):
        g = cnf_to_game([])
        assert g.targets == frozenset() and enumerate_targets(g) == {frozenset()}

    def test_dimacs(self):
        assert parse_dimacs("c hi\np cnf 2 2\n1 -2 0\n2 0\n") == [[1, -2], [2]]

    @given(st.lists(st.lists(st.integers(1, 4).flatmap(lambda v: st.sampled_from([v, -v])),
                             min_size=1, max_size=3), max_size=6))
    def test_full_target_iff_satisfiable(self, clauses):
        g = cnf_to_game(clauses)
        sat = truth_table_sat(clauses)
        assert cnf_satisfiable(clauses) == sat
        assert (solve_membership(g, g.targets) is not None) == sat


class TestGameStructure:
    def test_roundtrip(self):
        g = cnf_to_game([[1, -2], [2]])
        assert structure_as_game(game_as_structure(g)).conflicts == g.conflicts
        back = structure_as_game(game_as_structure(g))
        assert (set(back.v0), set(back.v1), back.edges, back.targets) == (set(g.v0), set(g.v1), g.edges, g.targets)

    def test_empty_game(self):
        with pytest.raises(DomainError):
            game_as_structure(Game((), (), ()))


class TestCodec:
    def test_roundtrip(self):
        X = encode_game_in_team(SMALL, L1, ABCD)
        assert is_complete_team(X, L1, ABCD)
        dec = decode_game_from_team(X, L1, ABCD)
        assert dec.defined and dec.failures == []
        assert dec.game.targets == {"a"} and set(dec.game.v1) == {"b", "c"}
        assert all(k == v for k, v in dec.congruence.items())

    def test_identity_congruence_is_diagonal(self):
        X = encode_game_in_team(SMALL, L1, ABCD)
        cols = X.columns(L1.cols("eps1", "eps2"))
        pairs = {tuple(r[c] for c in cols) for r in X.rows}
        assert pairs == {("a", "a"), ("b", "b"), ("c", "c")}

    def test_non_union_game(self):
        with pytest.raises(InvalidInput):
            encode_game_in_team(cnf_to_game([[1], [-1]]), L1, ABCD)

    def test_capacity(self):
        with pytest.raises(InvalidInput):
            encode_game_in_team(SMALL, L1, ("a", "b"))

    def test_missing_complement_row(self):
        X = encode_game_in_team(SMALL, L1, ABCD)
        c = X.column("uc_1")
        Y = Team(X.domain, [r for r in X.rows if r[c] != "d"])
        assert not is_complete_team(Y, L1, ABCD)

    def test_empty_team_incomplete(self):
        assert not is_complete_team(Team.empty(L1.variables), L1, ABCD)

    def test_partition_clause(self):
        X = encode_game_in_team(SMALL, L1, ABCD)
        c = X.column("v0_1")
        Y = Team(X.domain, list(X.rows) + [r[:c] + ("b",) + r[c + 1:] for r in sorted(X.rows)[:1]])
        dec = decode_game_from_team(Y, L1, ABCD)
        assert not dec and "vi" in [k for k, _ in dec.failures]

    def test_non_transitive_similarity(self):
        X = encode_game_in_team(SMALL, L1, ABCD)
        c1, c2 = X.column("eps1_1"), X.column("eps2_1")
        extra = [("a", "b"), ("b", "a"), ("b", "c"), ("c", "b")]
        rows = list(X.rows) + [r[:c1] + (p,) + r[c1 + 1:c2] + (q,) + r[c2 + 1:] for r, (p, q) in zip(sorted(X.rows), extra)]
        dec = decode_game_from_team(Team(X.domain, rows), L1, ABCD)
        assert not dec and any(k == "viii" for k, _ in dec.failures)


class TestAtom:
    atom = UGame(1, ("x",))

    def team(self, value):
        X = encode_game_in_team(SMALL, L1, ABCD)
        return Team(X.domain + ("x",), [r + (value,) for r in X.rows])

    def test_empty(self):
        assert eval_ugame_atom(ABCD, Team.empty(L1.variables + ("x",)), self.atom)

    def test_incomplete(self):
        t = self.team("a")
        assert not eval_ugame_atom(ABCD, Team(t.domain, sorted(t.rows)[:1]), self.atom)

    def test_realizable_target(self):
        assert eval_ugame_atom(ABCD, self.team("a"), self.atom)

    def test_non_target(self):
        assert not eval_ugame_atom(ABCD, self.team("b"), self.atom)

    def test_via_formula(self):
        from inexgames.semantics import eval_team
        assert eval_team(ABCD, self.team("a"), self.atom)
