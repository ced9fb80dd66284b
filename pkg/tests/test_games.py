import itertools
import random

import pytest
from hypothesis import given, strategies as st

from inexgames.constructions import cnf_to_game
from inexgames.errors import DomainError, InvalidInput, ParseError
from inexgames.games import (Game, enumerate_targets, format_game, greatest_fixpoint, i_traps,
                             inclusion_edges, is_winning_strategy, parse_game, reachable_component,
                             solve_membership, solve_membership_bruteforce, solve_membership_polynomial,
                             strategy_target, to_safety_game, union_strategies, validate_exclusion_game,
                             validate_inclusion_game, validate_union_game)
from inexgames.random_games import random_game, random_inclusion_game, random_union_game

seeds = st.integers(0, 10 ** 6)


def subsets(xs):
    xs = sorted(xs)
    return [frozenset(c) for r in range(len(xs) + 1) for c in itertools.combinations(xs, r)]


def brute_targets(g):
    """Targets of every winning strategy, by enumerating all vertex sets."""
    return {frozenset(W) & g.targets for W in subsets(g.vertices) if is_winning_strategy(g, W)}


SIMPLE = Game(("v",), ("t",), {("v", "t")}, targets={"t"})


class TestBasics:
    def test_no_targets_no_inclusion_edges(self):
        assert inclusion_edges(Game(("a",), ("b",), {("a", "b")})) == frozenset()

    def test_inclusion_edges_only_into_targets(self):
        g = Game(("r", "p"), ("t",), {("r", "p"), ("p", "t"), ("t", "r")}, targets={"t"})
        assert inclusion_edges(g) == {("p", "t")}

    def test_unknown_vertex(self):
        with pytest.raises(DomainError):
            Game(("a",), (), {("a", "b")})

    def test_shared_owner(self):
        with pytest.raises(DomainError):
            Game(("a",), ("a",), ())

    def test_format_roundtrip(self):
        g = cnf_to_game([[1, -2], [2]])
        assert parse_game(format_game(g)) == g

    def test_parse_error(self):
        with pytest.raises(ParseError):
            parse_game("V0: a\nE: (a,\n")


class TestStrategies:
    def test_trivial(self):
        assert is_winning_strategy(Game((), (), ()), set())

    def test_terminal_v0(self):
        chk = is_winning_strategy(Game(("v",), (), ()), {"v"})
        assert not chk and chk.condition == 1

    def test_exclusion_pair(self):
        g = Game((), ("a", "b"), (), exclusion={("a", "b")})
        chk = is_winning_strategy(g, {"a", "b"})
        assert not chk and chk.condition == 4

    def test_initial_missing(self):
        g = Game((), ("a",), (), initial={"a"})
        assert not is_winning_strategy(g, set())

    def test_target(self):
        assert strategy_target(SIMPLE, {"v", "t"}) == {"t"}


class TestCNF:
    g = cnf_to_game([[1], [-1]])

    def test_both_clauses_unreachable(self):
        assert solve_membership(self.g, {"c1", "c2"}) is None
        assert solve_membership_bruteforce(self.g, {"c1", "c2"}) is None

    def test_one_clause(self):
        W = solve_membership(self.g, {"c1"})
        assert W is not None and set(W) == {"c1", "x1"}

    def test_empty_target(self):
        assert set(solve_membership(self.g, set())) == set()


class TestPolynomial:
    def test_single_edge(self):
        assert solve_membership_polynomial(SIMPLE, {"t"}) is not None
        assert set(solve_membership_polynomial(SIMPLE, set())) == set()
        assert enumerate_targets(SIMPLE) == {frozenset(), frozenset({"t"})}

    def test_dead_successor(self):
        g = Game(("v", "d"), ("t",), {("v", "t"), ("t", "d")}, targets={"t"})
        assert solve_membership_polynomial(g, {"t"}) is None
        assert "t" not in greatest_fixpoint(g, set(g.vertices))

    def test_pruned_initial(self):
        g = Game(("d",), (), (), initial={"d"})
        assert solve_membership_polynomial(g, set()) is None

    def test_exclusion_rejected(self):
        with pytest.raises(InvalidInput):
            solve_membership_polynomial(Game((), ("a", "b"), (), exclusion={("a", "b")}), set())


class TestOracles:
    @given(seeds, st.integers(1, 8))
    def test_search_matches_bruteforce(self, seed, n):
        rng = random.Random(seed)
        g = random_game(rng, n)
        for X in subsets(g.targets):
            W = solve_membership(g, X)
            B = solve_membership_bruteforce(g, X)
            assert (W is None) == (B is None)
            if W is not None:
                assert is_winning_strategy(g, W) and strategy_target(g, W) == X

    @given(seeds, st.integers(1, 12))
    def test_polynomial_matches_search(self, seed, n):
        g = random_inclusion_game(random.Random(seed), n)
        for X in subsets(g.targets):
            assert (solve_membership_polynomial(g, X) is None) == (solve_membership(g, X) is None)

    @given(seeds, st.integers(1, 7))
    def test_enumerate_targets(self, seed, n):
        g = random_game(random.Random(seed), n)
        assert enumerate_targets(g) == brute_targets(g)

    @given(seeds, st.integers(1, 8))
    def test_induced_edges_are_harmless(self, seed, n):
        g = random_game(random.Random(seed), n)
        W = solve_membership(g, frozenset())
        if W is not None:
            # a strategy is a vertex set; any edge choice inside W is allowed
            assert is_winning_strategy(g, set(W))

    @given(seeds, st.integers(1, 8))
    def test_exclusion_targets_downward_closed(self, seed, n):
        g = random_game(random.Random(seed), n, initial=False)
        g = Game(g.v0, g.v1, {e for e in g.edges if e[1] not in g.targets}, targets=g.targets,
                 exclusion=g.exclusion)
        assert validate_exclusion_game(g)
        fam = enumerate_targets(g)
        assert all(Y in fam for X in fam for Y in subsets(X))

    @given(seeds, st.integers(1, 8))
    def test_i_traps_are_targets(self, seed, n):
        g = random_inclusion_game(random.Random(seed), n)
        assert validate_inclusion_game(g)
        assert i_traps(to_safety_game(g)) == enumerate_targets(g)


class TestUnionGames:
    def test_cnf_game_is_not_union(self):
        assert not validate_union_game(cnf_to_game([[1], [-1]]))

    def test_reachable_component(self):
        g = Game(("t", "a"), ("u",), {("t", "a"), ("a", "u"), ("u", "t")}, targets={"t", "u"})
        assert reachable_component(g, "t") == {"t", "a"}

    @given(seeds)
    def test_union_of_strategies(self, seed):
        rng = random.Random(seed)
        g = random_union_game(rng)
        assert validate_union_game(g)
        fam = list(enumerate_targets(g))
        for X, Y in itertools.combinations(fam, 2):
            S = union_strategies(g, [solve_membership(g, X), solve_membership(g, Y)])
            assert is_winning_strategy(g, S)
            assert strategy_target(g, S) == X | Y
