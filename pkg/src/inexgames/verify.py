"""Theorem replays: each suite compares a construction with an independent oracle."""
from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field

from .constructions import (GameCodecLayout, cnf_to_game, decode_game_from_team,
                            encode_game_in_team, eval_ugame_atom, game_as_structure,
                            is_complete_team, mc_game_exclusion, mc_game_myopic,
                            mc_game_so, target_relations)
from .core import Structure, Team, all_teams
from .errors import ParseError
from .fixtures import (OPTIMALITY_MU, STRUCTURES, corpus_formulas, exclusion_fixtures,
                       load_evil, myopic_fixtures, so_fixtures, structures_for,
                       team_fixtures)
from .formulas import (UGame, check_myopic_so, check_x_myopic, format_formula,
                       parse_formula, parse_so_formula)
from .games import (enumerate_targets, from_safety_game, i_traps, is_winning_strategy,
                    solve_membership, solve_membership_bruteforce,
                    solve_membership_polynomial, strategy_target, to_safety_game,
                    union_strategies, validate_exclusion_game, validate_union_game)
from .random_games import random_cnf, random_game, random_inclusion_game, random_union_game
from .semantics import (TeamEvaluator, check_union_closed_empirical, eval_classical,
                        eval_team, satisfying_relations, satisfying_relations_bruteforce,
                        satisfying_teams, union_closure)
from .transforms import (myopic_companion_so, team_myopic_companion, template_phi_win,
                         template_psi_target, template_psi_win, template_theta_target)


@dataclass
class SuiteResult:
    name: str
    criterion: int
    theorem: str
    oracle: str
    checked: int = 0
    failures: list = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures and self.checked > 0

    def check(self, ok, what):
        self.checked += 1
        if not ok:
            self.failures.append(str(what))

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"[{status}] criterion {self.criterion:2d} {self.name}: {self.theorem} "
                f"vs {self.oracle} ({self.checked} checks, {self.elapsed:.2f}s)")

    def as_dict(self):
        return {"name": self.name, "criterion": self.criterion, "theorem": self.theorem,
                "oracle": self.oracle, "passed": self.passed, "checked": self.checked,
                "failures": self.failures[:20], "elapsed": round(self.elapsed, 3)}


def _small(structures, max_universe):
    return [A for A in structures if len(A.universe) <= max_universe]


def _rows(team: Team, vars) -> frozenset:
    c = team.columns(vars)
    return frozenset(tuple(r[i] for i in c) for r in team.rows)


def truth_table_sat(clauses) -> bool:
    """Exhaustive satisfiability check, independent of any solver."""
    vs = sorted({abs(l) for c in clauses for l in c})
    for bits in itertools.product((False, True), repeat=len(vs)):
        val = dict(zip(vs, bits))
        if all(any(val[abs(l)] == (l > 0) for l in c) for c in clauses):
            return True
    return False


def suite_so_game(rng, max_universe):
    r = SuiteResult("so-game", 1, "targets of the second-order game are the satisfying relations",
                    "satisfying_relations (grounded SAT) and relation enumeration")
    for name, phi in so_fixtures():
        for A in _small(structures_for(phi.free_arity), max_universe):
            got = target_relations(mc_game_so(A, phi))
            r.check(got == satisfying_relations(A, phi), f"{name} on {A}")
            if len(A.universe) <= 2:
                r.check(got == satisfying_relations_bruteforce(A, phi), f"{name} on {A} (enumeration)")
    return r


def suite_np_reduction(rng, max_universe):
    r = SuiteResult("np-reduction", 2, "full target is winnable iff the CNF is satisfiable",
                    "truth-table satisfiability")
    for _ in range(50):
        n = rng.randint(1, 8)
        cnf = random_cnf(rng, n, rng.randint(1, 12))
        g = cnf_to_game(cnf)
        won = solve_membership(g, g.targets) is not None
        r.check(won == truth_table_sat(cnf), cnf)
    return r


def suite_ptime(rng, max_universe):
    r = SuiteResult("ptime", 3, "fixpoint solver on games without exclusion edges",
                    "brute-force strategy enumeration")
    for _ in range(200):
        g = random_game(rng, rng.randint(1, 12), p_edge=rng.uniform(0.1, 0.4), exclusion=False)
        X = frozenset(v for v in g.targets if rng.random() < 0.5)
        a = solve_membership_polynomial(g, X) is not None
        b = solve_membership_bruteforce(g, X) is not None
        r.check(a == b, (g, X))
    return r


def suite_companion_so(rng, max_universe):
    r = SuiteResult("companion-so", 4, "the myopic companion defines the union closure",
                    "union closure of the enumerated family")
    for name, phi in so_fixtures()[:14]:
        mu = myopic_companion_so(phi)
        r.check(check_myopic_so(mu).ok, f"{name}: companion not myopic")
        for A in _small(structures_for(phi.free_arity), max_universe):
            fam = satisfying_relations_bruteforce(A, phi) if len(A.universe) <= 2 else satisfying_relations(A, phi)
            r.check(satisfying_relations(A, mu) == union_closure(fam), f"{name} on {A}")
    return r


def suite_union_game(rng, max_universe):
    r = SuiteResult("union-game", 5, "targets of the myopic union game are the satisfying relations",
                    "satisfying_relations")
    fixtures = myopic_fixtures() + [(n + "*", myopic_companion_so(p)) for n, p in so_fixtures()[:6]]
    for name, mu in fixtures:
        for A in _small(structures_for(mu.free_arity), max_universe):
            g = mc_game_myopic(A, mu)
            r.check(bool(validate_union_game(g)), f"{name}: not a union game")
            fam = target_relations(g)
            r.check(fam == satisfying_relations(A, mu), f"{name} on {A}")
            r.check(frozenset() in fam, f"{name}: empty set missing")
    return r


def suite_strategy_union(rng, max_universe):
    r = SuiteResult("strategy-union", 6, "union of winning strategies in union games",
                    "is_winning_strategy on the combined strategy")
    for _ in range(100):
        g = random_union_game(rng, components=rng.randint(1, 3), size=3)
        strats = [solve_membership(g, X) for X in enumerate_targets(g)]
        strats = [s for s in strats if s is not None]
        pairs = list(itertools.combinations(strats, 2))
        rng.shuffle(pairs)
        for s1, s2 in pairs[:6] or [(strats[0], strats[0])]:
            u = union_strategies(g, [s1, s2])
            ok = bool(is_winning_strategy(g, u.vertices))
            ok = ok and u.target(g) == s1.target(g) | s2.target(g)
            r.check(ok, g)
    return r


def suite_evil(rng, max_universe):
    r = SuiteResult("evil", 7, "the two disjunction counterexamples",
                    "satisfaction values stated for the example")
    A, phi, B, psi = load_evil()
    for S, f in ((A, phi), (B, psi)):
        teams = [Team(("x",), [(a,), (b,)]) for a, b in (("a", "b"), ("b", "c"))]
        for method in ("sat", "direct"):
            vals = [eval_team(S, t, f, method=method) for t in teams + [teams[0] | teams[1]]]
            r.check(vals == [True, True, False], f"{f}: {vals} ({method})")
    return r


def suite_optimality(rng, max_universe):
    r = SuiteResult("optimality", 8, "the fork example accepts exactly the successor-closed teams",
                    "the stated characterisation")
    G = STRUCTURES["fork3"]
    mu = parse_formula(OPTIMALITY_MU)
    for t in all_teams(G, ("x",)):
        vals = {v for (v,) in t.rows}
        want = "a" not in vals or {"b", "c"} <= vals
        for method in ("sat", "direct"):
            r.check(eval_team(G, t, mu, method=method) == want, f"{sorted(vals)} ({method})")
    return r


def suite_x_myopic(rng, max_universe):
    r = SuiteResult("x-myopic", 9, "team companions are myopic and define the union closure",
                    "union closure of the enumerated team family")
    structs = _small([STRUCTURES["edge2"], STRUCTURES["fork3"]], max_universe)
    for name, phi, anchor in team_fixtures():
        out = team_myopic_companion(phi, anchor)
        r.check(check_x_myopic(out, anchor).ok, f"{name}: companion not x-myopic")
        for A in structs:
            if len(A.universe) ** len(anchor) > 9:
                continue
            fam = satisfying_teams(A, out, anchor)
            r.check(fam == union_closure(satisfying_teams(A, phi, anchor)), f"{name} on {A}")
            r.check(bool(check_union_closed_empirical(A, out, anchor)), f"{name} on {A}: not closed")
            if check_x_myopic(phi, anchor).ok:
                r.check(bool(check_union_closed_empirical(A, phi, anchor)), f"{name}: myopic input not closed")
    return r


def _vertex_teams(game, var):
    vs = game.vertices
    for n in range(1, len(vs) + 1):
        for Y in itertools.combinations(vs, n):
            yield frozenset(Y), Team((var,), [(v,) for v in Y])


def suite_templates(rng, max_universe):
    r = SuiteResult("templates", 10, "winning strategies and targets defined by team formulas",
                    "is_winning_strategy and enumerate_targets")
    win, tgt, theta = template_psi_win("y"), template_psi_target("x"), template_theta_target("x")
    for _ in range(50):
        g = random_game(rng, rng.randint(1, 8), initial=rng.random() < 0.5)
        S = game_as_structure(g)
        T = enumerate_targets(g)
        ew, et = TeamEvaluator(S, win), TeamEvaluator(S, tgt)
        for Y, team in _vertex_teams(g, "y"):
            r.check(ew(team) == bool(is_winning_strategy(g, Y)), ("win", g, Y))
            r.check(et(Team(("x",), team.rows)) == (Y in T), ("target", g, Y))
        ew.close(), et.close()
        u = random_union_game(rng, components=rng.randint(1, 3), size=2)
        if len(u.vertices) > 8:
            continue
        S = game_as_structure(u)
        T = enumerate_targets(u)
        eth = TeamEvaluator(S, theta)
        for Y, team in _vertex_teams(u, "x"):
            r.check(eth(team) == (Y in T), ("theta", u, Y))
        eth.close()
    return r


def suite_phi_win(rng, max_universe):
    r = SuiteResult("phi-win", 11, "first-order winning condition", "is_winning_strategy")
    phi = template_phi_win()
    for _ in range(10):
        g = random_game(rng, rng.randint(1, 8))
        S = game_as_structure(g)
        for n in range(len(g.vertices) + 1):
            for W in itertools.combinations(g.vertices, n):
                val = eval_classical(S, {}, phi, {"W": frozenset((v,) for v in W)})
                r.check(val == bool(is_winning_strategy(g, frozenset(W))), (g, W))
    return r


def _codec_games(rng, count):
    """Random union games whose coded relations and complements are all non-empty."""
    out = []
    while len(out) < count:
        g = random_union_game(rng, components=rng.randint(1, 2), size=2, p_exclusion=0.3)
        if g.v0 and g.v1 and g.exclusion and g.edges and len(g.vertices) <= 6:
            out.append(g)
    return out


def suite_ugame_atom(rng, max_universe):
    r = SuiteResult("ugame-atom", 12, "codec round trip, complete subteams and union closure of the atom",
                    "the encoded game, decoding and solve_membership")
    A = Structure(["a", "b", "c"], {})
    L = GameCodecLayout(2)
    atom = UGame(2, ("x_1", "x_2"))
    for g in _codec_games(rng, 6):
        codes = dict(zip(g.vertices, itertools.product(A.universe, repeat=2)))
        name = {v: ",".join(c) for v, c in codes.items()}
        X = encode_game_in_team(g, L, A)
        r.check(is_complete_team(X, L, A), "encoding incomplete")
        dec = decode_game_from_team(X, L, A)
        renamed = None
        if dec.defined:
            from .games import Game
            renamed = Game(tuple(name[v] for v in g.v0), tuple(name[v] for v in g.v1),
                           {(name[u], name[w]) for u, w in g.edges}, (), {name[t] for t in g.targets},
                           {(name[u], name[w]) for u, ws in g.conflicts.items() for w in ws})
        r.check(dec.defined and dec.game == renamed, f"round trip failed: {dec.failures}")
        # a vertex with two codes: the quotient by ~ gives the same game back
        spare = [c for c in itertools.product(A.universe, repeat=2) if c not in codes.values()]
        v = g.vertices[0]
        multi = {u: [c] for u, c in codes.items()}
        multi[v] = [codes[v], spare[-1]]
        dm = decode_game_from_team(encode_game_in_team(g, L, A, codes=multi), L, A)
        r.check(dm.defined and dm.game == renamed and dm.congruence[spare[-1]] == codes[v],
                f"two-code vertex: {dm.failures}")
        # complete subteam of a union of two encodings of the same game
        Y = X | encode_game_in_team(g, L, A, shift=1)
        dy = decode_game_from_team(Y, L, A)
        r.check(dy.defined and dy.game == dec.game and dy.congruence == dec.congruence, "subteam lemma")
        # satisfying complete teams, one per realizable non-empty target set, and their union
        sats = []
        for Q in enumerate_targets(g):
            if not Q:
                continue
            vals = [codes[v] for v in g.ordered(Q)]
            t = Team(X.domain + atom.target, [row + vals[i % len(vals)] for i, row in enumerate(sorted(X.rows))])
            ok = eval_ugame_atom(A, t, atom)
            r.check(ok, f"target {sorted(Q)} rejected")
            sats.append(t)
            bad = [c for c in itertools.product(A.universe, repeat=2) if c not in codes.values()]
            if bad:
                tb = Team(t.domain, [row[:-2] + bad[0] for row in t.rows])
                r.check(not eval_ugame_atom(A, tb, atom), "non-vertex target accepted")
        for s1, s2 in itertools.combinations(sats, 2):
            r.check(eval_ugame_atom(A, s1 | s2, atom), "union of satisfying teams rejected")
        other = _codec_games(rng, 1)[0]
        t2 = Team(X.domain + atom.target, [row + ("c", "c") for row in encode_game_in_team(other, L, A).rows])
        if sats and eval_ugame_atom(A, t2, atom):
            r.check(eval_ugame_atom(A, sats[0] | t2, atom), "union across games rejected")
    r.check(eval_ugame_atom(A, Team(L.variables + atom.target, ()), atom), "empty team")
    return r


def suite_exclusion(rng, max_universe):
    r = SuiteResult("exclusion", 13, "exclusion games and the inclusion/safety correspondence",
                    "satisfying_teams and I-traps")
    for name, phi, dom in exclusion_fixtures():
        for A in _small([STRUCTURES["edge2"], STRUCTURES["path3"]], max_universe):
            g = mc_game_exclusion(A, phi, dom)
            r.check(bool(validate_exclusion_game(g)), f"{name}: not an exclusion game")
            pm = g.payload_map
            fam = {frozenset(pm[v] for v in X) for X in enumerate_targets(g)}
            want = {_rows(t, dom) for t in satisfying_teams(A, phi, dom)}
            r.check(fam == want, f"{name} on {A}")
            down = all(frozenset(s) in fam for X in fam for n in range(len(X))
                       for s in itertools.combinations(X, n))
            r.check(down, f"{name}: not downward closed")
    for _ in range(10):
        g = random_inclusion_game(rng, rng.randint(2, 9))
        s = to_safety_game(g)
        fam = enumerate_targets(g)
        r.check(i_traps(s) == fam, "I-traps differ from targets")
        r.check(enumerate_targets(from_safety_game(s)) == fam, "round trip changed targets")
    return r


BAD_FORMULAS = ["E x. (P(x) &", "inc(x, y; z)", "P(x) | | Q(x)", "A . P(x)", "exc(x;)"]


def suite_parser(rng, max_universe):
    r = SuiteResult("parser", 14, "printing and reparsing is the identity; bad input exits with 2",
                    "structural equality and the CLI exit code")
    for text in corpus_formulas():
        so = "EX" in text or "X(" in text
        parse = (lambda s: parse_so_formula(s, allow_reserved=True)) if so else (lambda s: parse_formula(s, allow_reserved=True))
        f = parse(text)
        r.check(parse(str(f)) == f, text)
    import io
    import contextlib
    import tempfile
    from .cli import run_cli
    for bad in BAD_FORMULAS:
        try:
            parse_formula(bad)
            r.check(False, f"accepted {bad!r}")
            continue
        except ParseError as e:
            r.check(e.line is not None and e.column is not None, f"no position for {bad!r}")
        with tempfile.TemporaryDirectory() as d:
            import pathlib
            p = pathlib.Path(d) / "bad.frm"
            p.write_text(bad)
            sp = pathlib.Path(d) / "a.str"
            sp.write_text("universe: a b\nP/1: a\n")
            tp = pathlib.Path(d) / "x.team"
            tp.write_text("vars: x\na\n")
            err = io.StringIO()
            with contextlib.redirect_stderr(err), contextlib.redirect_stdout(io.StringIO()):
                code = run_cli(["eval", "--structure", str(sp), "--team", str(tp), "--formula", str(p)])
            r.check(code == 2 and "line" in err.getvalue(), f"cli on {bad!r}: exit {code}, {err.getvalue()!r}")
    return r


SUITES = {
    "so-game": suite_so_game, "np-reduction": suite_np_reduction, "ptime": suite_ptime,
    "companion-so": suite_companion_so, "union-game": suite_union_game,
    "strategy-union": suite_strategy_union, "evil": suite_evil, "optimality": suite_optimality,
    "x-myopic": suite_x_myopic, "templates": suite_templates, "phi-win": suite_phi_win,
    "ugame-atom": suite_ugame_atom, "exclusion": suite_exclusion, "parser": suite_parser,
}


def run_suite(name, seed=0, max_universe=3) -> SuiteResult:
    try:
        fn = SUITES[name]
    except KeyError:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)} or all") from None
    t0 = time.perf_counter()
    r = fn(random.Random(f"{seed}:{name}"), max_universe)
    r.elapsed = time.perf_counter() - t0
    return r


def run_all(seed=0, max_universe=3) -> list[SuiteResult]:
    return [run_suite(n, seed, max_universe) for n in SUITES]
