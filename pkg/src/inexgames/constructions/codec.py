"""Encoding union games in teams, decoding them back, and the ugame atom.

A layout of width k fixes 18 variable tuples; the game lives in the
projections X(ū), X(v̄0), ..., and every relation comes with its complement
so that unions of encodings cannot describe a new game.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from ..core import Team
from ..errors import DomainError, InvalidInput
from ..formulas import UGAME_GROUPS, UGame, ugame_group
from ..games import Game, solve_membership, validate_union_game

# (relation, positive groups, complement groups); V0 and V1 have no complement
_PAIRED = (("V", ("u",), ("uc",)), ("E", ("v", "w"), ("vc", "wc")), ("T", ("t",), ("tc",)),
           ("Eex", ("vex", "wex"), ("vexc", "wexc")), ("sim", ("eps1", "eps2"), ("eps1c", "eps2c")))


@dataclass(frozen=True)
class GameCodecLayout:
    k: int
    groups: tuple = field(default=())     # (group name, variable tuple) pairs

    def __post_init__(self):
        if self.k < 1:
            raise InvalidInput("layout width must be positive")
        if not self.groups:
            object.__setattr__(self, "groups", tuple((g, ugame_group(g, self.k)) for g in UGAME_GROUPS))
        names = [v for _, vs in self.groups for v in vs]
        if len(set(names)) != len(names):
            raise InvalidInput("layout tuples must be pairwise disjoint")
        if any(len(vs) != self.k for _, vs in self.groups):
            raise InvalidInput(f"every layout tuple must have width {self.k}")
        if sorted(g for g, _ in self.groups) != sorted(UGAME_GROUPS):
            raise InvalidInput("layout must name exactly the 18 groups")

    def __getitem__(self, group) -> tuple:
        return dict(self.groups)[group]

    @property
    def variables(self) -> tuple:
        return tuple(v for _, vs in self.groups for v in vs)

    def cols(self, *groups) -> tuple:
        return tuple(v for g in groups for v in self[g])


def _universe(universe):
    return tuple(getattr(universe, "universe", universe))


def _vertex_codes(game: Game, k: int, universe, codes=None) -> dict:
    """vertex -> list of code tuples; several codes per vertex form one ~-class."""
    if codes is not None:
        out = {}
        for v, c in dict(codes).items():
            c = [tuple(c)] if c and isinstance(c[0], str) else [tuple(x) for x in c]
            out[v] = c
    else:
        space = itertools.product(universe, repeat=k)
        out = {v: [c] for v, c in zip(game.vertices, space)}
    flat = [c for cs in out.values() for c in cs]
    if set(out) != set(game.vertices) or any(not cs for cs in out.values()):
        raise InvalidInput(f"{len(game.vertices)} vertices do not fit into |A|^k = {len(universe) ** k} codes")
    if len(set(flat)) != len(flat):
        raise InvalidInput("vertex codes must be distinct")
    if any(len(c) != k or any(a not in universe for a in c) for c in flat):
        raise InvalidInput(f"codes must be {k}-tuples over the universe")
    return out


_ORDER = (("u",), ("v0",), ("v1",), ("v", "w"), ("t",), ("vex", "wex"), ("eps1", "eps2"),
          ("uc",), ("vc", "wc"), ("tc",), ("vexc", "wexc"), ("eps1c", "eps2c"))


def encode_game_in_team(game: Game, layout: GameCodecLayout, universe, codes=None, shift=0) -> Team:
    """A team whose decoding is ``game``.

    ``codes`` maps each vertex to one code or a list of codes (a ~-class);
    by default vertices take the first |V| k-tuples.  Each group column lists
    its relation, cycled up to the longest one; ``shift`` rotates the group
    columns against each other, giving different teams for the same game.
    """
    chk = validate_union_game(game)
    if not chk:
        raise InvalidInput(f"not a union game: {chk.summary()}")
    A = _universe(universe)
    k = layout.k
    codes = _vertex_codes(game, k, A, codes)
    cross = lambda us, ws: {a + b for u, w in itertools.product(us, ws) for a in codes[u] for b in codes[w]}
    Ak = list(itertools.product(A, repeat=k))
    Ak2 = [a + b for a in Ak for b in Ak]
    V = {c for cs in codes.values() for c in cs}
    E = {p for u, w in game.edges for p in cross([u], [w])}
    conflicts = {p for u, ws in game.conflicts.items() for w in ws for p in cross([u], [w])}
    sim = {p for v in game.vertices for p in cross([v], [v])}
    T = {c for v in game.targets for c in codes[v]}
    rel = lambda xs: sorted(xs, key=lambda t: tuple(A.index(a) for a in t))
    cols = {
        ("u",): rel(V), ("v0",): rel(c for v in game.v0 for c in codes[v]),
        ("v1",): rel(c for v in game.v1 for c in codes[v]),
        ("v", "w"): rel(E), ("t",): rel(T), ("vex", "wex"): rel(conflicts), ("eps1", "eps2"): rel(sim),
        ("uc",): [a for a in Ak if a not in V], ("vc", "wc"): [a for a in Ak2 if a not in E],
        ("tc",): [a for a in Ak if a not in T], ("vexc", "wexc"): [a for a in Ak2 if a not in conflicts],
        ("eps1c", "eps2c"): [a for a in Ak2 if a not in sim],
    }
    # a projection of a non-empty team is never empty, so games with an empty
    # relation (or a full one, leaving the complement empty) have no encoding
    empty = [",".join(g) for g, x in cols.items() if not x]
    if empty:
        raise InvalidInput(f"cannot encode empty relations for groups {empty}; "
                           "every coded relation and its complement must be non-empty")
    n = max(len(x) for x in cols.values())
    rows = []
    for i in range(n):
        row = []
        for j, g in enumerate(_ORDER):
            x = cols[g]
            row.extend(x[(i + j * shift) % len(x)])
        rows.append(tuple(row))
    return Team(layout.cols(*(v for g in _ORDER for v in g)), rows)


def _proj(team: Team, vars) -> frozenset:
    missing = set(vars) - set(team.domain)
    if missing:
        raise DomainError(f"layout variables {sorted(missing)} are not in the team domain")
    c = team.columns(vars)
    return frozenset(tuple(r[i] for i in c) for r in team.rows)


def _split(pairs, k):
    return frozenset((p[:k], p[k:]) for p in pairs)


def is_complete_team(team: Team, layout: GameCodecLayout, universe) -> bool:
    A = _universe(universe)
    k = layout.k
    full1 = frozenset(itertools.product(A, repeat=k))
    for _, pos, neg in _PAIRED:
        full = full1 if len(pos) == 1 else frozenset(itertools.product(A, repeat=2 * k))
        if _proj(team, layout.cols(*pos)) | _proj(team, layout.cols(*neg)) != full:
            return False
    V = _proj(team, layout.cols("u"))
    return V == _proj(team, layout.cols("v0")) | _proj(team, layout.cols("v1"))


@dataclass
class Decoding:
    game: Game | None
    congruence: dict | None            # element tuple -> representative tuple
    failures: list                     # (clause, message)

    @property
    def defined(self) -> bool:
        return self.game is not None

    def __bool__(self):
        return self.defined


def _name(t) -> str:
    return ",".join(t)


def decode_game_from_team(team: Team, layout: GameCodecLayout, universe) -> Decoding:
    """Check the nine consistency clauses; all are evaluated for diagnostics."""
    A = _universe(universe)
    k = layout.k
    Ak = frozenset(itertools.product(A, repeat=k))
    Ak2 = frozenset(a + b for a in Ak for b in Ak)
    P = lambda *g: _proj(team, layout.cols(*g))
    V, V0, V1, T = P("u"), P("v0"), P("v1"), P("t")
    E, Eex, sim = _split(P("v", "w"), k), _split(P("vex", "wex"), k), _split(P("eps1", "eps2"), k)
    fails = []
    if P("uc") != Ak - V:
        fails.append(("i", "X(u^c) is not A^k minus V"))
    if P("vc", "wc") != Ak2 - P("v", "w"):
        fails.append(("ii", "X(v^c, w^c) is not the complement of E"))
    if P("tc") != Ak - T:
        fails.append(("iii", "X(t^c) is not A^k minus T"))
    if P("vexc", "wexc") != Ak2 - P("vex", "wex"):
        fails.append(("iv", "X(vex^c, wex^c) is not the complement of Eex"))
    if P("eps1c", "eps2c") != Ak2 - P("eps1", "eps2"):
        fails.append(("v", "X(eps1^c, eps2^c) is not the complement of ~"))
    if V0 != V - V1:
        fails.append(("vi", "V0 is not V minus V1"))
    # (vii): every relation lives inside V
    pairs_ok = all(a in V and b in V for a, b in E | Eex | sim)
    if not (V0 <= V and V1 <= V and T <= V and pairs_ok):
        fails.append(("vii", "a relation leaves V"))
    cls = _congruence(V, V0, V1, T, E, Eex, sim, fails)
    game = None
    if cls is not None and not fails:
        rep = {a: min(c) for c in cls for a in c}
        q = lambda a: _name(rep[a])
        reps = sorted(set(rep.values()))
        qv0 = [_name(r) for r in reps if r in V0]
        qv1 = [_name(r) for r in reps if r in V1]
        game = Game(tuple(qv0), tuple(qv1), frozenset((q(a), q(b)) for a, b in E), frozenset(),
                    frozenset(q(a) for a in T), frozenset((q(a), q(b)) for a, b in Eex))
        chk = validate_union_game(game)
        if not chk:
            fails.append(("ix", f"quotient is not a union game: {chk.summary()}"))
            game = None
        return Decoding(game, rep if game is not None else None, fails)
    return Decoding(None, None, fails)


def _congruence(V, V0, V1, T, E, Eex, sim, fails):
    """Equivalence classes of ~ if it is a congruence (relations saturated), else None."""
    ok = True
    if any((a, a) not in sim for a in V):
        fails.append(("viii", "~ is not reflexive on V"))
        ok = False
    if any((b, a) not in sim for a, b in sim):
        fails.append(("viii", "~ is not symmetric"))
        ok = False
    nxt = {}
    for a, b in sim:
        nxt.setdefault(a, set()).add(b)
    if any(c not in nxt.get(a, ()) for a, b in sim for c in nxt.get(b, ())):
        fails.append(("viii", "~ is not transitive"))
        ok = False
    if not ok:
        return None
    cls = {}
    for a in V:
        cls.setdefault(frozenset(nxt[a]), None)
    cls = list(cls)
    for name, R in (("V0", V0), ("V1", V1), ("T", T)):
        if any((a in R) != (b in R) for a, b in sim):
            fails.append(("viii", f"~ does not respect {name}"))
            return None
    for name, R in (("E", E), ("Eex", Eex)):
        for a, b in R:
            for a2 in nxt.get(a, (a,)):
                for b2 in nxt.get(b, (b,)):
                    if (a2, b2) not in R:
                        fails.append(("viii", f"~ does not respect {name}"))
                        return None
    return cls


def ugame_layout(atom: UGame) -> GameCodecLayout:
    return GameCodecLayout(atom.k)


def eval_ugame_atom(structure, team: Team, atom: UGame) -> bool:
    """Semantics of ugame(k; x̄) on a team."""
    if not team.rows:
        return True
    layout = ugame_layout(atom)
    _proj(team, atom.target)
    if not is_complete_team(team, layout, structure):
        return False
    dec = decode_game_from_team(team, layout, structure)
    if not dec.defined:
        return True
    X = _proj(team, atom.target)
    if any(a not in dec.congruence for a in X):
        return False
    Q = frozenset(_name(dec.congruence[a]) for a in X)
    if not Q <= dec.game.targets:
        return False
    return solve_membership(dec.game, Q) is not None
