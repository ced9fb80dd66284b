"""Inclusion-exclusion games: data type, strategy checks, solvers and game classes.

A strategy is identified with its vertex set W; its edges are the edges of
the game induced by W.
"""
from __future__ import annotations

import itertools
import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property

from .errors import BudgetExceeded, DomainError, InvalidInput, ParseError


@dataclass(frozen=True)
class Game:
    v0: tuple
    v1: tuple
    edges: frozenset
    initial: frozenset = frozenset()
    targets: frozenset = frozenset()
    exclusion: frozenset = frozenset()
    payload: tuple = ()          # sorted (target vertex, element tuple) pairs

    def __post_init__(self):
        v0, v1 = tuple(dict.fromkeys(self.v0)), tuple(dict.fromkeys(self.v1))
        object.__setattr__(self, "v0", v0)
        object.__setattr__(self, "v1", v1)
        if set(v0) & set(v1):
            raise DomainError(f"vertices owned by both players: {sorted(set(v0) & set(v1))}")
        for name in ("edges", "exclusion"):
            object.__setattr__(self, name, frozenset(tuple(e) for e in getattr(self, name)))
        for name in ("initial", "targets"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        payload = dict(self.payload)
        object.__setattr__(self, "payload", tuple(sorted(payload.items(), key=lambda kv: str(kv[0]))))
        vs = set(v0) | set(v1)
        for u, w in self.edges | self.exclusion:
            if u not in vs or w not in vs:
                raise DomainError(f"edge ({u},{w}) leaves the vertex set")
        for v in self.initial | self.targets:
            if v not in vs:
                raise DomainError(f"vertex {v} is not in the game")
        for v in payload:
            if v not in self.targets:
                raise DomainError(f"payload attached to non-target {v}")

    @property
    def vertices(self) -> tuple:
        return self.v0 + self.v1

    def owner(self, v) -> int:
        return 0 if v in self._v0set else 1

    @cached_property
    def _v0set(self):
        return frozenset(self.v0)

    @cached_property
    def successors(self) -> dict:
        out = {v: [] for v in self.vertices}
        for u, w in sorted(self.edges, key=self._edge_key):
            out[u].append(w)
        return out

    @cached_property
    def predecessors(self) -> dict:
        out = {v: [] for v in self.vertices}
        for u, w in self.edges:
            out[w].append(u)
        return out

    @cached_property
    def conflicts(self) -> dict:
        """Symmetric closure of the exclusion edges."""
        out = {v: set() for v in self.vertices}
        for u, w in self.exclusion:
            out[u].add(w)
            out[w].add(u)
        return out

    @cached_property
    def index(self) -> dict:
        return {v: i for i, v in enumerate(self.vertices)}

    def _edge_key(self, e):
        idx = self.index
        return (idx[e[0]], idx[e[1]])

    @property
    def payload_map(self) -> dict:
        return dict(self.payload)

    def ordered(self, vs) -> list:
        idx = self.index
        return sorted(vs, key=idx.__getitem__)

    def __len__(self):
        return len(self.v0) + len(self.v1)


@dataclass(frozen=True)
class Strategy:
    vertices: frozenset

    def edges(self, game: Game) -> frozenset:
        return frozenset((u, w) for u, w in game.edges if u in self.vertices and w in self.vertices)

    def target(self, game: Game) -> frozenset:
        return self.vertices & game.targets

    def __iter__(self):
        return iter(self.vertices)

    def __len__(self):
        return len(self.vertices)


def _vertex_set(game, W):
    if isinstance(W, Strategy):
        W = W.vertices
    W = frozenset(W)
    bad = W - set(game.vertices)
    if bad:
        raise DomainError(f"vertices {sorted(map(str, bad))} are not in the game")
    return W


def inclusion_edges(game: Game) -> frozenset:
    return frozenset(e for e in game.edges if e[1] in game.targets)


@dataclass
class StrategyCheck:
    ok: bool
    condition: int | None = None     # 1..4 as in the definition of a winning strategy
    witness: tuple = ()
    message: str = ""

    def __bool__(self):
        return self.ok


def is_winning_strategy(game: Game, W) -> StrategyCheck:
    W = _vertex_set(game, W)
    succ = game.successors
    for v in game.ordered(W):
        if game.owner(v) == 0 and not any(w in W for w in succ[v]):
            return StrategyCheck(False, 1, (v,), f"player-0 vertex {v} has no successor in W")
    for v in game.ordered(W):
        if game.owner(v) == 1:
            for w in succ[v]:
                if w not in W:
                    return StrategyCheck(False, 2, (v, w), f"player-1 vertex {v} can move to {w} outside W")
    missing = game.initial - W
    if missing:
        v = game.ordered(missing)[0]
        return StrategyCheck(False, 3, (v,), f"initial vertex {v} is not in W")
    for u, w in sorted(game.exclusion, key=game._edge_key):
        if u in W and w in W:
            return StrategyCheck(False, 4, (u, w), f"W contains the conflicting pair ({u},{w})")
    return StrategyCheck(True)


def strategy_target(game: Game, W) -> frozenset:
    return _vertex_set(game, W) & game.targets


def _check_target_subset(game, X):
    X = frozenset(X)
    if not X <= game.targets:
        raise DomainError(f"{sorted(map(str, X - game.targets))} are not target vertices")
    return X


# -- exact search -------------------------------------------------------------

UND, IN, OUT = 0, 1, 2


class _Conflict(Exception):
    pass


class _Search:
    """Propagating backtracking search for a winning strategy with a fixed target."""

    def __init__(self, game: Game, max_nodes: int | None = None):
        self.game = game
        vs = game.vertices
        idx = game.index
        self.n = len(vs)
        self.vs = vs
        self.owner = bytes(game.owner(v) for v in vs)
        self.succ = [[idx[w] for w in game.successors[v]] for v in vs]
        self.pred = [[idx[u] for u in game.predecessors[v]] for v in vs]
        self.conf = [sorted(idx[w] for w in game.conflicts[v]) for v in vs]
        self.selfconf = [i in self.conf[i] for i in range(self.n)]
        self.max_nodes = max_nodes
        self.nodes = 0

    def solve(self, ins, outs):
        st = bytearray(self.n)
        queue = []
        try:
            for i in ins:
                self._set(st, i, IN, queue)
            for i in outs:
                self._set(st, i, OUT, queue)
            for i in range(self.n):
                if self.owner[i] == 0 and not self.succ[i]:
                    self._set(st, i, OUT, queue)
            self._propagate(st, queue)
        except _Conflict:
            return None
        res = self._search(st)
        if res is None:
            return None
        return frozenset(self.vs[i] for i in range(self.n) if res[i] == IN)

    def _set(self, st, i, val, queue):
        cur = st[i]
        if cur == val:
            return
        if cur != UND:
            raise _Conflict
        st[i] = val
        queue.append(i)

    def _propagate(self, st, queue):
        owner, succ, pred, conf = self.owner, self.succ, self.pred, self.conf
        while queue:
            i = queue.pop()
            if st[i] == IN:
                if self.selfconf[i]:
                    raise _Conflict
                for j in conf[i]:
                    self._set(st, j, OUT, queue)
                if owner[i] == 1:
                    for j in succ[i]:
                        self._set(st, j, IN, queue)
                else:
                    self._check0(st, i, queue)
            else:
                for p in pred[i]:
                    if owner[p] == 1:
                        self._set(st, p, OUT, queue)
                    elif st[p] == IN:
                        self._check0(st, p, queue)
                    elif st[p] == UND and all(st[j] == OUT for j in succ[p]):
                        self._set(st, p, OUT, queue)

    def _check0(self, st, i, queue):
        cands = [j for j in self.succ[i] if st[j] != OUT]
        if not cands:
            raise _Conflict
        if len(cands) == 1:
            self._set(st, cands[0], IN, queue)

    def _search(self, st):
        self.nodes += 1
        if self.max_nodes is not None and self.nodes > self.max_nodes:
            raise BudgetExceeded(f"strategy search exceeded {self.max_nodes} nodes")
        needy = None
        for i in range(self.n):
            if st[i] == IN and self.owner[i] == 0 and not any(st[j] == IN for j in self.succ[i]):
                needy = i
                break
        if needy is None:
            return st
        for j in self.succ[needy]:
            if st[j] != UND:
                continue
            trial = bytearray(st)
            try:
                q = []
                self._set(trial, j, IN, q)
                self._propagate(trial, q)
            except _Conflict:
                trial = None
            if trial is not None:
                res = self._search(trial)
                if res is not None:
                    return res
            # j is not part of any solution extending st
            try:
                q = []
                self._set(st, j, OUT, q)
                self._propagate(st, q)
            except _Conflict:
                return None
            return self._search(st)
        return None


def solve_membership(game: Game, X, max_nodes: int | None = None) -> Strategy | None:
    """A winning strategy with target exactly X, or None."""
    X = _check_target_subset(game, X)
    idx = game.index
    s = _Search(game, max_nodes)
    ins = [idx[v] for v in game.ordered(game.initial | X)]
    outs = [idx[v] for v in game.ordered(game.targets - X)]
    W = s.solve(ins, outs)
    return None if W is None else Strategy(W)


def solve_membership_bruteforce(game: Game, X, max_vertices: int = 22) -> Strategy | None:
    X = _check_target_subset(game, X)
    if len(game) > max_vertices:
        raise BudgetExceeded(f"brute force over {len(game)} vertices exceeds the cap of {max_vertices}")
    rest = [v for v in game.vertices if v not in game.targets]
    for r in range(len(rest) + 1):
        for extra in itertools.combinations(rest, r):
            W = X | frozenset(extra)
            if is_winning_strategy(game, W):
                return Strategy(W)
    return None


def greatest_fixpoint(game: Game, allowed) -> frozenset:
    """Largest W ⊆ allowed meeting the two move conditions."""
    W = set(allowed)
    succ, pred = game.successors, game.predecessors
    queue = deque(v for v in game.vertices if v in W and _bad(game, v, W))
    while queue:
        v = queue.popleft()
        if v not in W:
            continue
        W.discard(v)
        for p in pred[v]:
            if p in W and _bad(game, p, W):
                queue.append(p)
    return frozenset(W)


def _bad(game, v, W):
    succ = game.successors[v]
    if game.owner(v) == 0:
        return not any(w in W for w in succ)
    return any(w not in W for w in succ)


def solve_membership_polynomial(game: Game, X) -> Strategy | None:
    """Greatest-fixpoint solver; only valid without exclusion edges."""
    if game.exclusion:
        raise InvalidInput("the polynomial solver needs a game without exclusion edges")
    X = _check_target_subset(game, X)
    W = greatest_fixpoint(game, set(game.vertices) - (game.targets - X))
    if game.initial <= W and X <= W:
        return Strategy(W)
    return None


def enumerate_targets(game: Game, max_targets: int = 16, solver=None) -> set:
    """T(G): every X ⊆ T realised by some winning strategy."""
    T = game.ordered(game.targets)
    if len(T) > max_targets:
        raise BudgetExceeded(f"{len(T)} target vertices exceed the enumeration cap of {max_targets}")
    solver = solver or solve_membership
    out = set()
    for r in range(len(T) + 1):
        for X in itertools.combinations(T, r):
            if solver(game, frozenset(X)) is not None:
                out.add(frozenset(X))
    return out


# -- union games --------------------------------------------------------------

def reachable_component(game: Game, t) -> frozenset:
    if t not in game.targets:
        raise DomainError(f"{t} is not a target vertex")
    seen = {t}
    queue = deque([t])
    succ = game.successors
    while queue:
        v = queue.popleft()
        for w in succ[v]:
            if w in game.targets or w in seen:
                continue
            seen.add(w)
            queue.append(w)
    return frozenset(seen)


@dataclass
class GameCheck:
    ok: bool
    problems: list = field(default_factory=list)   # (clause, message)

    def __bool__(self):
        return self.ok

    def fail(self, clause, msg):
        self.ok = False
        self.problems.append((clause, msg))

    def summary(self):
        return "ok" if self.ok else "; ".join(f"{c}: {m}" for c, m in self.problems)


def validate_union_game(game: Game) -> GameCheck:
    chk = GameCheck(True)
    if game.initial:
        chk.fail("no-initial", f"I is not empty: {sorted(map(str, game.initial))}")
    owner_of = {}
    comps = {t: reachable_component(game, t) for t in game.ordered(game.targets)}
    for t, comp in comps.items():
        for v in game.ordered(comp):
            if v in owner_of:
                chk.fail("disjoint", f"components of {owner_of[v]} and {t} share {v}")
                break
            owner_of[v] = t
    for u, w in sorted(game.exclusion, key=game._edge_key):
        cu, cw = owner_of.get(u), owner_of.get(w)
        if cu is None or cu != cw:
            chk.fail("exclusion-inside", f"exclusion edge ({u},{w}) is not inside one component")
    return chk


def union_strategies(game: Game, strategies) -> Strategy:
    """Combine winning strategies componentwise; the target is the union of targets."""
    chk = validate_union_game(game)
    if not chk:
        raise InvalidInput(f"not a union game: {chk.summary()}")
    strategies = [Strategy(_vertex_set(game, s)) for s in strategies]
    for s in strategies:
        c = is_winning_strategy(game, s)
        if not c:
            raise InvalidInput(f"input strategy is not winning: {c.message}")
    W = set()
    for t in game.ordered(game.targets):
        for s in strategies:
            if t in s.vertices:
                W |= s.vertices & reachable_component(game, t)
                break
    return Strategy(frozenset(W))


def validate_exclusion_game(game: Game) -> GameCheck:
    chk = GameCheck(True)
    if game.initial:
        chk.fail("no-initial", "I is not empty")
    ein = inclusion_edges(game)
    if ein:
        u, w = sorted(ein, key=game._edge_key)[0]
        chk.fail("no-inclusion-edges", f"edge ({u},{w}) enters the target set")
    return chk


def validate_inclusion_game(game: Game) -> GameCheck:
    chk = GameCheck(True)
    if game.initial:
        chk.fail("no-initial", "I is not empty")
    if game.exclusion:
        chk.fail("no-exclusion-edges", "the game has exclusion edges")
    return chk


@dataclass(frozen=True)
class SafetyGame:
    v0: tuple
    v1: tuple
    edges: frozenset
    initial: frozenset

    def as_game(self) -> Game:
        """The inclusion game whose targets are the initial vertices."""
        return Game(self.v0, self.v1, self.edges, frozenset(), self.initial, frozenset())


def to_safety_game(game: Game) -> SafetyGame:
    chk = validate_inclusion_game(game)
    if not chk:
        raise InvalidInput(f"not an inclusion game: {chk.summary()}")
    return SafetyGame(game.v0, game.v1, game.edges, game.targets)


def from_safety_game(safety: SafetyGame) -> Game:
    return safety.as_game()


def i_traps(safety: SafetyGame) -> set:
    """Sets X ⊆ I with a strategy W obeying the move conditions and W ∩ I = X."""
    g = safety.as_game()
    out = set()
    for r in range(len(g.targets) + 1):
        for X in itertools.combinations(g.ordered(g.targets), r):
            W = greatest_fixpoint(g, set(g.vertices) - (g.targets - set(X)))
            if set(X) <= W:
                out.add(frozenset(X))
    return out


# -- text format --------------------------------------------------------------

_PLAIN = re.compile(r"^[A-Za-z0-9_+\-]+$")


def _fmt_vertex(v) -> str:
    v = str(v)
    if _PLAIN.match(v):
        return v
    return '"' + v.replace("\\", "\\\\").replace('"', '\\"') + '"'


def format_game(game: Game) -> str:
    fv = _fmt_vertex
    pairs = lambda es: " ".join(f"({fv(u)},{fv(w)})" for u, w in sorted(es, key=game._edge_key))
    lines = [
        "V0: " + " ".join(map(fv, game.v0)),
        "V1: " + " ".join(map(fv, game.v1)),
        "E: " + pairs(game.edges),
        "I: " + " ".join(map(fv, game.ordered(game.initial))),
        "T: " + " ".join(map(fv, game.ordered(game.targets))),
        "Eex: " + pairs(game.exclusion),
    ]
    if game.payload:
        lines.append("payload: " + " ".join(f"({fv(t)}:{','.join(tup)})" for t, tup in game.payload))
    return "\n".join(l.rstrip() for l in lines) + "\n"


_VTOK = r'(?:"(?:[^"\\]|\\.)*"|[A-Za-z0-9_+\-]+)'
_PAIR_RE = re.compile(r"\(\s*(" + _VTOK + r")\s*,\s*(" + _VTOK + r")\s*\)")
_PAYLOAD_RE = re.compile(r"\(\s*(" + _VTOK + r")\s*:\s*([^()]*)\)")
_VTOK_RE = re.compile(r"\s*(" + _VTOK + r")")


def _unquote(tok: str) -> str:
    if tok.startswith('"'):
        return re.sub(r"\\(.)", r"\1", tok[1:-1])
    return tok


def _vertex_list(body, lineno):
    out, pos = [], 0
    body = body.rstrip()
    while pos < len(body):
        m = _VTOK_RE.match(body, pos)
        if not m:
            raise ParseError(f"bad vertex name near {body[pos:pos + 10]!r}", lineno, pos + 1)
        out.append(_unquote(m.group(1)))
        pos = m.end()
    return out


def _pairs(body, lineno):
    out = []
    rest = _PAIR_RE.sub("", body)
    if rest.strip():
        raise ParseError(f"expected '(u,v)' pairs, found {rest.strip()!r}", lineno, 1)
    for m in _PAIR_RE.finditer(body):
        out.append((_unquote(m.group(1)), _unquote(m.group(2))))
    return out


def parse_game(text: str) -> Game:
    fields = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip() if '"' not in raw else raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, body = line.partition(":")
        key = key.strip()
        if not sep or key not in ("V0", "V1", "E", "I", "T", "Eex", "payload"):
            raise ParseError(f"unknown game field {key!r}", lineno, 1)
        if key in fields:
            raise ParseError(f"field {key} given twice", lineno, 1)
        if key in ("E", "Eex"):
            fields[key] = _pairs(body, lineno)
        elif key == "payload":
            fields[key] = [(_unquote(m.group(1)), tuple(p.strip() for p in m.group(2).split(",") if p.strip()))
                           for m in _PAYLOAD_RE.finditer(body)]
        else:
            fields[key] = _vertex_list(body, lineno)
    for key in ("V0", "V1"):
        if key not in fields:
            raise ParseError(f"missing field {key}", 1, 1)
    try:
        return Game(tuple(fields["V0"]), tuple(fields["V1"]), frozenset(fields.get("E", ())),
                    frozenset(fields.get("I", ())), frozenset(fields.get("T", ())),
                    frozenset(fields.get("Eex", ())), tuple(fields.get("payload", ())))
    except DomainError as e:
        raise ParseError(str(e)) from None
