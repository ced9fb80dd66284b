"""Seeded generators for random games and CNF formulas."""
from __future__ import annotations

import random

from .games import Game


def random_game(rng: random.Random, n: int, p_edge=0.25, n_targets=None, exclusion=True,
                initial=True, p_exclusion=0.08) -> Game:
    vs = [f"v{i}" for i in range(n)]
    owner = {v: rng.random() < 0.5 for v in vs}
    v0 = tuple(v for v in vs if owner[v])
    v1 = tuple(v for v in vs if not owner[v])
    edges = {(u, w) for u in vs for w in vs if rng.random() < p_edge}
    if n_targets is None:
        n_targets = rng.randint(0, min(4, n))
    targets = frozenset(rng.sample(vs, n_targets))
    init = frozenset(v for v in vs if initial and rng.random() < 0.12)
    exc = set()
    if exclusion:
        exc = {(u, w) for u in vs for w in vs if u < w and rng.random() < p_exclusion}
    return Game(v0, v1, frozenset(edges), init, targets, frozenset(exc))


def random_inclusion_game(rng: random.Random, n: int, p_edge=0.25, n_targets=None) -> Game:
    return random_game(rng, n, p_edge, n_targets, exclusion=False, initial=False)


def random_union_game(rng: random.Random, components=3, size=3, p_edge=0.35, p_exclusion=0.15,
                      p_inclusion=0.2) -> Game:
    """Disjoint components each hanging off one target; inclusion edges may cross."""
    v0, v1, edges, exc, targets = [], [], set(), set(), []
    comp_vertices = []
    for c in range(components):
        t = f"t{c}"
        inner = [f"c{c}_{i}" for i in range(rng.randint(1, size))]
        targets.append(t)
        for v in [t] + inner:
            (v0 if rng.random() < 0.5 else v1).append(v)
        vs = [t] + inner
        comp_vertices.append(vs)
        # a spanning path keeps every inner vertex reachable from t
        order = [t] + rng.sample(inner, len(inner))
        for a, b in zip(order, order[1:]):
            edges.add((a, b))
        for a in vs:
            for b in inner:
                if rng.random() < p_edge:
                    edges.add((a, b))
        for i, a in enumerate(vs):
            for b in vs[i:]:
                if rng.random() < p_exclusion:
                    exc.add((a, b))
    for vs in comp_vertices:
        for a in vs:
            for t in targets:
                if rng.random() < p_inclusion:
                    edges.add((a, t))
    return Game(tuple(v0), tuple(v1), frozenset(edges), frozenset(), frozenset(targets), frozenset(exc))


def random_cnf(rng: random.Random, n_vars: int, n_clauses: int, width=3) -> list[list[int]]:
    clauses = []
    for _ in range(n_clauses):
        k = min(width, n_vars)
        vars = rng.sample(range(1, n_vars + 1), k)
        clauses.append([v if rng.random() < 0.5 else -v for v in vars])
    return clauses
