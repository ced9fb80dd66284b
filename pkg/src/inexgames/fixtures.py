"""Small structures and formulas shared by the verification suites, tests and scripts."""
from __future__ import annotations

from pathlib import Path

from .core import Structure, parse_structure
from .formulas import parse_formula, parse_so_formula

DATA = Path(__file__).resolve().parents[2] / "data"

# universes stay at size ≤ 3 so every family can be enumerated
STRUCTURES = {
    "edge2": Structure(["a", "b"], {"E": [("a", "b")], "P": [("a",)]}),
    "path3": Structure(["a", "b", "c"], {"E": [("a", "b"), ("b", "c")], "P": [("a",), ("b",)]}),
    "cycle3": Structure(["a", "b", "c"], {"E": [("a", "b"), ("b", "c"), ("c", "a")], "P": [("c",)]}),
    "fork3": Structure(["a", "b", "c"], {"E": [("a", "b"), ("a", "c")], "P": [("a",)]}),
}

# (name, free relation arity, formula text); X is the free relation
SO_FORMULAS = [
    ("all", "A x. X(x)"),
    ("nonempty", "E x. X(x)"),
    ("inside-P", "A x. (~X(x) | P(x))"),
    ("singleton", "E x. X(x) & A y. (~X(y) | x = y)"),
    ("at-most-one", "A x. A y. (~X(x) | ~X(y) | x = y)"),
    ("succ-closed", "A x. A y. (~X(x) | ~E(x,y) | X(y))"),
    ("via-R", "EX R/1. A x. (~X(x) | R(x)) & A x. (~R(x) | P(x))"),
    ("co-witness", "EX R/1. E x. R(x) & A y. (~R(y) | ~X(y))"),
    ("functional-R", "EX R/2. A x. (~X(x) | E y. R(x,y)) & A x. A y. A z. (~R(x,y) | ~R(x,z) | y = z)"),
    ("two-elements", "E x. E y. X(x) & X(y) & x != y"),
    ("covers-P", "A x. (X(x) | ~P(x))"),
    ("copy-R", "EX R/1. A x. ((R(x) & X(x)) | (~R(x) & ~X(x))) & E y. R(y)"),
    ("edges", "A x. A y. (~X(x,y) | E(x,y))"),
    ("symmetric", "A x. A y. (~X(x,y) | X(y,x))"),
    ("total", "A x. E y. X(x,y)"),
    ("bipartite", "EX R/1. A x. A y. (~X(x,y) | R(x)) & A x. A y. (~X(x,y) | ~R(y))"),
    ("transitive", "A x. A y. A z. (~X(x,y) | ~X(y,z) | X(x,z))"),
    ("outside-P", "E x. (X(x) & ~P(x))"),
    ("P-not-all", "A x. (~P(x) | X(x)) & E y. ~X(y)"),
    ("coloured", "A x. (X(x) -> EX R/1. R(x) & A y. (E(x,y) -> ~R(y) | X(y)))"),
    ("has-succ", "A x. (X(x) -> E y. E(x,y) & X(y))"),
    ("R-offdiag", "EX R/2. A x. A y. (~R(x,y) | X(x)) & E x. E y. R(x,y) & x != y"),
]

# myopic formulas in the guarded form
MYOPIC_FORMULAS = [
    ("myo-P", "A x. (X(x) -> P(x))"),
    ("myo-succ", "A x. (X(x) -> E y. E(x,y) & X(y))"),
    ("myo-colour", "A x. (X(x) -> EX R/1. R(x) & A y. (E(x,y) -> ~R(y) | X(y)))"),
    ("myo-closed", "A x. (X(x) -> A y. (E(x,y) -> X(y)))"),
    ("myo-other", "A x. (X(x) -> E y. X(y) & x != y)"),
    ("myo-loopR", "A x. (X(x) -> EX R/2. R(x,x) & A y. A z. (~R(y,z) | X(z)))"),
    ("myo-sym", "A x. A y. (X(x,y) -> E(x,y) | X(y,x))"),
    ("myo-chain", "A x. A y. (X(x,y) -> E z. X(y,z))"),
    ("myo-notP", "A x. (X(x) -> EX R/1. R(x) & A y. (~R(y) | ~P(y)))"),
]

# (name, formula text, anchor) in FO(⊆,|)
TEAM_FORMULAS = [
    ("P", "P(x)", ("x",)),
    ("exc", "exc(x; y)", ("x", "y")),
    ("inc", "inc(x; y)", ("x", "y")),
    ("exc-inc", "E z. exc(x; z) & inc(z; y)", ("x", "y")),
    ("eq-or-inc", "x = y | inc(x; y)", ("x", "y")),
    ("succ-inc", "A z. (E(x,z) -> inc(z; x))", ("x",)),
    ("succ-exc", "E y. E(x,y) & exc(x; y)", ("x",)),
    ("inc-exc", "inc(x; y) & exc(y; x)", ("x", "y")),
    ("P-or-exc", "P(x) | exc(x; y)", ("x", "y")),
    ("pred-inc", "E z. inc(z; x) & E(z,x)", ("x",)),
    ("others-exc", "A y. (y = x | exc(x; y))", ("x",)),
    ("inc-pair", "inc(x, y; y, x)", ("x", "y")),
]

# (name, formula text, domain) in FO(|)
EXCLUSION_FORMULAS = [
    ("exc", "exc(x; y)", ("x", "y")),
    ("E-or-exc", "E(x,y) | exc(x; y)", ("x", "y")),
    ("via-z", "E z. exc(x; z) & E(z,y)", ("x", "y")),
    ("pairs", "A z. (exc(x,z; y,z) | E(z,x))", ("x", "y")),
    ("flat-eq", "x = y", ("x", "y")),
    ("P-and-exc", "P(x) & exc(x; y)", ("x", "y")),
]

# the optimality example over the fork a→b, a→c
OPTIMALITY_MU = "E z. inc(z; x) & A y. (E(x,y) -> inc(x, y; x, z))"


def so_fixtures(names=None):
    out = []
    for name, text in SO_FORMULAS + MYOPIC_FORMULAS:
        if names is None or name in names:
            out.append((name, parse_so_formula(text)))
    return out


def myopic_fixtures():
    return [(n, parse_so_formula(t)) for n, t in MYOPIC_FORMULAS]


def team_fixtures():
    return [(n, parse_formula(t), a) for n, t, a in TEAM_FORMULAS]


def exclusion_fixtures():
    return [(n, parse_formula(t), d) for n, t, d in EXCLUSION_FORMULAS]


def structures_for(arity: int):
    """Structures small enough for relations of the given arity."""
    if arity == 1:
        return [STRUCTURES[n] for n in ("edge2", "path3", "cycle3")]
    return [STRUCTURES[n] for n in ("edge2", "path3")]


def load_evil():
    """The two structures and formulas of the disjunction counterexample."""
    read = lambda name: (DATA / name).read_text()
    return (parse_structure(read("evil_A.str")), parse_formula(read("evil_phi.frm")),
            parse_structure(read("evil_B.str")), parse_formula(read("evil_psi.frm")))


def corpus_formulas() -> list[str]:
    """Every formula text used anywhere in the fixtures."""
    texts = [t for _, t in SO_FORMULAS + MYOPIC_FORMULAS]
    texts += [t for _, t, _ in TEAM_FORMULAS + EXCLUSION_FORMULAS]
    texts.append(OPTIMALITY_MU)
    if DATA.exists():
        texts += [p.read_text().strip() for p in sorted(DATA.glob("*.frm"))]
    return texts
