"""Command-line front end.

Exit codes: 0 true/success, 1 false/counterexample, 2 usage or parse error,
3 budget exceeded.  Diagnostics go to standard error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import BudgetExceeded, InexError, ParseError

EXIT_TRUE, EXIT_FALSE, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


def _read(path) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise _UsageError(f"cannot read {path}: {e.strerror}") from None


def _parse_file(path, parser, *args, **kw):
    try:
        return parser(_read(path), *args, **kw)
    except ParseError as e:
        wrapped = ParseError(f"{path}: {e}")
        wrapped.line, wrapped.column = e.line, e.column
        raise wrapped from None


def _structure(path):
    from .core import parse_structure
    return _parse_file(path, parse_structure)


def _team(path):
    from .core import parse_team
    return _parse_file(path, parse_team)


def _game(path):
    from .games import parse_game
    return _parse_file(path, parse_game)


def _formula(path, reserved=False):
    from .formulas import parse_formula
    return _parse_file(path, parse_formula, allow_reserved=reserved)


def _so_formula(path, free="X", reserved=False):
    from .formulas import parse_so_formula
    return _parse_file(path, parse_so_formula, free=free, allow_reserved=reserved)


def _vars(text):
    return tuple(v.strip() for v in text.split(",") if v.strip()) if text else ()


def _budget(args):
    from .semantics import EvalBudget
    return EvalBudget(args.max_split_rows, args.max_choice_universe, args.max_steps, args.time_limit)


class Report:
    def __init__(self, as_json):
        self.as_json = as_json
        self.data = {}
        self.lines = []

    def add(self, key, value, text=None):
        self.data[key] = value
        if text is not None:
            self.lines.append(text)

    def emit(self, out):
        if self.as_json:
            out.write(json.dumps(self.data, indent=2, sort_keys=True, default=_jsonable) + "\n")
        else:
            out.write("\n".join(self.lines) + ("\n" if self.lines else ""))


def _jsonable(x):
    if isinstance(x, (set, frozenset)):
        return sorted(x, key=str)
    return str(x)


def _write_or_report(args, rep, key, text):
    if getattr(args, "output", None):
        Path(args.output).write_text(text)
        rep.add(key, args.output, f"wrote {args.output}")
    else:
        rep.add(key, text, text.rstrip("\n"))


# -- subcommands ----------------------------------------------------------------

def cmd_eval(args, rep):
    from .semantics import eval_team
    A, X, phi = _structure(args.structure), _team(args.team), _formula(args.formula)
    ok = eval_team(A, X, phi, _budget(args), args.method)
    rep.add("satisfied", ok, "satisfied" if ok else "not satisfied")
    return EXIT_TRUE if ok else EXIT_FALSE


def _relation(path, arity):
    rows = []
    for lineno, raw in enumerate(_read(path).splitlines(), 1):
        line = raw.split("#", 1)[0].split()
        if not line:
            continue
        if len(line) != arity:
            raise ParseError(f"{path}: tuple has {len(line)} elements, expected {arity}", lineno, 1)
        rows.append(tuple(line))
    return frozenset(rows)


def cmd_eval_so(args, rep):
    from .semantics import eval_so, satisfying_relations
    A, phi = _structure(args.structure), _so_formula(args.formula, args.free)
    if args.relation is None:
        fam = satisfying_relations(A, phi)
        items = sorted(sorted(r) for r in fam)
        rep.add("relations", items, "\n".join("{" + " ".join("(" + ",".join(t) + ")" for t in r) + "}"
                                             for r in items) or "(none)")
        return EXIT_TRUE
    rel = _relation(args.relation, phi.free_arity)
    ok = eval_so(A, rel, phi)
    rep.add("satisfied", ok, "satisfied" if ok else "not satisfied")
    return EXIT_TRUE if ok else EXIT_FALSE


def _solver(name):
    from .games import solve_membership, solve_membership_bruteforce, solve_membership_polynomial
    return {"search": solve_membership, "brute": solve_membership_bruteforce,
            "ptime": solve_membership_polynomial}[name]


def cmd_targets(args, rep):
    from .games import enumerate_targets
    g = _game(args.game)
    fam = enumerate_targets(g, args.max_targets, _solver(args.solver))
    items = sorted((g.ordered(X) for X in fam), key=lambda xs: (len(xs), [str(v) for v in xs]))
    rep.add("targets", items, "\n".join("{" + ", ".join(map(str, X)) + "}" for X in items))
    return EXIT_TRUE


def cmd_solve(args, rep):
    from .games import solve_membership_bruteforce
    g = _game(args.game)
    X = frozenset(_vars(args.target))
    if args.solver == "brute":
        s = solve_membership_bruteforce(g, X, args.max_vertices)
    else:
        s = _solver(args.solver)(g, X)
    if s is None:
        rep.add("winning", False, "no winning strategy with this target")
        return EXIT_FALSE
    W = g.ordered(s.vertices)
    rep.add("winning", True, "winning strategy: {" + ", ".join(map(str, W)) + "}")
    rep.add("strategy", W)
    return EXIT_TRUE


def cmd_build_game(args, rep):
    from .constructions import mc_game_exclusion, mc_game_myopic, mc_game_so
    from .games import format_game
    A = _structure(args.structure)
    if args.kind == "exclusion":
        if not args.domain:
            raise _UsageError("build-game exclusion needs --domain")
        g = mc_game_exclusion(A, _formula(args.formula), _vars(args.domain))
    else:
        phi = _so_formula(args.formula, args.free)
        g = mc_game_so(A, phi) if args.kind == "so" else mc_game_myopic(A, phi)
    _write_or_report(args, rep, "game", format_game(g))
    return EXIT_TRUE


def cmd_sat2game(args, rep):
    from .constructions import cnf_to_game, parse_dimacs
    from .games import format_game
    clauses = _parse_file(args.cnf, parse_dimacs)
    _write_or_report(args, rep, "game", format_game(cnf_to_game(clauses)))
    return EXIT_TRUE


def cmd_transform(args, rep):
    from .formulas import format_formula, format_so_formula, to_nnf
    from .transforms import (guard_atoms, myopic_companion_so, team_myopic_companion,
                             unguard_atoms)
    if args.kind == "companion-so":
        out = format_so_formula(myopic_companion_so(_so_formula(args.formula, args.free, True)))
    else:
        phi = _formula(args.formula, reserved=True)
        anchor = _vars(args.anchor)
        if args.kind != "nnf" and not anchor:
            raise _UsageError(f"transform {args.kind} needs --anchor")
        if args.kind == "companion-team":
            out = team_myopic_companion(phi, anchor, args.expand_dep)
        elif args.kind == "guard":
            out = guard_atoms(phi, anchor)
        elif args.kind == "unguard":
            out = unguard_atoms(phi, anchor)
        else:
            out = to_nnf(phi)
        out = format_formula(out)
    _write_or_report(args, rep, "formula", out + "\n")
    return EXIT_TRUE


def cmd_check(args, rep):
    from .formulas import check_myopic_so, check_x_myopic
    if args.kind == "union-game":
        from .games import validate_union_game
        chk = validate_union_game(_game(args.game))
        ok, problems = chk.ok, [f"{c}: {m}" for c, m in chk.problems]
    elif args.kind == "myopic":
        v = check_myopic_so(_so_formula(args.formula, args.free, True))
        ok, problems = v.ok, [f"{c} at {o}: {m}" for c, o, m in v.problems]
    elif args.kind == "x-myopic":
        v = check_x_myopic(_formula(args.formula, True), _vars(args.anchor))
        ok, problems = v.ok, [f"{c} at {o}: {m}" for c, o, m in v.problems]
    else:
        ok, problems = _check_union_closed(args)
    rep.add("ok", ok, "ok" if ok else "violated")
    rep.add("problems", problems, "\n".join(problems) if problems else None)
    return EXIT_TRUE if ok else EXIT_FALSE


def _check_union_closed(args):
    from .semantics import is_union_closed, satisfying_relations, satisfying_teams
    A = _structure(args.structure)
    if args.domain:
        fam = satisfying_teams(A, _formula(args.formula), _vars(args.domain), _budget(args))
        ok, pair = is_union_closed(fam)
        show = lambda t: "{" + " ".join("(" + ",".join(r) + ")" for r in t.sorted_rows(A)) + "}"
    else:
        fam = satisfying_relations(A, _so_formula(args.formula, args.free))
        ok, pair = is_union_closed(fam)
        show = lambda t: "{" + " ".join("(" + ",".join(r) + ")" for r in sorted(t)) + "}"
    if ok:
        return True, []
    return False, [f"{show(pair[0])} and {show(pair[1])} satisfy it, their union does not"]


def cmd_verify(args, rep):
    from .verify import SUITES, run_suite
    names = list(SUITES) if args.suite == "all" else [args.suite]
    if any(n not in SUITES for n in names):
        raise _UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES)} or all")
    results = [run_suite(n, args.seed, args.max_universe) for n in names]
    for r in results:
        rep.lines.append(r.line())
        rep.lines.extend(f"    {f}" for f in r.failures[:5])
    rep.add("suites", [r.as_dict() for r in results])
    ok = all(r.passed for r in results)
    rep.add("passed", ok)
    return EXIT_TRUE if ok else EXIT_FALSE


_COMMON_DEFAULTS = {"json": False, "seed": 0, "max_split_rows": 12, "max_choice_universe": 4,
                    "max_steps": 5_000_000, "time_limit": None, "max_vertices": 22}


def _add_common(p, default):
    # accepted before or after the subcommand
    p.add_argument("--json", action="store_true", default=default, help="machine-readable report")
    p.add_argument("--seed", type=int, default=default)
    p.add_argument("--max-split-rows", type=int, default=default)
    p.add_argument("--max-choice-universe", type=int, default=default)
    p.add_argument("--max-steps", type=int, default=default)
    p.add_argument("--time-limit", type=float, default=default)
    p.add_argument("--max-vertices", type=int, default=default, help="cap for brute-force game solving")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="inexgames", description="Team semantics, second-order formulas and inclusion-exclusion games.")
    _add_common(p, argparse.SUPPRESS)
    p.set_defaults(**_COMMON_DEFAULTS)
    common = _Parser(add_help=False)
    _add_common(common, argparse.SUPPRESS)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("eval", parents=[common], help="team satisfaction")
    s.add_argument("--structure", required=True)
    s.add_argument("--team", required=True)
    s.add_argument("--formula", required=True)
    s.add_argument("--method", choices=("auto", "sat", "direct"), default="auto")
    s.set_defaults(fn=cmd_eval)

    s = sub.add_parser("eval-so", parents=[common], help="second-order satisfaction, or all satisfying relations")
    s.add_argument("--structure", required=True)
    s.add_argument("--formula", required=True)
    s.add_argument("--relation", help="file with one tuple per line; omit to list all")
    s.add_argument("--free", default="X")
    s.set_defaults(fn=cmd_eval_so)

    s = sub.add_parser("targets", parents=[common], help="enumerate T(G)")
    s.add_argument("--game", required=True)
    s.add_argument("--max-targets", type=int, default=16)
    s.add_argument("--solver", choices=("search", "brute", "ptime"), default="search")
    s.set_defaults(fn=cmd_targets)

    s = sub.add_parser("solve", parents=[common], help="find a winning strategy with a given target")
    s.add_argument("--game", required=True)
    s.add_argument("--target", default="", help="comma-separated target vertices")
    s.add_argument("--solver", choices=("search", "brute", "ptime"), default="search")
    s.set_defaults(fn=cmd_solve)

    s = sub.add_parser("build-game", parents=[common], help="compile a formula into its game")
    s.add_argument("kind", choices=("so", "myopic", "exclusion"))
    s.add_argument("--structure", required=True)
    s.add_argument("--formula", required=True)
    s.add_argument("--domain", help="team variables for the exclusion game")
    s.add_argument("--free", default="X")
    s.add_argument("-o", "--output")
    s.set_defaults(fn=cmd_build_game)

    s = sub.add_parser(parents=[common], name="sat2game", help="DIMACS CNF to game")
    s.add_argument("--cnf", required=True)
    s.add_argument("-o", "--output")
    s.set_defaults(fn=cmd_sat2game)

    s = sub.add_parser("transform", parents=[common], help="formula translations")
    s.add_argument("kind", choices=("companion-so", "companion-team", "guard", "unguard", "nnf"))
    s.add_argument("--formula", required=True)
    s.add_argument("--anchor", help="comma-separated anchor variables")
    s.add_argument("--free", default="X")
    s.add_argument("--expand-dep", action="store_true")
    s.add_argument("-o", "--output")
    s.set_defaults(fn=cmd_transform)

    s = sub.add_parser("check", parents=[common], help="fragment and game-class checks")
    s.add_argument("kind", choices=("myopic", "x-myopic", "union-game", "union-closed"))
    s.add_argument("--formula")
    s.add_argument("--anchor")
    s.add_argument("--game")
    s.add_argument("--structure")
    s.add_argument("--domain", help="team variables (team formulas); omit for second-order")
    s.add_argument("--free", default="X")
    s.set_defaults(fn=cmd_check)

    s = sub.add_parser("verify", parents=[common], help="replay the theorem suites")
    s.add_argument("--suite", default="all")
    s.add_argument("--max-universe", type=int, default=3)
    s.set_defaults(fn=cmd_verify)
    return p


_NEEDS = {"myopic": ("formula",), "x-myopic": ("formula", "anchor"), "union-game": ("game",),
          "union-closed": ("formula", "structure")}


def run_cli(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.command == "check":
            missing = [o for o in _NEEDS[args.kind] if getattr(args, o) is None]
            if missing:
                raise _UsageError(f"check {args.kind} needs " + ", ".join("--" + m for m in missing))
        rep = Report(args.json)
        code = args.fn(args, rep)
        rep.emit(out)
        return code
    except _UsageError as e:
        err.write(f"error: {e}\n")
        return EXIT_USAGE
    except ParseError as e:
        err.write(f"parse error: {e}\n")
        return EXIT_USAGE
    except BudgetExceeded as e:
        err.write(f"budget exceeded: {e}\n")
        return EXIT_BUDGET
    except InexError as e:
        err.write(f"error: {e}\n")
        return EXIT_USAGE
    except SystemExit as e:         # --help
        return EXIT_TRUE if not e.code else EXIT_USAGE


def main():
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
