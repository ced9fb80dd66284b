"""Show the two non-union-closed formulas and what their companions change."""
from inexgames.core import Team
from inexgames.fixtures import load_evil
from inexgames.formulas import check_x_myopic
from inexgames.semantics import check_union_closed_empirical, eval_team
from inexgames.transforms import team_myopic_companion


def report(name, A, phi, X1, X2):
    print(f"== {name}")
    for label, X in (("X1", X1), ("X2", X2), ("X1 | X2", X1 | X2)):
        print(f"  {label:8s} {sorted(r[0] for r in X.rows)}: {eval_team(A, X, phi)}")
    print(f"  x-myopic: {bool(check_x_myopic(phi, ('x',)))}")
    comp = team_myopic_companion(phi, ("x",))
    print(f"  companion x-myopic: {bool(check_x_myopic(comp, ('x',)))}")
    print(f"  companion on X1 | X2: {eval_team(A, X1 | X2, comp)}")
    res = check_union_closed_empirical(A, phi, ("x",))
    print(f"  union closed (binary check): {bool(res)}")


def main():
    A, phi, B, psi = load_evil()
    rows = lambda *xs: Team(("x",), [(x,) for x in xs])
    report("phi on A", A, phi, rows("a", "b"), rows("b", "c"))
    report("psi on B", B, psi, rows("a", "b"), rows("b", "c"))


if __name__ == "__main__":
    main()
