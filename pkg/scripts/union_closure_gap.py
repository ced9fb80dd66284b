"""How much do team companions add?  Family sizes before and after closure."""
import argparse
from dataclasses import asdict, dataclass

from inexgames.fixtures import STRUCTURES, team_fixtures
from inexgames.semantics import satisfying_teams, union_closure
from inexgames.transforms import team_myopic_companion


@dataclass
class Config:
    structure: str = "edge2"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--structure", default=Config.structure, choices=sorted(STRUCTURES))
    cfg = Config(**vars(ap.parse_args()))
    S = STRUCTURES[cfg.structure]
    print(f"structure {cfg.structure}; {asdict(cfg)}")
    print(f"{'formula':12s} {'family':>7s} {'closure':>8s} {'companion':>10s}")
    for name, phi, anchor in team_fixtures():
        fam = {frozenset(X.rows) for X in satisfying_teams(S, phi, anchor)}
        comp = team_myopic_companion(phi, anchor)
        cfam = {frozenset(X.rows) for X in satisfying_teams(S, comp, anchor)}
        closed = union_closure(fam, empty=frozenset())
        mark = "" if cfam == closed else "  MISMATCH"
        print(f"{name:12s} {len(fam):7d} {len(closed):8d} {len(cfam):10d}{mark}")


if __name__ == "__main__":
    main()
