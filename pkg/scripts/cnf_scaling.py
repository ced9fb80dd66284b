"""Time the game solvers on CNF games against the SAT library.

Random 3-CNFs around the satisfiability threshold are turned into games;
the backtracking solver decides full-target membership and must agree
with the SAT answer.  Prints one CSV row per instance size.
"""
import argparse
import csv
import random
import sys
import time
from dataclasses import asdict, dataclass

from inexgames.constructions import cnf_satisfiable, cnf_to_game
from inexgames.games import solve_membership
from inexgames.random_games import random_cnf


@dataclass
class Config:
    seed: int = 0
    min_vars: int = 4
    max_vars: int = 14
    step: int = 2
    ratio: float = 4.2
    instances: int = 20


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    for k, v in asdict(Config()).items():
        ap.add_argument("--" + k.replace("_", "-"), type=type(v), default=v)
    cfg = Config(**vars(ap.parse_args()))
    rng = random.Random(cfg.seed)
    w = csv.writer(sys.stdout)
    w.writerow(["vars", "clauses", "instances", "satisfiable", "mean_game_s", "mean_sat_s", "agree"])
    for n in range(cfg.min_vars, cfg.max_vars + 1, cfg.step):
        m = max(1, round(cfg.ratio * n))
        t_game = t_sat = 0.0
        sat_count = agree = 0
        for _ in range(cfg.instances):
            cnf = random_cnf(rng, n, m)
            t0 = time.perf_counter()
            g = cnf_to_game(cnf)
            won = solve_membership(g, g.targets) is not None
            t1 = time.perf_counter()
            sat = cnf_satisfiable(cnf)
            t2 = time.perf_counter()
            t_game += t1 - t0
            t_sat += t2 - t1
            sat_count += sat
            agree += won == sat
        k = cfg.instances
        w.writerow([n, m, k, sat_count, f"{t_game / k:.5f}", f"{t_sat / k:.5f}", f"{agree}/{k}"])


if __name__ == "__main__":
    main()
