"""Replay every verification suite and write a JSON summary."""
import argparse
import json
from dataclasses import asdict, dataclass

from inexgames.verify import SUITES, run_suite


@dataclass
class Config:
    seed: int = 0
    max_universe: int = 3
    out: str = "verify_results.json"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    for k, v in asdict(Config()).items():
        ap.add_argument("--" + k.replace("_", "-"), type=type(v), default=v)
    cfg = Config(**vars(ap.parse_args()))
    results = []
    for name in SUITES:
        r = run_suite(name, cfg.seed, cfg.max_universe)
        print(r.line())
        results.append(r.as_dict())
    with open(cfg.out, "w") as fh:
        json.dump({"config": asdict(cfg), "results": results}, fh, indent=2)
    failed = [r["name"] for r in results if not r["passed"]]
    print(f"{len(results) - len(failed)}/{len(results)} suites passed; summary in {cfg.out}")
    raise SystemExit(1 if failed else 0)


if __name__ == "__main__":
    main()
