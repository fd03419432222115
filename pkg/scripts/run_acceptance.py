"""Run the acceptance criteria and write a JSON summary.

    python3 scripts/run_acceptance.py [--only 2 3] [--seed N] [--out results.json]
"""

import argparse
import json
import sys
import time

from cocat.acceptance import AcceptanceConfig, run_all


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--only", type=int, nargs="*", default=())
    ap.add_argument("--seed", type=int, default=AcceptanceConfig.seed)
    ap.add_argument("--instances", type=int, default=AcceptanceConfig.n_instances)
    ap.add_argument("--complexes", type=int, default=AcceptanceConfig.n_complexes)
    ap.add_argument("--out", help="write per-criterion details and timings here")
    args = ap.parse_args()
    cfg = AcceptanceConfig(seed=args.seed, n_complexes=args.complexes,
                           n_instances=args.instances, only=tuple(args.only))
    t0 = time.perf_counter()
    results = run_all(cfg)
    for r in results:
        print(r.line())
    total = time.perf_counter() - t0
    print(f"total {total:.1f}s")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump({"seed": cfg.seed, "totalSeconds": round(total, 2),
                       "criteria": [{"index": r.index, "name": r.name, "passed": r.passed,
                                     "seconds": round(r.seconds, 2), "budget": r.budget,
                                     "details": r.details} for r in results]},
                      fh, indent=2, sort_keys=True, default=str)
    return 0 if all(r.passed for r in results) else 1


if __name__ == "__main__":
    sys.exit(main())
