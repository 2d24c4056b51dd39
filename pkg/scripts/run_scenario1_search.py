#!/usr/bin/env python3
"""Reproduce the six-setting inequality search campaign.

Runs the scenario-1 multi-restart Nelder-Mead search (500 restarts,
seed 7 by default), prints the top hits, and writes the best state to a
state file that the CLI can consume directly.

Usage:
    python scripts/run_scenario1_search.py [--restarts N] [--seed S]
        [--log out.jsonl] [--best-out best.json]
"""

import argparse
import json

from cyclesteer.search import ObjectiveSpec, multi_restart
from cyclesteer.states import state_to_json


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--restarts", type=int, default=500)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--log", default="scenario1_search.jsonl")
    ap.add_argument("--best-out", default="scenario1_best.json")
    ap.add_argument("--top", type=int, default=10)
    args = ap.parse_args()

    spec = ObjectiveSpec(kind="scenario1", parameterization="real-7")
    with open(args.log, "a") as log:
        result = multi_restart(spec, args.restarts, args.seed,
                               log_file=log, resume_path=args.log)

    ranked = sorted(result.records, key=lambda r: r.q, reverse=True)
    print(f"{'rank':>4}  {'restart':>7}  {'iters':>6}  {'q':>12}")
    for rank, rec in enumerate(ranked[: args.top], 1):
        print(f"{rank:>4}  {rec.restart:>7}  {rec.iters:>6}  {rec.q:>12.7f}")
    print(f"\nbest q = {result.best_q:.7f} over {len(result.records)} restarts")

    with open(args.best_out, "w") as f:
        json.dump(state_to_json(result.best_state), f, sort_keys=True, indent=2)
        f.write("\n")
    print(f"best state written to {args.best_out}; log in {args.log}")


if __name__ == "__main__":
    main()
