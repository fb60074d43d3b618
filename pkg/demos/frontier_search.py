"""Small end-to-end frontier search with NSGA-II.

Runs the genetic search over mixture ratios on the adversarial-evaluation
scenario, prints the resulting Pareto frontier, and optionally writes the
frontier/trials CSV files that the plotting package consumes.

Run:  python3 demos/frontier_search.py [--seed 0] [--budget 200] [--out DIR]
"""

import argparse
from pathlib import Path

from mixtureopt import (
    MooConfig,
    build_scenario,
    evaluate_candidate,
    resolve_config,
    run_nsga2,
)
from mixtureopt.cli import write_points_csv

SCENARIO = {
    "population": {"n_users": 4000},
    "eval_policy": {"kind": "threshold_complement", "feature_index": 1, "threshold": 0.5},
    "objectives": {"replications": 15, "log_size": 2000, "overlap_mode": "clip"},
}


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--budget", type=int, default=200)
    parser.add_argument("--out", type=Path, default=None, help="also write frontier/trials CSVs")
    args = parser.parse_args()

    scenario = build_scenario(resolve_config(SCENARIO, seed=args.seed))
    moo = MooConfig(population_size=20, evaluation_budget=args.budget, seed=args.seed)
    result = run_nsga2(
        lambda alpha: evaluate_candidate(alpha, scenario), scenario.n_policies, moo
    )

    print(f"evaluated {result.n_evaluations} unique mixture ratios")
    print(f"frontier has {len(result.archive)} points (revenue high -> low):\n")
    print(f"{'alpha_random':>13} {'alpha_pi2':>10} {'alpha_pi3':>10} {'revenue':>9} {'ope_mse':>11}")
    shown = result.archive[:: max(1, len(result.archive) // 15)]
    for p in shown:
        a = p.alpha
        print(f"{a[0]:13.4f} {a[1]:10.4f} {a[2]:10.4f} {p.revenue:9.4f} {p.ope_error:11.6f}")
    if len(shown) < len(result.archive):
        print(f"... ({len(result.archive) - len(shown)} more)")

    if args.out is not None:
        args.out.mkdir(parents=True, exist_ok=True)
        k = scenario.n_policies
        write_points_csv(
            args.out / "frontier.csv", k, [(p.alpha, p.revenue, p.ope_error) for p in result.archive]
        )
        write_points_csv(
            args.out / "all_trials.csv",
            k,
            [(alpha, -obj.neg_revenue, obj.ope_error) for alpha, obj in result.trials],
        )
        print(f"\nwrote {args.out}/frontier.csv and {args.out}/all_trials.csv")
        print("render them with:  plot-frontier --frontier", args.out / "frontier.csv")


if __name__ == "__main__":
    main()
