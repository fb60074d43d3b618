"""Command-line entry point.

Subcommands:

* ``optimize`` — NSGA-II over the mixture simplex; writes frontier.csv,
  all_trials.csv and a run manifest,
* ``sweep``    — dense simplex-lattice evaluation of both objectives (the
  brute-force oracle for the optimizer); writes grid.csv,
* ``evaluate`` — score one mixture ratio and print a JSON report,
* ``simulate`` — collect one logged dataset and dump it as CSV.

Outputs are a pure function of (config, seed); manifests embed the resolved
config so any run can be reproduced from its output directory alone.
``MIXTUREOPT_LOG`` sets the log level (DEBUG, INFO, ...).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .config import (
    build_moo_config,
    build_scenario,
    config_hash,
    load_config,
    parse_alpha,
)
from .environment import collect_logs, write_dataset_csv
from .nsga2 import NonFiniteRevenueError, run_nsga2
from .objectives import candidate_report, evaluate_candidate
from .policies import ConfigurationError
from .seeding import STREAM_REPLICATION, child_rng

log = logging.getLogger("mixtureopt")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_OBJECTIVE = 3


def _csv_cell(value: float) -> str:
    return repr(float(value))


def write_points_csv(path, k: int, rows) -> None:
    """CSV contract: alpha_1..alpha_K, revenue, ope_mse, random_ratio (= alpha_1)."""
    header = [f"alpha_{i + 1}" for i in range(k)] + ["revenue", "ope_mse", "random_ratio"]
    lines = [",".join(header)]
    for alpha, revenue, ope_mse in rows:
        cells = [_csv_cell(a) for a in alpha]
        cells += [_csv_cell(revenue), _csv_cell(ope_mse), _csv_cell(alpha[0])]
        lines.append(",".join(cells))
    Path(path).write_text("\n".join(lines) + "\n")


def write_manifest(out_dir: Path, subcommand: str, cfg: dict, outputs) -> None:
    manifest = {
        "subcommand": subcommand,
        "seed": cfg["seed"],
        "config_sha256": config_hash(cfg),
        "config": cfg,
        "outputs": sorted(outputs),
        "versions": {"mixtureopt": __version__, "numpy": np.__version__},
    }
    (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def _make_map(threads: int, executor_slot: list):
    if threads <= 1:
        return map
    executor = ThreadPoolExecutor(max_workers=threads)
    executor_slot.append(executor)
    return executor.map


def simplex_lattice(k: int, m: int):
    """All mixture ratios with components k_i / m, in lexicographic order."""

    def compositions(total, parts):
        if parts == 1:
            yield (total,)
            return
        for head in range(total + 1):
            for rest in compositions(total - head, parts - 1):
                yield (head,) + rest

    return [np.array(c, dtype=float) / m for c in compositions(m, k)]


def cmd_optimize(cfg: dict, out_dir: Path, threads: int) -> int:
    scenario = build_scenario(cfg)
    moo_cfg = build_moo_config(cfg)
    holder = []
    try:
        map_fn = _make_map(threads, holder)
        log.info("optimize: budget %d, population %d", moo_cfg.evaluation_budget, moo_cfg.population_size)
        result = run_nsga2(
            lambda alpha: evaluate_candidate(alpha, scenario),
            scenario.n_policies,
            moo_cfg,
            map_fn=map_fn,
        )
    finally:
        for executor in holder:
            executor.shutdown()
    write_points_csv(
        out_dir / "frontier.csv",
        scenario.n_policies,
        [(p.alpha, p.revenue, p.ope_error) for p in result.archive],
    )
    write_points_csv(
        out_dir / "all_trials.csv",
        scenario.n_policies,
        [(alpha, -obj.neg_revenue, obj.ope_error) for alpha, obj in result.trials],
    )
    write_manifest(out_dir, "optimize", cfg, ["frontier.csv", "all_trials.csv"])
    log.info("optimize: %d evaluations, %d frontier points", result.n_evaluations, len(result.archive))
    return EXIT_OK


def cmd_sweep(cfg: dict, out_dir: Path, threads: int, grid_resolution: int) -> int:
    if grid_resolution < 2:
        raise ConfigurationError(f"grid resolution must be >= 2, got {grid_resolution}")
    scenario = build_scenario(cfg)
    points = simplex_lattice(scenario.n_policies, grid_resolution)
    holder = []
    try:
        map_fn = _make_map(threads, holder)
        objectives = list(map_fn(lambda a: evaluate_candidate(a, scenario), points))
    finally:
        for executor in holder:
            executor.shutdown()
    rows = [
        (alpha, -obj.neg_revenue, obj.ope_error)
        for alpha, obj in zip(points, objectives)
    ]
    write_points_csv(out_dir / "grid.csv", scenario.n_policies, rows)
    write_manifest(out_dir, "sweep", cfg, ["grid.csv"])
    log.info("sweep: %d lattice points", len(points))
    return EXIT_OK


def cmd_evaluate(cfg: dict, alpha_text: str) -> int:
    scenario = build_scenario(cfg)
    alpha = parse_alpha(alpha_text, scenario.n_policies)
    report = candidate_report(alpha, scenario)
    report["seed"] = cfg["seed"]
    report["config_sha256"] = config_hash(cfg)
    if report["ope_mse"] == float("inf"):
        report["ope_mse"] = "inf"
    print(json.dumps(report, indent=2, sort_keys=True))
    return EXIT_OK


def cmd_simulate(cfg: dict, out_dir: Path, alpha_text: str) -> int:
    scenario = build_scenario(cfg)
    alpha = parse_alpha(alpha_text, scenario.n_policies)
    rng = child_rng(scenario.master_seed, STREAM_REPLICATION, 0)
    data = collect_logs(
        scenario.logging_specs,
        alpha,
        scenario.population,
        scenario.reward_model,
        rng,
        n=scenario.effective_log_size,
    )
    write_dataset_csv(data, out_dir / "dataset.csv")
    write_manifest(out_dir, "simulate", cfg, ["dataset.csv"])
    log.info("simulate: wrote %d log entries", data.n)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mixtureopt",
        description="Trade off immediate coupon revenue against future off-policy evaluation accuracy.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_common(p, with_out=True):
        p.add_argument("--config", type=Path, default=None, help="JSON scenario config")
        p.add_argument("--seed", type=int, default=None, help="override the config seed")
        if with_out:
            p.add_argument("--out", type=Path, default=Path("out"), help="output directory")
        p.add_argument(
            "--threads",
            type=int,
            default=os.cpu_count() or 1,
            help="worker threads for objective evaluation",
        )

    add_common(sub.add_parser("optimize", help="trace the revenue/OPE-error Pareto frontier"))

    sweep = sub.add_parser("sweep", help="evaluate objectives on a dense simplex lattice")
    add_common(sweep)
    sweep.add_argument("--grid", type=int, default=20, help="lattice resolution m (alpha_i = k/m)")

    ev = sub.add_parser("evaluate", help="score a single mixture ratio")
    add_common(ev, with_out=False)
    ev.add_argument("--alpha", required=True, help="comma-separated mixture ratio")

    sim = sub.add_parser("simulate", help="collect one logged dataset and dump it as CSV")
    add_common(sim)
    sim.add_argument("--alpha", required=True, help="comma-separated mixture ratio")
    return parser


def main(argv=None) -> int:
    logging.basicConfig(
        level=os.environ.get("MIXTUREOPT_LOG", "WARNING").upper(),
        format="%(levelname)s %(name)s: %(message)s",
    )
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, args.seed)
        if getattr(args, "out", None) is not None:
            args.out.mkdir(parents=True, exist_ok=True)
        if args.subcommand == "optimize":
            return cmd_optimize(cfg, args.out, args.threads)
        if args.subcommand == "sweep":
            return cmd_sweep(cfg, args.out, args.threads, args.grid)
        if args.subcommand == "evaluate":
            return cmd_evaluate(cfg, args.alpha)
        if args.subcommand == "simulate":
            return cmd_simulate(cfg, args.out, args.alpha)
        raise AssertionError(f"unhandled subcommand {args.subcommand!r}")
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NonFiniteRevenueError as exc:
        print(f"objective failure: {exc}", file=sys.stderr)
        return EXIT_OBJECTIVE


if __name__ == "__main__":
    sys.exit(main())
