"""Scenario configuration: JSON schema, defaults, and builders.

One self-describing config file pins a whole experiment; the two benchmark
settings differ only in their ``eval_policy`` section.  Every field has a
default, so an empty config means the standard 10,000-user, three-logger
scenario with the positively-correlated evaluation policy.
"""

from __future__ import annotations

import copy
import hashlib
import json

import numpy as np

from .environment import RewardModel, generate_users
from .estimators import EstimatorConfig, EvalPolicy
from .nsga2 import MooConfig
from .objectives import Scenario
from .policies import ConfigurationError, PolicySpec
from .seeding import STREAM_POPULATION, child_rng

DEFAULT_CONFIG = {
    "seed": 0,
    "population": {"n_users": 10000, "n_features": 4},
    "reward_model": {
        "base_weight": 1.0,
        "uplift_weights": [0.0, 0.6, 0.4, 0.0],
        "coupon_cost": 0.25,
        "noise_std": 0.1,
    },
    "logging_policies": [
        {"kind": "random_feature", "feature_index": 0},
        {"kind": "threshold", "feature_index": 1, "threshold": 0.5},
        {"kind": "threshold", "feature_index": 2, "threshold": 0.5},
    ],
    "eval_policy": {"kind": "threshold", "feature_index": 1, "threshold": 0.5},
    "objectives": {
        "replications": 50,
        "log_size": None,
        "overlap_mode": "error",
        "clip_floor": 1e-3,
    },
    "moo": {
        "population_size": 20,
        "evaluation_budget": 1000,
        "crossover_prob": 0.9,
        "mutation_prob": None,
        "sbx_eta": 15.0,
        "mutation_eta": 20.0,
    },
}


def resolve_config(overrides: dict | None = None, seed: int | None = None) -> dict:
    """Deep-merge ``overrides`` onto the defaults; reject unknown keys."""
    cfg = copy.deepcopy(DEFAULT_CONFIG)
    if overrides:
        if not isinstance(overrides, dict):
            raise ConfigurationError("config root must be a JSON object")
        for section, value in overrides.items():
            if section not in cfg:
                raise ConfigurationError(f"unknown config section {section!r}")
            if isinstance(cfg[section], dict):
                if not isinstance(value, dict):
                    raise ConfigurationError(f"config section {section!r} must be an object")
                for k, v in value.items():
                    if k not in cfg[section]:
                        raise ConfigurationError(f"unknown key {k!r} in config section {section!r}")
                    cfg[section][k] = v
            else:
                cfg[section] = value
    if seed is not None:
        cfg["seed"] = seed
    if not isinstance(cfg["seed"], int) or cfg["seed"] < 0:
        raise ConfigurationError(f"seed must be a non-negative integer, got {cfg['seed']!r}")
    return cfg


def load_config(path=None, seed: int | None = None) -> dict:
    """Read a JSON config file (or use defaults) and resolve it."""
    overrides = None
    if path is not None:
        try:
            with open(path) as fh:
                overrides = json.load(fh)
        except OSError as exc:
            raise ConfigurationError(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"config {path} is not valid JSON: {exc}") from exc
    return resolve_config(overrides, seed)


def config_hash(cfg: dict) -> str:
    """sha256 of the canonical JSON form; pins a run together with the seed."""
    canonical = json.dumps(cfg, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def build_policy(entry: dict) -> PolicySpec:
    if not isinstance(entry, dict) or "kind" not in entry:
        raise ConfigurationError(f"policy entry must be an object with a 'kind' field, got {entry!r}")
    known = {"kind", "feature_index", "threshold"}
    extra = set(entry) - known
    if extra:
        raise ConfigurationError(f"unknown policy fields {sorted(extra)}")
    return PolicySpec(
        kind=entry["kind"],
        feature_index=int(entry.get("feature_index", 0)),
        threshold=float(entry.get("threshold", 0.0)),
    )


def build_scenario(cfg: dict) -> Scenario:
    pop_cfg = cfg["population"]
    n_users, n_features = int(pop_cfg["n_users"]), int(pop_cfg["n_features"])
    population = generate_users(n_users, n_features, child_rng(cfg["seed"], STREAM_POPULATION))

    rm = cfg["reward_model"]
    uplift = [float(w) for w in rm["uplift_weights"]]
    if len(uplift) != n_features:
        raise ConfigurationError(
            f"uplift_weights has {len(uplift)} entries for {n_features} features"
        )
    model = RewardModel(
        base_weight=float(rm["base_weight"]),
        uplift_weights=tuple(uplift),
        coupon_cost=float(rm["coupon_cost"]),
        noise_std=float(rm["noise_std"]),
    )

    specs = [build_policy(entry) for entry in cfg["logging_policies"]]
    for spec in specs + [build_policy(cfg["eval_policy"])]:
        if spec.feature_index >= n_features:
            raise ConfigurationError(
                f"policy feature_index {spec.feature_index} out of range for d={n_features}"
            )

    obj = cfg["objectives"]
    log_size = obj["log_size"]
    return Scenario(
        population=population,
        logging_specs=specs,
        eval_policy=EvalPolicy(build_policy(cfg["eval_policy"])),
        reward_model=model,
        replications=int(obj["replications"]),
        estimator_cfg=EstimatorConfig(
            overlap_mode=str(obj["overlap_mode"]),
            clip_floor=float(obj["clip_floor"]),
        ),
        master_seed=cfg["seed"],
        log_size=None if log_size is None else int(log_size),
    )


def build_moo_config(cfg: dict) -> MooConfig:
    moo = cfg["moo"]
    mut = moo["mutation_prob"]
    return MooConfig(
        population_size=int(moo["population_size"]),
        evaluation_budget=int(moo["evaluation_budget"]),
        crossover_prob=float(moo["crossover_prob"]),
        mutation_prob=None if mut is None else float(mut),
        sbx_eta=float(moo["sbx_eta"]),
        mutation_eta=float(moo["mutation_eta"]),
        seed=cfg["seed"],
    )


def parse_alpha(text: str, k: int) -> np.ndarray:
    """Parse a comma-separated mixture ratio and validate it against the simplex."""
    try:
        values = np.array([float(part) for part in text.split(",")])
    except ValueError as exc:
        raise ConfigurationError(f"cannot parse alpha {text!r}: {exc}") from exc
    from .policies import validate_weights

    return validate_weights(values, k)
