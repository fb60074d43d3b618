"""Synthetic population, ground-truth rewards and logged-data collection.

The population is a fixed matrix of uniform feature vectors; expected revenue
is linear in the features with a flat coupon cost, so exact policy values are
a single matrix expression and never need Monte Carlo.  Logged datasets are
collected under a mixture of logging policies: traffic is split by
largest-remainder apportionment of the mixture weights, users are assigned by
a seeded shuffle, and every entry records the exact mixture propensity of the
logged action (the BIPS denominator).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .policies import (
    ConfigurationError,
    PolicySpec,
    action_probability_matrix,
    mixture_probability_matrix,
    validate_weights,
)


def generate_users(n: int, d: int, rng: np.random.Generator) -> np.ndarray:
    """(n, d) matrix of i.i.d. Uniform[0, 1] feature vectors."""
    if n < 1 or d < 1:
        raise ConfigurationError(f"population needs n >= 1 and d >= 1, got n={n}, d={d}")
    return rng.random((n, d))


@dataclass(frozen=True)
class RewardModel:
    """Linear expected revenue with a flat coupon cost.

    q(x, no coupon) = base_weight * x[d-1]
    q(x, coupon)    = q(x, no coupon) + uplift_weights . x - coupon_cost

    Observed rewards add Gaussian noise with std ``noise_std``.
    """

    base_weight: float
    uplift_weights: tuple[float, ...]
    coupon_cost: float
    noise_std: float

    def __post_init__(self):
        if self.noise_std < 0:
            raise ConfigurationError(f"noise_std must be >= 0, got {self.noise_std}")
        object.__setattr__(self, "uplift_weights", tuple(float(w) for w in self.uplift_weights))


def expected_reward(model: RewardModel, x: np.ndarray, action: int) -> float:
    """Noise-free expected revenue q(x, a)."""
    x = np.asarray(x, dtype=float)
    base = model.base_weight * x[-1]
    if action == 0:
        return float(base)
    uplift = np.asarray(model.uplift_weights)
    if x.shape[-1] != uplift.size:
        raise ConfigurationError(
            f"context has {x.shape[-1]} features but uplift_weights has {uplift.size}"
        )
    return float(base + x @ uplift - model.coupon_cost)


def expected_reward_matrix(model: RewardModel, contexts: np.ndarray) -> np.ndarray:
    """(n, 2) matrix of q(x, a) for every context and both actions."""
    contexts = np.asarray(contexts, dtype=float)
    base = model.base_weight * contexts[:, -1]
    uplift = np.asarray(model.uplift_weights)
    if contexts.shape[-1] != uplift.size:
        raise ConfigurationError(
            f"contexts have {contexts.shape[-1]} features but uplift_weights has {uplift.size}"
        )
    coupon = base + contexts @ uplift - model.coupon_cost
    return np.column_stack([base, coupon])


def sample_reward(model: RewardModel, x: np.ndarray, action: int, rng: np.random.Generator) -> float:
    """Expected reward plus Gaussian noise (exactly the mean when noise_std == 0)."""
    mean = expected_reward(model, x, action)
    if model.noise_std == 0.0:
        return mean
    return mean + model.noise_std * rng.standard_normal()


def true_policy_value(
    specs,
    population: np.ndarray,
    model: RewardModel,
    weights=None,
) -> float:
    """Exact value (1/n) sum_x sum_a pi(a|x) q(x, a) over the fixed population.

    ``specs`` may be a single PolicySpec or a list of K specs with mixture
    ``weights``; a single-element list with no weights means that policy alone.
    """
    population = np.asarray(population, dtype=float)
    if population.size == 0:
        raise ConfigurationError("population must be non-empty")
    if isinstance(specs, PolicySpec):
        probs = action_probability_matrix(specs, population)
    elif weights is None:
        if len(specs) != 1:
            raise ConfigurationError("mixture weights required for more than one policy")
        probs = action_probability_matrix(specs[0], population)
    else:
        probs = mixture_probability_matrix(specs, weights, population)
    q = expected_reward_matrix(model, population)
    return float(np.mean(np.sum(probs * q, axis=1)))


def apportion_counts(alpha: np.ndarray, n: int) -> np.ndarray:
    """Largest-remainder apportionment of alpha_i * n into integers summing to n.

    Remainder ties go to the lowest policy index.
    """
    alpha = validate_weights(alpha)
    quotas = alpha * n
    counts = np.floor(quotas).astype(int)
    leftover = n - int(counts.sum())
    if not 0 <= leftover <= alpha.size:
        raise AssertionError(f"apportionment leftover {leftover} out of range")
    if leftover:
        # stable sort on descending fractional part keeps index order on ties
        order = np.argsort(-(quotas - counts), kind="stable")
        counts[order[:leftover]] += 1
    return counts


@dataclass(frozen=True, eq=False)
class LoggedDataset:
    """Column-oriented log of (x, a, r) tuples plus collection metadata.

    ``propensities[j]`` is the mixture probability of the logged action under
    the weights in force at collection time; it is strictly positive for any
    action that was actually reachable.
    """

    contexts: np.ndarray
    actions: np.ndarray
    rewards: np.ndarray
    propensities: np.ndarray
    source_policy: np.ndarray
    weights_at_collection: np.ndarray
    per_policy_counts: np.ndarray = field(default=None)

    def __post_init__(self):
        n = len(self.actions)
        for name in ("contexts", "rewards", "propensities", "source_policy"):
            if len(getattr(self, name)) != n:
                raise ConfigurationError(f"{name} length does not match actions length {n}")
        if self.per_policy_counts is None:
            k = len(self.weights_at_collection)
            counts = np.bincount(self.source_policy, minlength=k)
            object.__setattr__(self, "per_policy_counts", counts)

    @property
    def n(self) -> int:
        return len(self.actions)

    @property
    def n_policies(self) -> int:
        return len(self.weights_at_collection)


def collect_logs(
    specs,
    weights,
    population: np.ndarray,
    model: RewardModel,
    rng: np.random.Generator,
    n: int | None = None,
) -> LoggedDataset:
    """Collect one logged dataset of size ``n`` (default: the whole population).

    Users are shuffled once, the first n are kept, and contiguous blocks of the
    shuffle are assigned to policies according to the apportioned counts.  Each
    entry's action is drawn from its own source policy; the recorded propensity
    is the mixture probability of that action.
    """
    population = np.asarray(population, dtype=float)
    weights = validate_weights(weights, len(specs))
    n_pop = population.shape[0]
    if n is None:
        n = n_pop
    if not 1 <= n <= n_pop:
        raise ConfigurationError(f"log size must lie in [1, {n_pop}], got {n}")

    counts = apportion_counts(weights, n)
    chosen = rng.permutation(n_pop)[:n]
    contexts = population[chosen]
    source = np.repeat(np.arange(len(specs)), counts)

    # own-policy no-coupon probability per entry, then one inverse-CDF draw per entry
    p_no_coupon = np.empty(n)
    start = 0
    for spec, count in zip(specs, counts):
        if count:
            p_no_coupon[start : start + count] = action_probability_matrix(
                spec, contexts[start : start + count]
            )[:, 0]
        start += count
    u = rng.random(n)
    actions = (u >= p_no_coupon).astype(int)

    mixture = mixture_probability_matrix(specs, weights, contexts)
    propensities = mixture[np.arange(n), actions]
    if not np.all(propensities > 0.0):
        raise AssertionError("logged an action with zero mixture propensity")

    rewards = expected_reward_matrix(model, contexts)[np.arange(n), actions]
    if model.noise_std > 0.0:
        rewards = rewards + model.noise_std * rng.standard_normal(n)

    return LoggedDataset(
        contexts=contexts,
        actions=actions,
        rewards=rewards,
        propensities=propensities,
        source_policy=source,
        weights_at_collection=weights,
        per_policy_counts=counts,
    )


def write_dataset_csv(data: LoggedDataset, path) -> None:
    """Dump one row per log entry: x_0..x_{d-1}, action, reward, propensity, source_policy."""
    d = data.contexts.shape[1]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([f"x_{i}" for i in range(d)] + ["action", "reward", "propensity", "source_policy"])
        for j in range(data.n):
            writer.writerow(
                [repr(v) for v in data.contexts[j]]
                + [
                    int(data.actions[j]),
                    repr(float(data.rewards[j])),
                    repr(float(data.propensities[j])),
                    int(data.source_policy[j]),
                ]
            )
