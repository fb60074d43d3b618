"""Off-policy value estimators over logged coupon data.

Three estimators of the value of an evaluation policy from logs:

* naive   — mean reward over entries whose logged action matches the
  evaluation policy's deterministic choice (biased toward actions the
  loggers preferred),
* IPS     — importance-weighted mean for single-logger data,
* BIPS    — importance-weighted mean for multi-logger data, with the
  alpha-weighted mixture propensity in the denominator.

IPS and BIPS share one weighted-mean core; on single-logger data they are the
same number bit for bit.  Support handling is configurable: ``error`` raises
on a positive-evaluation-probability action with zero propensity, ``clip``
floors the denominator instead.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .policies import (
    ConfigurationError,
    PolicySpec,
    action_probabilities,
    action_probability_matrix,
    mixture_probability_matrix,
)
from .environment import LoggedDataset

OVERLAP_MODES = ("error", "clip")


class NoMatchingSamples(RuntimeError):
    """No logged action matches the evaluation policy; the naive estimator is undefined."""


class SupportViolation(RuntimeError):
    """The evaluation policy puts probability on an action the loggers cannot produce."""


@dataclass(frozen=True)
class EstimatorConfig:
    """How to treat propensities that break the overlap assumption."""

    overlap_mode: str = "error"
    clip_floor: float = 1e-3

    def __post_init__(self):
        if self.overlap_mode not in OVERLAP_MODES:
            raise ConfigurationError(
                f"overlap_mode must be one of {OVERLAP_MODES}, got {self.overlap_mode!r}"
            )
        if not 0.0 < self.clip_floor < 1.0:
            raise ConfigurationError(f"clip_floor must lie in (0, 1), got {self.clip_floor}")


@dataclass(frozen=True)
class EvalPolicy:
    """Evaluation policy: the action distribution plus its deterministic selector.

    The selector h_e(x) is the argmax action, ties broken toward the lowest
    index, so the naive estimator is well defined even for stochastic specs.
    """

    spec: PolicySpec

    def prob(self, x: np.ndarray, action: int) -> float:
        return float(action_probabilities(self.spec, x)[action])

    def prob_matrix(self, contexts: np.ndarray) -> np.ndarray:
        return action_probability_matrix(self.spec, contexts)

    def select(self, x: np.ndarray) -> int:
        return int(np.argmax(action_probabilities(self.spec, x)))

    def select_batch(self, contexts: np.ndarray) -> np.ndarray:
        return np.argmax(self.prob_matrix(contexts), axis=1)


def naive_estimate(data: LoggedDataset, eval_policy: EvalPolicy) -> float:
    """Mean reward over entries whose logged action equals h_e(x)."""
    if data.n == 0:
        raise ConfigurationError("dataset is empty")
    matched = data.actions == eval_policy.select_batch(data.contexts)
    if not np.any(matched):
        raise NoMatchingSamples("no logged action matches the evaluation policy selector")
    return float(np.mean(data.rewards[matched]))


def importance_weights(data: LoggedDataset, eval_policy: EvalPolicy, cfg: EstimatorConfig) -> np.ndarray:
    """Per-entry weight pi_e(a|x) / propensity, with the configured support handling.

    Entries with pi_e(a|x) == 0 get weight 0 regardless of the propensity.
    """
    pi_e = eval_policy.prob_matrix(data.contexts)[np.arange(data.n), data.actions]
    den = np.asarray(data.propensities, dtype=float)
    if cfg.overlap_mode == "clip":
        den = np.maximum(den, cfg.clip_floor)
    else:
        bad = (pi_e > 0.0) & (den <= 0.0)
        if np.any(bad):
            raise SupportViolation(
                f"{int(bad.sum())} logged entries have zero propensity for an action "
                "the evaluation policy can take"
            )
    weights = np.zeros(data.n)
    nz = pi_e > 0.0
    weights[nz] = pi_e[nz] / den[nz]
    return weights


def _weighted_mean_estimate(data: LoggedDataset, eval_policy: EvalPolicy, cfg: EstimatorConfig) -> float:
    return float(np.mean(importance_weights(data, eval_policy, cfg) * data.rewards))


def ips_estimate(data: LoggedDataset, eval_policy: EvalPolicy, cfg: EstimatorConfig) -> float:
    """Standard IPS value for data collected under a single logging policy."""
    if data.n == 0:
        raise ConfigurationError("dataset is empty")
    if data.n_policies != 1:
        raise ConfigurationError(
            f"ips_estimate requires single-logger data, got {data.n_policies} loggers; use bips_estimate"
        )
    return _weighted_mean_estimate(data, eval_policy, cfg)


def bips_estimate(data: LoggedDataset, eval_policy: EvalPolicy, cfg: EstimatorConfig) -> float:
    """Balanced IPS value: logged mixture propensities in the denominator."""
    if data.n == 0:
        raise ConfigurationError("dataset is empty")
    return _weighted_mean_estimate(data, eval_policy, cfg)


def count_support_violations(specs, weights, contexts: np.ndarray, eval_policy: EvalPolicy) -> int:
    """Contexts where some action has pi_e(a|x) > 0 but zero mixture probability.

    This is the full overlap diagnostic: it inspects every action, not just the
    logged one, so it can flag deterministic-logger mixtures that make an
    evaluation policy unidentifiable.
    """
    mixture = mixture_probability_matrix(specs, weights, contexts)
    pi_e = eval_policy.prob_matrix(contexts)
    violating = np.any((pi_e > 0.0) & (mixture == 0.0), axis=1)
    return int(violating.sum())


def verify_logged_propensities(data: LoggedDataset, specs) -> float:
    """Max abs difference between logged propensities and freshly recomputed ones.

    Debug helper for the recompute-and-compare path; 0.0 means the log is
    internally consistent with its collection-time weights.
    """
    mixture = mixture_probability_matrix(specs, data.weights_at_collection, data.contexts)
    recomputed = mixture[np.arange(data.n), data.actions]
    return float(np.max(np.abs(recomputed - data.propensities)))
