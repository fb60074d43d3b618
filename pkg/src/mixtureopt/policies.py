"""Contexts, actions and coupon-allocation policies.

A context is a feature vector in [0, 1]^d.  The action space is binary:
index 0 = no coupon, index 1 = coupon.  Three policy kinds cover the
data-collection and evaluation policies used throughout:

* ``random_feature`` — allocates the coupon with probability equal to one of
  the user's features (a fully stochastic logger with full support),
* ``threshold`` — deterministic: coupon iff the scored feature is >= z,
* ``threshold_complement`` — deterministic: coupon iff the scored feature < z.

A mixture of K policies with simplex weights alpha behaves like the weighted
average of the component action distributions; :func:`mixture_probabilities`
computes that average exactly, which is what the BIPS denominator needs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

NO_COUPON = 0
COUPON = 1
N_ACTIONS = 2

POLICY_KINDS = ("random_feature", "threshold", "threshold_complement")

# Tolerances from the domain contracts.
DIST_SUM_TOL = 1e-12
WEIGHT_SUM_TOL = 1e-9


class ConfigurationError(ValueError):
    """A policy spec, weight vector or context violates its contract."""


@dataclass(frozen=True)
class PolicySpec:
    """One allocation policy.

    ``threshold`` is required for the two deterministic kinds and ignored for
    ``random_feature``, where the scored feature itself is the allocation
    probability.
    """

    kind: str
    feature_index: int
    threshold: float = 0.0

    def __post_init__(self):
        if self.kind not in POLICY_KINDS:
            raise ConfigurationError(
                f"unknown policy kind {self.kind!r}; expected one of {POLICY_KINDS}"
            )
        if self.feature_index < 0:
            raise ConfigurationError(f"feature_index must be >= 0, got {self.feature_index}")
        if not 0.0 <= self.threshold <= 1.0:
            raise ConfigurationError(f"threshold must lie in [0, 1], got {self.threshold}")


def random_feature(feature_index: int) -> PolicySpec:
    return PolicySpec("random_feature", feature_index)


def threshold(feature_index: int, z: float) -> PolicySpec:
    return PolicySpec("threshold", feature_index, z)


def threshold_complement(feature_index: int, z: float) -> PolicySpec:
    return PolicySpec("threshold_complement", feature_index, z)


def validate_context(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size == 0:
        raise ConfigurationError(f"context must be a non-empty 1-d vector, got shape {x.shape}")
    if np.any(x < 0.0) or np.any(x > 1.0):
        raise ConfigurationError("context features must lie in [0, 1]")
    return x


def validate_distribution(probs: np.ndarray) -> np.ndarray:
    probs = np.asarray(probs, dtype=float)
    if np.any(probs < 0.0) or np.any(probs > 1.0):
        raise ConfigurationError("action probabilities must lie in [0, 1]")
    if abs(probs.sum() - 1.0) > DIST_SUM_TOL:
        raise ConfigurationError(f"action probabilities must sum to 1, got {probs.sum()!r}")
    return probs


def validate_weights(alpha: np.ndarray, k: int | None = None) -> np.ndarray:
    """Check alpha lies on the probability simplex (sum within 1e-9)."""
    alpha = np.asarray(alpha, dtype=float)
    if alpha.ndim != 1 or alpha.size == 0:
        raise ConfigurationError(f"mixture weights must be a non-empty 1-d vector, got {alpha!r}")
    if k is not None and alpha.size != k:
        raise ConfigurationError(f"expected {k} mixture weights, got {alpha.size}")
    if np.any(alpha < 0.0) or np.any(alpha > 1.0):
        raise ConfigurationError("mixture weights must lie in [0, 1]")
    if abs(alpha.sum() - 1.0) > WEIGHT_SUM_TOL:
        raise ConfigurationError(f"mixture weights must sum to 1, got {alpha.sum()!r}")
    return alpha


def _check_feature_index(spec: PolicySpec, d: int) -> None:
    if spec.feature_index >= d:
        raise ConfigurationError(
            f"feature_index {spec.feature_index} out of range for {d}-dimensional contexts"
        )


def action_probabilities(spec: PolicySpec, x: np.ndarray) -> np.ndarray:
    """Action distribution (P(no coupon), P(coupon)) of one policy at one context."""
    x = np.asarray(x, dtype=float)
    _check_feature_index(spec, x.shape[-1])
    value = x[spec.feature_index]
    if spec.kind == "random_feature":
        return np.array([1.0 - value, value])
    hit = value >= spec.threshold
    if spec.kind == "threshold_complement":
        hit = not hit
    return np.array([0.0, 1.0]) if hit else np.array([1.0, 0.0])


def action_probability_matrix(spec: PolicySpec, contexts: np.ndarray) -> np.ndarray:
    """Vectorized :func:`action_probabilities`: (n, d) contexts -> (n, 2) probabilities."""
    contexts = np.asarray(contexts, dtype=float)
    _check_feature_index(spec, contexts.shape[1])
    values = contexts[:, spec.feature_index]
    if spec.kind == "random_feature":
        return np.column_stack([1.0 - values, values])
    hit = values >= spec.threshold
    if spec.kind == "threshold_complement":
        hit = ~hit
    coupon = hit.astype(float)
    return np.column_stack([1.0 - coupon, coupon])


def mixture_probabilities(specs, alpha, x: np.ndarray) -> np.ndarray:
    """Action distribution of the alpha-weighted mixture of ``specs`` at context ``x``.

    Exactly sum_i alpha_i * pi_i(.|x), accumulated in policy order so that the
    propensities recorded at data collection reproduce bit for bit.
    """
    alpha = validate_weights(alpha)
    if len(specs) != alpha.size:
        raise ConfigurationError(f"{len(specs)} policies but {alpha.size} mixture weights")
    acc = np.zeros(N_ACTIONS)
    for a_i, spec in zip(alpha, specs):
        acc += a_i * action_probabilities(spec, x)
    return acc


def mixture_probability_matrix(specs, alpha, contexts: np.ndarray) -> np.ndarray:
    """Vectorized mixture distribution: (n, d) contexts -> (n, 2) probabilities.

    Accumulates in the same policy order as :func:`mixture_probabilities`.
    """
    alpha = validate_weights(alpha)
    if len(specs) != alpha.size:
        raise ConfigurationError(f"{len(specs)} policies but {alpha.size} mixture weights")
    contexts = np.asarray(contexts, dtype=float)
    acc = np.zeros((contexts.shape[0], N_ACTIONS))
    for a_i, spec in zip(alpha, specs):
        acc += a_i * action_probability_matrix(spec, contexts)
    return acc


def sample_action(dist: np.ndarray, rng: np.random.Generator) -> int:
    """Draw an action index from ``dist`` by inverse CDF; reproducible given the rng state."""
    dist = np.asarray(dist, dtype=float)
    u = rng.random()
    idx = int(np.searchsorted(np.cumsum(dist), u, side="right"))
    return min(idx, dist.size - 1)
