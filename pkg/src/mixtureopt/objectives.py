"""The two objectives of the mixture-ratio search.

For a mixture ratio alpha over the logging policies:

* revenue objective f_r(alpha) — the exact expected revenue of the mixed
  policy over the fixed population (affine in alpha, no sampling),
* OPE-error objective f_e(alpha) — the mean squared error of the BIPS
  estimate against the true evaluation-policy value, averaged over R
  independently seeded log-collection replications.

``evaluate_candidate`` packages both as a minimization vector
(-f_r, f_e) and memoizes per rounded alpha so an optimizer never pays twice
for duplicate genomes.  Under ``error`` overlap mode a support violation in
any replication maps f_e to +inf rather than raising, so infeasible
candidates stay rankable.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field

import numpy as np

from .policies import ConfigurationError, validate_weights
from .environment import RewardModel, collect_logs, true_policy_value
from .estimators import (
    EstimatorConfig,
    EvalPolicy,
    bips_estimate,
    count_support_violations,
    importance_weights,
    SupportViolation,
)
from .seeding import STREAM_REPLICATION, child_rng

# alphas equal after rounding to 9 decimals share one memoized evaluation
ALPHA_KEY_DECIMALS = 9


@dataclass(frozen=True)
class ObjectiveVector:
    """Minimization objectives (-revenue, OPE MSE); ope_error may be the +inf sentinel."""

    neg_revenue: float
    ope_error: float

    def __post_init__(self):
        if not self.ope_error >= 0.0:
            raise ConfigurationError(f"ope_error must be >= 0 or +inf, got {self.ope_error!r}")


@dataclass(eq=False)
class Scenario:
    """Everything needed to score a mixture ratio: population, policies, model, seeds."""

    population: np.ndarray
    logging_specs: list
    eval_policy: EvalPolicy
    reward_model: RewardModel
    replications: int = 50
    estimator_cfg: EstimatorConfig = field(default_factory=EstimatorConfig)
    master_seed: int = 0
    log_size: int | None = None

    _memo: dict = field(init=False, default_factory=dict, repr=False)
    _memo_lock: threading.Lock = field(init=False, default_factory=threading.Lock, repr=False)
    _v_true_eval: float | None = field(init=False, default=None, repr=False)

    def __post_init__(self):
        self.population = np.asarray(self.population, dtype=float)
        if self.population.ndim != 2 or self.population.shape[0] == 0:
            raise ConfigurationError("population must be a non-empty (n, d) matrix")
        if len(self.logging_specs) < 1:
            raise ConfigurationError("need at least one logging policy")
        if self.replications < 1:
            raise ConfigurationError(f"replications must be >= 1, got {self.replications}")
        if self.log_size is not None and not 1 <= self.log_size <= self.population.shape[0]:
            raise ConfigurationError(
                f"log_size must lie in [1, {self.population.shape[0]}], got {self.log_size}"
            )

    @property
    def n_policies(self) -> int:
        return len(self.logging_specs)

    @property
    def effective_log_size(self) -> int:
        return self.log_size if self.log_size is not None else self.population.shape[0]


def true_eval_value(s: Scenario) -> float:
    """Exact value of the evaluation policy; alpha-independent, computed once."""
    if s._v_true_eval is None:
        s._v_true_eval = true_policy_value(s.eval_policy.spec, s.population, s.reward_model)
    return s._v_true_eval


def per_policy_revenues(s: Scenario) -> np.ndarray:
    """Exact value f_r(e_i) of each logging policy on its own."""
    return np.array(
        [true_policy_value(spec, s.population, s.reward_model) for spec in s.logging_specs]
    )


def revenue_objective(alpha, s: Scenario) -> float:
    """Exact expected revenue of the alpha-mixture; deterministic, seed-free."""
    alpha = validate_weights(alpha, s.n_policies)
    return true_policy_value(s.logging_specs, s.population, s.reward_model, weights=alpha)


def _collect_replication(alpha, s: Scenario, k: int):
    rng = child_rng(s.master_seed, STREAM_REPLICATION, k)
    return collect_logs(
        s.logging_specs, alpha, s.population, s.reward_model, rng, n=s.effective_log_size
    )


def replication_estimates(alpha, s: Scenario) -> np.ndarray:
    """BIPS estimate from each of the R replicated log collections.

    Under ``error`` overlap mode, raises SupportViolation as soon as any
    replication's logged contexts leave an evaluation-policy action without
    mixture support.
    """
    alpha = validate_weights(alpha, s.n_policies)
    check_support = s.estimator_cfg.overlap_mode == "error"
    estimates = np.empty(s.replications)
    for k in range(s.replications):
        data = _collect_replication(alpha, s, k)
        if check_support:
            bad = count_support_violations(s.logging_specs, alpha, data.contexts, s.eval_policy)
            if bad:
                raise SupportViolation(
                    f"replication {k}: {bad} contexts leave evaluation-policy actions unsupported"
                )
        estimates[k] = bips_estimate(data, s.eval_policy, s.estimator_cfg)
    return estimates


def ope_error_objective(alpha, s: Scenario) -> float:
    """Mean squared BIPS error over R replications; +inf on support violation."""
    try:
        estimates = replication_estimates(alpha, s)
    except SupportViolation:
        return float("inf")
    return float(np.mean((estimates - true_eval_value(s)) ** 2))


def evaluate_candidate(alpha, s: Scenario) -> ObjectiveVector:
    """(-f_r(alpha), f_e(alpha)), memoized per rounded alpha and scenario instance."""
    alpha = validate_weights(alpha, s.n_policies)
    key = alpha_key(alpha)
    with s._memo_lock:
        cached = s._memo.get(key)
    if cached is not None:
        return cached
    vec = ObjectiveVector(
        neg_revenue=-revenue_objective(alpha, s),
        ope_error=ope_error_objective(alpha, s),
    )
    with s._memo_lock:
        return s._memo.setdefault(key, vec)


def alpha_key(alpha) -> tuple:
    return tuple(np.round(np.asarray(alpha, dtype=float), ALPHA_KEY_DECIMALS).tolist())


def candidate_report(alpha, s: Scenario) -> dict:
    """Single-candidate diagnostics: objectives, per-policy values, weight extremes.

    ``support_violations`` counts violating logged contexts summed over all
    replications; ``max_importance_weight`` is the largest (clipped, if
    clipping) importance weight seen in any replication.
    """
    alpha = validate_weights(alpha, s.n_policies)
    v_true = true_eval_value(s)
    estimates = np.empty(s.replications)
    violations = 0
    max_weight = 0.0
    for k in range(s.replications):
        data = _collect_replication(alpha, s, k)
        violations += count_support_violations(s.logging_specs, alpha, data.contexts, s.eval_policy)
        weights = importance_weights(data, s.eval_policy, s.estimator_cfg)
        max_weight = max(max_weight, float(weights.max()))
        estimates[k] = float(np.mean(weights * data.rewards))
    if violations and s.estimator_cfg.overlap_mode == "error":
        ope_mse = float("inf")
    else:
        ope_mse = float(np.mean((estimates - v_true) ** 2))
    return {
        "alpha": [float(a) for a in alpha],
        "revenue": revenue_objective(alpha, s),
        "ope_mse": ope_mse,
        "true_eval_value": v_true,
        "per_policy_revenue": [float(v) for v in per_policy_revenues(s)],
        "max_importance_weight": max_weight,
        "support_violations": int(violations),
        "replications": s.replications,
        "log_size": s.effective_log_size,
    }
