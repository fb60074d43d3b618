"""Coupon-allocation logging simulator, BIPS off-policy evaluation, and
NSGA-II search over data-collection mixture ratios."""

__version__ = "0.1.0"

from .policies import (
    COUPON,
    NO_COUPON,
    ConfigurationError,
    PolicySpec,
    action_probabilities,
    action_probability_matrix,
    mixture_probabilities,
    mixture_probability_matrix,
    random_feature,
    sample_action,
    threshold,
    threshold_complement,
    validate_weights,
)
from .environment import (
    LoggedDataset,
    RewardModel,
    apportion_counts,
    collect_logs,
    expected_reward,
    expected_reward_matrix,
    generate_users,
    sample_reward,
    true_policy_value,
    write_dataset_csv,
)
from .estimators import (
    EstimatorConfig,
    EvalPolicy,
    NoMatchingSamples,
    SupportViolation,
    bips_estimate,
    count_support_violations,
    importance_weights,
    ips_estimate,
    naive_estimate,
    verify_logged_propensities,
)
from .objectives import (
    ObjectiveVector,
    Scenario,
    alpha_key,
    candidate_report,
    evaluate_candidate,
    ope_error_objective,
    per_policy_revenues,
    replication_estimates,
    revenue_objective,
    true_eval_value,
)
from .config import (
    DEFAULT_CONFIG,
    build_moo_config,
    build_policy,
    build_scenario,
    config_hash,
    load_config,
    parse_alpha,
    resolve_config,
)
from .nsga2 import (
    Individual,
    MooConfig,
    NonFiniteRevenueError,
    Nsga2Result,
    ParetoPoint,
    crowding_distance,
    dominates,
    extract_frontier,
    fast_non_dominated_sort,
    polynomial_mutation,
    run_nsga2,
    sbx_crossover,
    sbx_pair,
    simplex_repair,
)
from .seeding import child_rng
