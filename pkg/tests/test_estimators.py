import numpy as np
import pytest

from mixtureopt import (
    COUPON,
    NO_COUPON,
    ConfigurationError,
    EstimatorConfig,
    EvalPolicy,
    LoggedDataset,
    NoMatchingSamples,
    RewardModel,
    SupportViolation,
    bips_estimate,
    collect_logs,
    count_support_violations,
    generate_users,
    importance_weights,
    ips_estimate,
    naive_estimate,
    random_feature,
    threshold,
    threshold_complement,
    verify_logged_propensities,
)

ALWAYS_COUPON = EvalPolicy(threshold(0, 0.0))
ERROR_CFG = EstimatorConfig(overlap_mode="error")
CLIP_CFG = EstimatorConfig(overlap_mode="clip", clip_floor=1e-3)


def _two_entry_single_logger():
    # one logger with P(coupon | x) = x[0] = 0.5; entry 0 logged the coupon
    return LoggedDataset(
        contexts=np.array([[0.5], [0.5]]),
        actions=np.array([COUPON, NO_COUPON]),
        rewards=np.array([1.0, 0.5]),
        propensities=np.array([0.5, 0.5]),
        source_policy=np.array([0, 0]),
        weights_at_collection=np.array([1.0]),
    )


def _two_entry_two_loggers():
    # loggers: P(coupon)=x[0] and always-coupon, mixed 50/50, so the mixture
    # gives the coupon probability 0.75 and the no-coupon probability 0.25
    return LoggedDataset(
        contexts=np.array([[0.5], [0.5]]),
        actions=np.array([COUPON, NO_COUPON]),
        rewards=np.array([1.0, 0.5]),
        propensities=np.array([0.75, 0.25]),
        source_policy=np.array([1, 0]),
        weights_at_collection=np.array([0.5, 0.5]),
    )


def test_naive_estimate_matched_entries_only():
    assert naive_estimate(_two_entry_single_logger(), ALWAYS_COUPON) == 1.0


def test_naive_estimate_no_coupon_side():
    data = _two_entry_single_logger()
    eval_never = EvalPolicy(threshold_complement(0, 0.0))
    # selector picks no-coupon everywhere; only entry 1 logged no-coupon
    assert naive_estimate(data, eval_never) == 0.5


def test_naive_estimate_raises_when_nothing_matches():
    data = LoggedDataset(
        contexts=np.array([[0.5]]),
        actions=np.array([NO_COUPON]),
        rewards=np.array([0.5]),
        propensities=np.array([0.5]),
        source_policy=np.array([0]),
        weights_at_collection=np.array([1.0]),
    )
    with pytest.raises(NoMatchingSamples):
        naive_estimate(data, ALWAYS_COUPON)


def test_ips_estimate_hand_computed():
    # weights are [1/0.5, 0]; mean(weight * reward) = 2.0 * 1.0 / 2 = 1.0
    assert ips_estimate(_two_entry_single_logger(), ALWAYS_COUPON, ERROR_CFG) == 1.0


def test_bips_estimate_hand_computed():
    # weights are [1/0.75, 0]; mean(weight * reward) = (4/3) / 2 = 2/3 exactly
    got = bips_estimate(_two_entry_two_loggers(), ALWAYS_COUPON, ERROR_CFG)
    assert got == (1.0 / 0.75) / 2.0


def test_ips_rejects_multi_logger_data():
    with pytest.raises(ConfigurationError):
        ips_estimate(_two_entry_two_loggers(), ALWAYS_COUPON, ERROR_CFG)


def test_bips_equals_ips_bit_for_bit_on_single_logger_data():
    model = RewardModel(1.0, (0.0, 0.6, 0.4, 0.0), 0.25, 0.1)
    rng = np.random.default_rng(31)
    for _ in range(20):
        population = generate_users(200, 4, rng)
        data = collect_logs([random_feature(0)], [1.0], population, model, rng)
        eval_policy = EvalPolicy(threshold(int(rng.integers(0, 4)), float(rng.random())))
        ips = ips_estimate(data, eval_policy, ERROR_CFG)
        bips = bips_estimate(data, eval_policy, ERROR_CFG)
        assert ips == bips


def test_self_evaluation_recovers_mean_reward_exactly():
    # evaluating the logger itself makes every weight exactly 1
    model = RewardModel(1.0, (0.0, 0.6, 0.4, 0.0), 0.25, 0.1)
    rng = np.random.default_rng(13)
    population = 0.98 * generate_users(300, 4, rng) + 0.01
    data = collect_logs([random_feature(0)], [1.0], population, model, rng)
    weights = importance_weights(data, EvalPolicy(random_feature(0)), ERROR_CFG)
    assert np.all(weights == 1.0)
    assert ips_estimate(data, EvalPolicy(random_feature(0)), ERROR_CFG) == np.mean(data.rewards)


def test_estimates_scale_with_rewards():
    data = _two_entry_two_loggers()
    scaled = LoggedDataset(
        contexts=data.contexts,
        actions=data.actions,
        rewards=3.5 * data.rewards,
        propensities=data.propensities,
        source_policy=data.source_policy,
        weights_at_collection=data.weights_at_collection,
    )
    base = bips_estimate(data, ALWAYS_COUPON, ERROR_CFG)
    assert bips_estimate(scaled, ALWAYS_COUPON, ERROR_CFG) == pytest.approx(3.5 * base, rel=1e-12)


def test_clipping_never_raises_weights():
    model = RewardModel(1.0, (0.0, 0.6, 0.4, 0.0), 0.25, 0.0)
    rng = np.random.default_rng(19)
    population = generate_users(400, 4, rng)
    data = collect_logs([random_feature(0), threshold(1, 0.5)], [0.5, 0.5], population, model, rng)
    eval_policy = EvalPolicy(threshold(1, 0.5))
    previous = importance_weights(data, eval_policy, EstimatorConfig("clip", 1e-6))
    for floor in (1e-3, 1e-2, 1e-1):
        current = importance_weights(data, eval_policy, EstimatorConfig("clip", floor))
        assert np.all(current <= previous)
        previous = current


def test_clip_and_error_agree_when_support_is_fine():
    data = _two_entry_two_loggers()
    w_err = importance_weights(data, ALWAYS_COUPON, ERROR_CFG)
    w_clip = importance_weights(data, ALWAYS_COUPON, EstimatorConfig("clip", 1e-3))
    assert np.array_equal(w_err, w_clip)


def test_error_mode_raises_on_zero_propensity_support_gap():
    data = LoggedDataset(
        contexts=np.array([[0.5]]),
        actions=np.array([COUPON]),
        rewards=np.array([1.0]),
        propensities=np.array([0.0]),
        source_policy=np.array([0]),
        weights_at_collection=np.array([1.0]),
    )
    with pytest.raises(SupportViolation):
        importance_weights(data, ALWAYS_COUPON, ERROR_CFG)
    # clip mode floors the denominator instead of raising
    w = importance_weights(data, ALWAYS_COUPON, CLIP_CFG)
    assert w[0] == 1.0 / CLIP_CFG.clip_floor


def test_zero_eval_probability_wins_over_zero_propensity():
    # the evaluation policy never takes the logged action, so the entry simply
    # contributes weight 0 and no support error fires
    data = LoggedDataset(
        contexts=np.array([[0.5]]),
        actions=np.array([NO_COUPON]),
        rewards=np.array([1.0]),
        propensities=np.array([0.0]),
        source_policy=np.array([0]),
        weights_at_collection=np.array([1.0]),
    )
    assert importance_weights(data, ALWAYS_COUPON, ERROR_CFG)[0] == 0.0


def test_support_violation_count_deterministic_opposition():
    # a lone deterministic logger can never produce the complement policy's
    # preferred action, so every context violates overlap
    rng = np.random.default_rng(23)
    contexts = 0.98 * rng.random((50, 2)) + 0.01
    eval_policy = EvalPolicy(threshold_complement(0, 0.5))
    n_bad = count_support_violations([threshold(0, 0.5)], [1.0], contexts, eval_policy)
    assert n_bad == 50
    # adding any random-feature traffic restores full support
    n_ok = count_support_violations(
        [threshold(0, 0.5), random_feature(1)], [0.9, 0.1], contexts, eval_policy
    )
    assert n_ok == 0


def test_verify_logged_propensities_round_trip():
    model = RewardModel(1.0, (0.0, 0.6, 0.4, 0.0), 0.25, 0.1)
    rng = np.random.default_rng(29)
    population = generate_users(500, 4, rng)
    specs = [random_feature(0), threshold(1, 0.5), threshold(2, 0.5)]
    data = collect_logs(specs, [0.5, 0.3, 0.2], population, model, rng)
    assert verify_logged_propensities(data, specs) == 0.0


def test_eval_policy_selector_breaks_ties_toward_no_coupon():
    x = np.array([0.5, 0.2])
    assert EvalPolicy(random_feature(0)).prob(x, COUPON) == 0.5
    assert EvalPolicy(random_feature(0)).select(x) == NO_COUPON
