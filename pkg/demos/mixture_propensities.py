"""How a mixture of logging policies allocates coupons.

Walks a handful of users through three logging policies and their blended
mixture.  The blend is exactly the weight-averaged action distribution, so a
50/50 mix of a random-feature policy (allocation probability = the feature)
and a deterministic threshold rule gives the classic piecewise picture:
P(coupon) = 0.5 * (x0 + 1) above the threshold and 0.5 * x0 below it.

Run:  python3 demos/mixture_propensities.py [--seed 0]
"""

import argparse

import numpy as np

from mixtureopt import (
    COUPON,
    action_probabilities,
    child_rng,
    mixture_probabilities,
    random_feature,
    threshold,
)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    specs = [random_feature(0), threshold(1, 0.5)]
    alpha = np.array([0.5, 0.5])

    print("policies: P(coupon)=x0  |  coupon iff x1 >= 0.5, mixed 50/50\n")
    print(f"{'x0':>6} {'x1':>6} {'random':>8} {'thresh':>8} {'mixture':>9} {'formula':>9}")
    rng = child_rng(args.seed, 0)
    users = rng.random((8, 2))
    # pin the two worked points first so the piecewise formula is visible
    users[0] = (0.3, 0.7)
    users[1] = (0.3, 0.2)
    for x in users:
        p_random = action_probabilities(specs[0], x)[COUPON]
        p_thresh = action_probabilities(specs[1], x)[COUPON]
        p_mix = mixture_probabilities(specs, alpha, x)[COUPON]
        formula = 0.5 * (x[0] + 1.0) if x[1] >= 0.5 else 0.5 * x[0]
        print(
            f"{x[0]:6.3f} {x[1]:6.3f} {p_random:8.3f} {p_thresh:8.3f}"
            f" {p_mix:9.4f} {formula:9.4f}"
        )

    print("\nthe mixture column always equals the piecewise formula:")
    print("  above the threshold the coupon probability is lifted toward 1,")
    print("  below it only the random share can still allocate a coupon.")


if __name__ == "__main__":
    main()
