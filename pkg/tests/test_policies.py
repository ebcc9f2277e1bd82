import numpy as np
import pytest

from core.poisson_stopping import optimal_value
from policies import (
    CustomPolicy,
    OptimalPolicy,
    PolicyKind,
    PolicySpec,
    ThresholdPolicy,
    create_policy,
    parse_policy,
)


def test_create_policy_by_kind():
    assert isinstance(create_policy(PolicyKind.THRESHOLD, 0.5), ThresholdPolicy)
    assert isinstance(create_policy("threshold", 0.5), ThresholdPolicy)
    custom = create_policy("custom", lambda v, r: v > 1.0, label="above-one")
    assert custom.kind is PolicyKind.CUSTOM
    with pytest.raises(ValueError, match="Unknown policy type"):
        create_policy("greedy")


def test_parse_policy(three_point):
    optimal = parse_policy(" optimal ", three_point)
    assert isinstance(optimal, OptimalPolicy)
    assert optimal.name == "optimal"
    with pytest.raises(ValueError):
        parse_policy("optimal")

    threshold = parse_policy("threshold:0.5")
    assert threshold.c == 0.5
    again = parse_policy(threshold.name)
    assert again.c == threshold.c

    for bad in ("threshold", "threshold:x", "greedy", "threshold:-1"):
        with pytest.raises(ValueError):
            parse_policy(bad, three_point)


def test_optimal_policy_accepts_at_value_curve(three_point):
    policy = OptimalPolicy.for_dist(three_point)
    for remaining in (0.1, 1.0, 4.0):
        v = optimal_value(policy.profile, remaining)
        assert policy.accept(v, remaining)
        assert not policy.accept(0.99 * v, remaining)
    assert "critical times" in policy.description


def test_optimal_accept_array_matches_scalar(three_point):
    policy = OptimalPolicy.for_dist(three_point)
    rng = np.random.default_rng(4)
    values = rng.choice(three_point.atoms, size=(40, 5))
    remaining = rng.uniform(0.0, 6.0, size=(40, 5))
    vectorized = policy.accept_array(values, remaining)
    scalar = np.array([[policy.accept(v, r) for v, r in zip(row_v, row_r)]
                       for row_v, row_r in zip(values, remaining)])
    assert np.array_equal(vectorized, scalar)


def test_optimal_accept_array_clamps_negative_remaining(three_point):
    policy = OptimalPolicy.for_dist(three_point)
    # past the deadline V = 0, so every offer is acceptable
    assert policy.accept_array(np.array([0.5]), np.array([-1.0])).all()


def test_threshold_policy():
    policy = ThresholdPolicy(1.0)
    assert policy.accept(1.0, 0.3)
    assert not policy.accept(0.999, 100.0)
    out = policy.accept_array(np.array([0.5, 1.0, 3.0]), np.zeros(3))
    assert out.tolist() == [False, True, True]
    assert str(policy) == policy.name
    with pytest.raises(ValueError):
        ThresholdPolicy(-0.1)


def test_custom_policy():
    policy = CustomPolicy(lambda v, r: v * r >= 1.0, label="product")
    assert policy.name == "product"
    assert policy.accept(2.0, 0.5)
    assert not policy.accept(2.0, 0.4)
    out = policy.accept_array(np.array([2.0, 2.0, 0.1]), np.array([0.5, 0.4, 100.0]))
    assert out.dtype == bool
    assert out.tolist() == [True, False, True]
    with pytest.raises(ValueError):
        CustomPolicy("not callable")


def test_policy_spec():
    spec = PolicySpec(ThresholdPolicy(0.5), 2.0)
    assert spec.kind is PolicyKind.THRESHOLD
    with pytest.raises(ValueError):
        PolicySpec(ThresholdPolicy(0.5), 0.0)
