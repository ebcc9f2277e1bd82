import math

import numpy as np
import pytest
from hypothesis import given, settings

from core.bounds import short_ratio_f
from core.distributions import make_finite_dist, mean_excess
from core.poisson_stopping import expected_max
from core.thresholds import (
    UnreachableThresholdError,
    alpha_star,
    beta_bundle,
    beta_t,
    best_threshold,
    difference_bound,
    endpoint_min_check,
    gamma_t,
    h_t,
    minimax_adversary,
    minimax_guarantee,
    minimax_threshold,
    threshold_gap,
    threshold_value,
    universal_threshold,
)
from tests.strategies import finite_dists, horizons


def test_threshold_value_known(unit_two_point):
    assert threshold_value(unit_two_point, 0.5, 1.0) == pytest.approx(-math.expm1(-0.1))
    # c at or below the smallest atom: accept the first arrival
    assert threshold_value(unit_two_point, 0.0, 1.0) == pytest.approx(
        -math.expm1(-1.0) * unit_two_point.mean
    )


def test_threshold_value_edges(unit_two_point):
    with pytest.raises(UnreachableThresholdError):
        threshold_value(unit_two_point, 1.5, 1.0)
    with pytest.raises(ValueError):
        threshold_value(unit_two_point, -0.5, 1.0)
    with pytest.raises(ValueError):
        threshold_value(unit_two_point, 0.5, 0.0)


def test_best_threshold_prefers_smallest_atom_on_ties():
    # eps makes W at eps equal W at 1
    t = 1.0
    p = 0.3
    q = -math.expm1(-t)
    qp = -math.expm1(-t * p)
    eps = (qp - p * q) / ((1 - p) * q)
    d = make_finite_dist([eps, 1.0], [1 - p, p])
    c, w = best_threshold(d, t)
    assert c == d.atoms[0]
    assert w == pytest.approx(qp)


def test_best_threshold_maximizes_over_atoms(three_point):
    c, w = best_threshold(three_point, 2.0)
    assert c in three_point.atoms
    for atom in three_point.atoms:
        assert threshold_value(three_point, atom, 2.0) <= w * (1 + 1e-12)


def test_gamma_beta_basics():
    assert gamma_t(1.0) == pytest.approx(1 / (1 - math.exp(-1)))
    assert beta_t(1.0) == pytest.approx(0.07794, abs=1e-5)
    bundle = beta_bundle(1.0)
    assert bundle.argmax_x == pytest.approx(math.log(bundle.gamma_t))
    assert h_t(1.0, bundle.argmax_x) == pytest.approx(bundle.beta_t, rel=1e-12)
    with pytest.raises(ValueError):
        gamma_t(0.0)


def test_beta_series_matches_closed_form_near_cutoff():
    t = 0.999e-3
    g = gamma_t(t)
    closed = 1 - (1 + math.log(g)) / g
    assert beta_t(t) == pytest.approx(closed, rel=1e-5)
    assert beta_t(1e-6) == pytest.approx(1e-12 / 8, rel=1e-5)


@pytest.mark.parametrize("t", [0.01, 0.3, 1.0, 5.0, 40.0])
def test_beta_is_max_of_h(t):
    xs = np.linspace(0.0, 1.0, 20001)
    grid_max = max(h_t(t, float(x)) for x in xs)
    assert grid_max <= beta_t(t) * (1 + 1e-9)
    assert grid_max == pytest.approx(beta_t(t), rel=1e-6)


def test_h_rejects_outside_unit_interval():
    with pytest.raises(ValueError):
        h_t(1.0, 1.5)


def test_minimax_threshold_value():
    assert minimax_threshold(0.0, 1.0, 1.0) == pytest.approx(0.1098, abs=2e-4)
    c_star = minimax_threshold(0.0, 2.0, 1.0)
    assert c_star == pytest.approx(2 * minimax_threshold(0.0, 1.0, 1.0))
    assert minimax_guarantee(0.0, 1.0, 1.0) == pytest.approx(
        (1 - minimax_threshold(0.0, 1.0, 1.0)) * beta_t(1.0)
    )
    # a above c*: the guarantee uses a
    assert minimax_guarantee(0.5, 1.0, 1.0) == pytest.approx(0.5 * beta_t(1.0))


def test_interval_checks():
    with pytest.raises(ValueError):
        minimax_threshold(1.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        difference_bound(-1.0, 1.0, 1.0)


def test_difference_bound_is_min_of_both_forms():
    t = 2.0
    beta = beta_t(t)
    q = -math.expm1(-t)
    assert difference_bound(0.0, 1.0, t) == pytest.approx(beta * q / (beta + q))
    assert difference_bound(0.9, 1.0, t) == pytest.approx(0.1 * beta)


@settings(max_examples=60, deadline=None)
@given(d=finite_dists(min_atoms=2), t=horizons)
def test_minimax_threshold_guarantee_holds(d, t):
    a, b = d.min_atom, d.max_atom
    c_star = minimax_threshold(a, b, t)
    gap = threshold_gap(d, c_star, t) if d.tail_prob(c_star) > 0 else expected_max(d, t)
    assert gap <= minimax_guarantee(a, b, t) * (1 + 1e-9) + 1e-12 * b


@pytest.mark.parametrize("a, b, t", [(0.0, 1.0, 1.0), (0.05, 1.0, 2.0), (0.0, 3.0, 4.0)])
def test_minimax_adversary_nearly_attains_guarantee(a, b, t):
    c_star = minimax_threshold(a, b, t)
    # the adversary against c* itself: X = c* - delta is never accepted
    worst = minimax_adversary(a, b, t, c_star, delta=1e-9)
    gap = expected_max(worst, t)
    assert gap == pytest.approx((c_star - 1e-9) * -math.expm1(-t))
    # and the two-point adversary for a low threshold
    low = minimax_adversary(a, b, t, a)
    assert low.atoms == (a, b)
    assert threshold_gap(low, a, t) >= 0.0


def test_minimax_adversary_guarantee_is_tight_at_c_star():
    a, b, t = 0.0, 1.0, 1.0
    c_star = minimax_threshold(a, b, t)
    guarantee = minimax_guarantee(a, b, t)
    below = minimax_adversary(a, b, t, c_star * (1 - 1e-9))
    above = minimax_adversary(a, b, t, c_star, delta=1e-9)
    gap_below = threshold_gap(below, c_star * (1 - 1e-9), t)
    gap_above = expected_max(above, t)
    assert max(gap_below, gap_above) == pytest.approx(guarantee, rel=1e-6)


def test_minimax_adversary_rejects_bad_delta():
    with pytest.raises(ValueError):
        minimax_adversary(0.0, 1.0, 1.0, 0.5, delta=0.0)


def test_alpha_star_and_universal_threshold(three_point):
    t = 1.5
    a = alpha_star(t)
    q = -math.expm1(-t)
    assert a == pytest.approx(q / (t - q))
    c, w = universal_threshold(three_point, t)
    assert mean_excess(three_point, c) == pytest.approx(a * c, rel=1e-9)
    assert expected_max(three_point, t) / w < short_ratio_f(t)


@settings(max_examples=60, deadline=None)
@given(d=finite_dists(), t=horizons)
def test_universal_threshold_beats_short_range_bound(d, t):
    _, w = universal_threshold(d, t)
    assert expected_max(d, t) / w < short_ratio_f(t) * (1 + 1e-12)


@pytest.mark.parametrize("gamma", [1e-3, 0.1, 1.0, 10.0, 1e3])
def test_endpoint_min_check(gamma):
    assert endpoint_min_check(gamma, 2000)


def test_endpoint_min_check_validates_input():
    with pytest.raises(ValueError):
        endpoint_min_check(0.0)
    with pytest.raises(ValueError):
        endpoint_min_check(1.0, grid=10)
