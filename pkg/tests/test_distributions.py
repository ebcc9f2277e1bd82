import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from core.distributions import (
    balayage,
    from_json,
    from_probs,
    make_finite_dist,
    mean_excess,
    mean_excess_array,
    mix_with_zero,
    parse_dist_spec,
    point_mass,
    random_finite_dist,
    solve_c_alpha,
    tail_stats,
    two_point,
)
from core.poisson_stopping import expected_max
from tests.strategies import finite_dists, horizons


def _direct_excess(d, c):
    return math.fsum(p * max(a - c, 0.0) for a, p in zip(d.atoms, d.probs))


def test_make_finite_dist_sorts_merges_and_normalizes():
    d = make_finite_dist([3.0, 1.0, 1.0 + 1e-14, 2.0], [2.0, 1.0, 1.0, 0.0])
    assert d.atoms == (1.0, 3.0)
    assert d.probs == pytest.approx((0.5, 0.5))
    assert math.fsum(d.probs) == 1.0


@pytest.mark.parametrize("atoms, weights", [
    ([-1.0, 2.0], [0.5, 0.5]),
    ([float('nan')], [1.0]),
    ([1.0, 2.0], [0.0, 0.0]),
    ([1.0, 2.0], [1.0, -0.5]),
    ([], []),
    ([1.0], [0.5, 0.5]),
])
def test_make_finite_dist_rejects_bad_input(atoms, weights):
    with pytest.raises(ValueError):
        make_finite_dist(atoms, weights)


def test_point_mass_at_zero_only_allowed_for_internal_laws():
    with pytest.raises(ValueError):
        point_mass(0.0)
    d = make_finite_dist([0.0], [1.0], observation=False)
    assert d.mean == 0.0


def test_from_probs_requires_unit_sum():
    with pytest.raises(ValueError):
        from_probs([1.0, 2.0], [0.5, 0.6])
    assert from_probs([1.0, 2.0], [0.25, 0.75]).mean == pytest.approx(1.75)


def test_two_point_rejects_bad_probability():
    with pytest.raises(ValueError):
        two_point(0.0, 1.0, 0.0)
    with pytest.raises(ValueError):
        two_point(0.0, 1.0, 1.5)


def test_tail_stats_three_point(three_point):
    stats = tail_stats(three_point)
    assert stats.levels == (0.0, 0.5, 1.0, 3.0)
    assert stats.r == pytest.approx((1.0, 0.5, 0.2))
    assert stats.mu == pytest.approx((1.15, 0.65, 0.4, 0.0))
    assert stats.etail == pytest.approx((1.15, 1.8, 3.0))
    assert three_point.mean == pytest.approx(1.15)


def test_mean_excess_known_value(unit_two_point):
    assert mean_excess(unit_two_point, 0.5) == pytest.approx(0.05, abs=1e-15)
    assert mean_excess(unit_two_point, 0.0) == pytest.approx(unit_two_point.mean)
    assert mean_excess(unit_two_point, 1.0) == 0.0
    assert mean_excess(unit_two_point, 7.0) == 0.0


def test_mean_excess_rejects_negative_threshold(unit_two_point):
    with pytest.raises(ValueError):
        mean_excess(unit_two_point, -0.1)
    with pytest.raises(ValueError):
        mean_excess_array(unit_two_point, np.array([0.1, -0.1]))


@settings(max_examples=60, deadline=None)
@given(d=finite_dists(), fractions=st.lists(st.floats(min_value=0.0, max_value=1.2), min_size=1, max_size=8))
def test_mean_excess_matches_direct_sum(d, fractions):
    cs = [f * d.max_atom for f in fractions]
    array = mean_excess_array(d, np.array(cs))
    for c, vectorized in zip(cs, array):
        expected = _direct_excess(d, c)
        assert mean_excess(d, c) == pytest.approx(expected, rel=1e-9, abs=1e-12 * d.max_atom)
        assert vectorized == pytest.approx(expected, rel=1e-9, abs=1e-12 * d.max_atom)


@settings(max_examples=60, deadline=None)
@given(d=finite_dists(), alpha=st.floats(min_value=1e-3, max_value=50.0))
def test_solve_c_alpha_balances_excess(d, alpha):
    c = solve_c_alpha(d, alpha)
    assert 0.0 <= c <= d.max_atom * (1 + 1e-12)
    assert mean_excess(d, c) == pytest.approx(alpha * c, rel=1e-9, abs=1e-12 * d.max_atom)


def test_balayage_keeps_mean_and_spreads_mass(three_point):
    swept = balayage(three_point, 0.5, 3.0)
    assert swept.atoms == (0.5, 3.0)
    assert swept.mean == pytest.approx(three_point.mean)
    # the middle atom sends 0.8 of its mass down and 0.2 up
    assert swept.probs == pytest.approx((0.5 + 0.24, 0.2 + 0.06))
    for c in np.linspace(0.0, 3.0, 31):
        assert mean_excess(swept, c) >= mean_excess(three_point, c) - 1e-12


def test_balayage_leaves_outside_atoms(three_point):
    swept = balayage(three_point, 0.75, 2.0)
    assert swept.atoms == (0.5, 0.75, 2.0, 3.0)
    assert swept.mean == pytest.approx(three_point.mean)


@settings(max_examples=60, deadline=None)
@given(d=finite_dists(min_atoms=2), t=horizons, data=st.data())
def test_balayage_raises_expected_max(d, t, data):
    i = data.draw(st.integers(min_value=0, max_value=d.n - 2))
    j = data.draw(st.integers(min_value=i + 1, max_value=d.n - 1))
    swept = balayage(d, d.atoms[i], d.atoms[j])
    assert expected_max(swept, t) >= expected_max(d, t) - 1e-10 * d.max_atom


@settings(max_examples=60, deadline=None)
@given(d=finite_dists(min_atoms=2), data=st.data())
def test_balayage_keeps_tail_at_lower_endpoint(d, data):
    i = data.draw(st.integers(min_value=0, max_value=d.n - 2))
    j = data.draw(st.integers(min_value=i + 1, max_value=d.n - 1))
    c = d.atoms[i]
    swept = balayage(d, c, d.atoms[j])
    assert swept.tail_prob(c) == pytest.approx(d.tail_prob(c), rel=1e-9)
    assert swept.cond_tail_mean(c) == pytest.approx(d.cond_tail_mean(c), rel=1e-9)


def test_balayage_rejects_empty_interval(three_point):
    with pytest.raises(ValueError):
        balayage(three_point, 2.0, 1.0)


def test_mix_with_zero(three_point):
    mixed = mix_with_zero(three_point, 0.4)
    assert mixed.atoms[0] == 0.0
    assert mixed.probs[0] == pytest.approx(0.6)
    assert mixed.mean == pytest.approx(0.4 * three_point.mean)
    assert mix_with_zero(three_point, 1.0) is three_point


def test_values_from_uniforms_inverse_cdf(three_point):
    u = np.array([0.0, 0.4999, 0.5, 0.79, 0.81, 0.999999, 1.0])
    assert three_point.values_from_uniforms(u).tolist() == [0.5, 0.5, 1.0, 1.0, 3.0, 3.0, 3.0]


def test_sample_frequencies(three_point, rng):
    draws = three_point.sample(rng, 200_000)
    for atom, p in zip(three_point.atoms, three_point.probs):
        freq = np.mean(draws == atom)
        assert abs(freq - p) < 4 * math.sqrt(p * (1 - p) / draws.size)


def test_spec_and_json_round_trip(three_point):
    assert parse_dist_spec(three_point.to_spec()) == three_point
    assert from_json(three_point.to_json()) == three_point
    assert from_json('{"atoms": [0.5, 1, 3], "probs": [0.5, 0.3, 0.2]}') == three_point


@pytest.mark.parametrize("text", ["", "1:0.5:0.5", "a:1", "1", "1:0.4,2:0.4"])
def test_parse_dist_spec_rejects_malformed(text):
    with pytest.raises(ValueError):
        parse_dist_spec(text)


def test_from_json_requires_keys():
    with pytest.raises(ValueError):
        from_json({'atoms': [1.0]})


def test_random_finite_dist_ranges(rng):
    for _ in range(50):
        d = random_finite_dist(rng, 2, 8, 1e-3, 1e3)
        assert 1 <= d.n <= 8
        assert 1e-3 <= d.min_atom and d.max_atom <= 1e3
    d = random_finite_dist(rng, 3, 3, support=(0.0, 1.0))
    assert d.max_atom <= 1.0
