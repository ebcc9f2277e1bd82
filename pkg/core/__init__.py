"""Core numerics for the Poisson prophet toolkit."""
from .distributions import FiniteDist, TailStats, make_finite_dist, parse_dist_spec, tail_stats
from .hill_kertz import HKConstants, alpha_zero, hk_constants, solve_alpha_n, solve_beta_n
from .poisson_stopping import ValueProfile, expected_max, optimal_value, value_ode, value_profile
from .thresholds import BetaBundle, UnreachableThresholdError, best_threshold, threshold_value
from .bounds import BoundReport, BoundViolationError, verify_sweep
from .renewal import GammaTable, RenewalDist, renewal_optimal_value, renewal_prophet_value
# simulate imports policies, which needs the modules above
from .simulate import SimConfig, SimResult, estimate_policy, estimate_prophet

__all__ = [
    'FiniteDist', 'TailStats', 'make_finite_dist', 'parse_dist_spec', 'tail_stats',
    'HKConstants', 'alpha_zero', 'hk_constants', 'solve_alpha_n', 'solve_beta_n',
    'ValueProfile', 'expected_max', 'optimal_value', 'value_ode', 'value_profile',
    'BetaBundle', 'UnreachableThresholdError', 'best_threshold', 'threshold_value',
    'BoundReport', 'BoundViolationError', 'verify_sweep',
    'GammaTable', 'RenewalDist', 'renewal_optimal_value', 'renewal_prophet_value',
    'SimConfig', 'SimResult', 'estimate_policy', 'estimate_prophet',
]
