"""
Subcommand handlers. Each takes the parsed arguments and returns an OutputEnvelope.
"""
from argparse import Namespace
from pathlib import Path
from typing import Dict, List
import json
import logging
import math

from config import CONSTANTS_TABLE_N
from core.bounds import (
    crossover_time,
    curve_values,
    diff_bound_precise,
    ratio_bound_long,
    sharpness_threshold,
    short_ratio_f,
    short_ratio_g,
    two_point_search,
    verify_sweep,
)
from core.distributions import FiniteDist, from_json, parse_dist_spec
from core.hill_kertz import DIFFERENCE, RATIO, constants_rows
from core.poisson_stopping import expected_max, optimal_value, value_ode, value_profile
from core.renewal import (
    RenewalDist,
    binomial_process_values,
    brute_force_values,
    c_n,
    counterexample_instance,
    counterexample_limits,
    counterexample_metrics,
    explore_counterexamples,
    parse_renewal_spec,
    renewal_sweep,
    renewal_values,
)
from core.simulate import SimConfig, estimate_policy, estimate_prophet
from core.thresholds import (
    best_threshold,
    minimax_guarantee,
    minimax_threshold,
    threshold_gap,
    threshold_value,
    universal_threshold,
)
from policies import PolicySpec, parse_policy, OptimalPolicy, ThresholdPolicy
from utils.parsing import parse_float_grid, parse_int_grid
from .output import OutputEnvelope

logger = logging.getLogger(__name__)


class VerificationFailure(Exception):
    """A sweep found violations; carries the envelope to emit before exiting."""

    def __init__(self, envelope: OutputEnvelope, violations: List[Dict]):
        self.envelope = envelope
        self.violations = violations
        super().__init__(f"{len(violations)} bound violation(s)")


def load_dist(args: Namespace) -> FiniteDist:
    """The law of X from --dist or --dist-file."""
    if getattr(args, 'dist_file', None):
        return from_json(Path(args.dist_file).read_text())
    if getattr(args, 'dist', None):
        return parse_dist_spec(args.dist)
    raise ValueError("A distribution is required: pass --dist or --dist-file")


def cmd_constants(args: Namespace) -> OutputEnvelope:
    ns = parse_int_grid(args.n) if args.n else list(CONSTANTS_TABLE_N)
    rows, alpha0 = constants_rows(ns, args.tol)
    table = [{'n': c.n, 'alpha_n': c.alpha_n, 'beta_n': c.beta_n, 'a_n': c.a_n, 'b_n': c.b_n} for c in rows]
    return OutputEnvelope(
        command='constants',
        parameters={'n': ns, 'tol': args.tol},
        result={'table': table, 'alpha_0': alpha0},
        rows=table + [{'n': 'inf', 'alpha_n': alpha0, 'a_n': 1.0 + alpha0}],
    )


def cmd_value(args: Namespace) -> OutputEnvelope:
    d = load_dist(args)
    profile = value_profile(d)
    rows = []
    for t in parse_float_grid(args.t):
        v = optimal_value(profile, t)
        m = expected_max(d, t)
        rows.append({
            't': t,
            'V_exact': v,
            'V_ode': value_ode(d, t),
            'M': m,
            'ratio': m / v if v > 0 else None,
            'diff': m - v,
        })
    return OutputEnvelope(
        command='value',
        parameters={'dist': d.to_spec(), 't': args.t},
        result={'critical_times': list(profile.critical_times), 'rows': rows},
        rows=rows,
    )


def cmd_threshold(args: Namespace) -> OutputEnvelope:
    d = load_dist(args)
    t = args.t
    m = expected_max(d, t)
    v = optimal_value(value_profile(d), t)
    result = {'t': t, 'M': m, 'V': v}
    if args.minimax:
        a, b = args.minimax
        c = minimax_threshold(a, b, t)
        result.update(rule='minimax', c=c, guarantee=minimax_guarantee(a, b, t))
        w = threshold_value(d, c, t)
    elif args.c is not None:
        c = args.c
        result.update(rule='fixed', c=c)
        w = threshold_value(d, c, t)
    elif args.universal:
        c, w = universal_threshold(d, t)
        result.update(rule='universal', c=c)
    else:
        c, w = best_threshold(d, t)
        result.update(rule='best', c=c)
    result.update(W=w, gap=threshold_gap(d, c, t), ratio=m / w if w > 0 else None, f=short_ratio_f(t))
    return OutputEnvelope(
        command='threshold',
        parameters={'dist': d.to_spec(), 't': t},
        result=result,
        rows=[result],
    )


def _curve_envelope(command: str, names: List[str], grid: str, extra: Dict) -> OutputEnvelope:
    rows = curve_values(names, parse_float_grid(grid))
    return OutputEnvelope(
        command=command,
        parameters={'curves': names, 't': grid},
        result={**extra, 'rows': rows},
        rows=rows,
    )


def cmd_curve(args: Namespace) -> OutputEnvelope:
    return _curve_envelope('curve', args.which.split(','), args.t, {})


def cmd_bounds(args: Namespace) -> OutputEnvelope:
    sharpness = [
        {'n': n, RATIO: sharpness_threshold(n, RATIO), DIFFERENCE: sharpness_threshold(n, DIFFERENCE)}
        for n in parse_int_grid(args.n)
    ]
    extra = {
        'ratio_bound_long': ratio_bound_long(),
        'crossover_time': crossover_time(),
        'precise_difference': {
            't': args.precise_t,
            'n': args.precise_n,
            'bound': diff_bound_precise(args.precise_t, args.precise_n),
        },
        'sharpness': sharpness,
    }
    return _curve_envelope('bounds', args.curve.split(','), args.t_grid, extra)


def cmd_verify(args: Namespace) -> OutputEnvelope:
    horizons = parse_float_grid(args.t)
    reports = verify_sweep(
        count=args.count,
        seed=args.seed,
        horizons=horizons,
        unit_interval=args.unit_interval,
        raise_on_violation=False,
    )
    summary: Dict[str, Dict] = {}
    for report in reports:
        for name, margin in report.margins.items():
            key = 'excess_max' if name.startswith('excess_max') else name
            entry = summary.setdefault(key, {'check': key, 'min_margin': math.inf, 'violations': 0})
            entry['min_margin'] = min(entry['min_margin'], margin)
            entry['violations'] += any(v == name for v in report.violations)
    violations = [r.to_json() for r in reports if r.violated]

    renewal_rows = renewal_sweep(count=args.renewal_count, seed=args.seed) if args.renewal_count else []
    renewal_bad = [r for r in renewal_rows if r['violated']]
    if renewal_rows:
        summary['renewal_M<=2V'] = {
            'check': 'renewal_M<=2V',
            'min_margin': min(2.0 * r['V'] - r['M'] for r in renewal_rows),
            'violations': len(renewal_bad),
        }

    if args.report:
        payload = {'reports': [r.to_json() for r in reports], 'renewal': renewal_rows}
        Path(args.report).write_text(json.dumps(payload, indent=2))
        logger.info(f"Wrote {len(reports)} reports to {args.report}")

    envelope = OutputEnvelope(
        command='verify',
        parameters={'count': args.count, 't': horizons, 'unit_interval': args.unit_interval,
                    'renewal_count': args.renewal_count},
        result={'checks': list(summary.values()), 'instances': len(reports)},
        rows=list(summary.values()),
        seed=args.seed,
    )
    if violations or renewal_bad:
        raise VerificationFailure(envelope, violations + renewal_bad)
    return envelope


def cmd_simulate(args: Namespace) -> OutputEnvelope:
    d = load_dist(args)
    cfg = SimConfig(t=args.t, paths=args.paths, seed=args.seed, antithetic=args.antithetic,
                    block_size=args.block_size, workers=args.workers)
    if args.policy == 'prophet':
        sim = estimate_prophet(d, cfg)
        exact = expected_max(d, args.t)
    else:
        policy = parse_policy(args.policy, d)
        sim = estimate_policy(d, PolicySpec(policy, args.t), cfg)
        if isinstance(policy, OptimalPolicy):
            exact = optimal_value(policy.profile, args.t)
        elif isinstance(policy, ThresholdPolicy):
            exact = threshold_value(d, policy.c, args.t)
        else:
            exact = None
    result = {**sim.to_json(), 'policy': args.policy, 'exact': exact}
    if exact is not None:
        result['agrees'] = sim.agrees_with(exact)
    return OutputEnvelope(
        command='simulate',
        parameters={'dist': d.to_spec(), 't': args.t, 'paths': args.paths, 'block_size': cfg.block_size,
                    'antithetic': args.antithetic, 'policy': args.policy},
        result=result,
        rows=[{**{k: v for k, v in result.items() if k != 'ci95'},
               'ci95_lo': sim.ci95[0], 'ci95_hi': sim.ci95[1], 'block_size': cfg.block_size}],
        seed=args.seed,
    )


def cmd_renewal_values(args: Namespace) -> OutputEnvelope:
    d = load_dist(args)
    n = args.n
    if args.binomial is not None:
        T = RenewalDist.geometric(args.binomial, n)
    elif args.T:
        T = parse_renewal_spec(args.T)
    else:
        raise ValueError("Pass --T or --binomial")
    m, v = renewal_values(T, d, n)
    result = {'n': n, 'T': T.to_spec(), 'M': m, 'V': v, 'ratio': m / v, 'diff': m - v}
    if args.binomial is not None:
        m_iid, v_iid = binomial_process_values(args.binomial, d, n)
        result.update(M_iid=m_iid, V_iid=v_iid)
    if args.brute_force:
        m_bf, v_bf = brute_force_values(T, d, n)
        result.update(M_brute=m_bf, V_brute=v_bf)
    return OutputEnvelope(
        command='renewal values',
        parameters={'dist': d.to_spec(), 'T': T.to_spec(), 'n': n},
        result=result,
        rows=[result],
    )


def cmd_renewal_counterexample(args: Namespace) -> OutputEnvelope:
    n, p, pi = args.n, args.p, args.pi
    closed = counterexample_metrics(n, p, pi)
    T, d = counterexample_instance(n, p, pi)
    m, v = renewal_values(T, d, n)
    d_limit, r_limit = counterexample_limits(n, p, pi)
    result = {
        'n': n, 'p': p, 'pi': pi, 'eps': d.atoms[0],
        'R_n': closed.ratio, 'D_n': closed.difference,
        'R_engine': m / v, 'D_engine': m - v,
        'D_limit_n': d_limit, 'R_limit_pi': r_limit, 'c_n': c_n(n),
    }
    return OutputEnvelope(
        command='renewal counterexample',
        parameters={'n': n, 'p': p, 'pi': pi},
        result=result,
        rows=[result],
    )


def cmd_renewal_explore(args: Namespace) -> OutputEnvelope:
    found = explore_counterexamples(parse_int_grid(args.n), parse_float_grid(args.p), parse_float_grid(args.pi))
    rows = [{'n': r.n, 'p': r.p, 'pi': r.pi, 'R_n': r.ratio, 'D_n': r.difference} for r in found]
    result = {
        'max_ratio': rows[0]['R_n'],
        'max_difference': max(r['D_n'] for r in rows),
        'ratio_above_2': any(r['R_n'] > 2.0 for r in rows),
        'difference_above_quarter': any(r['D_n'] > 0.25 for r in rows),
        'points': len(rows),
    }
    return OutputEnvelope(
        command='renewal explore',
        parameters={'n': args.n, 'p': args.p, 'pi': args.pi},
        result=result,
        rows=rows,
    )


def cmd_explore(args: Namespace) -> OutputEnvelope:
    rows = []
    for t in parse_float_grid(args.t):
        d, ratio = two_point_search(t, args.grid)
        rows.append({
            't': t,
            'best_ratio': ratio,
            'g': short_ratio_g(t),
            'f': short_ratio_f(t),
            'K': d.atoms[-1],
            'p_K': d.probs[-1],
        })
    return OutputEnvelope(
        command='explore',
        parameters={'t': args.t, 'grid': args.grid},
        result={'rows': rows},
        rows=rows,
    )


COMMANDS = {
    'constants': cmd_constants,
    'value': cmd_value,
    'threshold': cmd_threshold,
    'curve': cmd_curve,
    'bounds': cmd_bounds,
    'verify': cmd_verify,
    'simulate': cmd_simulate,
    'renewal values': cmd_renewal_values,
    'renewal counterexample': cmd_renewal_counterexample,
    'renewal explore': cmd_renewal_explore,
    'explore': cmd_explore,
}
