import math

import pytest

from core.hill_kertz import (
    DIFFERENCE,
    RATIO,
    alpha_zero,
    alpha_zero_integral,
    constants_rows,
    eta,
    extremal_zero_atom,
    hk_constants,
    phi,
    solve_alpha_n,
    solve_beta_n,
    constants_table,
)

# Published table, five decimals
HK_TABLE = {
    2: (0.17157, 0.06250),
    3: (0.22138, 0.07761),
    4: (0.24811, 0.08539),
    5: (0.26496, 0.09020),
    6: (0.27659, 0.09348),
    7: (0.28513, 0.09586),
    8: (0.29166, 0.09768),
    9: (0.29683, 0.09911),
    10: (0.30101, 0.10027),
    100: (0.33716, 0.11010),
    10_000: (0.34144, 0.11125),
}
TABLE_TOL = 1e-5


def test_phi_and_eta_small_cases():
    assert phi(2, 0.25, 0.5) == pytest.approx(1.5)
    assert phi(3, 0.0, 0.4) == pytest.approx(0.2)
    assert eta(0, 2, 0.3) == pytest.approx(0.3)
    assert eta(1, 2, 3 - 2 * math.sqrt(2)) == pytest.approx(1.0)


def test_phi_rejects_bad_arguments():
    with pytest.raises(ValueError):
        phi(1, 0.5, 0.5)
    with pytest.raises(ValueError):
        phi(3, -0.1, 0.5)
    with pytest.raises(ValueError):
        eta(-1, 3, 0.2)


def test_alpha_2_closed_form():
    # eta_{1,2}(alpha) = 2 sqrt(alpha) + alpha = 1
    assert solve_alpha_n(2) == pytest.approx(3 - 2 * math.sqrt(2), abs=1e-11)
    assert solve_beta_n(2) == pytest.approx(1 / 16, abs=1e-11)


@pytest.mark.parametrize("n", sorted(HK_TABLE))
def test_table_values(n):
    alpha_n, beta_n = HK_TABLE[n]
    assert solve_alpha_n(n) == pytest.approx(alpha_n, abs=TABLE_TOL)
    assert solve_beta_n(n) == pytest.approx(beta_n, abs=TABLE_TOL)


@pytest.mark.slow
def test_table_values_million():
    assert solve_alpha_n(1_000_000) == pytest.approx(0.34149, abs=TABLE_TOL)
    assert solve_beta_n(1_000_000) == pytest.approx(0.11126, abs=TABLE_TOL)


def test_roots_satisfy_defining_equations():
    for n in (3, 7, 25):
        a = solve_alpha_n(n)
        assert eta(n - 1, n, a) == pytest.approx(1.0, abs=1e-9)
        b = solve_beta_n(n)
        assert (n - 1) * (eta(n, n, b) - eta(n - 1, n, b)) == pytest.approx(1.0, abs=1e-8)


def test_constants_increase_with_n():
    ns = [2, 3, 4, 5, 8, 10, 30, 100]
    alphas = [solve_alpha_n(n) for n in ns]
    betas = [solve_beta_n(n) for n in ns]
    assert alphas == sorted(alphas)
    assert betas == sorted(betas)
    assert all(b < a for a, b in zip(alphas, betas))


def test_hk_constants_fields():
    c = hk_constants(8)
    assert c.a_n == pytest.approx(1.29166, abs=TABLE_TOL)
    assert c.b_n == c.beta_n
    rows = constants_table([2, 5])
    assert [r.n for r in rows] == [2, 5]


def test_alpha_zero_limit():
    a0 = alpha_zero()
    assert a0 == pytest.approx(0.34149, abs=TABLE_TOL)
    assert alpha_zero_integral(a0) == pytest.approx(1.0, abs=1e-9)
    assert solve_alpha_n(10_000) < a0 + 1e-6


def test_alpha_zero_integral_decreasing():
    values = [alpha_zero_integral(a) for a in (0.1, 0.2, 0.34, 0.5, 1.0)]
    assert values == sorted(values, reverse=True)
    with pytest.raises(ValueError):
        alpha_zero_integral(0.0)


def test_extremal_zero_atom():
    for n in (2, 8, 100):
        assert extremal_zero_atom(n, RATIO) == pytest.approx((solve_alpha_n(n) / (n - 1)) ** (1 / n))
        assert extremal_zero_atom(n, DIFFERENCE) == pytest.approx((solve_beta_n(n) / (n - 1)) ** (1 / n))
    with pytest.raises(ValueError):
        extremal_zero_atom(5, 'sum')


def test_constants_rows_include_limit():
    rows, a0 = constants_rows([2, 3])
    assert len(rows) == 2
    assert a0 == alpha_zero()
