import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from spectrum_game import numerics as nm

ALPHAS = [2.1, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0, 6.0, 8.0]


# ---------------------------------------------------------------------------
# lambda_star


@pytest.mark.parametrize("alpha", [3.0, 4.0])
def test_lambda_star_matches_grid_scan(alpha):
    # sign change of the residual on a 1e-6 grid
    assert nm.solve_lambda_star(alpha) == pytest.approx(oracles.lambda_star_scan(alpha), abs=1e-6)


def test_lambda_star_reference_values():
    # grid-scan values, rounded
    assert nm.solve_lambda_star(4.0) == pytest.approx(0.504976, abs=1e-6)
    assert nm.solve_lambda_star(3.0) == pytest.approx(0.800208, abs=1e-6)


@pytest.mark.parametrize("alpha", np.round(np.arange(2.1, 8.0001, 0.1), 10))
def test_lambda_star_residual_on_grid(alpha):
    lam = nm.solve_lambda_star(alpha)
    assert abs(float(oracles.eq3_residual(lam, alpha))) <= 1e-10
    assert abs(nm.lambda_star_residual(lam, alpha)) <= 1e-10


@given(st.floats(2.01, 12.0))
@settings(max_examples=60, deadline=None)
def test_lambda_star_residual_property(alpha):
    lam = nm.solve_lambda_star(alpha)
    assert lam > 0
    assert abs(float(oracles.eq3_residual(lam, alpha))) <= 1e-10


def test_phi_strictly_decreasing_to_one():
    x = np.geomspace(1e-6, 1e6, 500)
    y = nm.phi(x)
    assert np.all(np.diff(y) < 0)
    assert y[-1] == pytest.approx(1.0, abs=1e-6)


@pytest.mark.parametrize("alpha", [2.0, 1.5, -3.0, float("nan"), float("inf")])
def test_alpha_precondition(alpha):
    with pytest.raises(ValueError):
        nm.solve_lambda_star(alpha)


# ---------------------------------------------------------------------------
# optimal beta / beta star


def test_beta_star_above_threshold():
    # beta* = lambda*^(-alpha/2) from the grid-scan oracle
    lam = oracles.lambda_star_scan(4.0)
    assert nm.solve_beta_star(10.0, 4.0) == pytest.approx(lam ** -2, rel=1e-5)


def test_beta_star_below_threshold_root():
    # direct maximisation of log(1+b) exp(-N b^(2/alpha))
    b = nm.solve_beta_star(0.3, 4.0)
    _, b_oracle = oracles.fixed_gain(0.3, 4.0)
    assert b == pytest.approx(b_oracle, rel=1e-6)
    lhs = 4.0 / (2 * 0.3 * b ** 0.5)
    rhs = (1 + 1 / b) * math.log1p(b)
    assert lhs == pytest.approx(rhs, rel=1e-10)
    # root bounded by N^(-alpha/2), where the full-access constraint binds
    assert b < 0.3 ** -2.0


@pytest.mark.parametrize("alpha", [2.5, 3.0, 4.0, 6.0])
def test_beta_star_continuous_at_threshold(alpha):
    lam = nm.solve_lambda_star(alpha)
    inside = nm.solve_beta_star(lam * (1 - 1e-9), alpha)
    outside = nm.solve_beta_star(lam * (1 + 1e-9), alpha)
    assert inside == pytest.approx(lam ** (-alpha / 2), rel=1e-6)
    assert outside == pytest.approx(lam ** (-alpha / 2), rel=1e-12)


@given(st.floats(2.05, 8.0), st.floats(1e-3, 1e3))
@settings(max_examples=60, deadline=None)
def test_optimal_beta_maximises_gain(alpha, total):
    gain, _ = oracles.fixed_gain(total, alpha)
    assert nm.fixed_rate_gain(total, alpha) == pytest.approx(gain, rel=1e-9)


def test_optimal_beta_vectorised_matches_scalar():
    totals = np.geomspace(1e-4, 1e4, 41)
    vec = nm.optimal_beta(totals, 3.5)
    scal = np.array([nm.optimal_beta(float(t), 3.5) for t in totals])
    np.testing.assert_allclose(vec, scal, rtol=1e-10)
    np.testing.assert_allclose(nm.fixed_rate_gain(totals, 3.5),
                               oracles.fixed_gain_vec(totals, 3.5), rtol=1e-9)


def test_optimal_beta_decreasing_in_density():
    b = nm.optimal_beta(np.geomspace(1e-3, 1e3, 100), 4.0)
    assert np.all(np.diff(b) < 0)


def test_beta_star_rejects_nonpositive_density():
    with pytest.raises(ValueError):
        nm.solve_beta_star(0.0, 4.0)


# ---------------------------------------------------------------------------
# Variable-rate kernel


@pytest.mark.parametrize("total", [0.1, 1.0, 10.0, 100.0])
@pytest.mark.parametrize("alpha", [2.5, 3.0, 4.0, 5.0, 6.0])
def test_kernel_matches_trapezoid(total, alpha):
    # trapezoid in log x
    assert nm.vr_kernel(total, alpha) == pytest.approx(oracles.kernel(total, alpha), rel=1e-6)
    assert nm.vr_moment(total, alpha) == pytest.approx(oracles.kernel(total, alpha, 1.0), rel=1e-6)


def test_kernel_brute_force_unit_density():
    # plain x-space trapezoid, step 1e-4, tail cut at exponent -40
    assert nm.vr_kernel(1.0, 4.0) == pytest.approx(oracles.kernel_brute(1.0, 4.0), rel=1e-6)


def test_kernel_large_density_asymptote():
    # Gamma(alpha/2 + 1) / S^(alpha/2) at large S
    assert nm.vr_kernel(50.0, 4.0) == pytest.approx(math.gamma(3.0) / 50.0 ** 2, rel=0.05)
    for alpha in [2.5, 3.0, 4.0, 5.0, 6.0]:
        ratio = nm.vr_kernel(1e4, alpha) * 1e4 ** (alpha / 2) / math.gamma(alpha / 2 + 1)
        assert abs(ratio - 1) <= 0.02


def test_kernel_grows_without_bound_near_zero():
    vals = [nm.vr_kernel(s, 4.0) for s in (1e-1, 1e-3, 1e-5, 1e-7)]
    assert all(b > a for a, b in zip(vals, vals[1:]))
    assert vals[-1] > 10


@pytest.mark.parametrize("total", [0.0, -1.0])
def test_kernel_rejects_zero_density(total):
    with pytest.raises(ValueError):
        nm.vr_kernel(total, 4.0)
    with pytest.raises(ValueError):
        nm.vr_moment(total, 4.0)


def test_gamma_accuracy():
    for x in np.linspace(1.0, 6.0, 11):
        assert nm.gamma(float(x)) == pytest.approx(math.exp(math.lgamma(x)), rel=1e-10)
    assert nm.gamma(5.0) == pytest.approx(24.0, rel=1e-14)


# ---------------------------------------------------------------------------
# f ratio properties


def test_f_ratio_matches_quadrature_ratio():
    # ratio of two oracle quadratures
    assert nm.f_ratio(1.0, 2.0, 5.0) == pytest.approx(oracles.f_ratio(1.0, 2.0, 5.0), rel=1e-6)


@pytest.mark.parametrize("alpha", [3.0, 4.0, 6.0])
def test_f_ratio_large_self_limit(alpha):
    # f -> 2/alpha as the own density grows
    assert nm.f_ratio(1e5, 1.0, alpha) == pytest.approx(2.0 / alpha, rel=1e-3)


SGRID = [0.01 * 2 ** k for k in range(15)]


@pytest.mark.parametrize("alpha", [2.2, 3.0, 4.0, 4.5, 6.0, 8.0])
def test_f_diagonal_strictly_decreasing(alpha):
    vals = [nm.f_ratio(s, s, alpha) for s in SGRID]
    assert all(b < a for a, b in zip(vals, vals[1:]))


@pytest.mark.parametrize("alpha", [2.2, 3.0, 4.0, 4.5, 6.0, 8.0])
@pytest.mark.parametrize("s1", [0.05, 1.0, 20.0])
def test_f_increasing_in_other_density(alpha, s1):
    vals = [nm.f_ratio(s1, s2, alpha) for s2 in SGRID]
    assert all(b > a for a, b in zip(vals, vals[1:]))


# ---------------------------------------------------------------------------
# lambda prime and lambda double prime


@pytest.mark.parametrize("alpha", [3.0, 4.0])
def test_lambda_prime_maximises_single_network_utility(alpha):
    # golden-section maximiser of lambda * kernel(lambda)
    assert nm.solve_lambda_prime(alpha) == pytest.approx(oracles.lambda_prime(alpha), rel=1e-6)


@pytest.mark.parametrize("alpha", ALPHAS)
def test_lambda_prime_residual(alpha):
    lam = nm.solve_lambda_prime(alpha)
    assert abs(nm.lambda_prime_residual(lam, alpha)) <= 1e-8
    assert nm.f_ratio(lam, 0.0, alpha) == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize("alpha", [4.5, 5.0, 6.0, 8.0])
def test_lambda_double_prime_matches_bisection(alpha):
    # bisection on f(s, s) - 1 with the oracle kernel
    lam = nm.solve_lambda_double_prime(alpha)
    assert lam == pytest.approx(oracles.lambda_double_prime(alpha), rel=1e-6)
    assert nm.f_ratio(lam, lam, alpha) == pytest.approx(1.0, abs=1e-8)
    assert abs(nm.lambda_double_prime_residual(lam, alpha)) <= 1e-8


@pytest.mark.parametrize("alpha", np.round(np.arange(2.1, 8.0001, 0.1), 10))
def test_lambda_double_prime_defined_iff_alpha_above_four(alpha):
    lam = nm.solve_lambda_double_prime(alpha)
    if alpha <= 4.0:
        assert lam is None
    else:
        assert lam is not None and math.isfinite(lam) and lam > 0


def test_lambda_double_prime_at_four_is_none():
    assert nm.solve_lambda_double_prime(4.0) is None
