"""Entropy and mutual-information tests.

Closed forms are checked against direct -int p log p quadratures and
against each other across independent routes.
"""

import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.optimize import brentq

from kerrchan import distributions as dist
from kerrchan import information as info
from kerrchan.channel import ChannelParams

PAPER = ChannelParams(gamma=1e-3, length=1000.0, noise_density=1.5e-7)
EULER = 0.57721566490153286061


def entropy_quadrature_oracle(pdf, upper):
    """-2 pi int rho p log p drho by tanh-sinh quadrature, which handles the
    integrable endpoint singularity of the sub-Gaussian family heads-on."""
    import mpmath as mp

    def f(rho):
        rho = float(rho)
        if rho == 0.0:
            return mp.mpf(0)
        v = pdf(rho)
        return -2.0 * mp.pi * rho * v * mp.log(v) if v > 0 else mp.mpf(0)

    with mp.workdps(30):
        val = mp.quad(f, [0.0, upper / 16.0, upper / 4.0, upper])
    return float(val)


# -------------------------------------------------------- output entropies

def test_beta2_output_entropy_is_gaussian_entropy():
    for p in (0.3, 1.0, 7.0):
        assert info.entropy_output_beta(2.0, p) == pytest.approx(
            math.log(math.pi * math.e * p), rel=1e-14)


def test_beta1_output_entropy_closed_value():
    p = 1.0
    expected = (math.log(2.0 * math.pi ** 1.5) + 0.5
                - (EULER + 2.0 * math.log(2.0)) / 2.0)
    assert info.entropy_output_beta(1.0, p) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("beta", [0.5, 1.0, 2.0, 3.5])
def test_beta_output_entropy_vs_quadrature(beta):
    p = 1.3
    d = dist.BetaInput(beta=beta, power=p)
    oracle = entropy_quadrature_oracle(lambda r: dist.beta_pdf(d, r),
                                       upper=14.0 * math.sqrt(p))
    assert info.entropy_output_beta(beta, p) == pytest.approx(oracle, abs=1e-8)


def test_entropy_output_general_matches_beta_closed_form():
    d = dist.BetaInput(beta=2.0, power=1.0)
    assert info.entropy_output_general(d, PAPER) == pytest.approx(
        info.entropy_output_beta(2.0, 1.0), abs=1e-8)


# --------------------------------------------------- conditional entropies

def test_cond_entropy_linear_limit():
    lin = ChannelParams(gamma=0.0, length=1000.0, noise_density=1.5e-7)
    expected = math.log(math.pi * math.e * lin.noise_power)
    assert info.cond_entropy_beta(2.0, 1.0, lin) == pytest.approx(expected, rel=1e-14)
    d = dist.BetaInput(beta=1.3, power=2.0)
    assert info.cond_entropy_general(d, lin) == pytest.approx(expected, rel=1e-14)


def test_cond_entropy_integral_slow_growth():
    """The nonlinearity integral grows like 2 log(gtilde) at large gtilde."""
    vals = [info._beta_log_integral(2.0, gt) for gt in (10.0, 100.0, 1000.0)]
    slopes = np.diff(vals) / math.log(10.0)
    assert slopes[1] > slopes[0]  # approaching the limit from below
    assert slopes[1] == pytest.approx(2.0, abs=0.05)


def test_cond_entropy_beta2_two_routes():
    p = 1.0
    d = dist.BetaInput(beta=2.0, power=p)
    assert info.cond_entropy_general(d, PAPER) == pytest.approx(
        info.cond_entropy_beta(2.0, p, PAPER), abs=1e-7)


def test_cond_entropy_beta1_two_routes():
    p = 2.5
    d = dist.BetaInput(beta=1.0, power=p)
    assert info.cond_entropy_general(d, PAPER) == pytest.approx(
        info.cond_entropy_beta(1.0, p, PAPER), abs=1e-7)


def test_gauss_laguerre_fallback_consistency():
    """Large gtilde pushes the integrand knee below the first GL node; the
    fallback must agree with a from-scratch quadrature."""
    for gt in (1.0, 500.0, 2887.0):
        for beta in (1.0, 2.0):
            got = info._beta_log_integral(beta, gt)
            f = lambda t: math.exp(-t) * t ** (beta / 2 - 1) * math.log1p(
                4 * gt * gt * t * t / (beta * beta))
            ref1, _ = quad(f, 0.0, 1.0, limit=500, points=[beta / (2 * gt)])
            ref2, _ = quad(f, 1.0, np.inf, limit=500)
            assert got == pytest.approx(ref1 + ref2, rel=1e-8)


# ------------------------------------------------------ mutual information

def test_mi_identity_and_tag():
    r = info.mi_beta(2.0, 1.0, PAPER)
    assert r.mi_nats == pytest.approx(r.h_out - r.h_cond, abs=1e-12)
    assert r.input_tag == "beta2"


def test_mi_beta_formula_route_agrees():
    for beta in (0.5, 1.0, 2.0, 3.0):
        for p in (0.01, 1.0, 100.0):
            assert info.mi_beta(beta, p, PAPER).mi_nats == pytest.approx(
                info.mi_beta_formula(beta, p, PAPER), abs=1e-10)


def test_mi_gamma_zero_is_shannon_leading_order():
    lin = ChannelParams(gamma=0.0, length=1000.0, noise_density=1.5e-7)
    for p in (0.1, 1.0, 10.0):
        assert info.mi_beta(2.0, p, lin).mi_nats == pytest.approx(
            math.log(p / lin.noise_power), rel=1e-12)
        assert info.mi_optimal(p, lin).mi_nats == pytest.approx(
            math.log(p / lin.noise_power), rel=1e-12)


def test_crossover_gaussian_vs_half_gaussian():
    f = lambda p: info.mi_beta(2.0, p, PAPER).mi_nats - info.mi_beta(1.0, p, PAPER).mi_nats
    crossover = brentq(f, 1.0, 50.0, rtol=1e-10)
    assert 8.0 <= crossover <= 14.0


def test_beta1_asymptote_closed_form():
    expected = (-math.log(PAPER.noise_density * PAPER.gamma * PAPER.length ** 2)
                + math.log(2.0)
                + (math.log(3.0 * math.pi) - 1.0 + EULER) / 2.0)
    assert info.mi_beta_asymptote(1.0, PAPER) == pytest.approx(expected, rel=1e-14)


def test_beta2_asymptote_approached_at_large_power():
    gt = 50.0
    p = gt * math.sqrt(3.0) / PAPER.gamma_length
    a = info.mi_beta_asymptote(2.0, PAPER)
    assert info.mi_beta(2.0, p, PAPER).mi_nats == pytest.approx(a, rel=0.01)


def test_beta1_gap_at_190mw():
    asym = info.mi_beta_asymptote(1.0, PAPER)
    gap = (asym - info.mi_beta(1.0, 190.0, PAPER).mi_nats) / asym
    assert gap == pytest.approx(0.015, abs=0.007)


def test_baseline_differs_by_log2():
    assert (info.mi_beta_asymptote(1.0, PAPER)
            - info.prior_bound_baseline(PAPER)) == pytest.approx(math.log(2.0), rel=1e-13)


def test_mi_optimal_two_routes():
    for p in (0.3, 1.0, 30.0):
        opt = dist.solve_optimal(p, PAPER)
        closed = info.mi_optimal(p, PAPER, opt=opt)
        quadr = info.mi_general(opt, PAPER, power=p, tag="optimal")
        assert closed.mi_nats == pytest.approx(quadr.mi_nats, abs=1e-7)
        assert closed.h_cond == pytest.approx(quadr.h_cond, abs=1e-7)


def test_mi_optimal_small_power_expansion():
    gt = 0.02
    p = gt * math.sqrt(3.0) / PAPER.gamma_length
    exact = info.mi_optimal(p, PAPER).mi_nats
    approx = info.mi_optimal_small_power(p, PAPER)
    snr = p / PAPER.noise_power
    assert abs(exact - approx) <= 3.0 * gt ** 3 + 3.0 / snr


def test_mi_optimal_large_power_expansion():
    gt = 50.0
    p = gt * math.sqrt(3.0) / PAPER.gamma_length
    exact = info.mi_optimal(p, PAPER).mi_nats
    approx = info.mi_optimal_large_power(p, PAPER)
    assert exact == pytest.approx(approx, rel=0.02)


def test_mi_optimal_large_power_domain():
    from kerrchan.errors import DomainError

    with pytest.raises(DomainError):
        info.mi_optimal_large_power(1e-3, PAPER)


def test_optimal_dominates_beta_family():
    powers = np.geomspace(1e-3, 5e3, 25)
    for beta in (0.5, 1.0, 1.5, 2.0, 3.0):
        for p in powers:
            io = info.mi_optimal(float(p), PAPER).mi_nats
            ib = info.mi_beta(beta, float(p), PAPER).mi_nats
            assert io >= ib - 1e-9


def test_shannon_values_and_ordering():
    assert info.shannon_capacity((math.e - 1.0) * PAPER.noise_power, PAPER) == \
        pytest.approx(1.0, rel=1e-12)
    for p in np.geomspace(1e-3, 5e3, 20):
        assert info.shannon_capacity(float(p), PAPER) > info.mi_optimal(float(p), PAPER).mi_nats


def test_mi_nonnegative_and_linear_limit():
    for p in np.geomspace(1e-2, 1e3, 10):
        assert info.mi_optimal(float(p), PAPER).mi_nats > 0.0
    tiny = ChannelParams(gamma=1e-12, length=1000.0, noise_density=1.5e-7)
    p = 1.0
    snr = p / tiny.noise_power
    # approaches log(1 + SNR) up to the 1/SNR accuracy of the expansion
    assert info.mi_optimal(p, tiny).mi_nats == pytest.approx(
        math.log1p(snr), abs=2.0 / snr)


def test_mi_beta_continuous_in_beta():
    p = 1.0
    eps = 1e-6
    lo = info.mi_beta(2.0 - eps, p, PAPER).mi_nats
    hi = info.mi_beta(2.0 + eps, p, PAPER).mi_nats
    at = info.mi_beta(2.0, p, PAPER).mi_nats
    assert at == pytest.approx(0.5 * (lo + hi), abs=1e-5)


def test_nats_to_bits():
    assert info.nats_to_bits(math.log(2.0)) == pytest.approx(1.0, rel=1e-15)


def test_sweep_row_columns_and_status():
    row = info.mi_sweep_row(1.0, PAPER)
    assert row["status"] == "ok"
    assert row["snr"] == pytest.approx(1.0 / 1.5e-4)
    for key in ("i_opt", "i_beta1", "i_beta2", "i_beta1_asymptote",
                "shannon", "prior_bound"):
        assert row[key] is not None
    partial = info.mi_sweep_row(1.0, PAPER, inputs=("beta2",))
    assert partial["i_opt"] is None and partial["i_beta2"] is not None
