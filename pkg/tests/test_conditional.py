"""Conditional-density tests: normalization, limits, covariances.

The independent normalization oracle is a plain midpoint rule over a wide
box, with no reuse of the Gauss-Hermite machinery under test.
"""

import math
import warnings

import numpy as np
import pytest

from kerrchan import conditional, errors
from kerrchan.channel import ChannelParams, ComplexAmplitude, reduced_coords
from kerrchan.fluctuations import quantum_correction
from kerrchan.trajectories import action_nlo

PAPER = ChannelParams(gamma=1e-3, length=1000.0, noise_density=1.5e-7)


def params_for(snr, mu, rho=1.0, length=1000.0):
    q = rho * rho / snr / length
    gamma = mu / (length * rho * rho)
    return ChannelParams(gamma=gamma, length=length, noise_density=q)


def midpoint_normalization(mu, rho, n, order, half_sigmas=10.0, cells=601):
    """Independent oracle: midpoint rule on a box of +-half_sigmas of the
    widest marginal standard deviation."""
    cov_xx = n / 2.0
    cov_yy = n * (1.0 + 4.0 * mu * mu / 3.0) / 2.0
    half = half_sigmas * math.sqrt(max(cov_xx, cov_yy))
    axis = np.linspace(-half, half, cells)
    step = axis[1] - axis[0]
    x0, y0 = np.meshgrid(axis, axis, indexing="ij")
    vals = conditional.pdf_xy(mu, rho, n, x0, y0, order=order, clamp=False)
    return float(vals.sum() * step * step)


def test_peak_value():
    x = ComplexAmplitude(1.0, 0.0)
    mu = PAPER.nonlinear_phase(1.0)
    y = ComplexAmplitude.from_complex(np.exp(1j * mu))
    expected = 1.0 / (math.pi * PAPER.noise_power * math.sqrt(1 + mu * mu / 3))
    assert conditional.conditional_pdf(x, y, PAPER) == pytest.approx(expected, rel=1e-12)
    assert conditional.peak_density(x, PAPER) == pytest.approx(expected, rel=1e-15)


def test_linear_channel_limit():
    lin = ChannelParams(gamma=0.0, length=1000.0, noise_density=1.5e-7)
    x = ComplexAmplitude(1.0, 0.0)
    rng = np.random.default_rng(2)
    for _ in range(20):
        y = ComplexAmplitude(*(x.value + 0.02 * rng.normal(size=2)))
        full = conditional.conditional_pdf(x, y, lin, order=conditional.NLO)
        ref = conditional.conditional_pdf_linear(x, y, lin)
        assert full == pytest.approx(ref, rel=1e-12)


def test_linear_pdf_values():
    n = PAPER.noise_power
    x = ComplexAmplitude(1.0, 0.0)
    assert conditional.conditional_pdf_linear(x, x, PAPER) == pytest.approx(
        1.0 / (math.pi * n), rel=1e-15)
    y = ComplexAmplitude(1.0 + math.sqrt(n), 0.0)
    assert conditional.conditional_pdf_linear(x, y, PAPER) == pytest.approx(
        math.exp(-1.0) / (math.pi * n), rel=1e-12)


def test_linear_pdf_normalizes():
    lin = ChannelParams(gamma=0.0, length=1000.0, noise_density=1.5e-7)
    x = ComplexAmplitude(1.0, 0.0)
    val = conditional.pdf_normalization(x, lin, order=conditional.LEADING, n_nodes=60)
    assert val == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("snr", [1e2, 1e3, 1e4])
@pytest.mark.parametrize("mu", [0.0, 0.5, 1.0, 2.0])
def test_normalization_both_orders(snr, mu):
    p = params_for(snr, mu)
    x = ComplexAmplitude(1.0, 0.0)
    for order in (conditional.LEADING, conditional.NLO):
        val = conditional.pdf_normalization(x, p, order=order, clamp=False)
        assert val == pytest.approx(1.0, abs=1e-6)


def test_normalization_against_midpoint_oracle():
    for snr, mu in ((1e3, 1.0), (1e2, 2.0)):
        p = params_for(snr, mu)
        x = ComplexAmplitude(1.0, 0.0)
        gh = conditional.pdf_normalization(x, p, order=conditional.NLO, clamp=False)
        mid = midpoint_normalization(mu, 1.0, p.noise_power, conditional.NLO)
        assert gh == pytest.approx(mid, abs=5e-5)
        assert mid == pytest.approx(1.0, abs=5e-5)


def test_clamped_density_nonnegative_everywhere():
    p = params_for(1e2, 2.0)
    n = p.noise_power
    rng = np.random.default_rng(8)
    pts = rng.normal(scale=6 * math.sqrt(n), size=(4000, 2))
    vals = conditional.pdf_xy(2.0, 1.0, n, pts[:, 0], pts[:, 1],
                              order=conditional.NLO, clamp=True)
    assert np.all(vals >= 0.0)
    raw = conditional.nlo_bracket(2.0, 1.0, n, pts[:, 0], pts[:, 1])
    assert raw.min() < 0.0  # the raw bracket does go negative out there


def test_phase_covariance():
    x = ComplexAmplitude(0.9, 0.3)
    y = ComplexAmplitude(0.85, 0.42)
    base = conditional.conditional_pdf(x, y, PAPER)
    rng = np.random.default_rng(3)
    for _ in range(10):
        phi = rng.uniform(-math.pi, math.pi)
        xr = ComplexAmplitude.from_complex(x.value * np.exp(1j * phi))
        yr = ComplexAmplitude.from_complex(y.value * np.exp(1j * phi))
        assert conditional.conditional_pdf(xr, yr, PAPER) == pytest.approx(
            base, rel=1e-11)


def test_nlo_correction_scales_as_inverse_sqrt_snr():
    mu, rho = 1.0, 1.0
    xs, ys = 0.8, -0.5  # fixed in units of sqrt(QL)
    diffs = []
    for n in (1e-3, 1e-3 / 4.0, 1e-3 / 16.0):
        x0, y0 = xs * math.sqrt(n), ys * math.sqrt(n)
        lead = conditional.pdf_xy(mu, rho, n, x0, y0, order=conditional.LEADING)
        nlo = conditional.pdf_xy(mu, rho, n, x0, y0, order=conditional.NLO)
        diffs.append(abs(nlo - lead) / lead)
    expo = [math.log(diffs[i] / diffs[i + 1]) / math.log(4.0) for i in range(2)]
    for e in expo:
        assert e == pytest.approx(0.5, abs=0.05)


def test_delta_limit_moments():
    x = ComplexAmplitude(1.0, 0.0)
    qs = [1.5e-7, 1.5e-7 / 4.0, 1.5e-7 / 16.0]
    out = conditional.delta_limit_check(x, PAPER, qs)
    # moment / (QL) constant in Q at fixed mu (= 1 + 2 mu^2/3)
    mu = PAPER.nonlinear_phase(1.0)
    for q, m2 in out:
        assert m2 / (q * PAPER.length) == pytest.approx(1 + 2 * mu * mu / 3, rel=1e-9)
    # linear fit through the origin within 5 percent
    slope = np.polyfit([q for q, _ in out], [m for _, m in out], 1)[0]
    assert slope * qs[0] == pytest.approx(out[0][1], rel=0.05)


def test_delta_limit_mu0_exact():
    lin = ChannelParams(gamma=0.0, length=1000.0, noise_density=1.5e-7)
    x = ComplexAmplitude(1.0, 0.0)
    (q, m2), = conditional.delta_limit_check(x, lin, [1.5e-7])
    assert m2 == pytest.approx(q * lin.length, rel=1e-10)


def test_peak_grows_as_inverse_q():
    x = ComplexAmplitude(1.0, 0.0)
    p1 = conditional.peak_density(x, PAPER)
    half = ChannelParams(gamma=1e-3, length=1000.0, noise_density=0.75e-7)
    assert conditional.peak_density(x, half) == pytest.approx(2.0 * p1, rel=1e-12)


def test_degenerate_input_error():
    with pytest.raises(errors.DegenerateInputError):
        conditional.conditional_pdf(ComplexAmplitude(0.0, 0.0),
                                    ComplexAmplitude(1.0, 0.0), PAPER)


def test_low_power_warning():
    x = ComplexAmplitude(math.sqrt(5.0 * PAPER.noise_power), 0.0)
    y = ComplexAmplitude.from_complex(x.value)
    with pytest.warns(errors.ChannelValidityWarning):
        conditional.conditional_pdf(x, y, PAPER)


def test_no_warning_in_regime():
    x = ComplexAmplitude(1.0, 0.0)
    y = ComplexAmplitude.from_complex(x.value * np.exp(1j))
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        conditional.conditional_pdf(x, y, PAPER)


def test_nlo_consistent_with_action_and_prefactor():
    """exp(-S_nlo) times the pre-exponential bracket reproduces the printed
    density up to the next (quadratic-in-correction) order."""
    p = params_for(1e4, 1.0)
    n = p.noise_power
    x = ComplexAmplitude(1.0, 0.0)
    rng = np.random.default_rng(12)
    for _ in range(30):
        dy = rng.normal(scale=math.sqrt(n), size=2)
        y = ComplexAmplitude.from_complex(
            (1.0 + dy[0] + 1j * dy[1]) * np.exp(1j * 1.0))
        rc = reduced_coords(x, y, p)
        composed = math.exp(-action_nlo(rc, 1.0, p)) * quantum_correction(rc, 1.0, p)
        printed = conditional.conditional_pdf(x, y, p, order=conditional.NLO, clamp=False)
        # both agree with each other to the square of the correction size
        assert composed == pytest.approx(printed, rel=5e-3)
