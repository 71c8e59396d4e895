"""Entropies, mutual information and comparison baselines.

All quantities are per-sample and in nats.  The leading-order structure
makes the output entropy equal the input entropy, and the conditional
entropy

    H[Y|X] = 1 + log(pi QL) + (1/2) E log(1 + gamma^2 L^2 |X|^4 / 3)

depend on the input only through that logarithmic average, so the mutual
information for the optimal input collapses to the closed form
P lambda0 - log N0 - log(pi e QL).
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import quad
from scipy.special import roots_genlaguerre

from .channel import ChannelParams, intermediate_regime, snr
from .distributions import (
    BetaInput,
    OptimalInput,
    RadialDensity,
    as_radial_density,
    optimal_pdf,
    radial_moment,
    solve_optimal,
)
from .errors import DomainError, QuadratureError
from .special import EULER_GAMMA, digamma, gamma_fn

_GL_ORDER = 200
_GL_CHECK_ORDER = 160
_GL_AGREEMENT = 1e-9


@dataclass(frozen=True)
class MiResult:
    """Mutual information with its two entropy components.

    mi_nats = h_out - h_cond holds by construction.
    """

    power: float
    mi_nats: float
    h_out: float
    h_cond: float
    input_tag: str


def gtilde(power: float, params: ChannelParams) -> float:
    """The nonlinearity strength gamma L P / sqrt(3)."""
    return params.gamma_length * power / math.sqrt(3.0)


@lru_cache(maxsize=64)
def _genlaguerre_rule(order: int, alpha: float):
    x, w = roots_genlaguerre(order, alpha)
    return x, w


def _beta_log_integral(beta: float, gt: float) -> float:
    """int_0^inf e^-tau tau^(beta/2-1) log(1 + 4 gt^2 tau^2 / beta^2) dtau.

    Generalized Gauss-Laguerre of order 200 with a self-check against a
    lower order; falls back to adaptive quadrature when they disagree
    (large gt moves the integrand's knee under the first nodes).
    """
    if gt == 0.0:
        return 0.0
    c = 4.0 * gt * gt / (beta * beta)
    f = lambda t: math.log1p(c * t * t)
    x1, w1 = _genlaguerre_rule(_GL_ORDER, beta / 2.0 - 1.0)
    v1 = float(np.dot(w1, np.log1p(c * x1 * x1)))
    x2, w2 = _genlaguerre_rule(_GL_CHECK_ORDER, beta / 2.0 - 1.0)
    v2 = float(np.dot(w2, np.log1p(c * x2 * x2)))
    if abs(v1 - v2) <= _GL_AGREEMENT * max(abs(v1), 1.0):
        return v1
    knee = beta / (2.0 * gt)
    g = lambda t: math.exp(-t) * t ** (beta / 2.0 - 1.0) * f(t)
    v_lo, e_lo = quad(g, 0.0, min(knee * 50.0, 30.0), limit=400,
                      epsabs=1e-300, epsrel=1e-11, points=[knee])
    v_hi, e_hi = quad(g, min(knee * 50.0, 30.0), np.inf, limit=400,
                      epsabs=1e-300, epsrel=1e-11)
    val, err = v_lo + v_hi, e_lo + e_hi
    if not np.isfinite(val) or (val > 0 and err / val > 1e-7):
        raise QuadratureError("conditional-entropy integral did not converge",
                              value=val, est_error=err)
    return float(val)


def entropy_output_beta(beta: float, power: float) -> float:
    """Leading-order output entropy of the beta family (= input entropy)."""
    if beta <= 0.0 or power <= 0.0:
        raise DomainError("beta and power must be > 0")
    return (math.log(power * (2.0 * math.pi / beta) * gamma_fn(beta / 2.0))
            + beta / 2.0
            + (2.0 - beta) / 2.0 * digamma(beta / 2.0))


def cond_entropy_beta(beta: float, power: float, params: ChannelParams) -> float:
    """Conditional entropy for the beta family input."""
    if beta <= 0.0 or power <= 0.0:
        raise DomainError("beta and power must be > 0")
    gt = gtilde(power, params)
    integral = _beta_log_integral(beta, gt)
    return (math.log(math.pi * math.e * params.noise_power)
            + integral / (2.0 * gamma_fn(beta / 2.0)))


def mi_beta(beta: float, power: float, params: ChannelParams) -> MiResult:
    """Mutual information for a beta-family input."""
    h_out = entropy_output_beta(beta, power)
    h_cond = cond_entropy_beta(beta, power, params)
    return MiResult(power=power, mi_nats=h_out - h_cond, h_out=h_out,
                    h_cond=h_cond, input_tag=f"beta{beta:g}")


def mi_beta_formula(beta: float, power: float, params: ChannelParams) -> float:
    """The same mutual information assembled directly from its printed form."""
    gt = gtilde(power, params)
    gb = gamma_fn(beta / 2.0)
    return (math.log(snr(power, params))
            + math.log(2.0 * gb / beta)
            - _beta_log_integral(beta, gt) / (2.0 * gb)
            + (beta - 2.0) / 2.0 * (1.0 - digamma(beta / 2.0)))


def mi_beta_asymptote(beta: float, params: ChannelParams) -> float:
    """Large-power plateau of the beta-family mutual information."""
    if beta <= 0.0:
        raise DomainError("beta must be > 0")
    n_l2_g = params.noise_density * params.length ** 2 * params.gamma
    if n_l2_g <= 0.0:
        raise DomainError("asymptote needs gamma > 0")
    return (-math.log(n_l2_g)
            - (2.0 - beta) / 2.0
            + math.log(3.0) / 2.0
            - beta / 2.0 * digamma(beta / 2.0)
            + math.log(gamma_fn(beta / 2.0)))


def log_quartic_average(dens: RadialDensity, params: ChannelParams,
                        rtol: float = 1e-10) -> float:
    """2 pi int rho p(rho) log(1 + gamma^2 L^2 rho^4/3) drho."""
    gl = params.gamma_length
    if gl == 0.0:
        return 0.0
    wrapped = RadialDensity(
        pdf=lambda r: dens.pdf(r) * np.log1p(gl * gl * np.asarray(r, dtype=float) ** 4 / 3.0),
        scale=dens.scale,
        origin_exponent=dens.origin_exponent + 4.0,
        label=dens.label,
    )
    return radial_moment(wrapped, 0, rtol=rtol)


def cond_entropy_general(p_in, params: ChannelParams) -> float:
    """Conditional entropy for an arbitrary radial input density."""
    dens = as_radial_density(p_in, params)
    return (1.0 + math.log(math.pi * params.noise_power)
            + 0.5 * log_quartic_average(dens, params))


def entropy_output_general(p_in, params: ChannelParams = None,
                           rtol: float = 1e-10) -> float:
    """Leading-order output entropy: - 2 pi int rho p log p drho.

    The origin behaves like rho^nu log rho for singular families; the
    moment quadrature handles that after desingularization.
    """
    dens = as_radial_density(p_in, params)

    def nlogp(r):
        v = dens.pdf(r)
        arr = np.asarray(v, dtype=float)
        out = np.where(arr > 0.0, -arr * np.log(np.where(arr > 0.0, arr, 1.0)), 0.0)
        return out if out.ndim else float(out)

    wrapped = RadialDensity(pdf=nlogp, scale=dens.scale,
                            origin_exponent=dens.origin_exponent,
                            label=dens.label)
    return radial_moment(wrapped, 0, rtol=rtol)


def mi_general(p_in, params: ChannelParams, power: float = None,
               tag: str = "general") -> MiResult:
    """Mutual information of an arbitrary radial input by quadrature."""
    dens = as_radial_density(p_in, params)
    h_out = entropy_output_general(dens, params)
    h_cond = cond_entropy_general(dens, params)
    if power is None:
        power = radial_moment(dens, 1)
    return MiResult(power=power, mi_nats=h_out - h_cond, h_out=h_out,
                    h_cond=h_cond, input_tag=tag)


def mi_optimal(power: float, params: ChannelParams,
               opt: OptimalInput = None) -> MiResult:
    """Mutual information for the optimal input.

    The value is the closed form P lambda0 - log N0 - log(pi e QL); the
    entropy components are filled in with one auxiliary quadrature that
    cancels exactly in the difference.
    """
    if opt is None:
        opt = solve_optimal(power, params)
    mi = (power * opt.lambda0 - math.log(opt.n0)
          - math.log(math.pi * math.e * params.noise_power))
    dens = as_radial_density(opt, params)
    j = 0.5 * log_quartic_average(dens, params)
    h_cond = 1.0 + math.log(math.pi * params.noise_power) + j
    return MiResult(power=power, mi_nats=mi, h_out=mi + h_cond,
                    h_cond=h_cond, input_tag="optimal")


def mi_optimal_small_power(power: float, params: ChannelParams) -> float:
    """Small-nonlinearity approximation log(1 + SNR) - gtilde^2.

    The unity inside the log is kept for the correct gamma -> 0 limit even
    though it is beyond the accuracy of the expansion.
    """
    gt = gtilde(power, params)
    return math.log1p(snr(power, params)) - gt * gt


def mi_optimal_large_power(power: float, params: ChannelParams) -> float:
    """Large-power (loglog) approximation of the optimal mutual information."""
    gt = gtilde(power, params)
    c = 2.0 * math.exp(-EULER_GAMMA)
    lg = math.log(c * gt)
    if lg <= 1.0:
        raise DomainError("large-power approximation needs log(C gtilde) > 1")
    llg = math.log(lg)
    n_l2_g = params.noise_density * params.length ** 2 * params.gamma
    return (-math.log(n_l2_g) - 1.0 + math.log(3.0) / 2.0 + llg
            + (llg + 1.0 - llg / lg) / lg)


def shannon_capacity(power: float, params: ChannelParams) -> float:
    """log(1 + SNR) of the linear channel with the same noise budget."""
    return math.log1p(snr(power, params))


def prior_bound_baseline(params: ChannelParams) -> float:
    """Earlier half-Gaussian-based capacity bound used for comparison.

    Equals mi_beta_asymptote(1) minus log 2.
    """
    n = params.noise_power
    g_n_l = params.gamma * n * params.length
    if g_n_l <= 0.0:
        raise DomainError("baseline needs gamma > 0")
    return -math.log(g_n_l) + (EULER_GAMMA - 1.0 + math.log(3.0 * math.pi)) / 2.0


def nats_to_bits(x: float) -> float:
    return x / math.log(2.0)


def mi_sweep_row(power: float, params: ChannelParams, inputs=("opt", "beta2", "beta1")):
    """One row of the information sweep; None for non-selected columns.

    Returns a dict with keys power_mw, snr, i_opt, i_beta2, i_beta1,
    i_beta1_asymptote, shannon, prior_bound, status.
    """
    row = {
        "power_mw": power,
        "snr": snr(power, params),
        "i_opt": None,
        "i_beta2": None,
        "i_beta1": None,
        "i_beta1_asymptote": None,
        "shannon": shannon_capacity(power, params),
        "prior_bound": None,
        "status": "ok",
    }
    failures = []
    if params.gamma > 0.0:
        row["i_beta1_asymptote"] = mi_beta_asymptote(1.0, params)
        row["prior_bound"] = prior_bound_baseline(params)
    for name in inputs:
        try:
            if name == "opt":
                row["i_opt"] = mi_optimal(power, params).mi_nats
            elif name == "beta2":
                row["i_beta2"] = mi_beta(2.0, power, params).mi_nats
            elif name == "beta1":
                row["i_beta1"] = mi_beta(1.0, power, params).mi_nats
            else:
                raise ValueError(f"unknown input selector {name!r}")
        except (DomainError, QuadratureError, ValueError) as exc:
            failures.append(f"{name}: {exc}")
    if failures:
        row["status"] = "failed: " + "; ".join(failures)
    return row


def in_regime(power: float, params: ChannelParams) -> bool:
    return intermediate_regime(params).contains(power)
