"""Input distributions and output densities of the per-sample channel.

Two input families are provided: the modified-Gaussian radial family
indexed by beta (beta=1 half-Gaussian, beta=2 Gaussian) and the
capacity-approaching "optimal" family

    p(rho) = N0 exp(-lambda0 rho^2) / sqrt(1 + gamma^2 L^2 rho^4 / 3),

whose (lambda0, N0) are fixed by unit mass and mean power through the
integral g_of_alpha.

Output densities come in three routes that must agree where their
validity overlaps: the closed forms (confluent hypergeometric), the
direct Bessel-kernel integral, and the large-SNR evaluation of the input
density at the back-rotated point.
"""

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq
from scipy.special import gammaln

from .channel import ChannelParams
from .errors import BracketError, DomainError, QuadratureError
from .special import g_of_alpha, g_of_alpha_prime, log_bessel_i0, log_confluent_1f1

_BETA_MAX = 8.0


@dataclass(frozen=True)
class BetaInput:
    """Modified-Gaussian radial input density with shape beta and power P."""

    beta: float
    power: float

    def __post_init__(self):
        if not (0.0 < self.beta <= _BETA_MAX):
            raise DomainError(f"beta must lie in (0, {_BETA_MAX}], got {self.beta}")
        if self.power <= 0.0:
            raise DomainError(f"power must be > 0, got {self.power}")

    @property
    def origin_exponent(self) -> float:
        """Leading power of rho as rho -> 0 (beta - 2; singular below beta=2)."""
        return self.beta - 2.0


@dataclass(frozen=True)
class OptimalInput:
    """Capacity-approaching input density parameters.

    alpha is the root of the constraint equation; lambda0 = gamma L alpha
    / sqrt(3) and n0 = gamma L / (pi sqrt(3) G(alpha)).  gaussian_limit
    marks the exact gamma = 0 fallback (lambda0 = 1/P, n0 = 1/(pi P)).
    """

    alpha: float
    lambda0: float
    n0: float
    power: float
    gaussian_limit: bool = False


@dataclass(frozen=True)
class RadialDensity:
    """Uniform adapter for radial densities over the complex plane.

    pdf maps rho (mW^(1/2)) to a density per d^2 (1/mW).  scale is a
    support hint (the rho beyond which the density is negligible);
    origin_exponent the leading power of rho at the origin, used to
    desingularize quadratures.
    """

    pdf: Callable
    scale: float
    origin_exponent: float = 0.0
    label: str = ""


def beta_pdf(d: BetaInput, rho):
    """Density of the beta family at radius rho (per d^2).

    For beta < 2 the origin is an integrable singularity; rho = 0 returns
    +inf there.  Vectorized over rho.
    """
    rho = np.asarray(rho, dtype=float)
    if np.any(rho < 0.0):
        raise DomainError("rho must be >= 0")
    b, p = d.beta, d.power
    lognorm = -math.log(math.pi) - float(gammaln(b / 2.0)) - (b / 2.0) * math.log(2.0 * p / b)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.exp(-b * rho * rho / (2.0 * p) + (b - 2.0) * np.log(rho) + lognorm)
    if b < 2.0:
        out = np.where(rho == 0.0, np.inf, out)
    elif b > 2.0:
        out = np.where(rho == 0.0, 0.0, out)
    else:
        out = np.where(rho == 0.0, math.exp(lognorm), out)
    return float(out) if out.ndim == 0 else out


def optimal_pdf(d: OptimalInput, params: ChannelParams, rho):
    """Density of the optimal family at radius rho (per d^2)."""
    rho = np.asarray(rho, dtype=float)
    if np.any(rho < 0.0):
        raise DomainError("rho must be >= 0")
    gl = params.gamma_length
    out = d.n0 * np.exp(-d.lambda0 * rho * rho) / np.sqrt(1.0 + gl * gl * rho ** 4 / 3.0)
    return float(out) if out.ndim == 0 else out


def as_radial_density(dist, params: Optional[ChannelParams] = None) -> RadialDensity:
    """Wrap a BetaInput or OptimalInput as a RadialDensity."""
    if isinstance(dist, RadialDensity):
        return dist
    if isinstance(dist, BetaInput):
        return RadialDensity(
            pdf=lambda r, _d=dist: beta_pdf(_d, r),
            scale=math.sqrt(2.0 * dist.power / dist.beta) * (1.0 + math.sqrt(dist.beta)),
            origin_exponent=dist.origin_exponent,
            label=f"beta{dist.beta:g}",
        )
    if isinstance(dist, OptimalInput):
        if params is None:
            raise ValueError("OptimalInput needs channel params to evaluate")
        return RadialDensity(
            pdf=lambda r, _d=dist: optimal_pdf(_d, params, r),
            scale=math.sqrt(max(dist.power, 1.0 / max(dist.lambda0, 1e-300))),
            origin_exponent=0.0,
            label="optimal",
        )
    raise TypeError(f"cannot adapt {type(dist).__name__} to RadialDensity")


def radial_moment(dens: RadialDensity, k: int = 0, rtol: float = 1e-11) -> float:
    """2 pi * int rho^(2k+1) pdf(rho) drho, computed in tau = rho^2.

    The origin singularity rho^nu is removed exactly by the further
    substitution u = tau^((nu + 2k + 2)/2) before quadrature.
    """
    nu = dens.origin_exponent + 2 * k
    s = (nu + 2.0) / 2.0
    if s <= 0.0:
        raise DomainError("moment integral diverges at the origin")
    scale_tau = dens.scale ** 2

    def integrand_u(u):
        tau = u ** (1.0 / s)
        r = math.sqrt(tau)
        val = dens.pdf(r) * tau ** k
        # d tau = (1/s) u^(1/s - 1) du; the u^(1/s-1) factor cancels the
        # origin singularity of pdf * tau^k by construction
        return math.pi * val * (1.0 / s) * u ** (1.0 / s - 1.0)

    u_cut = (8.0 * scale_tau) ** s
    # anchor the subdivision: in u coordinates the density's bulk collapses
    # toward the lower end when s > 1
    anchors = sorted({min(max((f * scale_tau) ** s, u_cut * 1e-12), u_cut * (1 - 1e-12))
                      for f in (0.01, 0.1, 0.5, 1.0, 2.0, 4.0)})
    v1, e1 = quad(integrand_u, 0.0, u_cut, limit=400, epsabs=0.0, epsrel=rtol,
                  points=anchors)
    f_tau = lambda t: math.pi * dens.pdf(math.sqrt(t)) * t ** k
    v2, e2 = quad(f_tau, 8.0 * scale_tau, np.inf, limit=400, epsabs=1e-300, epsrel=rtol)
    val, err = v1 + v2, e1 + e2
    if not np.isfinite(val):
        raise QuadratureError("radial moment quadrature failed", value=val, est_error=err)
    return float(val)


def solve_optimal(power: float, params: ChannelParams) -> OptimalInput:
    """Fit (alpha, lambda0, n0) of the optimal input at the given power.

    Solves d/da log G(a) = -gamma L P / sqrt(3) by bracketed root finding
    (the left side is strictly increasing).  gamma = 0 returns the exact
    Gaussian limit with a flag.
    """
    if power <= 0.0:
        raise DomainError(f"power must be > 0, got {power}")
    gl = params.gamma_length
    if gl == 0.0:
        return OptimalInput(alpha=math.inf, lambda0=1.0 / power,
                            n0=1.0 / (math.pi * power), power=power,
                            gaussian_limit=True)
    gtilde = gl * power / math.sqrt(3.0)

    def f(a):
        return g_of_alpha_prime(a) / g_of_alpha(a) + gtilde

    # f is increasing from -inf to gtilde; expand to a sign change
    hi = 1.0
    tries = 0
    while f(hi) < 0.0:
        hi *= 2.0
        tries += 1
        if tries > 200:
            raise BracketError("no sign change while expanding upward", bracket=(1.0, hi))
    lo = min(hi / 2.0, 1.0)
    tries = 0
    while f(lo) > 0.0:
        lo /= 2.0
        tries += 1
        if lo < 1e-12 or tries > 200:
            if f(1e-12) > 0.0:
                raise BracketError("no sign change down to alpha = 1e-12", bracket=(1e-12, hi))
            lo = 1e-12
            break
    alpha = brentq(f, lo, hi, rtol=1e-12, maxiter=200)
    lambda0 = gl * alpha / math.sqrt(3.0)
    n0 = gl / (math.pi * math.sqrt(3.0) * g_of_alpha(alpha))
    return OptimalInput(alpha=float(alpha), lambda0=float(lambda0), n0=float(n0), power=power)


def beta_output_pdf(d: BetaInput, params: ChannelParams, y_mag: float) -> float:
    """Closed-form output density of the beta family at |Y| = y_mag.

    Evaluated in the log domain so it stays finite for |Y|^2 >> QL.
    Reduces to exp(-|Y|^2/(P+QL))/(pi (P+QL)) at beta = 2 and to the
    Bessel-I0 form at beta = 1.
    """
    if y_mag < 0.0:
        raise DomainError("y_mag must be >= 0")
    b, p = d.beta, d.power
    n = params.noise_power
    zeta = y_mag * y_mag * 2.0 * p / (n * (2.0 * p + b * n))
    logval = (
        log_confluent_1f1(b / 2.0, zeta)
        - y_mag * y_mag / n
        + (b / 2.0) * math.log(b * n / (2.0 * p + b * n))
        - math.log(math.pi * n)
    )
    return float(math.exp(logval))


def output_pdf_integral(p_in, params: ChannelParams, y_mag: float,
                        rtol: float = 1e-10) -> float:
    """Output density by direct quadrature of the Bessel-kernel integral.

    (2 e^{-y^2/QL}/QL) int rho e^{-rho^2/QL} I0(2 rho y/QL) p(rho) drho,
    with the integrand assembled in the log domain and the adaptive
    quadrature centered on the kernel peak at rho ~ |Y|.
    """
    if y_mag < 0.0:
        raise DomainError("y_mag must be >= 0")
    dens = as_radial_density(p_in, params)
    n = params.noise_power
    w = math.sqrt(n / 2.0)

    def log_integrand(r):
        val = dens.pdf(r)
        if val <= 0.0 or r <= 0.0:
            return -np.inf
        return (math.log(2.0 / n) + math.log(r)
                - (r * r + y_mag * y_mag) / n
                + float(log_bessel_i0(2.0 * r * y_mag / n))
                + math.log(val))

    r_peak = max(y_mag, w)
    shift = log_integrand(r_peak)
    if not np.isfinite(shift):
        # hunt for a finite reference point around the peak
        for probe in np.linspace(max(y_mag - 6 * w, w * 1e-3), y_mag + 6 * w, 41):
            cand = log_integrand(probe)
            if np.isfinite(cand) and (not np.isfinite(shift) or cand > shift):
                shift = cand
    f = lambda r: math.exp(min(log_integrand(r), 700.0 + shift) - shift)

    lo = max(0.0, y_mag - 12.0 * w)
    hi = y_mag + 12.0 * w
    pieces = []
    if lo > 0.0:
        pieces.append((0.0, lo, None))
    inner_pts = [y_mag] if lo < y_mag < hi else None
    pieces.append((lo, hi, inner_pts))
    pieces.append((hi, hi + 50.0 * w, None))
    val = 0.0
    err = 0.0
    for a, b, pts in pieces:
        v, e = quad(f, a, b, limit=300, epsabs=1e-300, epsrel=rtol, points=pts)
        val += v
        err += e
    if not np.isfinite(val) or (val > 0 and err / val > 100.0 * rtol):
        raise QuadratureError(
            f"output integral did not converge at |Y|={y_mag} (rel err {err / max(val, 1e-300):.2e})",
            value=val * math.exp(shift),
            est_error=err * math.exp(shift),
        )
    return float(val * math.exp(shift))


def large_snr_output(p_in, params: ChannelParams, y_out) -> float:
    """Laplace-limit output density: the input density at the back-rotated
    point Y exp(-i gamma L |Y|^2).

    Accepts a RadialDensity / BetaInput / OptimalInput (phase rotation
    drops for radial inputs) or a callable density over the complex plane.
    """
    y = complex(getattr(y_out, "value", y_out))
    if callable(p_in) and not isinstance(p_in, RadialDensity):
        rotated = y * np.exp(-1j * params.gamma_length * abs(y) ** 2)
        return float(p_in(rotated))
    dens = as_radial_density(p_in, params)
    return float(dens.pdf(abs(y)))


def _radial_laplacian_terms(d: BetaInput):
    """Exact radial-Laplacian iterates of the beta density.

    The density is c * tau^s * exp(-a tau) in tau = rho^2; the operator
    d^2/drho^2 + (1/rho) d/drho maps the monomial tau^s e^{-a tau} to
    4 s^2 tau^(s-1) - 4a(2s + 1) tau^s + 4 a^2 tau^(s+1), all times the
    same exponential, so iterates stay in the monomial family.
    """
    b, p = d.beta, d.power
    a = b / (2.0 * p)
    lognorm = -math.log(math.pi) - float(gammaln(b / 2.0)) - (b / 2.0) * math.log(2.0 * p / b)
    c0 = math.exp(lognorm)
    return {b / 2.0 - 1.0: c0}, a


def _apply_radial_laplacian(coeffs: dict, a: float) -> dict:
    out = {}
    for s, c in coeffs.items():
        for pw, fac in ((s - 1.0, 4.0 * s * s), (s, -4.0 * a * (2.0 * s + 1.0)), (s + 1.0, 4.0 * a * a)):
            if fac != 0.0:
                out[pw] = out.get(pw, 0.0) + c * fac
    return {pw: c for pw, c in out.items() if c != 0.0}


def _eval_monomials(coeffs: dict, a: float, rho: float) -> float:
    tau = rho * rho
    tot = 0.0
    for s, c in coeffs.items():
        if tau == 0.0:
            if s < 0.0:
                return math.inf
            tot += c if s == 0.0 else 0.0
        else:
            tot += c * tau ** s
    return tot * math.exp(-a * rho * rho)


def hankel_output_expansion(p_in, params: ChannelParams, rho: float,
                            n_terms: int) -> float:
    """Truncated heat-operator form of the output density.

    sum_{n <= n_terms} (QL/4)^n Lap^n p / n!, with Lap the radial
    Laplacian d^2/drho^2 + (1/rho) d/drho.  Beta inputs use exact
    operator iterates; other densities use nested central differences
    (at rho = 0 the regular limit Lap f(0) = 2 f''(0)).
    """
    if n_terms < 0 or n_terms > 3:
        raise DomainError(f"n_terms must be in [0, 3], got {n_terms}")
    n = params.noise_power
    if isinstance(p_in, BetaInput):
        coeffs, a = _radial_laplacian_terms(p_in)
        total = _eval_monomials(coeffs, a, rho)
        fact = 1.0
        for m in range(1, n_terms + 1):
            coeffs = _apply_radial_laplacian(coeffs, a)
            fact *= m
            total += (n / 4.0) ** m / fact * _eval_monomials(coeffs, a, rho)
        return float(total)

    dens = as_radial_density(p_in, params)
    h = max(dens.scale, abs(rho)) * 3e-3

    def lap(f, r):
        if r < h / 2.0:
            # regular limit at the origin: 2 f''(0)
            return 2.0 * (f(r + h) - 2.0 * f(r) + f(abs(r - h))) / (h * h)
        d2 = (f(r + h) - 2.0 * f(r) + f(r - h)) / (h * h)
        d1 = (f(r + h) - f(r - h)) / (2.0 * h)
        return d2 + d1 / r

    total = dens.pdf(rho)
    f_cur = dens.pdf
    fact = 1.0
    for m in range(1, n_terms + 1):
        f_prev = f_cur
        f_cur = (lambda r, g=f_prev: lap(g, r))
        fact *= m
        total += (n / 4.0) ** m / fact * f_cur(rho)
    return float(total)


def input_moments(dist, params: Optional[ChannelParams] = None):
    """(mass, power) of an input distribution by quadrature."""
    dens = as_radial_density(dist, params)
    return radial_moment(dens, 0), radial_moment(dens, 1)
