"""Real special functions used by the distribution and information layers.

Everything here is a deterministic pure map: same input, bitwise-same
output.  The heavy lifting is delegated to scipy.special; this module adds
the log-scaled variants needed to keep the output-density formulas finite
at large arguments, and the exponentially-weighted integral

    g_of_alpha(a) = int_0^inf exp(-a z) / sqrt(1 + z^2) dz
                  = (pi/2) * (H0(a) - Y0(a)),

with H0 the Struve function and Y0 the Neumann function of order zero.

Branch cutoffs (chosen by equating truncation-error estimates):
  * g_of_alpha and its derivative switch from the Struve/quadrature route
    to the large-argument series at a >= 30, where the optimally truncated
    remainder is below 1e-13 relative.
  * log_confluent_1f1 switches from scipy's hyp1f1 to the large-z series
    at z > 300, far below the exp overflow near z ~ 709.
"""

from dataclasses import dataclass

import numpy as np
from scipy import special as sp
from scipy.integrate import quad

from .errors import DomainError, QuadratureError

#: Euler-Mascheroni constant, 20 digits.
EULER_GAMMA = 0.57721566490153286061

_G_SERIES_CUTOFF = 30.0
_F11_SERIES_CUTOFF = 300.0


@dataclass(frozen=True)
class SpecialFnResult:
    """Value of a special-function evaluation with an absolute error estimate."""

    value: float
    est_abs_error: float


def _require_finite(x, name="x"):
    if not np.isfinite(x):
        raise DomainError(f"{name} must be finite, got {x!r}")


def bessel_j0(x: float) -> float:
    """Bessel function of the first kind, order zero."""
    _require_finite(x)
    return float(sp.j0(x))


def bessel_y0(x: float) -> float:
    """Bessel function of the second kind (Neumann), order zero; x > 0."""
    _require_finite(x)
    if x <= 0.0:
        raise DomainError(f"bessel_y0 requires x > 0, got {x}")
    return float(sp.y0(x))


def struve_h0(x: float) -> float:
    """Struve function of order zero; x >= 0."""
    _require_finite(x)
    if x < 0.0:
        raise DomainError(f"struve_h0 requires x >= 0, got {x}")
    return float(sp.struve(0, x))


def bessel_i0(x: float) -> float:
    """Modified Bessel function of the first kind, order zero; x >= 0."""
    _require_finite(x)
    if x < 0.0:
        raise DomainError(f"bessel_i0 requires x >= 0, got {x}")
    return float(sp.i0(x))


def log_bessel_i0(x):
    """log I0(x), stable for x up to 1e8 and beyond.

    Accepts scalars or arrays; uses the exponentially scaled i0e so the
    result never overflows.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise DomainError("log_bessel_i0 requires x >= 0")
    out = np.log(sp.i0e(x)) + x
    return float(out) if out.ndim == 0 else out


def gamma_fn(x: float) -> float:
    """Gamma function restricted to x > 0."""
    _require_finite(x)
    if x <= 0.0:
        raise DomainError(f"gamma_fn requires x > 0, got {x}")
    return float(sp.gamma(x))


def digamma(x: float) -> float:
    """Digamma function restricted to x > 0."""
    _require_finite(x)
    if x <= 0.0:
        raise DomainError(f"digamma requires x > 0, got {x}")
    return float(sp.digamma(x))


def log_confluent_1f1(a: float, z: float) -> float:
    """log 1F1(a; 1; z) for a > 0, z >= 0, without overflow.

    For z <= 300 this is the log of scipy's hyp1f1.  Beyond that the
    large-z expansion

        1F1(a; 1; z) ~ e^z z^(a-1)/Gamma(a) * sum_k ((1-a)_k)^2 / (k! z^k)

    is summed to its smallest term; at z > 300 the optimally truncated
    remainder is below e^-300 relative, so the switch is seamless.
    """
    _require_finite(a, "a")
    _require_finite(z, "z")
    if a <= 0.0:
        raise DomainError(f"log_confluent_1f1 requires a > 0, got a={a}")
    if z < 0.0:
        raise DomainError(f"log_confluent_1f1 requires z >= 0, got z={z}")
    if z <= _F11_SERIES_CUTOFF:
        return float(np.log(sp.hyp1f1(a, 1.0, z)))
    s = 1.0
    term = 1.0
    for k in range(60):
        nxt = term * (1.0 - a + k) ** 2 / ((k + 1) * z)
        if abs(nxt) >= abs(term):
            break
        term = nxt
        s += term
        if abs(term) < 1e-18 * abs(s):
            break
    return z + (a - 1.0) * np.log(z) - float(sp.gammaln(a)) + np.log(s)


def confluent_1f1(a: float, z: float) -> float:
    """1F1(a; 1; z) for a > 0, z >= 0.  May overflow for z >~ 700; use
    log_confluent_1f1 in that regime."""
    return float(np.exp(log_confluent_1f1(a, z)))


def _g_series(alpha: float) -> float:
    # sum_k (-1)^k ((2k-1)!!)^2 / alpha^(2k+1), truncated at smallest term
    total = 0.0
    term = 1.0 / alpha
    k = 0
    while k <= 60:
        total += term
        nxt = -term * (2 * k + 1) ** 2 / (alpha * alpha)
        if abs(nxt) >= abs(term) or abs(nxt) < 1e-17 * abs(total):
            break
        term = nxt
        k += 1
    return total


def _g_prime_series(alpha: float) -> float:
    # G'(a) = -sum_k (-1)^k (2k+1) ((2k-1)!!)^2 / alpha^(2k+2)
    total = 0.0
    term = 1.0 / (alpha * alpha)
    k = 0
    while k <= 60:
        total += term
        nxt = -term * (2 * k + 3) * (2 * k + 1) / (alpha * alpha)
        if abs(nxt) >= abs(term) or abs(nxt) < 1e-17 * abs(total):
            break
        term = nxt
        k += 1
    return -total


def g_of_alpha(alpha: float) -> float:
    """G(a) = int_0^inf exp(-a z)/sqrt(1+z^2) dz for a > 0.

    Evaluated as (pi/2)(H0(a) - Y0(a)) below the series cutoff and by the
    large-argument series above it.
    """
    _require_finite(alpha, "alpha")
    if alpha <= 0.0:
        raise DomainError(f"g_of_alpha requires alpha > 0 (integral diverges), got {alpha}")
    if alpha >= _G_SERIES_CUTOFF:
        return _g_series(alpha)
    return float(np.pi / 2 * (sp.struve(0, alpha) - sp.y0(alpha)))


def g_of_alpha_prime(alpha: float) -> float:
    """dG/da = -int_0^inf z exp(-a z)/sqrt(1+z^2) dz, a > 0.

    Computed by its own quadrature (substituting u = a z keeps the
    integrand uniformly tame) rather than by differencing g_of_alpha,
    which would lose digits to cancellation.
    """
    _require_finite(alpha, "alpha")
    if alpha <= 0.0:
        raise DomainError(f"g_of_alpha_prime requires alpha > 0, got {alpha}")
    if alpha >= _G_SERIES_CUTOFF:
        return _g_prime_series(alpha)
    val, err = quad(
        lambda u: u * np.exp(-u) / np.sqrt(alpha * alpha + u * u),
        0.0,
        np.inf,
        limit=200,
        epsabs=0.0,
        epsrel=1e-12,
    )
    if not np.isfinite(val) or (abs(val) > 0 and err / abs(val) > 1e-8):
        raise QuadratureError(
            f"g_of_alpha_prime quadrature did not converge at alpha={alpha}",
            value=-val / alpha,
            est_error=err / alpha,
        )
    return -val / alpha


def g_of_alpha_quadrature(alpha: float) -> SpecialFnResult:
    """Direct adaptive quadrature of the defining integral of G.

    Independent cross-check route for g_of_alpha; returns the value with
    the integrator's absolute error estimate.
    """
    _require_finite(alpha, "alpha")
    if alpha <= 0.0:
        raise DomainError(f"g_of_alpha_quadrature requires alpha > 0, got {alpha}")
    # u = alpha z turns the integrand into exp(-u)/sqrt(alpha^2 + u^2);
    # split at u = alpha where the denominator changes character.
    f = lambda u: np.exp(-u) / np.sqrt(alpha * alpha + u * u)
    cut = min(alpha, 30.0)
    v1, e1 = quad(f, 0.0, cut, limit=300, epsabs=0.0, epsrel=1e-13)
    v2, e2 = quad(f, cut, np.inf, limit=300, epsabs=0.0, epsrel=1e-13)
    val, err = v1 + v2, e1 + e2
    if not np.isfinite(val):
        raise QuadratureError("g quadrature produced non-finite value", value=val, est_error=err)
    return SpecialFnResult(value=float(val), est_abs_error=float(err))
