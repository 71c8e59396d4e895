"""Analytic conditional density of the output sample given the input.

Leading order is a correlated Gaussian in the reduced coordinates
(x0, y0); next-to-leading order multiplies it by a bracket with terms
linear and cubic in (x0, y0) whose coefficients depend on mu only.  Both
orders integrate to exactly 1 over the output plane (the corrections are
odd and cancel against the even Gaussian).

The NLO bracket is an asymptotic correction and can turn negative deep in
the tails.  By default the density is clamped at zero there (usable in
entropy integrals); pass clamp=False for the raw analytic value, which is
the form whose normalization is exact.
"""

import math
import warnings

import numpy as np

from .channel import ChannelParams, ComplexAmplitude, reduced_coords, zero_noise_output
from .errors import ChannelValidityWarning, DegenerateInputError
from .trajectories import action_quadratic_form

LEADING = "leading"
NLO = "nlo"


def _check_order(order):
    if order not in (LEADING, NLO):
        raise ValueError(f"order must be 'leading' or 'nlo', got {order!r}")


def _warn_validity(power, params):
    n = params.noise_power
    if power < 10.0 * n:
        warnings.warn(
            f"|X|^2 = {power:g} mW is below 10*QL = {10 * n:g} mW; "
            "the high-SNR expansion is unreliable here",
            ChannelValidityWarning,
            stacklevel=3,
        )
    upper = params.gamma ** 2 * params.length ** 3 * params.noise_density * power
    if upper > 0.1:
        warnings.warn(
            f"gamma^2 L^3 Q |X|^2 = {upper:g} exceeds 0.1; "
            "the nonlinear-correction expansion is unreliable here",
            ChannelValidityWarning,
            stacklevel=3,
        )


def pdf_xy(mu, rho, noise_power, x0, y0, order=NLO, clamp=True):
    """Density in the (x0, y0) frame; vectorized over x0, y0.

    The map from the output plane to (x0, y0) is rigid, so this is also
    the density per d^2 Y.
    """
    _check_order(order)
    x0 = np.asarray(x0, dtype=float)
    y0 = np.asarray(y0, dtype=float)
    d = 1.0 + mu * mu / 3.0
    n = noise_power
    quad = ((1.0 + 4.0 * mu * mu / 3.0) * x0 * x0 - 2.0 * mu * x0 * y0 + y0 * y0) / (n * d)
    lead = np.exp(-quad) / (math.pi * n * math.sqrt(d))
    if order == LEADING:
        out = lead
    else:
        br = nlo_bracket(mu, rho, n, x0, y0)
        if clamp:
            br = np.maximum(br, 0.0)
        out = lead * br
    return float(out) if out.ndim == 0 else out


def nlo_bracket(mu, rho, noise_power, x0, y0):
    """Raw NLO multiplier 1 - linear - cubic; may be negative in the tails."""
    x0 = np.asarray(x0, dtype=float)
    y0 = np.asarray(y0, dtype=float)
    d = 1.0 + mu * mu / 3.0
    lin = (mu / rho) / (15.0 * d * d) * (
        mu * (15.0 + mu * mu) * x0 - 2.0 * (5.0 - mu * mu / 3.0) * y0
    )
    cub = (mu / rho) / (135.0 * noise_power * d ** 3) * (
        mu * (4 * mu ** 4 + 15 * mu ** 2 + 225) * x0 ** 3
        + (23 * mu ** 4 + 255 * mu ** 2 - 90) * x0 ** 2 * y0
        + mu * (20 * mu ** 4 + 117 * mu ** 2 - 45) * x0 * y0 ** 2
        - 3 * (5 * mu ** 4 + 33 * mu ** 2 + 30) * y0 ** 3
    )
    out = 1.0 - lin - cub
    return float(out) if out.ndim == 0 else out


def conditional_pdf(x_in: ComplexAmplitude, y_out: ComplexAmplitude,
                    params: ChannelParams, order: str = NLO,
                    clamp: bool = True) -> float:
    """P[Y | X] per d^2 Y at the requested order.

    Warns (ChannelValidityWarning) outside the asymptotic validity region.
    Raises DegenerateInputError for |X| = 0.
    """
    rho = x_in.magnitude
    if rho == 0.0:
        raise DegenerateInputError("conditional_pdf needs |X| > 0")
    _warn_validity(rho * rho, params)
    rc = reduced_coords(x_in, y_out, params)
    return pdf_xy(rc.mu, rho, params.noise_power, rc.x0, rc.y0, order=order, clamp=clamp)


def conditional_pdf_linear(x_in: ComplexAmplitude, y_out: ComplexAmplitude,
                           params: ChannelParams) -> float:
    """Linear-channel density exp(-|Y - X|^2 / QL) / (pi QL)."""
    n = params.noise_power
    dy = y_out.value - x_in.value
    return math.exp(-(dy.real ** 2 + dy.imag ** 2) / n) / (math.pi * n)


def gauss_hermite_frame(mu, noise_power, n_nodes=80):
    """Tensor Gauss-Hermite nodes aligned with the quadratic form's axes.

    Returns (X0, Y0, W, jac) such that
    integral f(x0, y0) dx0 dy0 = jac * sum W * f(X0, Y0) * exp(+quadform)
    for integrands of the form (polynomial) * exp(-quadform).
    """
    d = 1.0 + mu * mu / 3.0
    b = np.array([[1.0 + 4.0 * mu * mu / 3.0, -mu], [-mu, 1.0]]) / (noise_power * d)
    evals, evecs = np.linalg.eigh(b)
    t, wt = np.polynomial.hermite.hermgauss(n_nodes)
    t1, t2 = np.meshgrid(t, t, indexing="ij")
    w = np.outer(wt, wt)
    x0 = evecs[0, 0] * t1 / np.sqrt(evals[0]) + evecs[0, 1] * t2 / np.sqrt(evals[1])
    y0 = evecs[1, 0] * t1 / np.sqrt(evals[0]) + evecs[1, 1] * t2 / np.sqrt(evals[1])
    jac = 1.0 / np.sqrt(evals[0] * evals[1])
    return x0, y0, w, jac


def pdf_normalization(x_in: ComplexAmplitude, params: ChannelParams,
                      order: str = NLO, clamp: bool = False,
                      n_nodes: int = 80) -> float:
    """Quadrature of the conditional density over the output plane.

    Gauss-Hermite in the principal-axis frame, where the exponent is
    exactly Gaussian; for the raw (unclamped) forms the result is exact up
    to rounding.
    """
    rho = x_in.magnitude
    if rho == 0.0:
        raise DegenerateInputError("pdf_normalization needs |X| > 0")
    mu = params.nonlinear_phase(rho * rho)
    n = params.noise_power
    x0, y0, w, jac = gauss_hermite_frame(mu, n, n_nodes)
    vals = pdf_xy(mu, rho, n, x0, y0, order=order, clamp=clamp)
    d = 1.0 + mu * mu / 3.0
    quad = ((1.0 + 4.0 * mu * mu / 3.0) * x0 * x0 - 2.0 * mu * x0 * y0 + y0 * y0) / (n * d)
    return float(jac * np.sum(w * vals * np.exp(quad)))


def second_moment_about_noiseless(x_in: ComplexAmplitude, params: ChannelParams,
                                  n_nodes: int = 48) -> float:
    """E |Y - noiseless output|^2 under the leading-order density.

    Equals E[x0^2 + y0^2] since the reduced-coordinate map is rigid.
    """
    rho = x_in.magnitude
    if rho == 0.0:
        raise DegenerateInputError("second moment needs |X| > 0")
    mu = params.nonlinear_phase(rho * rho)
    n = params.noise_power
    x0, y0, w, jac = gauss_hermite_frame(mu, n, n_nodes)
    vals = pdf_xy(mu, rho, n, x0, y0, order=LEADING) * (x0 * x0 + y0 * y0)
    d = 1.0 + mu * mu / 3.0
    quad = ((1.0 + 4.0 * mu * mu / 3.0) * x0 * x0 - 2.0 * mu * x0 * y0 + y0 * y0) / (n * d)
    return float(jac * np.sum(w * vals * np.exp(quad)))


def delta_limit_check(x_in: ComplexAmplitude, params: ChannelParams,
                      q_sequence) -> list:
    """Second moment of |Y - noiseless| for a decreasing noise sequence.

    Returns [(q, second_moment), ...]; the moment scales linearly in q,
    witnessing the deterministic (delta) limit of the density.
    """
    q_sequence = list(q_sequence)
    if any(q <= 0 for q in q_sequence):
        raise ValueError("q_sequence entries must be positive")
    if any(b >= a for a, b in zip(q_sequence, q_sequence[1:])):
        raise ValueError("q_sequence must be strictly decreasing")
    out = []
    for q in q_sequence:
        p = ChannelParams(gamma=params.gamma, length=params.length, noise_density=q)
        out.append((q, second_moment_about_noiseless(x_in, p)))
    return out


def peak_density(x_in: ComplexAmplitude, params: ChannelParams) -> float:
    """Density at the noiseless output, 1/(pi QL sqrt(1 + mu^2/3))."""
    rho = x_in.magnitude
    if rho == 0.0:
        raise DegenerateInputError("peak_density needs |X| > 0")
    mu = params.nonlinear_phase(rho * rho)
    n = params.noise_power
    return 1.0 / (math.pi * n * math.sqrt(1.0 + mu * mu / 3.0))


__all__ = [
    "LEADING",
    "NLO",
    "conditional_pdf",
    "conditional_pdf_linear",
    "pdf_xy",
    "nlo_bracket",
    "pdf_normalization",
    "second_moment_about_noiseless",
    "delta_limit_check",
    "peak_density",
    "gauss_hermite_frame",
]
