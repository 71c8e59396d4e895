"""Extremal field trajectories of the noise action and their expansions.

The action S[psi] = int_0^L |d_z psi - i gamma |psi|^2 psi|^2 dz has exact
constant-of-motion solutions in two regimes (trigonometric / hyperbolic),
evaluated here forward from given integration constants.  Around the
zero-noise solution the boundary-value problem is solved perturbatively:
kappa1 is the linearized deviation, kappa2 its quadratic correction, and
action_nlo the resulting action including the cubic term.

Inverting the transcendental boundary matching for the exact families is
deliberately not implemented; trajectories are validated by residuals of
their differential equation instead.
"""

import math
from dataclasses import dataclass

import numpy as np

from .channel import ChannelParams, ReducedCoords
from .errors import DomainError

TRIGONOMETRIC = "trigonometric"
HYPERBOLIC = "hyperbolic"


@dataclass(frozen=True)
class TrajectoryConstants:
    """Integration constants of an exact extremal trajectory.

    regime : "trigonometric" (bounded oscillation) or "hyperbolic"
    k      : sqrt(2|E|) >= 0 with E the energy-like constant
    mu_c   : the second constant of motion (called mu_out elsewhere when it
             refers to gamma*L*|Y|^2; the two are distinct quantities)
    zeta0, theta0 : shift constants in normalized position and phase
    """

    regime: str
    k: float
    mu_c: float
    zeta0: float
    theta0: float

    def __post_init__(self):
        if self.regime not in (TRIGONOMETRIC, HYPERBOLIC):
            raise DomainError(f"unknown regime {self.regime!r}")
        if self.k < 0.0:
            raise DomainError(f"k must be >= 0, got {self.k}")
        if self.regime == TRIGONOMETRIC and self.mu_c < self.k:
            raise DomainError(
                f"trigonometric regime requires mu_c >= k >= 0, got mu_c={self.mu_c}, k={self.k}"
            )


@dataclass(frozen=True)
class Kappa1Coeffs:
    """Coefficients of the linearized deviation polynomial."""

    a1: float
    a2: float


def kappa1_coeffs(rc: ReducedCoords) -> Kappa1Coeffs:
    mu, x0, y0 = rc.mu, rc.x0, rc.y0
    d = 1.0 + mu * mu / 3.0
    a1 = (-mu * x0 + y0) / d
    a2 = ((1.0 - 2.0 * mu * mu / 3.0) * x0 + mu * y0) / d
    return Kappa1Coeffs(a1=a1, a2=a2)


def classical_trajectory(c: TrajectoryConstants, gamma_length: float, zeta):
    """Evaluate (rho^2(zeta), theta(zeta)) of an exact trajectory.

    zeta is the normalized position z/L in [0, 1]; gamma_length is
    gamma*L.  Accepts scalar or array zeta.  Raises if rho^2 is not
    strictly positive anywhere on [0, 1].
    """
    if gamma_length <= 0.0:
        raise DomainError("classical trajectories need gamma*L > 0")
    zeta = np.asarray(zeta, dtype=float)
    if np.any(zeta < 0.0) or np.any(zeta > 1.0):
        raise DomainError("zeta must lie in [0, 1]")
    k, mu_c, zeta0, theta0 = c.k, c.mu_c, c.zeta0, c.theta0
    u = zeta - zeta0
    if c.regime == TRIGONOMETRIC:
        # the printed phase uses arctan(tan(...)), discontinuous across branch points
        if k * max(abs(zeta0), abs(1.0 - zeta0)) >= math.pi / 2:
            raise DomainError("k(zeta - zeta0) crosses a tan branch point on [0, 1]")
        # sqrt(mu_c^2 - k^2) without cancellation when k -> mu_c
        s = math.sqrt(max(mu_c - k, 0.0) * (mu_c + k))
        rho_sq = (mu_c + s * np.cos(2.0 * k * u)) / (2.0 * gamma_length)
        if k == 0.0:
            theta = mu_c * u + theta0
        else:
            # (mu_c - s) rewritten as k^2/(mu_c + s) for small-k accuracy
            coef = k * k / (mu_c + s)
            theta = (mu_c / 2.0 * u + s * np.sin(2.0 * k * u) / (4.0 * k)
                     + np.arctan(coef * np.tan(k * u) / k) + theta0)
    else:
        s = math.hypot(mu_c, k)
        rho_sq = (-mu_c + s * np.cosh(2.0 * k * u)) / (2.0 * gamma_length)
        if k == 0.0:
            # valid only for mu_c < 0 (else rho^2 = 0); the arctan term vanishes
            theta = (-mu_c / 2.0 + s / 2.0) * u + theta0
        else:
            theta = (-mu_c / 2.0 * u + s * np.sinh(2.0 * k * u) / (4.0 * k)
                     - np.arctan((mu_c + s) * np.tanh(k * u) / k) + theta0)
    # positivity over the whole span, not just the queried points
    probe = np.linspace(0.0, 1.0, 257) - zeta0
    if c.regime == TRIGONOMETRIC:
        s_ = math.sqrt(max(mu_c - k, 0.0) * (mu_c + k))
        r2p = (mu_c + s_ * np.cos(2.0 * k * probe)) / (2.0 * gamma_length)
    else:
        s_ = math.hypot(mu_c, k)
        r2p = (-mu_c + s_ * np.cosh(2.0 * k * probe)) / (2.0 * gamma_length)
    if np.any(r2p <= 0.0):
        raise DomainError("constants give rho^2 <= 0 somewhere on [0, 1]")
    if np.ndim(zeta) == 0:
        return float(rho_sq), float(theta)
    return rho_sq, theta


def classical_action(c: TrajectoryConstants, params: ChannelParams) -> float:
    """Action of an exact trajectory, in mW/km.

    Normalized so that it equals int_0^L |d_z psi - i gamma |psi|^2 psi|^2 dz
    evaluated on the trajectory.  Vanishes identically for k = 0 (the
    constant-modulus minimum).
    """
    denom = 2.0 * params.gamma * params.length ** 2
    if params.gamma <= 0.0:
        raise DomainError("classical_action needs gamma > 0")
    k, mu_c, zeta0 = c.k, c.mu_c, c.zeta0
    if k == 0.0:
        return 0.0
    if c.regime == TRIGONOMETRIC:
        s = math.sqrt(max(mu_c - k, 0.0) * (mu_c + k))
        trig = (math.sin(2.0 * k * (1.0 - zeta0)) + math.sin(2.0 * k * zeta0)) / (2.0 * k)
        return k * k / denom * (mu_c - s * trig)
    s = math.hypot(mu_c, k)
    hyp = (math.sinh(2.0 * k * (1.0 - zeta0)) + math.sinh(2.0 * k * zeta0)) / (2.0 * k)
    return k * k / denom * (mu_c + s * hyp)


def kappa1(rc: ReducedCoords, z_over_l):
    """Linearized boundary deviation at normalized position z/L.

    Polynomial in z/L; kappa1(0) = 0 and kappa1(1) = x0 + i y0.
    Linear in (x0, y0).  Accepts scalar or array positions.
    """
    zz = np.asarray(z_over_l, dtype=float)
    if np.any(zz < 0.0) or np.any(zz > 1.0):
        raise DomainError("z/L must lie in [0, 1]")
    mu = rc.mu
    cf = kappa1_coeffs(rc)
    x1 = (-mu * cf.a1 * zz + cf.a2) * zz
    y1 = (-(2.0 / 3.0) * mu * mu * cf.a1 * zz * zz + mu * cf.a2 * zz + cf.a1) * zz
    out = x1 + 1j * y1
    return complex(out) if out.ndim == 0 else out


def kappa2(rc: ReducedCoords, rho: float, z_over_l):
    """Second-order deviation, quadratic in (x0, y0), vanishing at both ends."""
    if rho <= 0.0:
        raise DomainError(f"kappa2 requires rho > 0, got {rho}")
    zz = np.asarray(z_over_l, dtype=float)
    if np.any(zz < 0.0) or np.any(zz > 1.0):
        raise DomainError("z/L must lie in [0, 1]")
    mu, x0, y0 = rc.mu, rc.x0, rc.y0
    d = 1.0 + mu * mu / 3.0
    pre = -(mu / rho) / (270.0 * d ** 3) * (1.0 - zz) * zz
    w = y0 - mu * x0
    x2 = pre * (
        mu * (2 * mu ** 4 - 15 * mu ** 2 + 585) * x0 ** 2
        + 2 * (13 * mu ** 2 * (mu ** 2 + 15) - 180) * x0 * y0
        + mu * (2 * mu ** 2 + 15) * (5 * mu ** 2 - 9) * y0 ** 2
        - 5 * (mu ** 2 + 3) * zz * (
            mu * (mu ** 2 - 15) * x0 ** 2
            - 4 * (mu ** 2 - 6) * x0 * y0
            + mu * (mu ** 2 + 9) * y0 ** 2
        )
        + 5 * mu * (mu ** 2 + 3) * zz ** 2 * (
            3 * (5 * mu ** 2 - 3) * x0 ** 2
            - 36 * mu * x0 * y0
            - (mu ** 2 - 15) * y0 ** 2
        )
        + 20 * mu ** 2 * (mu ** 2 + 3) * zz ** 3 * w * (2 * mu * y0 - (mu ** 2 - 3) * x0)
        - 20 * mu ** 3 * (mu ** 2 + 3) * zz ** 4 * w ** 2
    )
    y2 = pre * (
        (7 * mu ** 4 - 75 * mu ** 2 + 360) * x0 ** 2
        + 6 * mu * (mu ** 2 + 75) * x0 * y0
        + 3 * mu ** 2 * (5 * mu ** 2 + 39) * y0 ** 2
        + 2 * zz * (
            (mu ** 6 - 4 * mu ** 4 + 255 * mu ** 2 + 180) * x0 ** 2
            + mu * (mu ** 2 + 15) * (13 * mu ** 2 + 3) * x0 * y0
            + mu ** 2 * (5 * mu ** 4 + 36 * mu ** 2 - 9) * y0 ** 2
        )
        - 14 * mu * (mu ** 2 + 3) * zz ** 2 * w * ((15 - 4 * mu ** 2) * x0 + 9 * mu * y0)
        + 84 * mu ** 2 * (mu ** 2 + 3) * zz ** 3 * w ** 2
    )
    out = x2 + 1j * y2
    return complex(out) if out.ndim == 0 else out


def action_quadratic_form(rc: ReducedCoords) -> float:
    """(1 + 4 mu^2/3) x0^2 - 2 mu x0 y0 + y0^2, over (1 + mu^2/3).

    Positive definite for every mu.  Multiplying by 1/(QL) gives the
    leading-order action in noise units.
    """
    mu, x0, y0 = rc.mu, rc.x0, rc.y0
    d = 1.0 + mu * mu / 3.0
    return ((1.0 + 4.0 * mu * mu / 3.0) * x0 * x0 - 2.0 * mu * x0 * y0 + y0 * y0) / d


def action_cubic_term(rc: ReducedCoords, rho: float) -> float:
    """Cubic-in-(x0, y0) part of the action (before dividing by QL)."""
    if rho <= 0.0:
        raise DomainError(f"action cubic term requires rho > 0, got {rho}")
    mu, x0, y0 = rc.mu, rc.x0, rc.y0
    d = 1.0 + mu * mu / 3.0
    return (mu / rho) / (135.0 * d ** 3) * (
        mu * (4 * mu ** 4 + 15 * mu ** 2 + 225) * x0 ** 3
        + (23 * mu ** 4 + 255 * mu ** 2 - 90) * x0 ** 2 * y0
        + mu * (20 * mu ** 4 + 117 * mu ** 2 - 45) * x0 * y0 ** 2
        - 3 * (5 * mu ** 4 + 33 * mu ** 2 + 30) * y0 ** 3
    )


def action_nlo(rc: ReducedCoords, rho: float, params: ChannelParams,
               include_cubic: bool = True) -> float:
    """Perturbative action S/Q (dimensionless) at next-to-leading order.

    Quadratic leading term plus, when include_cubic, the cubic correction.
    """
    if rho <= 0.0:
        raise DomainError(f"action_nlo requires rho > 0, got {rho}")
    n = params.noise_power
    if n <= 0.0:
        raise DomainError("action_nlo requires QL > 0")
    s = action_quadratic_form(rc) / n
    if include_cubic:
        s += action_cubic_term(rc, rho) / n
    return s
