"""Gaussian fluctuation machinery around the noiseless trajectory.

Closed forms for the discretized fluctuation determinant, the inverse of
the discretization matrix, the continuum two-component Green matrix with
zero Dirichlet boundaries, and the pre-exponential correction factor of
the conditional density.

The discretization matrix M(alpha) is (N-1) x (N-1) with
M[i,i] = 2 + alpha, M[i,i +- 1] = -1 + alpha, all other entries alpha,
where alpha = 4 mu^2 / N^3.
"""

from dataclasses import dataclass

import numpy as np

from .channel import ChannelParams, ReducedCoords
from .errors import DomainError


@dataclass(frozen=True)
class GreenEval:
    """Components of the fluctuation Green matrix at one (z, z') pair.

    g12(z, z') = g21(z', z); g11 and g22 are symmetric under z <-> z';
    every component vanishes when z or z' hits the interval ends.
    """

    g11: float
    g12: float
    g21: float
    g22: float


def _alpha_of(n: int, mu: float) -> float:
    return 4.0 * mu * mu / float(n) ** 3


def det_m(n: int, mu: float) -> float:
    """Determinant of M(alpha): N + alpha N^2 (N^2 - 1) / 12."""
    if n < 2:
        raise DomainError(f"det_m requires n >= 2, got {n}")
    alpha = _alpha_of(n, mu)
    nn = float(n)
    return nn + alpha * nn * nn * (nn * nn - 1.0) / 12.0


def m_inverse_entry(n: int, mu: float, i: int, j: int) -> float:
    """Entry (i, j) of M(alpha)^-1, 1-based indices in [1, n-1].

    At mu = 0 this reduces to the discrete Brownian-bridge covariance
    N (i/N)(1 - j/N) for i <= j.
    """
    if n < 2:
        raise DomainError(f"m_inverse_entry requires n >= 2, got {n}")
    if not (1 <= i <= n - 1 and 1 <= j <= n - 1):
        raise DomainError(f"indices must lie in [1, {n - 1}], got ({i}, {j})")
    alpha = _alpha_of(n, mu)
    nn = float(n)
    fi, fj = i / nn, j / nn
    if i <= j:
        bridge = fi * (1.0 - fj)
    else:
        bridge = fj * (1.0 - fi)
    corr = alpha * nn ** 4 / (4.0 * det_m(n, mu)) * fi * (1.0 - fi) * fj * (1.0 - fj)
    return nn * (bridge - corr)


def bridge_correction_coefficient(n: int, mu: float) -> float:
    """alpha N^4 / (4 det M), which tends to 3 mu^2 / (3 + mu^2) as N grows."""
    alpha = _alpha_of(n, mu)
    return alpha * float(n) ** 4 / (4.0 * det_m(n, mu))


def green_matrix(z: float, zp: float, mu: float, length: float) -> GreenEval:
    """Continuum fluctuation propagator at (z, z'), dimensionless.

    Polynomial in z/L and z'/L with a kink across z = z'; the value at
    coincidence is taken from the z -> z'+ side (retarded convention).
    """
    if not (0.0 <= z <= length and 0.0 <= zp <= length):
        raise DomainError("z and z' must lie in [0, L]")
    a = z / length
    b = zp / length
    m2 = mu * mu
    s = 3.0 * m2 / (4.0 * (3.0 + m2))

    # g11: one-sided bridge term plus a symmetric rank-one correction that
    # appears in both (z, z') orderings
    if a >= b:
        bridge = b / 2.0 * (1.0 - a)
    else:
        bridge = a / 2.0 * (1.0 - b)
    g11 = bridge - 2.0 * s * (1.0 - a) * (1.0 - b) * a * b

    pre = mu / (2.0 * (3.0 + m2))
    if a >= b:
        g12 = pre * b * (1.0 - a) * (3.0 * b - 3.0 * a + b * m2 * (1.0 + a * (2.0 * b - 3.0)))
    else:
        g12 = pre * a * (1.0 - b) * (3.0 * b - 3.0 * a + (b - 1.0) * m2 * (a + 2.0 * b * (a - 1.0)))
    # g21(z, z') = g12(z', z)
    if b >= a:
        g21 = pre * a * (1.0 - b) * (3.0 * a - 3.0 * b + a * m2 * (1.0 + b * (2.0 * a - 3.0)))
    else:
        g21 = pre * b * (1.0 - a) * (3.0 * a - 3.0 * b + (a - 1.0) * m2 * (b + 2.0 * a * (b - 1.0)))

    if a >= b:
        g22 = (1.0 - a) * b / (6.0 * (3.0 + m2)) * (
            9.0
            + 3.0 * m2 * (1.0 + a - 2.0 * a * a + 3.0 * a * b - 2.0 * b * b)
            + 2.0 * m2 * m2 * b * (a - 1.0) * (b - 3.0 * a + 2.0 * a * b)
        )
    else:
        g22 = (1.0 - b) * a / (6.0 * (3.0 + m2)) * (
            9.0
            + 3.0 * m2 * (1.0 + b - 2.0 * b * b + 3.0 * a * b - 2.0 * a * a)
            + 2.0 * m2 * m2 * a * (b - 1.0) * (a - 3.0 * b + 2.0 * a * b)
        )
    return GreenEval(g11=float(g11), g12=float(g12), g21=float(g21), g22=float(g22))


def quantum_correction(rc: ReducedCoords, rho: float, params: ChannelParams) -> float:
    """Pre-exponential factor of the conditional density, NLO accurate.

    1/(pi QL sqrt(1 + mu^2/3)) times a bracket linear in (x0, y0); the
    bracket equals 1 at the distribution peak x0 = y0 = 0.
    """
    if rho <= 0.0:
        raise DomainError(f"quantum_correction requires rho > 0, got {rho}")
    mu, x0, y0 = rc.mu, rc.x0, rc.y0
    d = 1.0 + mu * mu / 3.0
    n = params.noise_power
    bracket = 1.0 - (mu / rho) / (15.0 * d * d) * (
        mu * (15.0 + mu * mu) * x0 - 2.0 * (5.0 - mu * mu / 3.0) * y0
    )
    return bracket / (np.pi * n * np.sqrt(d))
