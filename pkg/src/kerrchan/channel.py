"""Channel parameters, complex amplitudes and reduced coordinates.

Units are fixed package-wide: powers in mW, lengths in km, field samples
in mW^(1/2), information in nats.  All phase wrapping happens here, to the
canonical range [-pi, pi).
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateInputError, DomainError


def wrap_phase(phi: float) -> float:
    """Wrap an angle to the canonical range [-pi, pi)."""
    return (phi + math.pi) % (2.0 * math.pi) - math.pi


@dataclass(frozen=True)
class ChannelParams:
    """Physical constants of the zero-dispersion Kerr channel.

    gamma : Kerr coefficient, 1/(mW km)
    length : link length L, km
    noise_density : noise spectral density Q per unit length, mW/km
    """

    gamma: float
    length: float
    noise_density: float

    def __post_init__(self):
        if not (self.gamma >= 0.0 and math.isfinite(self.gamma)):
            raise DomainError(f"gamma must be >= 0 and finite, got {self.gamma}")
        if not (self.length > 0.0 and math.isfinite(self.length)):
            raise DomainError(f"length must be > 0, got {self.length}")
        if not (self.noise_density > 0.0 and math.isfinite(self.noise_density)):
            raise DomainError(f"noise_density must be > 0, got {self.noise_density}")

    @property
    def noise_power(self) -> float:
        """Accumulated noise power N = Q * L, mW."""
        return self.noise_density * self.length

    @property
    def gamma_length(self) -> float:
        """gamma * L, 1/mW."""
        return self.gamma * self.length

    def nonlinear_phase(self, power: float) -> float:
        """Accumulated nonlinear phase mu = gamma * L * power."""
        return self.gamma * self.length * power


#: Default constants used throughout the command-line layer: a 1000 km
#: zero-dispersion link with Q = 1.5e-7 mW/km and gamma = 1e-3 1/(mW km).
DEFAULT_PARAMS = ChannelParams(gamma=1e-3, length=1000.0, noise_density=1.5e-7)


@dataclass(frozen=True)
class ComplexAmplitude:
    """Complex field sample in amplitude units (mW^1/2)."""

    re: float
    im: float

    @classmethod
    def from_complex(cls, z) -> "ComplexAmplitude":
        z = complex(z)
        return cls(z.real, z.imag)

    @classmethod
    def from_polar(cls, magnitude: float, phase: float) -> "ComplexAmplitude":
        return cls(magnitude * math.cos(phase), magnitude * math.sin(phase))

    @property
    def value(self) -> complex:
        return complex(self.re, self.im)

    @property
    def magnitude(self) -> float:
        return math.hypot(self.re, self.im)

    @property
    def power(self) -> float:
        """|X|^2 in mW."""
        return self.re * self.re + self.im * self.im

    @property
    def phase(self) -> float:
        """Argument in [-pi, pi); 0 for the zero sample."""
        if self.re == 0.0 and self.im == 0.0:
            return 0.0
        return wrap_phase(math.atan2(self.im, self.re))


@dataclass(frozen=True)
class ReducedCoords:
    """The (mu, x0, y0) triple.

    mu is the accumulated nonlinear phase gamma*L*|X|^2; (x0, y0) is the
    output deviation in the frame co-rotated by mu and the input phase:
    x0 + i y0 = Y exp(-i phi_X - i mu) - |X|.
    """

    mu: float
    x0: float
    y0: float


@dataclass(frozen=True)
class PowerRegime:
    """Bounds of the intermediate power region QL << P << 1/(Q L^3 gamma^2)."""

    p_low: float
    p_high: float = field(default=math.inf)

    @property
    def unbounded(self) -> bool:
        return math.isinf(self.p_high)

    def contains(self, power: float) -> bool:
        return self.p_low < power < self.p_high


def reduced_coords(x_in: ComplexAmplitude, y_out: ComplexAmplitude,
                   params: ChannelParams) -> ReducedCoords:
    """Map an input/output pair to the reduced coordinates (mu, x0, y0).

    Raises DegenerateInputError for |X| = 0, where the input phase (and
    hence the co-rotated frame) is undefined.
    """
    rho = x_in.magnitude
    if rho == 0.0:
        raise DegenerateInputError("reduced coordinates need |X| > 0")
    mu = params.nonlinear_phase(rho * rho)
    w = y_out.value * np.exp(-1j * (x_in.phase + mu)) - rho
    return ReducedCoords(mu=mu, x0=float(w.real), y0=float(w.imag))


def reconstruct_output(x_in: ComplexAmplitude, rc: ReducedCoords,
                       params: ChannelParams) -> ComplexAmplitude:
    """Inverse of reduced_coords: Y = (|X| + x0 + i y0) e^{i(mu + phi_X)}."""
    rho = x_in.magnitude
    if rho == 0.0:
        raise DegenerateInputError("reconstruction needs |X| > 0")
    y = (rho + rc.x0 + 1j * rc.y0) * np.exp(1j * (rc.mu + x_in.phase))
    return ComplexAmplitude.from_complex(y)


def zero_noise_output(x_in: ComplexAmplitude, params: ChannelParams,
                      z: float) -> ComplexAmplitude:
    """Noiseless field at distance z: |X| e^{i mu z/L + i phi_X}.

    Satisfies only the input boundary condition; |output| = |X| exactly.
    """
    if not (0.0 <= z <= params.length):
        raise DomainError(f"z must lie in [0, {params.length}], got {z}")
    rho = x_in.magnitude
    mu = params.nonlinear_phase(rho * rho)
    return ComplexAmplitude.from_polar(rho, x_in.phase + mu * z / params.length)


def snr(power: float, params: ChannelParams) -> float:
    """Signal-to-noise ratio P / (Q L)."""
    if power <= 0.0:
        raise DomainError(f"power must be > 0, got {power}")
    return power / params.noise_power


def intermediate_regime(params: ChannelParams) -> PowerRegime:
    """Power window where the high-SNR expansion is valid.

    For gamma = 0 the upper bound diverges and the regime is flagged
    unbounded.
    """
    n = params.noise_power
    if params.gamma == 0.0:
        return PowerRegime(p_low=n, p_high=math.inf)
    p_high = 1.0 / (params.noise_density * params.length ** 3 * params.gamma ** 2)
    return PowerRegime(p_low=n, p_high=p_high)
