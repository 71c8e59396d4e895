"""Per-sample information analysis of the zero-dispersion Kerr fiber
channel with additive white Gaussian noise at high SNR.

The package computes the analytic conditional density of the channel at
leading and next-to-leading order, the output densities and entropies for
Gaussian-family and optimal input distributions, the resulting mutual
information curves, and validates all of it against an independent Monte
Carlo propagation oracle and brute-force linear-algebra checks.
"""

from .channel import (
    ChannelParams,
    ComplexAmplitude,
    DEFAULT_PARAMS,
    PowerRegime,
    ReducedCoords,
    intermediate_regime,
    reduced_coords,
    snr,
    zero_noise_output,
)
from .conditional import (
    LEADING,
    NLO,
    conditional_pdf,
    conditional_pdf_linear,
    delta_limit_check,
    pdf_normalization,
)
from .distributions import (
    BetaInput,
    OptimalInput,
    RadialDensity,
    beta_output_pdf,
    beta_pdf,
    hankel_output_expansion,
    large_snr_output,
    optimal_pdf,
    output_pdf_integral,
    solve_optimal,
)
from .errors import (
    BracketError,
    ChannelValidityWarning,
    DegenerateInputError,
    DomainError,
    QuadratureError,
)
from .fluctuations import GreenEval, det_m, green_matrix, m_inverse_entry, quantum_correction
from .information import (
    MiResult,
    cond_entropy_beta,
    cond_entropy_general,
    entropy_output_beta,
    entropy_output_general,
    mi_beta,
    mi_beta_asymptote,
    mi_optimal,
    mi_optimal_large_power,
    mi_optimal_small_power,
    prior_bound_baseline,
    shannon_capacity,
)
from .montecarlo import (
    EmpiricalDensity,
    McConfig,
    empirical_conditional,
    empirical_output,
    propagate,
)
from .trajectories import (
    Kappa1Coeffs,
    TrajectoryConstants,
    action_nlo,
    classical_action,
    classical_trajectory,
    kappa1,
    kappa2,
)

__version__ = "0.1.0"
