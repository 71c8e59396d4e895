"""Direct stochastic simulation of the channel, used as an oracle.

The propagation scheme splits each step into an exact nonlinear phase
rotation followed by an additive complex Gaussian increment of component
variance Q dz / 2.  The rotation is exact at zero noise for any step
count; discretization error enters only through the interleaving of noise
and nonlinearity, at first order in the step.

Randomness is counter-based: trajectory j draws from a Philox stream
keyed by (seed, j), consumed in step order.  Results are therefore
bitwise identical however trajectories are chunked or distributed over
workers.  Noise variates are drawn in float32 (quantized standard
normals, deterministic) to halve generation cost; accumulation stays in
float64.
"""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.special import gammaincinv
from scipy.stats import chi2 as _chi2_dist

from .channel import ChannelParams, ComplexAmplitude
from .distributions import BetaInput, OptimalInput, as_radial_density
from .errors import DomainError

_TRAJ_BLOCK = 8192


@dataclass(frozen=True)
class McConfig:
    """Monte Carlo run descriptor.

    bin_range is the histogram half-width in multiples of sqrt(QL).
    Identical configs give identical results regardless of worker count.
    """

    n_steps: int = 1000
    n_traj: int = 100_000
    seed: int = 0
    bins: tuple = (64, 64)
    bin_range: float = 8.0

    def __post_init__(self):
        if self.n_steps < 100:
            raise DomainError(f"n_steps must be >= 100, got {self.n_steps}")
        if self.n_traj < 10_000:
            raise DomainError(f"n_traj must be >= 10^4, got {self.n_traj}")
        if not (0 <= int(self.seed) < 2 ** 64):
            raise DomainError("seed must fit in 64 bits")
        if len(self.bins) != 2 or any(b < 2 for b in self.bins):
            raise DomainError(f"bins must be two counts >= 2, got {self.bins}")
        if self.bin_range <= 0.0:
            raise DomainError("bin_range must be > 0")


@dataclass(frozen=True)
class EmpiricalDensity:
    """Normalized histogram with its raw counts.

    kind is "cartesian" (2-D in reduced coordinates) or "radial" (1-D in
    |Y|).  density integrates to 1 over the grid; counts plus
    n_out_of_range conserve the trajectory total.
    """

    kind: str
    edges: tuple
    counts: np.ndarray
    density: np.ndarray
    n_total: int
    n_out_of_range: int
    undercovered: bool = field(default=False)

    @property
    def cell_volume(self):
        if self.kind == "cartesian":
            ex, ey = self.edges
            return (ex[1] - ex[0]) * (ey[1] - ey[0])
        (er,) = self.edges
        return er[1] - er[0]

    def cell_mass(self):
        """Per-cell empirical probability, normalized by n_total."""
        return self.counts / self.n_total


class _TrajectoryStreams:
    """Reusable Philox generator re-keyed per trajectory index."""

    def __init__(self, seed: int):
        self._bg = np.random.Philox(key=np.array([seed, 0], dtype=np.uint64))
        self._gen = np.random.Generator(self._bg)
        self._seed = int(seed)

    def select(self, traj_index: int):
        st = self._bg.state
        st["state"]["counter"][:] = 0
        st["state"]["key"][0] = self._seed
        st["state"]["key"][1] = int(traj_index)
        # invalidate both the 256-bit block buffer and the spare uint32 so
        # nothing leaks between trajectory streams
        st["buffer_pos"] = 4
        st["has_uint32"] = 0
        st["uinteger"] = 0
        self._bg.state = st
        return self._gen


def _step_kernel(re, im, noise_t, n_steps, g_dz, sigma):
    """Advance all trajectories of a block through every step, in place."""
    c = re.shape[0]
    ph = np.empty(c)
    co = np.empty(c)
    sn = np.empty(c)
    t1 = np.empty(c)
    t2 = np.empty(c)
    for s in range(n_steps):
        np.multiply(re, re, out=ph)
        np.multiply(im, im, out=t1)
        ph += t1
        ph *= g_dz
        np.cos(ph, out=co)
        np.sin(ph, out=sn)
        np.multiply(re, co, out=t1)   # t1 = re cos
        np.multiply(im, sn, out=t2)   # t2 = im sin
        t1 -= t2                      # t1 = rotated re
        np.multiply(re, sn, out=t2)   # t2 = re sin (old re)
        np.multiply(im, co, out=im)   # im = im cos (old im consumed)
        im += t2                      # im = rotated im
        re, t1 = t1, re               # re now holds the rotated value
        re += sigma * noise_t[2 * s]
        im += sigma * noise_t[2 * s + 1]
    return re, im


def _run_block(params: ChannelParams, n_steps: int, seed: int, lo: int, c: int,
               x_shared: Optional[complex], input_kind: Optional[tuple]):
    """Worker body: returns (inputs, finals) for trajectories [lo, lo+c)."""
    streams = _TrajectoryStreams(seed)
    dz = params.length / n_steps
    sigma = math.sqrt(params.noise_density * dz / 2.0)
    g_dz = params.gamma * dz

    noise = np.empty((c, 2 * n_steps), dtype=np.float32)
    inputs = np.empty(c, dtype=np.complex128)
    for j in range(c):
        gen = streams.select(lo + j)
        if x_shared is not None:
            inputs[j] = x_shared
        else:
            inputs[j] = _draw_input(gen, input_kind)
        noise[j] = gen.standard_normal(2 * n_steps, dtype=np.float32)
    noise_t = np.ascontiguousarray(noise.T)
    del noise

    re = np.ascontiguousarray(inputs.real)
    im = np.ascontiguousarray(inputs.imag)
    re, im = _step_kernel(re, im, noise_t, n_steps, g_dz, sigma)
    return inputs, re + 1j * im


def _draw_input(gen, input_kind):
    """One input sample from a per-trajectory stream.

    input_kind is ("beta", beta, power) with the radius drawn by inverse
    CDF in tau = rho^2 (one uniform), or ("optimal", lambda0, gl) with
    rejection under the dominating Gaussian envelope (acceptance factor
    1/sqrt(1 + gl^2 rho^4/3) <= 1).  One extra uniform draws the phase.
    """
    kind = input_kind[0]
    if kind == "beta":
        _, beta, power = input_kind
        u = gen.random()
        tau = float(gammaincinv(beta / 2.0, u)) * 2.0 * power / beta
        rho = math.sqrt(tau)
    elif kind == "optimal":
        _, lambda0, gl = input_kind
        while True:
            u1 = gen.random()
            tau = -math.log1p(-u1) / lambda0
            accept = 1.0 / math.sqrt(1.0 + gl * gl * tau * tau / 3.0)
            if gen.random() <= accept:
                rho = math.sqrt(tau)
                break
    else:
        raise ValueError(f"unknown input kind {kind!r}")
    phase = 2.0 * math.pi * gen.random() - math.pi
    return rho * complex(math.cos(phase), math.sin(phase))


def propagate(x_in: ComplexAmplitude, params: ChannelParams, cfg: McConfig,
              stream_id: int) -> ComplexAmplitude:
    """Propagate one trajectory; stream_id selects the noise substream.

    Identical to trajectory `stream_id` of an ensemble run with the same
    config.
    """
    _, finals = _run_block(params, cfg.n_steps, cfg.seed, int(stream_id), 1,
                           x_shared=complex(x_in.value), input_kind=None)
    return ComplexAmplitude.from_complex(finals[0])


def propagate_ensemble(x_in: ComplexAmplitude, params: ChannelParams,
                       cfg: McConfig, lo: int = 0, n: Optional[int] = None):
    """Final states of trajectories [lo, lo+n), single process."""
    if n is None:
        n = cfg.n_traj
    outs = []
    for start in range(lo, lo + n, _TRAJ_BLOCK):
        c = min(_TRAJ_BLOCK, lo + n - start)
        _, finals = _run_block(params, cfg.n_steps, cfg.seed, start, c,
                               x_shared=complex(x_in.value), input_kind=None)
        outs.append(finals)
    return np.concatenate(outs)


def _conditional_block_counts(args):
    (params, n_steps, seed, lo, c, x_shared, mu, phi_ref, rho_ref,
     xedges, yedges) = args
    _, finals = _run_block(params, n_steps, seed, lo, c, x_shared, None)
    w = finals * np.exp(-1j * (phi_ref + mu)) - rho_ref
    h, _, _ = np.histogram2d(w.real, w.imag, bins=[xedges, yedges])
    return h.astype(np.int64)


def _output_block_counts(args):
    (params, n_steps, seed, lo, c, input_kind, redges) = args
    _, finals = _run_block(params, n_steps, seed, lo, c, None, input_kind)
    h, _ = np.histogram(np.abs(finals), bins=redges)
    return h.astype(np.int64)


def _map_blocks(fn, jobs, workers):
    if workers <= 1:
        results = map(fn, jobs)
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(fn, jobs, chunksize=1))
    total = None
    for r in results:
        total = r if total is None else total + r
    return total


def empirical_conditional(x_in: ComplexAmplitude, params: ChannelParams,
                          cfg: McConfig, workers: int = 1) -> EmpiricalDensity:
    """Histogram of the reduced coordinates (x0, y0) of simulated outputs."""
    rho = x_in.magnitude
    if rho == 0.0:
        raise DomainError("empirical_conditional needs |X| > 0")
    mu = params.nonlinear_phase(rho * rho)
    half = cfg.bin_range * math.sqrt(params.noise_power)
    xedges = np.linspace(-half, half, cfg.bins[0] + 1)
    yedges = np.linspace(-half, half, cfg.bins[1] + 1)
    jobs = []
    for start in range(0, cfg.n_traj, _TRAJ_BLOCK):
        c = min(_TRAJ_BLOCK, cfg.n_traj - start)
        jobs.append((params, cfg.n_steps, cfg.seed, start, c,
                     complex(x_in.value), mu, x_in.phase, rho, xedges, yedges))
    counts = _map_blocks(_conditional_block_counts, jobs, workers)
    return _finish_density("cartesian", (xedges, yedges), counts, cfg.n_traj)


def empirical_output(input_dist, params: ChannelParams, cfg: McConfig,
                     workers: int = 1, r_max: Optional[float] = None) -> EmpiricalDensity:
    """Radial histogram of |Y| for inputs drawn from a registered family."""
    if isinstance(input_dist, BetaInput):
        kind = ("beta", input_dist.beta, input_dist.power)
        scale = math.sqrt(input_dist.power)
    elif isinstance(input_dist, OptimalInput):
        kind = ("optimal", input_dist.lambda0, params.gamma_length)
        scale = math.sqrt(max(input_dist.power, 1.0 / input_dist.lambda0))
    else:
        raise TypeError("empirical_output needs a BetaInput or OptimalInput")
    if r_max is None:
        r_max = 4.5 * scale + cfg.bin_range * math.sqrt(params.noise_power)
    redges = np.linspace(0.0, r_max, cfg.bins[0] + 1)
    jobs = []
    for start in range(0, cfg.n_traj, _TRAJ_BLOCK):
        c = min(_TRAJ_BLOCK, cfg.n_traj - start)
        jobs.append((params, cfg.n_steps, cfg.seed, start, c, kind, redges))
    counts = _map_blocks(_output_block_counts, jobs, workers)
    return _finish_density("radial", (redges,), counts, cfg.n_traj)


def _finish_density(kind, edges, counts, n_traj):
    n_in = int(counts.sum())
    n_out = n_traj - n_in
    if kind == "cartesian":
        ex, ey = edges
        vol = (ex[1] - ex[0]) * (ey[1] - ey[0])
    else:
        vol = edges[0][1] - edges[0][0]
    density = counts / float(n_in) / vol
    return EmpiricalDensity(
        kind=kind,
        edges=edges,
        counts=counts,
        density=density,
        n_total=n_traj,
        n_out_of_range=n_out,
        undercovered=(n_out > 0.01 * n_traj),
    )


def conditional_cell_masses(emp: EmpiricalDensity, mu: float, rho: float,
                            params: ChannelParams, order: str = "nlo") -> np.ndarray:
    """Analytic probability of each histogram cell, 3x3 Gauss-Legendre."""
    from .conditional import pdf_xy

    xedges, yedges = emp.edges
    xc = 0.5 * (xedges[:-1] + xedges[1:])
    yc = 0.5 * (yedges[:-1] + yedges[1:])
    dx = xedges[1] - xedges[0]
    dy = yedges[1] - yedges[0]
    t = np.array([-math.sqrt(3.0 / 5.0), 0.0, math.sqrt(3.0 / 5.0)])
    w = np.array([5.0, 8.0, 5.0]) / 9.0
    masses = np.zeros((len(xc), len(yc)))
    for a, wa in zip(t, w):
        for b, wb in zip(t, w):
            masses += wa * wb / 4.0 * pdf_xy(
                mu, rho, params.noise_power,
                xc[:, None] + a * dx / 2.0, yc[None, :] + b * dy / 2.0,
                order=order, clamp=False,
            )
    return masses * dx * dy


def radial_cell_masses(emp: EmpiricalDensity, radial_pdf) -> np.ndarray:
    """Analytic probability of each radial bin of 2 pi r pdf(r)."""
    (redges,) = emp.edges
    rc = 0.5 * (redges[:-1] + redges[1:])
    dr = redges[1] - redges[0]
    t = np.array([-math.sqrt(3.0 / 5.0), 0.0, math.sqrt(3.0 / 5.0)])
    w = np.array([5.0, 8.0, 5.0]) / 9.0
    masses = np.zeros(len(rc))
    for a, wa in zip(t, w):
        r = rc + a * dr / 2.0
        masses += wa / 2.0 * 2.0 * math.pi * r * np.asarray(radial_pdf(r), dtype=float)
    return masses * dr


def tv_distance(emp: EmpiricalDensity, cell_masses: np.ndarray) -> float:
    """Total-variation distance between histogram and analytic masses.

    Out-of-range mass on both sides is folded into one residual cell.
    """
    emp_mass = emp.cell_mass()
    inside = float(np.abs(emp_mass - cell_masses).sum())
    emp_out = emp.n_out_of_range / emp.n_total
    ana_out = max(0.0, 1.0 - float(cell_masses.sum()))
    return 0.5 * (inside + abs(emp_out - ana_out))


def chi2_gof(emp: EmpiricalDensity, cell_masses: np.ndarray,
             min_expected: float = 5.0):
    """Pearson chi-square with pooling of low-expectation cells.

    Cells expecting fewer than min_expected counts are pooled with the
    out-of-range mass into one cell.  Returns (chi2, dof, p_value).
    """
    n = emp.n_total
    expected = cell_masses.ravel() * n
    observed = emp.counts.ravel().astype(float)
    keep = expected >= min_expected
    chi2 = float(((observed[keep] - expected[keep]) ** 2 / expected[keep]).sum())
    dof = int(keep.sum()) - 1
    rest_e = float(expected[~keep].sum()) + max(0.0, 1.0 - float(cell_masses.sum())) * n
    rest_o = float(observed[~keep].sum()) + emp.n_out_of_range
    if rest_e >= min_expected:
        chi2 += (rest_o - rest_e) ** 2 / rest_e
        dof += 1
    p = float(_chi2_dist.sf(chi2, dof))
    return chi2, dof, p
