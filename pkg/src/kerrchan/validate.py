"""Self-contained validation suites exposed through the command line.

Each check compares an implementation route against an independent one
(brute-force linear algebra, adaptive quadrature, finite differences) and
reports a measured discrepancy against a fixed threshold.  The pytest
suite covers strictly more ground; these are the fast, scriptable cores.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad, simpson

from . import conditional, distributions, fluctuations, information, special, trajectories
from .channel import ChannelParams, ComplexAmplitude, DEFAULT_PARAMS, ReducedCoords


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    measured: float
    threshold: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{self.name} {status} {self.measured:.6e} {self.threshold:.6e}"


def _check(name, measured, threshold):
    return CheckResult(name=name, passed=bool(measured <= threshold),
                       measured=float(measured), threshold=float(threshold))


def suite_specialfn() -> list:
    out = []
    worst = 0.0
    for a in (1e-4, 1e-2, 0.5, 1.0, 5.0, 20.0, 80.0, 1e3):
        ref = special.g_of_alpha_quadrature(a)
        worst = max(worst, abs(special.g_of_alpha(a) - ref.value) / ref.value)
    out.append(_check("g-vs-quadrature", worst, 1e-9))
    worst = max(
        abs(special.confluent_1f1(1.0, z) - math.exp(z)) / math.exp(z)
        for z in (0.0, 1.0, 50.0, 200.0)
    )
    out.append(_check("1f1-exp-identity", worst, 1e-12))
    worst = 0.0
    for z in (0.5, 3.0, 10.0):
        lhs = special.confluent_1f1(0.5, 2.0 * z)
        rhs = math.exp(z) * special.bessel_i0(z)
        worst = max(worst, abs(lhs - rhs) / rhs)
    out.append(_check("1f1-bessel-identity", worst, 1e-10))
    grid = np.geomspace(1e-3, 1e3, 121)
    gv = np.array([special.g_of_alpha(a) for a in grid])
    mono = float(np.max(np.diff(gv)))
    out.append(_check("g-strictly-decreasing", max(mono, 0.0), 0.0))
    # convexity of log G is a uniform-step-in-alpha statement
    worst = 0.0
    for lo, hi in ((1e-3, 2.0), (0.05, 50.0), (10.0, 500.0)):
        uni = np.linspace(lo, hi, 300)
        lv = np.log([special.g_of_alpha(float(a)) for a in uni])
        worst = max(worst, -float(np.diff(lv, 2).min()))
    out.append(_check("g-log-convex", max(0.0, worst), 1e-12))
    return out


def suite_normalization(params: ChannelParams = DEFAULT_PARAMS) -> list:
    out = []
    for snr_target in (1e2, 1e3, 1e4):
        for mu in (0.0, 0.5, 1.0, 2.0):
            rho = 1.0
            q = rho * rho / snr_target / params.length
            gamma = mu / (params.length * rho * rho)
            p = ChannelParams(gamma=gamma, length=params.length, noise_density=q)
            x = ComplexAmplitude(rho, 0.0)
            for order in (conditional.LEADING, conditional.NLO):
                val = conditional.pdf_normalization(x, p, order=order, clamp=False)
                out.append(_check(
                    f"norm-snr{snr_target:g}-mu{mu:g}-{order}", abs(val - 1.0), 1e-6))
    return out


def _dense_m(n, mu):
    alpha = 4.0 * mu * mu / n ** 3
    m = np.full((n - 1, n - 1), alpha)
    idx = np.arange(n - 1)
    m[idx, idx] = 2.0 + alpha
    m[idx[:-1], idx[:-1] + 1] = -1.0 + alpha
    m[idx[:-1] + 1, idx[:-1]] = -1.0 + alpha
    return m


def suite_determinant() -> list:
    out = []
    worst_det = 0.0
    worst_inv = 0.0
    for n in (2, 3, 5, 10, 24, 40, 60):
        for mu in (0.0, 0.5, 1.0, 2.0, 5.0):
            m = _dense_m(n, mu)
            sign, logdet = np.linalg.slogdet(m)
            dense = sign * math.exp(logdet)
            worst_det = max(worst_det, abs(fluctuations.det_m(n, mu) - dense) / abs(dense))
            if n <= 24:
                inv = np.array([[fluctuations.m_inverse_entry(n, mu, i, j)
                                 for j in range(1, n)] for i in range(1, n)])
                ident = m @ inv
                worst_inv = max(worst_inv, float(np.abs(ident - np.eye(n - 1)).max()))
    out.append(_check("det-closed-vs-dense", worst_det, 1e-10))
    out.append(_check("inverse-identity", worst_inv, 1e-10))
    return out


def suite_green(length: float = 1.0, mu: float = 1.3) -> list:
    out = []
    n = 2001
    zs = np.linspace(0.0, length, n)
    h = zs[1] - zs[0]
    zp = zs[int(0.6 * (n - 1))]
    g = [fluctuations.green_matrix(z, zp, mu, length) for z in zs]
    g11 = np.array([e.g11 for e in g])
    g21 = np.array([e.g21 for e in g])
    g12 = np.array([e.g12 for e in g])
    g22 = np.array([e.g22 for e in g])

    def d1(f):
        o = np.zeros_like(f)
        o[1:-1] = (f[2:] - f[:-2]) / (2 * h)
        return o

    def d2(f):
        o = np.zeros_like(f)
        o[1:-1] = (f[2:] - 2 * f[1:-1] + f[:-2]) / h ** 2
        return o

    ml = mu / length
    r11 = 2 * (-d2(g11) + 4 * ml * ml * g11 - 2 * ml * d1(g21))
    r21 = 2 * (2 * ml * d1(g11) - d2(g21))
    r12 = 2 * (-d2(g12) + 4 * ml * ml * g12 - 2 * ml * d1(g22))
    r22 = 2 * (2 * ml * d1(g12) - d2(g22))
    ip = int(0.6 * (n - 1))
    mask = np.ones(n, dtype=bool)
    mask[[0, n - 1]] = False
    mask[ip - 2: ip + 3] = False
    # off-diagonal residuals scale as 1/L^2; compare in z/L units
    scale = length * length
    out.append(_check("green-delta-offdiag-11", float(np.abs(r11[mask]).max()) * scale, 1e-3))
    out.append(_check("green-delta-offdiag-21", float(np.abs(r21[mask]).max()) * scale, 1e-3))
    out.append(_check("green-delta-offdiag-12", float(np.abs(r12[mask]).max()) * scale, 1e-3))
    out.append(_check("green-delta-offdiag-22", float(np.abs(r22[mask]).max()) * scale, 1e-3))
    f = np.sin(2.1 * zs / length + 0.3)
    i11 = np.trapezoid(r11 * f, zs)
    i22 = np.trapezoid(r22 * f, zs)
    i21 = np.trapezoid(r21 * f, zs)
    i12 = np.trapezoid(r12 * f, zs)
    target = f[ip] / length
    out.append(_check("green-delta-testfn-11", abs(i11 - target) * length, 1e-4))
    out.append(_check("green-delta-testfn-22", abs(i22 - target) * length, 1e-4))
    out.append(_check("green-delta-testfn-21", abs(i21) * length, 1e-4))
    out.append(_check("green-delta-testfn-12", abs(i12) * length, 1e-4))
    return out


def _el_residual(c, gamma_length, zeta, h=1e-5):
    def psi(zt):
        r2, th = trajectories.classical_trajectory(c, gamma_length, zt)
        return math.sqrt(r2) * complex(math.cos(th), math.sin(th))

    p0 = psi(zeta)
    pp = psi(zeta + h)
    pm = psi(zeta - h)
    dd1 = (pp - pm) / (2 * h)
    dd2 = (pp - 2 * p0 + pm) / h ** 2
    return dd2 - 4j * gamma_length * abs(p0) ** 2 * dd1 - 3 * gamma_length ** 2 * abs(p0) ** 4 * p0


def suite_ode() -> list:
    out = []
    gl = 1.0
    cases = [
        trajectories.TrajectoryConstants(trajectories.TRIGONOMETRIC, 0.8, 1.7, 0.3, 0.2),
        trajectories.TrajectoryConstants(trajectories.HYPERBOLIC, 0.9, 0.6, 0.45, -0.1),
    ]
    worst = 0.0
    for c in cases:
        for zt in (0.2, 0.5, 0.8):
            r2, _ = trajectories.classical_trajectory(c, gl, zt)
            scale = max(1.0, gl ** 2 * r2 ** 2 * math.sqrt(r2))
            worst = max(worst, abs(_el_residual(c, gl, zt)) / scale)
    out.append(_check("trajectory-el-residual", worst, 1e-5))

    params = ChannelParams(gamma=1.0, length=1.0, noise_density=1e-4)
    worst = 0.0
    for c in cases:
        zs = np.linspace(0.0, 1.0, 40001)
        r2, th = trajectories.classical_trajectory(c, 1.0, zs)
        rho = np.sqrt(r2)
        dr = np.gradient(rho, zs, edge_order=2)
        dth = np.gradient(th, zs, edge_order=2)
        integ = dr ** 2 + r2 * (dth - 1.0 * r2) ** 2
        s_quad = float(simpson(integ, x=zs))
        s_formula = trajectories.classical_action(c, params)
        worst = max(worst, abs(s_formula - s_quad) / abs(s_quad))
    out.append(_check("action-vs-quadrature", worst, 1e-6))

    # finite-difference step 1e-4 * L (here L = 1) per the residual scheme
    rc = ReducedCoords(mu=1.0, x0=0.1, y0=-0.2)
    h = 1e-4

    def k1(z):
        return trajectories.kappa1(rc, z)

    z0 = 0.5
    lhs = ((k1(z0 + h) - 2 * k1(z0) + k1(z0 - h)) / h ** 2
           - 2j * rc.mu * (k1(z0 + h) - k1(z0 - h)) / (2 * h)
           - 4 * rc.mu ** 2 * k1(z0).real)
    out.append(_check("kappa1-ode-residual", abs(lhs), 1e-8))

    rc2 = ReducedCoords(mu=0.7, x0=0.05, y0=0.03)
    rho = 1.3

    def k2(z):
        return trajectories.kappa2(rc2, rho, z)

    z0 = 0.3
    k1v = trajectories.kappa1(rc2, z0)
    dk1 = (trajectories.kappa1(rc2, z0 + h) - trajectories.kappa1(rc2, z0 - h)) / (2 * h)
    rhs = (4j * rc2.mu / rho * (k1v + k1v.conjugate()) * dk1
           + rc2.mu ** 2 / rho * (5 * k1v ** 2 + 10 * abs(k1v) ** 2 + 3 * k1v.conjugate() ** 2))
    lhs = ((k2(z0 + h) - 2 * k2(z0) + k2(z0 - h)) / h ** 2
           - 2j * rc2.mu * (k2(z0 + h) - k2(z0 - h)) / (2 * h)
           - 4 * rc2.mu ** 2 * k2(z0).real)
    out.append(_check("kappa2-ode-residual", abs(lhs - rhs), 1e-7))
    return out


def suite_distributions(params: ChannelParams = DEFAULT_PARAMS) -> list:
    out = []
    p = 1.0
    for beta in (1.0, 2.0):
        d = distributions.BetaInput(beta=beta, power=p)
        mass, pw = distributions.input_moments(d)
        out.append(_check(f"beta{beta:g}-mass", abs(mass - 1.0), 1e-8))
        out.append(_check(f"beta{beta:g}-power", abs(pw - p) / p, 1e-8))
    opt = distributions.solve_optimal(p, params)
    mass, pw = distributions.input_moments(opt, params)
    out.append(_check("optimal-mass", abs(mass - 1.0), 1e-8))
    out.append(_check("optimal-power", abs(pw - p) / p, 1e-8))
    worst = 0.0
    for beta in (1.0, 2.0):
        d = distributions.BetaInput(beta=beta, power=p)
        for y in (0.2, 1.0, 2.0, 4.0):
            closed = distributions.beta_output_pdf(d, params, y)
            integral = distributions.output_pdf_integral(d, params, y)
            worst = max(worst, abs(closed - integral) / closed)
    out.append(_check("output-closed-vs-integral", worst, 1e-8))
    return out


def suite_information(params: ChannelParams = DEFAULT_PARAMS) -> list:
    out = []
    p = 1.0
    worst = 0.0
    for beta in (1.0, 2.0):
        r = information.mi_beta(beta, p, params)
        direct = information.mi_beta_formula(beta, p, params)
        worst = max(worst, abs(r.mi_nats - direct))
    out.append(_check("mi-beta-two-routes", worst, 1e-10))
    d2 = distributions.BetaInput(beta=2.0, power=p)
    hg = information.cond_entropy_general(d2, params)
    hb = information.cond_entropy_beta(2.0, p, params)
    out.append(_check("cond-entropy-beta2-general", abs(hg - hb), 1e-7))
    opt = distributions.solve_optimal(p, params)
    closed = information.mi_optimal(p, params, opt=opt).mi_nats
    quadr = information.mi_general(opt, params, power=p).mi_nats
    out.append(_check("mi-optimal-two-routes", abs(closed - quadr), 1e-7))
    out.append(_check(
        "baseline-vs-asymptote-log2",
        abs((information.mi_beta_asymptote(1.0, params)
             - information.prior_bound_baseline(params)) - math.log(2.0)),
        1e-12))
    return out


SUITES = {
    "specialfn": suite_specialfn,
    "normalization": suite_normalization,
    "determinant": suite_determinant,
    "green": suite_green,
    "ode": suite_ode,
    "distributions": suite_distributions,
    "information": suite_information,
}


def run_suites(names=("all",)) -> list:
    """Run the named suites (or all) and return the CheckResult list."""
    if "all" in names:
        names = list(SUITES)
    results = []
    for name in names:
        if name not in SUITES:
            raise ValueError(f"unknown suite {name!r}; known: {sorted(SUITES)} or 'all'")
        results.extend(SUITES[name]())
    return results
