"""Fluctuation-machinery tests against dense linear algebra oracles."""

import math

import numpy as np
import pytest

from kerrchan import errors, fluctuations
from kerrchan.channel import ChannelParams, ReducedCoords


def dense_m(n, mu):
    """Brute-force construction of the discretization matrix."""
    alpha = 4.0 * mu * mu / n ** 3
    m = np.full((n - 1, n - 1), alpha)
    idx = np.arange(n - 1)
    m[idx, idx] = 2.0 + alpha
    m[idx[:-1], idx[:-1] + 1] = -1.0 + alpha
    m[idx[:-1] + 1, idx[:-1]] = -1.0 + alpha
    return m


def test_det_n2_is_scalar():
    for mu in (0.0, 1.0, 3.0):
        alpha = 4.0 * mu * mu / 8.0
        assert fluctuations.det_m(2, mu) == pytest.approx(2.0 + alpha, rel=1e-15)


def test_det_n3_brute_force():
    mu = 1.0
    alpha = 4.0 / 27.0
    brute = (2 + alpha) ** 2 - (alpha - 1) ** 2
    assert brute == pytest.approx(3 + 6 * alpha, rel=1e-14)
    assert fluctuations.det_m(3, mu) == pytest.approx(brute, rel=1e-14)


def test_det_vs_dense_lu():
    for n in (2, 3, 4, 7, 12, 25, 40, 60):
        for mu in (0.0, 0.5, 1.0, 2.0, 5.0):
            sign, logdet = np.linalg.slogdet(dense_m(n, mu))
            dense = sign * math.exp(logdet)
            assert fluctuations.det_m(n, mu) == pytest.approx(dense, rel=1e-10)


def test_inverse_entries_n3_direct():
    n, mu = 3, 1.0
    inv = np.linalg.inv(dense_m(n, mu))
    for i in range(1, n):
        for j in range(1, n):
            assert fluctuations.m_inverse_entry(n, mu, i, j) == pytest.approx(
                inv[i - 1, j - 1], abs=1e-14)


def test_inverse_identity_up_to_60():
    for n in (2, 5, 10, 20, 40, 60):
        for mu in (0.0, 0.5, 1.0, 2.0, 5.0):
            m = dense_m(n, mu)
            inv = np.array([[fluctuations.m_inverse_entry(n, mu, i, j)
                             for j in range(1, n)] for i in range(1, n)])
            resid = np.abs(m @ inv - np.eye(n - 1)).max()
            assert resid <= 1e-10


def test_inverse_symmetry():
    n, mu = 20, 3.0
    for i in range(1, n):
        for j in range(1, n):
            assert fluctuations.m_inverse_entry(n, mu, i, j) == pytest.approx(
                fluctuations.m_inverse_entry(n, mu, j, i), rel=1e-14)


def test_inverse_mu0_brownian_bridge():
    n = 16
    for i in range(1, n):
        for j in range(i, n):
            expected = n * (i / n) * (1 - j / n)
            assert fluctuations.m_inverse_entry(n, 0.0, i, j) == pytest.approx(
                expected, rel=1e-14)


def test_inverse_index_domain():
    with pytest.raises(errors.DomainError):
        fluctuations.m_inverse_entry(5, 1.0, 0, 1)
    with pytest.raises(errors.DomainError):
        fluctuations.m_inverse_entry(5, 1.0, 1, 5)


def test_bridge_coefficient_limit():
    """alpha N^4 / (4 det M) -> 3 mu^2/(3 + mu^2) monotonically in N."""
    for mu in (0.5, 1.0, 2.0):
        target = 3.0 * mu * mu / (3.0 + mu * mu)
        seq = [fluctuations.bridge_correction_coefficient(n, mu)
               for n in (10, 100, 1000)]
        errs = [abs(s - target) for s in seq]
        assert errs[0] > errs[1] > errs[2]
        assert errs[2] < 1e-4


# ----------------------------------------------------------- green matrix

def test_green_boundary_zeros():
    length = 1000.0
    for mu in (0.0, 1.3):
        for z, zp in ((0.0, 400.0), (1000.0, 400.0), (300.0, 0.0), (300.0, 1000.0)):
            g = fluctuations.green_matrix(z, zp, mu, length)
            assert g.g11 == 0.0 and g.g22 == 0.0
            assert g.g12 == 0.0 and g.g21 == 0.0


def test_green_symmetry_invariants_random():
    rng = np.random.default_rng(5)
    length = 1.0
    for _ in range(10_000):
        z, zp = rng.uniform(0.0, length, size=2)
        mu = rng.uniform(0.0, 4.0)
        a = fluctuations.green_matrix(z, zp, mu, length)
        b = fluctuations.green_matrix(zp, z, mu, length)
        assert a.g11 == pytest.approx(b.g11, rel=1e-12, abs=1e-15)
        assert a.g22 == pytest.approx(b.g22, rel=1e-12, abs=1e-15)
        assert a.g12 == pytest.approx(b.g21, rel=1e-12, abs=1e-15)


def test_green_mu0_brownian_bridge():
    length = 1.0
    z, zp = 0.3, 0.6
    g = fluctuations.green_matrix(z, zp, 0.0, length)
    bb = min(z, zp) / 2.0 * (1.0 - max(z, zp))
    assert g.g11 == pytest.approx(bb, rel=1e-14)
    assert g.g22 == pytest.approx(bb, rel=1e-14)
    assert g.g12 == 0.0 and g.g21 == 0.0


def test_green_continuity_at_coincidence():
    mu, length = 1.3, 1.0
    z = 0.6
    eps = 1e-9
    at = fluctuations.green_matrix(z, z, mu, length)
    above = fluctuations.green_matrix(z + eps, z, mu, length)
    below = fluctuations.green_matrix(z - eps, z, mu, length)
    for attr in ("g11", "g12", "g21", "g22"):
        assert getattr(at, attr) == pytest.approx(getattr(above, attr), abs=1e-7)
        assert getattr(at, attr) == pytest.approx(getattr(below, attr), abs=1e-7)


def test_green_discrete_delta():
    """The block operator applied to Green columns reproduces a discrete
    delta: off-diagonal residual small in sup norm, smooth-test-function
    integral equal to f(z')/L."""
    mu, length = 1.3, 1.0
    n = 2001
    zs = np.linspace(0.0, length, n)
    h = zs[1] - zs[0]
    ip = int(0.6 * (n - 1))
    zp = zs[ip]
    g11 = np.array([fluctuations.green_matrix(z, zp, mu, length).g11 for z in zs])
    g21 = np.array([fluctuations.green_matrix(z, zp, mu, length).g21 for z in zs])
    g12 = np.array([fluctuations.green_matrix(z, zp, mu, length).g12 for z in zs])
    g22 = np.array([fluctuations.green_matrix(z, zp, mu, length).g22 for z in zs])

    def d1(f):
        out = np.zeros_like(f)
        out[1:-1] = (f[2:] - f[:-2]) / (2 * h)
        return out

    def d2(f):
        out = np.zeros_like(f)
        out[1:-1] = (f[2:] - 2 * f[1:-1] + f[:-2]) / h ** 2
        return out

    ml = mu / length
    rows = {
        "11": 2 * (-d2(g11) + 4 * ml * ml * g11 - 2 * ml * d1(g21)),
        "21": 2 * (2 * ml * d1(g11) - d2(g21)),
        "12": 2 * (-d2(g12) + 4 * ml * ml * g12 - 2 * ml * d1(g22)),
        "22": 2 * (2 * ml * d1(g12) - d2(g22)),
    }
    mask = np.ones(n, dtype=bool)
    mask[[0, n - 1]] = False
    mask[ip - 2: ip + 3] = False
    for name, r in rows.items():
        assert np.abs(r[mask]).max() <= 1e-3, name
    f = np.sin(2.1 * zs + 0.3)
    target = f[ip] / length
    assert np.trapezoid(rows["11"] * f, zs) == pytest.approx(target, abs=1e-4)
    assert np.trapezoid(rows["22"] * f, zs) == pytest.approx(target, abs=1e-4)
    assert np.trapezoid(rows["21"] * f, zs) == pytest.approx(0.0, abs=1e-4)
    assert np.trapezoid(rows["12"] * f, zs) == pytest.approx(0.0, abs=1e-4)


def test_green_domain():
    with pytest.raises(errors.DomainError):
        fluctuations.green_matrix(-0.1, 0.5, 1.0, 1.0)
    with pytest.raises(errors.DomainError):
        fluctuations.green_matrix(0.1, 1.5, 1.0, 1.0)


# ----------------------------------------------------- quantum correction

# Independently transcribed bracket coefficients of the pre-exponential
# linear correction, with the overall mu folded in: the x0 monomial carries
# mu^2 (15 + mu^2), the y0 monomial mu ((2/3) mu^2 - 10).
_QC_X0 = [1.0, 0.0, 15.0, 0.0, 0.0]      # mu^4 + 15 mu^2
_QC_Y0 = [2.0 / 3.0, 0.0, -10.0, 0.0]    # (2/3) mu^3 - 10 mu


def qc_bracket_oracle(mu, rho, x0, y0):
    d = 1.0 + mu * mu / 3.0
    lin = np.polyval(_QC_X0, mu) * x0 + np.polyval(_QC_Y0, mu) * y0
    return 1.0 - lin / (rho * 15.0 * d * d)


def test_quantum_correction_peak():
    params = ChannelParams(gamma=1.0, length=1.0, noise_density=1e-4)
    for mu in (0.0, 1.0, 2.5):
        rc = ReducedCoords(mu=mu, x0=0.0, y0=0.0)
        expected = 1.0 / (math.pi * params.noise_power * math.sqrt(1 + mu * mu / 3))
        assert fluctuations.quantum_correction(rc, 1.0, params) == pytest.approx(
            expected, rel=1e-14)


def test_quantum_correction_linear_channel():
    params = ChannelParams(gamma=0.0, length=1.0, noise_density=1e-4)
    rc = ReducedCoords(mu=0.0, x0=0.3, y0=-0.2)
    assert fluctuations.quantum_correction(rc, 1.0, params) == pytest.approx(
        1.0 / (math.pi * params.noise_power), rel=1e-14)


def test_quantum_correction_coefficient_table():
    params = ChannelParams(gamma=1.0, length=1.0, noise_density=1e-4)
    for mu, rho, x0, y0 in ((1.0, 1.0, 0.01, 0.02), (2.3, 0.7, -0.03, 0.015)):
        rc = ReducedCoords(mu=mu, x0=x0, y0=y0)
        d = 1 + mu * mu / 3
        bracket = qc_bracket_oracle(mu, rho, x0, y0)
        expected = bracket / (math.pi * params.noise_power * math.sqrt(d))
        assert fluctuations.quantum_correction(rc, rho, params) == pytest.approx(
            expected, rel=1e-14)


def test_quantum_correction_domain():
    params = ChannelParams(gamma=1.0, length=1.0, noise_density=1e-4)
    rc = ReducedCoords(mu=1.0, x0=0.0, y0=0.0)
    with pytest.raises(errors.DomainError):
        fluctuations.quantum_correction(rc, 0.0, params)
