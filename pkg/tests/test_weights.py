import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import gammaln

from bergop.errors import ParameterError
from bergop.weights import (
    Weight,
    exponential_weight,
    moment,
    moment_table,
    parse_weight,
    radial_integrals,
    standard_weight,
)


def standard_moment_oracle(alpha: float, n: int) -> float:
    # Gamma(n+1) Gamma(alpha+1) / Gamma(n+alpha+2) through log space
    return float(np.exp(gammaln(n + 1) + gammaln(alpha + 1) - gammaln(n + alpha + 2)))


@pytest.mark.parametrize("alpha", [0.0, 1.0, 2.5])
def test_standard_moments_match_gamma_formula(alpha):
    w = standard_weight(alpha)
    h = moment_table(w, 2.0, 201)
    oracle = np.array([standard_moment_oracle(alpha, n) for n in range(201)])
    assert np.max(np.abs(h - oracle) / oracle) <= 1e-10


def test_flat_weight_moments_are_harmonic():
    w = standard_weight(0.0)
    h = moment_table(w, 2.0, 50)
    n = np.arange(50)
    assert np.allclose(h, 1.0 / (n + 1.0), rtol=1e-12, atol=0)


def test_exponential_moment_zero_against_quad():
    """h_0 for exp(1,1) equals the adaptive-quadrature value of the defining
    integral (and the classical exponential-integral evaluation)."""
    w = exponential_weight(1.0, 1.0)
    val, _ = quad(lambda r: 2.0 * r * np.exp(-1.0 / (1.0 - r * r)), 0.0, 1.0, epsabs=1e-14)
    assert abs(moment(w, 2.0, 0) - val) <= 1e-12
    assert abs(moment(w, 2.0, 0) - 0.14849550677592205) <= 1e-12


@pytest.mark.parametrize("w", [standard_weight(0.0), standard_weight(2.0), exponential_weight(1.0, 1.0), exponential_weight(0.5, 2.0)])
def test_moments_strictly_decreasing(w):
    h = moment_table(w, 2.0, 80)
    assert np.all(np.diff(h) < 0.0)


def test_radial_integrals_against_quad():
    w = exponential_weight(1.0, 1.0)
    powers = np.array([1.0, 5.0, 12.0])
    vals = radial_integrals(lambda r: w.omega(r), powers)
    for p, v in zip(powers, vals):
        ref, _ = quad(lambda r: w.omega(r) * r ** p, 0.0, 1.0, epsabs=1e-14, epsrel=1e-13)
        assert abs(v - ref) <= 1e-12 * max(1.0, abs(ref))


def test_log_omega_consistent_with_omega():
    r = np.linspace(0.01, 0.95, 37)
    for w in (standard_weight(0.0), standard_weight(1.5), exponential_weight(1.0, 1.0)):
        assert np.allclose(np.exp(w.log_omega(r)), w.omega(r), rtol=1e-13, atol=0)


def test_log_omega_finite_where_omega_underflows():
    w = exponential_weight(1.0, 1.0)
    r = np.array([1.0 - 1e-9])
    assert w.omega(r)[0] == 0.0  # double precision underflow
    assert np.isfinite(w.log_omega(r)[0])


def test_nu_p_formulas():
    r = np.linspace(0.05, 0.9, 11)
    ws = standard_weight(1.0)
    assert np.allclose(ws.nu_p(1.5, r), ws.omega(r))
    we = exponential_weight(1.0, 1.0)
    assert np.allclose(we.nu_p(1.5, r), we.omega(r) ** 0.75, rtol=1e-13)


def test_rho2_formulas():
    r = np.linspace(0.0, 0.95, 20)
    ws = standard_weight(2.0)
    assert np.allclose(ws.rho2(r), (1.0 - r * r) ** 2)
    we = exponential_weight(1.0, 1.0)
    assert np.allclose(we.rho2(r), (we.tau(r) ** 2 / (1.0 - r)) ** 2)


def test_lap_potential_against_finite_differences():
    """The closed-form radial Laplacian of the exponential potential matches
    f'' + f'/r computed by centered differences."""
    we = exponential_weight(1.3, 0.7)
    pot = lambda r: we.b * (1.0 - r * r) ** (-we.a)  # noqa: E731
    r = np.linspace(0.1, 0.8, 15)
    h = 1e-5
    d2 = (pot(r + h) - 2.0 * pot(r) + pot(r - h)) / h**2
    d1 = (pot(r + h) - pot(r - h)) / (2.0 * h)
    lap_fd = d2 + d1 / r
    assert np.max(np.abs(we.lap_potential(r) - lap_fd) / lap_fd) <= 1e-5


def test_tau_is_inverse_sqrt_of_laplacian():
    we = exponential_weight(1.0, 1.0)
    r = np.linspace(0.0, 0.9, 10)
    assert np.allclose(we.tau(r), we.lap_potential(r) ** -0.5, rtol=1e-12)


def test_parse_weight_round_trip():
    assert parse_weight("standard:0") == standard_weight(0.0)
    assert parse_weight("standard:2.5") == standard_weight(2.5)
    assert parse_weight("exp:1:1") == exponential_weight(1.0, 1.0)
    w = exponential_weight(0.5, 2.0)
    assert parse_weight(w.spec_string()) == w


@pytest.mark.parametrize("spec", ["standard", "standard:-1", "exp:1", "exp:0:1", "gauss:1", "exp:1:-2"])
def test_parse_weight_rejects_bad_specs(spec):
    with pytest.raises(ParameterError):
        parse_weight(spec)


def test_weight_guards():
    with pytest.raises(ParameterError):
        standard_weight(-0.5)
    with pytest.raises(ParameterError):
        exponential_weight(1.0, 0.0)
    with pytest.raises(ParameterError):
        Weight(kind="mystery")
    ws = standard_weight(0.0)
    with pytest.raises(ParameterError):
        ws.tau(0.5)  # defined only for the exponential class
