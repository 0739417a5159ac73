"""Orthonormal basis, analytic projection, and space-constant estimates."""

import numpy as np
import pytest
from scipy.integrate import quad

from bergop import (
    ParameterError,
    basis_table,
    beta_infty,
    d_lp,
    d_p,
    disc_rule,
    eval_basis,
    exponential_weight,
    integrate_disc,
    kernel_diag,
    project_coeffs,
    reconstruct,
    standard_weight,
)
from bergop.provenance import EXACT, LOWER_BOUND


@pytest.mark.parametrize(
    "w,rule",
    [
        (standard_weight(0.0), disc_rule(96, 64)),
        (standard_weight(2.0), disc_rule(96, 64)),
        (exponential_weight(1.0, 1.0), disc_rule(128, 64, boundary_refine=6)),
    ],
)
def test_basis_gram_is_identity(w, rule):
    B = basis_table(w, 10)
    Z = rule.mesh()
    E = eval_basis(B, Z)  # (N, n_r, n_theta)
    om = w.omega(np.abs(Z))
    wts = rule.area_radial_weights()
    gram = np.einsum("art,brt,rt,r->ab", E, np.conj(E), om / rule.n_theta, wts)
    assert np.max(np.abs(gram - np.eye(B.N))) <= 1e-10


def test_eval_basis_normalization():
    B = basis_table(standard_weight(0.0), 5)
    vals = eval_basis(B, 0.5 + 0.25j)
    # e_n(z) = z^n sqrt(n+1) for the flat weight
    z = 0.5 + 0.25j
    expect = np.array([z**n * np.sqrt(n + 1.0) for n in range(5)])
    assert np.allclose(vals, expect, rtol=1e-13)


def test_project_coeffs_reproduces_analytic_polynomials():
    rng = np.random.default_rng(7)
    for w, rule in [
        (standard_weight(0.0), disc_rule(96, 64)),
        (exponential_weight(1.0, 1.0), disc_rule(160, 64, boundary_refine=6)),
    ]:
        B = basis_table(w, 8)
        c = rng.normal(size=8) + 1j * rng.normal(size=8)
        f = reconstruct(B, c)
        got = project_coeffs(B, f, rule)
        assert np.max(np.abs(got - c)) <= 1e-10


def test_projection_of_monomial_and_idempotence():
    w = standard_weight(0.0)
    B = basis_table(w, 8)
    rule = disc_rule(96, 64)
    f = lambda z: z**2 * np.conj(z)  # noqa: E731
    c1 = project_coeffs(B, f, rule)
    # P(z^2 zbar) = (h_2 / h_1) z, i.e. coefficient h_2 / sqrt(h_1) on e_1
    expect = np.zeros(8, dtype=complex)
    expect[1] = B.h[2] / np.sqrt(B.h[1])
    assert np.max(np.abs(c1 - expect)) <= 1e-12
    c2 = project_coeffs(B, reconstruct(B, c1), rule)
    assert np.max(np.abs(c2 - c1)) <= 1e-12


def test_d_lp_flat_weight_closed_form():
    # g_n = n^2 * (2 int r^(2n-1) (1-r^2)^2 r... ) / h_n = 2n/(n+2) when alpha = 0
    B = basis_table(standard_weight(0.0), 64)
    est = d_lp(B)
    n = np.arange(1, 64, dtype=float)
    expect = 2.0 * n / (n + 2.0)
    assert np.max(np.abs(est.g[1:] - expect)) <= 1e-12
    assert est.value == pytest.approx(np.sqrt(expect[-1]), rel=1e-13)
    assert est.g_last >= est.g_half  # the max sits at the truncation edge


def test_d_lp_against_direct_quadrature():
    for w in [standard_weight(1.0), exponential_weight(1.0, 1.0)]:
        B = basis_table(w, 12)
        est = d_lp(B)
        for n in (3, 11):
            val, _ = quad(
                lambda r, n=n: r ** (2 * n - 1) * w.rho2(r) * w.omega(r),
                0.0,
                1.0,
                epsabs=1e-14,
                epsrel=1e-12,
                limit=200,
            )
            g_direct = n * n * 2.0 * val / B.h[n]
            assert est.g[n] == pytest.approx(g_direct, rel=1e-9)


def test_kernel_diag_flat_weight_closed_forms():
    B = basis_table(standard_weight(0.0), 64)
    kd = kernel_diag(B, 0.5)  # x = |z|^2 = 1/4
    x = 0.25
    K_exact = 1.0 / (1.0 - x) ** 2
    # sum n^2 (n+1) x^(n-1) = sum n^3 x^(n-1) + sum n^2 x^(n-1)
    K1_exact = (1.0 + 4.0 * x + x * x) / (1.0 - x) ** 4 + (1.0 + x) / (1.0 - x) ** 3
    assert kd.K == pytest.approx(K_exact, rel=1e-12)
    assert kd.K1 == pytest.approx(K1_exact, rel=1e-12)
    arr = kernel_diag(B, np.array([0.0, 0.5]))
    assert arr.K[0] == pytest.approx(1.0)
    assert arr.K[1] == pytest.approx(kd.K)


def test_beta_infty_flat_weight_value():
    B = basis_table(standard_weight(0.0), 64)
    est = beta_infty(B)
    # the sup sits at r = 1/2 where sqrt(K1) dominates
    expect = np.sqrt(768.0 / 81.0)
    assert est.value == pytest.approx(expect, rel=1e-10)
    assert est.provenance == LOWER_BOUND


def test_d_p_exact_at_two_and_lower_bound_otherwise():
    B = basis_table(standard_weight(0.0), 16)
    est2 = d_p(B, p=2.0)
    assert est2.value == 1.0 and est2.provenance == EXACT
    est = d_p(B, p=1.5, monomial_cap=8, n_mixtures=8, rule=disc_rule(64, 64))
    assert est.value >= 1.0  # the constant monomial already achieves ratio 1
    assert est.provenance == LOWER_BOUND
    with pytest.raises(ParameterError):
        d_p(B, p=-1.0)


def test_basis_table_guards():
    with pytest.raises(ParameterError):
        basis_table(standard_weight(0.0), 0)
    B = basis_table(standard_weight(0.0), 4)
    with pytest.raises(ParameterError):
        reconstruct(B, np.ones(3))
