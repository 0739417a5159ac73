"""Bidegree polynomial calculus and the correction-operator norm."""

import numpy as np
import pytest

from bergop import (
    BiPoly,
    ParameterError,
    analytic_projection,
    basis_table,
    complement_projection,
    disc_rule,
    estimate_d_m,
    estimate_d_m_direct,
    exponential_weight,
    inner_product,
    integrate_disc,
    m_apply,
    norm,
    standard_weight,
)

B0 = basis_table(standard_weight(0.0), 48)
BE = basis_table(exponential_weight(1.0, 1.0), 48)


def test_dbar_power_rule():
    f = BiPoly.monomial(2, 3)
    g = f.dbar()
    expect = BiPoly.monomial(2, 2, 3.0)
    assert g.coeffs_match(expect, tol=0.0)
    assert BiPoly.monomial(4, 0).dbar().max_abs_coef() == 0.0


def test_antiderivative_is_right_inverse():
    rng = np.random.default_rng(3)
    c = rng.normal(size=(5, 4)) + 1j * rng.normal(size=(5, 4))
    g = BiPoly(c)
    assert g.dbar_antiderivative().dbar().coeffs_match(g, tol=1e-15)


def test_eval_matches_direct_sum():
    rng = np.random.default_rng(5)
    c = rng.normal(size=(4, 3)) + 1j * rng.normal(size=(4, 3))
    f = BiPoly(c)
    z = rng.normal(size=7) + 1j * rng.normal(size=7)
    direct = sum(
        c[a, b] * z**a * np.conj(z) ** b for a in range(4) for b in range(3)
    )
    assert np.max(np.abs(f(z) - direct)) <= 1e-13


@pytest.mark.parametrize("B", [B0, BE], ids=["flat", "exp"])
def test_correction_plus_projection_reproduces(B):
    # M(dbar f) + P f = f on monomials
    for a in range(7):
        for b in range(7):
            f = BiPoly.monomial(a, b, 1.0 + 0.5j)
            lhs = m_apply(f.dbar(), B) + analytic_projection(f, B)
            assert lhs.coeffs_match(f, tol=1e-12), (a, b)


def test_correction_ignores_analytic_gauge():
    rng = np.random.default_rng(11)
    g = BiPoly(rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)))
    u = g.dbar_antiderivative()
    gauge = BiPoly(rng.normal(size=(6, 1)) + 1j * rng.normal(size=(6, 1)))
    assert complement_projection(u + gauge, B0).coeffs_match(
        complement_projection(u, B0), tol=1e-12
    )


def test_flat_weight_small_cases():
    # P(z zbar) = h_1 / h_0 = 1/2 for the flat weight
    p = analytic_projection(BiPoly.monomial(1, 1), B0)
    assert p.coef[0, 0] == pytest.approx(0.5)
    # M(1): antiderivative zbar projects to zero, so M(1) = zbar
    m1 = m_apply(BiPoly.monomial(0, 0), B0)
    assert m1.coeffs_match(BiPoly.monomial(0, 1), tol=1e-15)


def test_inner_product_against_quadrature():
    rng = np.random.default_rng(17)
    rule = disc_rule(128, 64)
    for B in (B0, BE):
        f = BiPoly(rng.normal(size=(3, 4)) + 1j * rng.normal(size=(3, 4)))
        g = BiPoly(rng.normal(size=(4, 3)) + 1j * rng.normal(size=(4, 3)))
        w = B.weight
        got = inner_product(f, g, B)
        want = integrate_disc(rule, lambda z: f(z) * np.conj(g(z)) * w.omega(np.abs(z)))
        assert abs(got - want) <= 1e-10 * max(1.0, abs(got))
        assert norm(f, B) == pytest.approx(
            np.sqrt(inner_product(f, f, B).real), rel=1e-13
        )


def test_correction_norm_smallest_case():
    # D = 0: the only field is constant, M(1) = zbar, so the ratio is
    # ||zbar|| / ||1|| = sqrt(h_1 / h_0)
    est = estimate_d_m(B0, 0)
    assert est.value == pytest.approx(np.sqrt(0.5), rel=1e-13)
    este = estimate_d_m(BE, 0)
    assert este.value == pytest.approx(np.sqrt(BE.h[1] / BE.h[0]), rel=1e-12)


def test_correction_norm_monotone_and_stable():
    vals = [estimate_d_m(B0, D).value for D in (4, 6, 8, 10, 12)]
    assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))
    # the flat-weight estimate has saturated by D = 10
    assert vals[-1] == pytest.approx(0.8316611546312449, abs=1e-10)
    assert abs(vals[-1] - vals[-2]) <= 1e-10


@pytest.mark.parametrize("B", [B0, BE], ids=["flat", "exp"])
def test_correction_norm_dual_route(B):
    block = estimate_d_m(B, 3).value
    direct = estimate_d_m_direct(B, 3)
    assert block == pytest.approx(direct, rel=1e-10)


def test_bipoly_guards():
    with pytest.raises(ParameterError):
        BiPoly.monomial(-1, 0)
    with pytest.raises(ParameterError):
        estimate_d_m(B0, -1)
    small = basis_table(standard_weight(0.0), 4)
    with pytest.raises(ParameterError):
        estimate_d_m(small, 4)  # needs moments up to 2D + 1
    with pytest.raises(ParameterError):
        inner_product(BiPoly.monomial(4, 4), BiPoly.monomial(4, 4), small)
