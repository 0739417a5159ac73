"""Truncated operator matrices, norm bounds, and Carleson diagnostics."""

import numpy as np
import pytest
from scipy.integrate import quad

from bergop import (
    AliasingError,
    ParameterError,
    assemble_K,
    basis_table,
    c_phi_norm_bound,
    carleson_profile,
    carleson_ratio,
    composed_gram,
    disc_rule,
    exponential_weight,
    make_identity,
    make_mobius,
    make_poly_twist,
    make_radial_stretch,
    spectral_diagnostics,
    standard_weight,
)

W0 = standard_weight(0.0)


@pytest.mark.parametrize(
    "w",
    [standard_weight(0.0), standard_weight(2.0), exponential_weight(1.0, 1.0)],
    ids=["flat", "alpha2", "exp"],
)
def test_identity_symbol_gives_identity_matrix(w):
    B = basis_table(w, 16)
    om = assemble_K(make_identity(), B)
    assert np.max(np.abs(om.matrix - np.eye(16))) <= 1e-10
    d = spectral_diagnostics(om)
    assert d.sigma_min == pytest.approx(1.0, abs=1e-10)
    assert d.cond == pytest.approx(1.0, abs=1e-9)
    assert d.trend_ratio == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("spec", ["mobius", "twist"])
def test_fourier_matches_dense_assembly(spec):
    s = make_mobius(0.2 + 0.1j) if spec == "mobius" else make_poly_twist(0.4)
    B = basis_table(W0, 8)
    rule = disc_rule(128, 256)
    a1 = assemble_K(s, B, rule=rule, method="fourier").matrix
    a2 = assemble_K(s, B, rule=rule, method="dense").matrix
    assert np.max(np.abs(a1 - a2)) <= 1e-12
    with pytest.raises(ParameterError):
        assemble_K(s, B, rule=rule, method="mystery")


def test_modulus_preserving_symbols_give_diagonal_matrices():
    B = basis_table(W0, 12)
    for s in (make_poly_twist(0.5), make_radial_stretch(1.3, 0.5)):
        A = assemble_K(s, B).matrix
        off = A - np.diag(np.diag(A))
        assert np.max(np.abs(off)) <= 1e-10, s.family


def test_twist_diagonal_against_adaptive_quadrature():
    C = 0.5
    s = make_poly_twist(C)
    B = basis_table(W0, 12)
    A = assemble_K(s, B).matrix
    for m in (1, 4, 9):
        # d_m = (m+1) * 2 int r^(2m+1) e^{i m b(r)} dr for the flat weight
        ang = lambda r: m * C * (r - r**3 / 3.0)  # noqa: E731
        re_val, _ = quad(lambda r: r ** (2 * m + 1) * np.cos(ang(r)), 0, 1, epsabs=1e-14)
        im_val, _ = quad(lambda r: r ** (2 * m + 1) * np.sin(ang(r)), 0, 1, epsabs=1e-14)
        expect = (m + 1.0) * 2.0 * (re_val + 1j * im_val)
        assert abs(A[m, m] - expect) <= 1e-11


def test_composition_tail_shrinks_on_fixed_leading_block():
    # The Mobius map is self-inverse, so K(phi) @ K(phi) should approach the
    # identity as the truncation grows; the leading-block deviation shrinks
    # while the full-square deviation stays O(1) from the cut tail.
    s = make_mobius(0.3)

    def dev_half(N):
        B = basis_table(W0, N)
        A = assemble_K(s, B).matrix
        S = A @ A
        h = N // 2
        return float(np.max(np.abs(S[:h, :h] - np.eye(h))))

    d16, d32 = dev_half(16), dev_half(32)
    assert d32 <= d16
    assert d32 <= 2.5e-3

    B = basis_table(W0, 32)
    A = assemble_K(s, B).matrix
    dev_full = float(np.max(np.abs(A @ A - np.eye(32))))
    assert dev_full > 10 * d32  # the cut tail dominates at the truncation edge


def test_tall_truncation_sigma_min_is_stable():
    s = make_mobius(0.3)
    vals = []
    for n in (16, 32):
        B = basis_table(W0, 2 * n)
        om = assemble_K(s, B, n_cols=n)
        assert om.n_rows == 2 * n
        vals.append(spectral_diagnostics(om).sigma_min)
    assert abs(vals[1] - vals[0]) / vals[0] <= 0.025
    # the exact operator is invertible with ||K^{ -1}||^{-1} = (1-c)/(1+c)
    floor = (1.0 - 0.3) / (1.0 + 0.3)
    assert vals[1] >= floor - 0.02


def test_identity_tall_block_is_isometry():
    B = basis_table(W0, 32)
    om = assemble_K(make_identity(), B, n_cols=16)
    assert spectral_diagnostics(om).sigma_min == pytest.approx(1.0, abs=1e-10)


def test_mobius_norm_bounds_closed_form():
    c = 0.3
    bound = c_phi_norm_bound(make_mobius(c), W0)
    b1 = ((1.0 - c) / (1.0 + c)) ** 2
    b2 = ((1.0 + c) / (1.0 - c)) ** 2
    assert bound.b1 == pytest.approx(b1, abs=1e-2)
    assert bound.b2 == pytest.approx(b2, abs=1e-2)
    assert bound.b2 <= b2 + 1e-12  # grid sup cannot exceed the true sup
    assert bound.norm_upper == pytest.approx(np.sqrt(bound.b2))
    assert not bound.unbounded_evidence


def test_area_preserving_symbols_have_unit_ratio():
    bound = c_phi_norm_bound(make_poly_twist(0.7), W0)
    assert bound.b1 == pytest.approx(1.0, abs=1e-10)
    assert bound.b2 == pytest.approx(1.0, abs=1e-10)
    be = c_phi_norm_bound(make_identity(), exponential_weight(1.0, 1.0))
    assert be.b1 == pytest.approx(1.0, abs=1e-10)
    assert be.b2 == pytest.approx(1.0, abs=1e-10)


def test_degenerate_jacobian_at_origin_flags_unbounded():
    bound = c_phi_norm_bound(make_radial_stretch(2.0, 0.5), W0)
    assert bound.unbounded_evidence
    assert bound.b2 > 1e6


def test_composed_gram_identity_and_hermitian():
    B = basis_table(W0, 12)
    G = composed_gram(make_identity(), B)
    assert np.max(np.abs(G - np.eye(12))) <= 1e-10
    Gm = composed_gram(make_mobius(0.3), B)
    assert np.max(np.abs(Gm - Gm.conj().T)) <= 1e-12


def test_carleson_identity_profile_is_flat():
    B = basis_table(W0, 12)
    prof = carleson_profile(make_identity(), B)
    assert np.max(np.abs(prof - 1.0)) <= 1e-10


def test_carleson_witness_below_norm_bound():
    B = basis_table(W0, 12)
    s = make_mobius(0.3)
    witness = carleson_ratio(s, B)
    bound = c_phi_norm_bound(s, W0)
    assert witness <= bound.b2 + 1e-6
    assert witness >= 1.0  # the pull-back measure is not a contraction everywhere


def test_aliasing_guard_on_coarse_angular_grids():
    B = basis_table(W0, 40)
    with pytest.raises(AliasingError):
        assemble_K(make_mobius(0.2), B, rule=disc_rule(64, 64))


def test_leading_block_and_csv_round_trip(tmp_path):
    B = basis_table(W0, 16)
    om = assemble_K(make_mobius(0.2), B, n_cols=8)
    blk = om.leading_block(4)
    assert blk.matrix.shape == (8, 4)  # keeps the 2:1 row surplus
    with pytest.raises(ParameterError):
        om.leading_block(0)
    with pytest.raises(ParameterError):
        om.leading_block(9)
    path = tmp_path / "k.csv"
    om.to_csv(path)
    raw = np.loadtxt(path, delimiter=",").reshape(om.n_rows, om.N, 2)
    back = raw[..., 0] + 1j * raw[..., 1]
    assert np.max(np.abs(back - om.matrix)) <= 1e-15
    assert om.column_norm(0) == pytest.approx(float(np.linalg.norm(om.matrix[:, 0])))
