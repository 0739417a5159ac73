"""Invertibility certificates: ledger plumbing, margins, thresholds."""

import numpy as np
import pytest

from bergop import (
    ConstantEstimate,
    ConstantsLedger,
    IncompleteLedgerError,
    ParameterError,
    assemble_ledger,
    check_example_thresholds,
    check_prop41,
    check_theorem31,
    exponential_weight,
    gamma_constants,
    make_identity,
    make_mobius,
    make_poly_twist,
    make_radial_stretch,
    margin_radii,
    standard_weight,
    stretch_exponent_threshold,
)
from bergop.provenance import EXACT, LOWER_BOUND, UPPER_BOUND, USER

W0 = standard_weight(0.0)
WE = exponential_weight(1.0, 1.0)

# space-only constants are reused across most tests
L_ID = assemble_ledger(make_identity(), W0, N=64, bidegree=10)


def test_identity_certificate_passes_with_caveat():
    rep = check_theorem31(make_identity(), W0, L_ID)
    assert rep.status == "pass" and rep.passed
    assert rep.rigor == "numerical-evidence"
    assert "d_M" in rep.caveat  # the truncated correction norm is a lower bound
    assert rep.details["sup_mu"] == 0.0
    assert rep.details["grid"]["radial_fast_path"]


def test_identity_ledger_frozen_values():
    vals = {k: L_ID.value(k) for k in ("d_LP", "d_M", "beta_infty", "d_phi", "d_psi")}
    assert vals["d_LP"] == pytest.approx(1.392286, abs=1e-5)
    assert vals["d_M"] == pytest.approx(0.8316611546312449, abs=1e-9)
    assert vals["beta_infty"] == pytest.approx(np.sqrt(768.0 / 81.0), rel=1e-9)
    assert vals["d_phi"] == 1.0 and vals["d_psi"] == 1.0
    gam = gamma_constants(L_ID)
    expect = 0.7 / (vals["d_LP"] * vals["d_M"])
    assert gam.gamma_psi == pytest.approx(expect, rel=1e-12)
    assert gam.gamma_psi == pytest.approx(0.6045371982329406, rel=1e-6)


def test_margin_parameter_window():
    bad = L_ID.with_entry("delta_user", ConstantEstimate(0.75, USER))
    with pytest.raises(ParameterError):
        gamma_constants(bad)
    with pytest.raises(ParameterError):
        gamma_constants(L_ID.with_entry("delta_user", ConstantEstimate(1.0 / np.sqrt(2.0), USER)))


def test_large_beltrami_hits_hypothesis_gate():
    s = make_radial_stretch(3.0, 0.5)  # |mu| = 1/2 inside the seam
    rep = check_theorem31(s, W0, L_ID)
    assert rep.status == "hypothesis-failure"
    assert rep.details["hypothesis"]["sup_mu"] >= 0.5
    assert not rep.passed


def test_certificate_is_monotone_in_the_constants():
    s = make_poly_twist(0.3)
    base = check_theorem31(s, W0, L_ID)
    assert base.passed
    for key in ("d_LP", "d_M", "d_phi", "d_psi"):
        est = L_ID.get(key)
        worse = L_ID.with_entry(key, ConstantEstimate(est.value * 50.0, est.provenance))
        rep = check_theorem31(s, W0, worse)
        assert rep.status == "fail", key


def test_threshold_implies_theorem_for_twists():
    gam = gamma_constants(L_ID)
    c_thr = min(1.0, gam.gamma_psi, gam.gamma_phi)
    seen = set()
    for mult in (0.5, 0.9, 1.5, 2.5):
        s = make_poly_twist(mult * c_thr)
        L = L_ID  # modulus-preserving: d_phi = d_psi = 1 already in the ledger
        thr = check_example_thresholds(s, L, w=W0)
        thm = check_theorem31(s, W0, L)
        seen.add((thr.status, thm.status))
        assert not (thr.status == "pass" and thm.status == "fail"), mult
    # the sampled amplitudes straddle the threshold in both checks
    assert ("pass", "pass") in seen
    assert ("fail", "fail") in seen
    # the sufficient condition is strictly stronger: the slack window where
    # the pointwise margins still pass is visible at 1.5x the amplitude bound
    assert ("fail", "pass") in seen


def test_threshold_and_theorem_agree_for_stretches():
    seen = set()
    for a in (1.05, 2.8):
        s = make_radial_stretch(a, 0.5)
        L = assemble_ledger(s, W0, N=32, bidegree=6)
        thr = check_example_thresholds(s, L, w=W0)
        thm = check_theorem31(s, W0, L)
        seen.add((thr.status, thm.status))
        assert not (thr.status == "pass" and thm.status == "fail"), a
    assert ("pass", "pass") in seen
    assert ("fail", "fail") in seen


def test_stretch_threshold_formula():
    assert stretch_exponent_threshold(0.5, 0.5) == pytest.approx((1 + 0.375) / (1 - 0.375))
    assert stretch_exponent_threshold(2.0, 0.5) == np.inf  # margin exceeds 1


def test_thresholds_not_applicable_off_family_or_weight():
    rep = check_example_thresholds(make_mobius(0.3), L_ID, w=W0)
    assert rep.status == "not-applicable"
    rep2 = check_example_thresholds(make_poly_twist(0.1), L_ID, w=WE)
    assert rep2.status == "not-applicable"
    assert "power-law" in rep2.details["reason"]


def test_exponential_weight_identity_regression():
    L = assemble_ledger(make_identity(), WE, N=48, bidegree=8)
    assert L.value("d_LP") == pytest.approx(0.462113, abs=1e-5)
    assert L.value("d_M") == pytest.approx(0.551764, abs=1e-5)
    rep = check_theorem31(make_identity(), WE, L)
    assert rep.passed
    # the pointwise margins for this weight decay one order faster than the
    # twist Beltrami modulus, so even a tiny amplitude fails
    rep2 = check_theorem31(make_poly_twist(0.05), WE, L)
    assert rep2.status == "fail"


def test_prop41_identity_and_budget_formula():
    rep = check_prop41(make_identity(), W0, 2.0, L_ID)
    assert rep.passed
    comp = rep.details["delta_components"]
    bphi = L_ID.value("beta_phi")
    assert comp["gradient_term"] == pytest.approx(1.0 / (2.0 * bphi), rel=1e-12)
    core = (
        L_ID.value("beta_infty")
        * L_ID.value("d_P")
        * L_ID.value("d_M")
        * max(L_ID.value("d_phi"), L_ID.value("d_psi"))
    )
    expect = 1.0 / (np.sqrt(np.pi) * bphi**2.0 * core)
    assert comp["kernel_term"] == pytest.approx(expect, rel=1e-12)
    assert rep.details["delta"] == pytest.approx(min(comp["gradient_term"], comp["kernel_term"]))


def test_prop41_gates():
    rep = check_prop41(make_mobius(0.3), W0, 2.0, L_ID)
    assert rep.status == "hypothesis-failure"  # phi(0) != 0
    rep2 = check_prop41(make_identity(), W0, 3.0, L_ID)
    assert rep2.status == "hypothesis-failure"  # p outside (1, 2]
    rep3 = check_prop41(make_identity(), W0, 1.0, L_ID)
    assert rep3.status == "hypothesis-failure"
    rep4 = check_prop41(make_poly_twist(0.2), W0, 2.0, L_ID)
    assert rep4.status == "not-applicable"  # no conformality radius
    # a seam at 1/2 can never beat the budget, which caps at 1/2
    s = make_radial_stretch(1.01, 0.5)
    L = assemble_ledger(s, W0, N=32, bidegree=6)
    rep5 = check_prop41(s, W0, 2.0, L)
    assert rep5.status == "fail"
    assert rep5.details["delta"] <= 0.5


def test_margin_radii_include_structural_points():
    radii = margin_radii(200, breakpoints=(0.5, 0.9))
    assert 0.5 in radii and 0.9 in radii
    assert np.all(np.diff(radii) > 0)
    assert radii[0] >= 1e-3 and radii[-1] <= 1.0 - 1e-6


def test_ledger_round_trip_and_guards():
    d = L_ID.to_dict()
    back = ConstantsLedger.from_dict(d)
    assert back.to_dict() == d
    with pytest.raises(IncompleteLedgerError):
        ConstantsLedger({}).require("d_P")
    with pytest.raises(IncompleteLedgerError):
        ConstantsLedger({}).get("d_M")
    with pytest.raises(ValueError):
        ConstantEstimate(float("nan"), EXACT)
    with pytest.raises(ValueError):
        ConstantEstimate(1.0, "hearsay")
    with pytest.raises(ParameterError):
        ConstantsLedger({"d_P": ConstantEstimate(-1.0, EXACT)})


def test_conservative_ledger_upgrades_rigor():
    L = ConstantsLedger(
        {
            "d_P": ConstantEstimate(1.0, EXACT),
            "d_LP": ConstantEstimate(1.5, UPPER_BOUND),
            "d_M": ConstantEstimate(0.9, UPPER_BOUND),
            "d_phi": ConstantEstimate(1.0, EXACT),
            "d_psi": ConstantEstimate(1.0, EXACT),
            "beta_infty": ConstantEstimate(3.2, UPPER_BOUND),
            "beta_phi": ConstantEstimate(1.0, UPPER_BOUND),
            "delta_user": ConstantEstimate(0.7, USER),
        }
    )
    rep = check_theorem31(make_identity(), W0, L)
    assert rep.rigor == "proof-grade"
    assert rep.passed
    assert L.all_conservative
    assert not L_ID.all_conservative
    assert L_ID.get("beta_infty").provenance == LOWER_BOUND
