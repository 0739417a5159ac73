"""Sufficient-condition certificates for invertibility of projected compositions.

Two checks are exposed.  ``check_theorem31`` evaluates the Beltrami-smallness
conditions pointwise on a polar grid: invertibility follows when |mu| stays
below a margin built from the weight geometry and a ledger of operator-norm
constants.  ``check_prop41`` instead certifies symbols that are conformal on
an outer annulus whose inner radius is small compared with a computable
budget.  Both consume a ConstantsLedger so that every constant entering a
verdict carries an explicit provenance, and both label their output as
numerical evidence whenever any ledger entry is only an estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np

from .basis import basis_table, beta_infty, d_lp, d_p
from .bipoly import estimate_d_m
from .errors import IncompleteLedgerError, ParameterError
from .operators import assemble_K, c_phi_norm_bound, rule_for_symbol
from .provenance import EXACT, LOWER_BOUND, UPPER_BOUND, USER, ConstantEstimate
from .symbols import SymbolSpec, beltrami, jacobian
from .weights import Weight

LEDGER_KEYS = ("d_P", "d_LP", "d_M", "d_phi", "d_psi", "beta_infty", "beta_phi", "delta_user")

MU_GATE = 0.5  # hypothesis ceiling for the Beltrami modulus


@dataclass(frozen=True)
class ConstantsLedger:
    """Named constants with provenance; certificate inputs are drawn from here."""

    entries: Dict[str, ConstantEstimate] = field(default_factory=dict)

    def __post_init__(self):
        for key, est in self.entries.items():
            if not est.value > 0.0:
                raise ParameterError(f"ledger entry {key} must be positive, got {est.value}")

    def get(self, key: str) -> ConstantEstimate:
        try:
            return self.entries[key]
        except KeyError:
            raise IncompleteLedgerError(f"ledger is missing entry {key!r}") from None

    def value(self, key: str) -> float:
        return self.get(key).value

    def require(self, *keys: str) -> None:
        missing = [k for k in keys if k not in self.entries]
        if missing:
            raise IncompleteLedgerError(f"ledger is missing entries: {', '.join(missing)}")

    def with_entry(self, key: str, est: ConstantEstimate) -> "ConstantsLedger":
        merged = dict(self.entries)
        merged[key] = est
        return ConstantsLedger(merged)

    @property
    def all_conservative(self) -> bool:
        """True when no entry is estimated from the anti-conservative side."""
        return all(e.provenance in (EXACT, UPPER_BOUND, USER) for e in self.entries.values())

    def to_dict(self) -> dict:
        return {k: self.entries[k].to_dict() for k in sorted(self.entries)}

    @classmethod
    def from_dict(cls, d: dict) -> "ConstantsLedger":
        return cls({k: ConstantEstimate.from_dict(v) for k, v in d.items()})


def assemble_ledger(
    s: Optional[SymbolSpec],
    w: Weight,
    p: float = 2.0,
    N: int = 64,
    bidegree: int = 10,
    delta: float = 0.7,
    rule=None,
    cap: float = 1e6,
) -> ConstantsLedger:
    """Compute every certificate constant for the given symbol/weight pair.

    d_P, d_LP, d_M and beta_infty depend only on the space; d_phi/d_psi come
    from the change-of-variables ratio of the symbol, falling back to the
    norm of the assembled truncation when that ratio blows up on the grid
    (the bound is then only a lower estimate and is flagged as such).  With
    ``s=None`` only the space constants are produced.
    """
    B = basis_table(w, N)
    rule = rule or rule_for_symbol(s, w=w)
    entries: Dict[str, ConstantEstimate] = {}

    if p == 2.0:
        entries["d_P"] = ConstantEstimate(1.0, EXACT, "orthogonal projection at p=2")
    else:
        Bp = basis_table(w, N, p=p)
        entries["d_P"] = d_p(Bp, p, rule)

    entries["d_LP"] = _as_estimate(d_lp(B), LOWER_BOUND, f"monomial sup, N={N}")
    entries["d_M"] = estimate_d_m(B, bidegree)
    entries["beta_infty"] = beta_infty(B)
    entries["delta_user"] = ConstantEstimate(float(delta), USER, "free margin parameter")
    if s is None:
        return ConstantsLedger(entries)
    entries.update(symbol_ledger_entries(s, w, p=p, rule=rule, cap=cap, fallback_N=min(N, 32)))
    return ConstantsLedger(entries)


def symbol_ledger_entries(
    s: SymbolSpec,
    w: Weight,
    p: float = 2.0,
    rule=None,
    cap: float = 1e6,
    fallback_N: int = 32,
) -> Dict[str, ConstantEstimate]:
    """The symbol-dependent ledger entries: d_phi, d_psi and beta_phi.

    Split out so parameter sweeps can reuse the space constants and refresh
    only these three per symbol.
    """
    rule = rule or rule_for_symbol(s, w=w)
    entries: Dict[str, ConstantEstimate] = {}
    cb = c_phi_norm_bound(s, w, rule, p=p, cap=cap)
    if cb.unbounded_evidence:
        K = assemble_K(s, basis_table(w, fallback_N), rule)
        smax = float(np.linalg.svd(K.matrix, compute_uv=False)[0])
        entries["d_phi"] = ConstantEstimate(
            smax,
            LOWER_BOUND,
            f"norm of the N={K.N} truncation; the density ratio exceeded {cap:g} on the grid",
        )
    else:
        entries["d_phi"] = ConstantEstimate(
            cb.norm_upper, UPPER_BOUND, "change-of-variables ratio, grid sup"
        )
    entries["d_psi"] = ConstantEstimate(
        cb.inverse_norm_upper, UPPER_BOUND, "change-of-variables ratio, grid inf"
    )
    entries["beta_phi"] = _beta_phi(s, rule)
    return entries


def _as_estimate(x, provenance, detail) -> ConstantEstimate:
    if isinstance(x, ConstantEstimate):
        return x
    value = getattr(x, "value", x)
    return ConstantEstimate(float(value), provenance, detail)


def _beta_phi(s: SymbolSpec, rule) -> ConstantEstimate:
    """max(1, sup |grad phi| on |z| <= 1/2, sup |grad psi| on |w| <= 1/2).

    The gradient norm of the inverse at w = phi(z) is (|d_z| + |d_zbar|)/J
    evaluated at z, so both suprema come from forward evaluations: the first
    over {|z| <= 1/2}, the second over the preimage {|phi(z)| <= 1/2}.
    """
    Z = rule.mesh()
    dz = np.abs(np.asarray(s.d_z(Z)))
    dzb = np.abs(np.asarray(s.d_zbar(Z)))
    grad = dz + dzb
    jac = dz * dz - dzb * dzb
    inner = np.abs(Z) <= 0.5
    pre = np.abs(np.asarray(s.eval(Z))) <= 0.5
    best = 1.0
    if np.any(inner):
        best = max(best, float(np.max(grad[inner])))
    if np.any(pre):
        good = pre & (jac > 0.0)
        if np.any(good):
            best = max(best, float(np.max(grad[good] / jac[good])))
    return ConstantEstimate(best, LOWER_BOUND, "grid sup of the differential norms on the half-disc")


@dataclass(frozen=True)
class Gammas:
    gamma_psi: float
    gamma_phi: float

    def to_dict(self) -> dict:
        return {"gamma_psi": self.gamma_psi, "gamma_phi": self.gamma_phi}


def gamma_constants(L: ConstantsLedger) -> Gammas:
    """gamma_psi = delta/(d_LP d_M d_psi) and gamma_phi = delta/(d_LP d_M d_phi)."""
    L.require("delta_user", "d_LP", "d_M", "d_phi", "d_psi")
    delta = L.value("delta_user")
    if not 0.0 < delta < 1.0 / math.sqrt(2.0):
        raise ParameterError(f"margin parameter must lie in (0, 1/sqrt(2)), got {delta}")
    base = L.value("d_LP") * L.value("d_M")
    return Gammas(gamma_psi=delta / (base * L.value("d_psi")), gamma_phi=delta / (base * L.value("d_phi")))


@dataclass(frozen=True)
class CertificateReport:
    condition: str
    status: str  # pass | fail | hypothesis-failure | not-applicable
    rigor: str  # proof-grade | numerical-evidence
    caveat: str
    details: dict
    ledger: dict

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self) -> dict:
        return {
            "condition": self.condition,
            "status": self.status,
            "rigor": self.rigor,
            "caveat": self.caveat,
            "details": self.details,
            "ledger": self.ledger,
        }


def _rigor(L: ConstantsLedger):
    if L.all_conservative:
        return "proof-grade", "all ledger entries are exact or conservative bounds"
    weak = sorted(k for k, e in L.entries.items() if e.provenance == LOWER_BOUND)
    return (
        "numerical-evidence",
        "lower-bound ledger entries (" + ", ".join(weak) + ") make the margins non-rigorous",
    )


def margin_radii(n_r: int = 400, r_min: float = 1e-3, r_max: float = 1.0 - 1e-6, breakpoints=()) -> np.ndarray:
    """Radii graded toward the boundary, with structural radii inserted exactly."""
    radii = 1.0 - np.geomspace(1.0 - r_min, 1.0 - r_max, n_r)
    extra = [b for b in breakpoints if 0.0 < b < 1.0]
    if extra:
        radii = np.unique(np.concatenate([radii, np.asarray(extra, dtype=float)]))
    return radii


def check_theorem31(
    s: SymbolSpec,
    w: Weight,
    L: ConstantsLedger,
    n_r: int = 400,
    n_theta: int = 256,
) -> CertificateReport:
    """Pointwise Beltrami-smallness certificate on a polar grid.

    Evaluates |mu(z)| against the two margins
        gamma_psi * rho(|phi(z)|) * sqrt(omega(phi(z)) / omega(z))     and
        gamma_phi * rho(|z|)      * sqrt(omega(z) / omega(phi(z))),
    where rho = sqrt(rho_2) is the weight's Littlewood-Paley scale.  The
    second margin is the inverse-symbol condition pulled back through phi,
    so only forward evaluations are needed.  A pass requires both minima to
    be strictly positive; sup |mu| >= 1/2 on the grid short-circuits to
    hypothesis-failure regardless of the margins.
    """
    gam = gamma_constants(L)
    radii = margin_radii(n_r, breakpoints=s.radial_breakpoints)
    if s.is_radial:
        Z = radii.astype(complex)
        grid = {"n_r": int(radii.size), "n_theta": 1, "radial_fast_path": True}
    else:
        th = 2.0 * np.pi * np.arange(n_theta) / n_theta
        Z = (radii[:, None] * np.exp(1j * th)[None, :]).ravel()
        grid = {"n_r": int(radii.size), "n_theta": int(n_theta), "radial_fast_path": False}

    r = np.abs(Z)
    mu = np.abs(beltrami(s, Z))
    sup_mu = float(np.max(mu))
    rigor, caveat = _rigor(L)
    base_details = {
        "symbol": s.describe(),
        "weight": w.spec_string(),
        "gammas": gam.to_dict(),
        "grid": grid,
        "sup_mu": sup_mu,
    }
    if sup_mu >= MU_GATE:
        where = int(np.argmax(mu))
        base_details["hypothesis"] = {
            "requirement": "sup |mu| < 1/2",
            "sup_mu": sup_mu,
            "at_r": float(r[where]),
        }
        return CertificateReport(
            condition="beltrami-smallness",
            status="hypothesis-failure",
            rigor=rigor,
            caveat=caveat,
            details=base_details,
            ledger=L.to_dict(),
        )

    t = np.abs(np.asarray(s.eval(Z)))
    with np.errstate(over="ignore", under="ignore", divide="ignore"):
        half_log_ratio = 0.5 * (w.log_omega(t) - w.log_omega(r))
        rho_t = np.sqrt(w.rho2(t))
        rho_r = np.sqrt(w.rho2(r))
        rhs1 = gam.gamma_psi * rho_t * np.exp(half_log_ratio)
        rhs2 = gam.gamma_phi * rho_r * np.exp(-half_log_ratio)
    m1 = rhs1 - mu
    m2 = rhs2 - mu
    i1 = int(np.argmin(m1))
    i2 = int(np.argmin(m2))
    base_details["margins"] = {
        "phi_side": {"min": float(m1[i1]), "at_r": float(r[i1])},
        "psi_side": {"min": float(m2[i2]), "at_r": float(r[i2])},
    }
    ok = (m1[i1] > 0.0) and (m2[i2] > 0.0)
    return CertificateReport(
        condition="beltrami-smallness",
        status="pass" if ok else "fail",
        rigor=rigor,
        caveat=caveat,
        details=base_details,
        ledger=L.to_dict(),
    )


def check_prop41(
    s: SymbolSpec,
    w: Weight,
    p: float,
    L: ConstantsLedger,
    R_conformal: Optional[float] = None,
) -> CertificateReport:
    """Annulus-conformality certificate.

    Symbols fixing the origin and conformal outside radius R are certified
    invertible whenever R stays below the budget
        delta = min{ 1/(2 beta_phi),
                     1/(sqrt(pi) beta_phi^(1+p/2)
                        (beta_infty d_P d_M max(d_phi, d_psi))^(p/2)) } <= 1/2.
    """
    rigor, caveat = _rigor(L)
    if R_conformal is None:
        R_conformal = s.conformal_radius
    details: dict = {"symbol": s.describe(), "weight": w.spec_string(), "p": float(p)}
    if R_conformal is None:
        details["reason"] = "symbol reports no conformality radius"
        return CertificateReport(
            condition="annulus-conformality",
            status="not-applicable",
            rigor=rigor,
            caveat=caveat,
            details=details,
            ledger=L.to_dict(),
        )
    details["R_conformal"] = float(R_conformal)
    if not 1.0 < p <= 2.0:
        details["hypothesis"] = {"requirement": "p in (1, 2]", "p": float(p)}
        return CertificateReport(
            condition="annulus-conformality",
            status="hypothesis-failure",
            rigor=rigor,
            caveat=caveat,
            details=details,
            ledger=L.to_dict(),
        )
    origin = complex(np.asarray(s.eval(np.array([0.0 + 0.0j])), dtype=complex).ravel()[0])
    if abs(origin) > 1e-12:
        details["hypothesis"] = {"requirement": "phi(0) = 0", "phi_at_0": abs(origin)}
        return CertificateReport(
            condition="annulus-conformality",
            status="hypothesis-failure",
            rigor=rigor,
            caveat=caveat,
            details=details,
            ledger=L.to_dict(),
        )
    L.require("beta_phi", "beta_infty", "d_P", "d_M", "d_phi", "d_psi")
    bphi = L.value("beta_phi")
    first = 1.0 / (2.0 * bphi)
    core = L.value("beta_infty") * L.value("d_P") * L.value("d_M") * max(
        L.value("d_phi"), L.value("d_psi")
    )
    second = 1.0 / (math.sqrt(math.pi) * bphi ** (1.0 + 0.5 * p) * core ** (0.5 * p))
    delta = min(first, second)
    details["delta"] = delta
    details["delta_components"] = {"gradient_term": first, "kernel_term": second}
    status = "pass" if R_conformal < delta else "fail"
    return CertificateReport(
        condition="annulus-conformality",
        status=status,
        rigor=rigor,
        caveat=caveat,
        details=details,
        ledger=L.to_dict(),
    )


def stretch_exponent_threshold(m: float, R: float) -> float:
    """Largest stretch exponent allowed by margin level m at seam radius R."""
    x = m * (1.0 - R * R)
    if x >= 1.0:
        return math.inf
    return (1.0 + x) / (1.0 - x)


def check_example_thresholds(
    s: SymbolSpec, L: ConstantsLedger, n_r: int = 400, w: Weight | None = None
) -> CertificateReport:
    """Closed-form sufficient thresholds for the twist and stretch families.

    Twist: |b'(r)| < min(1, gamma_psi, gamma_phi) (1 - r^2) on a radial grid.
    Stretch: a < (1 + m(1-R^2)) / (1 - m(1-R^2)) with m = min(gamma_psi,
    gamma_phi).  Both are reductions of the pointwise margin conditions under
    power-law weights, so their verdicts must match check_theorem31 away from
    the slack window.  Rapidly decaying weights demand faster Beltrami decay
    than these formulas encode, so they are declined rather than misapplied.
    """
    gam = gamma_constants(L)
    rigor, caveat = _rigor(L)
    details: dict = {"symbol": s.describe(), "gammas": gam.to_dict()}
    if w is not None and w.kind != "standard":
        details["reason"] = (
            "closed-form thresholds cover power-law weights only; run the "
            "pointwise margin check instead"
        )
        return CertificateReport(
            condition="example-threshold",
            status="not-applicable",
            rigor=rigor,
            caveat=caveat,
            details=details,
            ledger=L.to_dict(),
        )
    if s.family == "radial_stretch":
        a = float(s.params["a"])
        R = float(s.params["R"])
        m = min(gam.gamma_psi, gam.gamma_phi)
        thr = stretch_exponent_threshold(m, R)
        # |a-1|/(a+1) < m(1-R^2) is symmetric in a <-> 1/a, so exponents
        # below 1 are bounded from below by the reciprocal threshold
        lower = 0.0 if math.isinf(thr) else 1.0 / thr
        details["threshold"] = {
            "quantity": "stretch exponent a",
            "value": a,
            "bound": thr,
            "lower_bound": lower,
        }
        status = "pass" if lower < a < thr else "fail"
    elif s.family == "radial_twist":
        C_thr = min(1.0, gam.gamma_psi, gam.gamma_phi)
        radii = margin_radii(n_r, breakpoints=s.radial_breakpoints)
        bp = np.asarray(s.angle.deriv(radii))
        ratio = np.abs(bp) / (1.0 - radii * radii)
        worst = float(np.max(ratio))
        details["threshold"] = {
            "quantity": "sup |b'(r)| / (1 - r^2)",
            "value": worst,
            "bound": C_thr,
        }
        status = "pass" if worst < C_thr else "fail"
    else:
        details["reason"] = f"no closed-form threshold for family {s.family!r}"
        return CertificateReport(
            condition="example-threshold",
            status="not-applicable",
            rigor=rigor,
            caveat=caveat,
            details=details,
            ledger=L.to_dict(),
        )
    return CertificateReport(
        condition="example-threshold",
        status=status,
        rigor=rigor,
        caveat=caveat,
        details=details,
        ledger=L.to_dict(),
    )
