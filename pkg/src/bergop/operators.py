"""Truncated matrices of projected composition operators and their diagnostics.

The matrix entry A[n, m] = <e_m o phi, e_n>_omega is an angular Fourier
coefficient of e_m o phi against the radial factor r^n omega(r).  The fast
path pulls the angular integral through an FFT per radial chunk; the dense
fallback computes every entry as a plain disc quadrature.  Both consume the
same rule, so agreement between them is a real cross-check of the pipeline.

A square truncation compresses the operator to the leading N-dimensional
block, which can look far more singular than the operator itself: mass that
the composition pushes to frequencies >= N is simply discarded.  Passing
``n_cols < B.N`` keeps extra rows, so column m then carries e_m o phi up to
frequency B.N and sigma_min measures min ||P(f o phi)|| over the retained
column space -- the quantity that actually witnesses invertibility from
below.  Diagnostics report both the value and its trend across sizes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .basis import BasisTable
from .errors import AliasingError, DegenerateSymbolError, ParameterError
from .quadrature import DiscRule, disc_rule
from .symbols import SymbolSpec
from .weights import Weight

_RADIAL_CHUNK = 32


def rule_for_symbol(
    s: Optional[SymbolSpec], n_r: int = 256, n_theta: int = 1024, w: Optional[Weight] = None
) -> DiscRule:
    """Default rule: panels aligned with the symbol's structural radii, plus
    boundary grading when the weight concentrates at the rim."""
    refine = 4 if (w is not None and w.kind == "exponential") else 0
    breaks = s.radial_breakpoints if s is not None else ()
    return disc_rule(n_r, n_theta, breakpoints=breaks, boundary_refine=refine)


@dataclass(frozen=True)
class OperatorMatrix:
    """Matrix of f -> P(f o phi) on span{e_0..e_{n_cols-1}}, rows up to B.N."""

    matrix: np.ndarray
    weight: Weight
    p: float
    N: int  # column (domain) dimension
    method: str
    symbol_family: str
    rule_info: dict

    @property
    def n_rows(self) -> int:
        return self.matrix.shape[0]

    def leading_block(self, n: int) -> "OperatorMatrix":
        """Sub-matrix with n columns and proportionally many rows."""
        if not 1 <= n <= self.N:
            raise ParameterError(f"block size must be in [1, {self.N}]")
        rows = max(n, int(round(n * self.n_rows / self.N)))
        return OperatorMatrix(
            matrix=self.matrix[:rows, :n],
            weight=self.weight,
            p=self.p,
            N=n,
            method=self.method,
            symbol_family=self.symbol_family,
            rule_info=self.rule_info,
        )

    def column_norm(self, m: int) -> float:
        return float(np.linalg.norm(self.matrix[:, m]))

    def to_csv(self, path):
        """Row-major dump; each entry as "re,im"."""
        with open(path, "w") as fh:
            for row in self.matrix:
                fh.write(",".join(f"{v.real:.17g},{v.imag:.17g}" for v in row))
                fh.write("\n")


def _composed_basis_profiles(s, B, rule, n_modes, n_cols):
    """Angular FFT profiles of e_m(phi(z)) for m < n_cols, chunked over radii.

    Yields (chunk slice, array of shape (n_cols, chunk, n_modes)) holding the
    FFT bins 0..n_modes-1 of each composed basis element on the chunk rows.
    Asking for every bin (n_modes = n_theta) is allowed: Parseval sums need
    the whole spectrum and no bin is then read as an analytic mode.
    """
    if n_modes != rule.n_theta and n_modes > rule.n_theta // 2:
        raise AliasingError(
            f"need {n_modes} angular modes but the rule resolves only {rule.n_theta // 2}"
        )
    r = rule.radial_nodes
    th = rule.thetas
    sqh = np.sqrt(B.h)
    for start in range(0, r.size, _RADIAL_CHUNK):
        sl = slice(start, min(start + _RADIAL_CHUNK, r.size))
        Z = r[sl, None] * np.exp(1j * th)[None, :]
        Phi = np.asarray(s.eval(Z), dtype=complex)
        out = np.empty((n_cols, Z.shape[0], n_modes), dtype=complex)
        Em = np.full_like(Phi, 1.0 / sqh[0])
        hat = np.fft.fft(Em, axis=1) / rule.n_theta
        out[0] = hat[:, :n_modes]
        for m in range(1, n_cols):
            Em = Em * Phi * (sqh[m - 1] / sqh[m])
            hat = np.fft.fft(Em, axis=1) / rule.n_theta
            out[m] = hat[:, :n_modes]
        yield sl, out


def assemble_K(
    s: SymbolSpec,
    B: BasisTable,
    rule: Optional[DiscRule] = None,
    method: str = "fourier",
    n_cols: Optional[int] = None,
) -> OperatorMatrix:
    """Matrix A[n, m] = <e_m o phi, e_n>_omega, n < B.N, m < n_cols (default square)."""
    B.require_p2("assemble_K")
    n_cols = B.N if n_cols is None else int(n_cols)
    if not 1 <= n_cols <= B.N:
        raise ParameterError(f"n_cols must be in [1, {B.N}]")
    rule = rule or rule_for_symbol(s, w=B.weight)
    if method == "fourier":
        A = _assemble_fourier(s, B, rule, n_cols)
    elif method == "dense":
        A = _assemble_dense(s, B, rule, n_cols)
    else:
        raise ParameterError(f"unknown assembly method {method!r}")
    return OperatorMatrix(
        matrix=A,
        weight=B.weight,
        p=B.p,
        N=n_cols,
        method=method,
        symbol_family=s.family,
        rule_info=rule.describe(),
    )


def _assemble_fourier(s, B, rule, n_cols) -> np.ndarray:
    r = rule.radial_nodes
    om = B.weight.omega(r)
    base = rule.area_radial_weights() * om
    # radial factor r^n / sqrt(h_n) per (node, row mode)
    powmat = np.exp(np.outer(np.log(r), np.arange(B.N)))
    W = base[:, None] * powmat / np.sqrt(B.h)[None, :]
    A = np.zeros((B.N, n_cols), dtype=complex)
    for sl, prof in _composed_basis_profiles(s, B, rule, B.N, n_cols):
        # prof[m, i, n]; contract the radial chunk against W
        A += np.einsum("min,in->nm", prof, W[sl])
    return A


def _assemble_dense(s, B, rule, n_cols) -> np.ndarray:
    Z = rule.mesh()
    Phi = np.asarray(s.eval(Z), dtype=complex)
    om = B.weight.omega(np.abs(Z))
    sqh = np.sqrt(B.h)
    A = np.empty((B.N, n_cols), dtype=complex)
    Em = np.full_like(Phi, 1.0 / sqh[0])
    for m in range(n_cols):
        if m:
            Em = Em * Phi * (sqh[m - 1] / sqh[m])
        En = np.full_like(Z, 1.0 / sqh[0])
        for n in range(B.N):
            if n:
                En = En * Z * (sqh[n - 1] / sqh[n])
            integrand = Em * np.conj(En) * om
            A[n, m] = (integrand.mean(axis=1) * rule.area_radial_weights()).sum()
    return A


@dataclass(frozen=True)
class CompositionBound:
    """Two-sided grid bounds on omega / (omega o phi * |J_phi|) and the norms
    they imply for composition with phi (b2 side) and its inverse (b1 side)."""

    b1: float
    b2: float
    norm_upper: float
    inverse_norm_upper: float
    unbounded_evidence: bool
    p: float

    def to_dict(self) -> dict:
        return {
            "b1": self.b1,
            "b2": self.b2,
            "norm_upper": self.norm_upper,
            "inverse_norm_upper": self.inverse_norm_upper,
            "unbounded_evidence": self.unbounded_evidence,
            "p": self.p,
        }


def c_phi_norm_bound(
    s: SymbolSpec,
    w: Weight,
    rule: Optional[DiscRule] = None,
    p: float = 2.0,
    cap: float = 1e6,
) -> CompositionBound:
    """Change-of-variables bounds for the composition operator on the p-scale.

    Evaluates ratio(z) = omega(z) / (omega(phi(z)) |J_phi(z)|) over the rule
    mesh.  The supremum b2 controls ||C_phi|| <= b2^(1/p); the infimum b1
    controls the inverse symbol through b1^(-1/p).  A supremum past ``cap``
    is flagged as evidence of an unbounded ratio.
    """
    rule = rule or rule_for_symbol(s, w=w)
    Z = rule.mesh()
    dz = np.asarray(s.d_z(Z))
    dzb = np.asarray(s.d_zbar(Z))
    jac = np.abs(dz) ** 2 - np.abs(dzb) ** 2
    if np.any(jac <= 0.0):
        raise DegenerateSymbolError("Jacobian is not positive on the evaluation grid")
    r = np.abs(Z)
    t = np.abs(np.asarray(s.eval(Z)))
    # log-space keeps the ratio finite where omega itself underflows; a
    # vanishing-at-a-point Jacobian sends the ratio to infinity, which is
    # reported through the unbounded-evidence flag, not as degeneracy
    log_ratio = w.log_omega(r) - w.log_omega(t) - np.log(jac)
    with np.errstate(over="ignore", under="ignore"):
        b1 = float(np.exp(np.min(log_ratio)))
        b2 = float(np.exp(np.max(log_ratio)))
    unbounded = bool(b2 > cap) or not np.isfinite(b2)
    return CompositionBound(
        b1=b1,
        b2=b2,
        norm_upper=b2 ** (1.0 / p) if np.isfinite(b2) else float("inf"),
        inverse_norm_upper=b1 ** (-1.0 / p),
        unbounded_evidence=unbounded,
        p=float(p),
    )


@dataclass(frozen=True)
class SpectralDiagnostics:
    sigma_min: float
    sigma_max: float
    cond: float
    sigma_min_half: float

    @property
    def trend_ratio(self) -> float:
        """sigma_min at full size over sigma_min at half size; a value far
        below 1 flags drift toward singularity as the truncation grows."""
        return self.sigma_min / self.sigma_min_half if self.sigma_min_half > 0 else float("inf")

    def to_dict(self) -> dict:
        return {
            "sigma_min": self.sigma_min,
            "sigma_max": self.sigma_max,
            "cond": self.cond,
            "sigma_min_half": self.sigma_min_half,
            "sigma_min_trend": self.trend_ratio,
        }


def spectral_diagnostics(om: OperatorMatrix) -> SpectralDiagnostics:
    sv = np.linalg.svd(om.matrix, compute_uv=False)
    half = om.leading_block(om.N // 2).matrix if om.N >= 2 else om.matrix
    sv_half = np.linalg.svd(half, compute_uv=False)
    smin = float(sv[-1])
    smax = float(sv[0])
    return SpectralDiagnostics(
        sigma_min=smin,
        sigma_max=smax,
        cond=smax / smin if smin > 0 else float("inf"),
        sigma_min_half=float(sv_half[-1]),
    )


def composed_gram(s: SymbolSpec, B: BasisTable, rule: Optional[DiscRule] = None) -> np.ndarray:
    """Gram matrix G[m, n] = <e_m o phi, e_n o phi>_omega via per-radius Parseval."""
    B.require_p2("composed_gram")
    rule = rule or rule_for_symbol(s, w=B.weight)
    r = rule.radial_nodes
    base = rule.area_radial_weights() * B.weight.omega(r)
    G = np.zeros((B.N, B.N), dtype=complex)
    n_modes = rule.n_theta  # keep all bins: Parseval needs the full spectrum
    for sl, prof in _composed_basis_profiles(s, B, rule, n_modes, B.N):
        # discrete Parseval: the angular mean of f g-bar is sum_k hat_f hat_g-bar
        G += np.einsum("i,mik,nik->mn", base[sl], prof, np.conj(prof))
    return G


def default_carleson_probes(n_radii: int = 16, n_angles: int = 8, r_max: float = 0.95) -> np.ndarray:
    radii = np.linspace(r_max / n_radii, r_max, n_radii)
    angles = 2.0 * np.pi * np.arange(n_angles) / n_angles
    return (radii[:, None] * np.exp(1j * angles)[None, :]).ravel()


def carleson_profile(
    s: SymbolSpec,
    B: BasisTable,
    rule: Optional[DiscRule] = None,
    probes: Optional[np.ndarray] = None,
) -> np.ndarray:
    """||k_w o phi||^2 for the normalized truncated kernels k_w at each probe.

    With G the composed-basis Gram, each value is a quadratic form in the
    normalized kernel coefficients, so one Gram assembly serves all probes.
    """
    from .basis import eval_basis, kernel_diag

    probes = default_carleson_probes() if probes is None else np.asarray(probes)
    G = composed_gram(s, B, rule)
    E = eval_basis(B, probes)  # (N, n_probes)
    K = kernel_diag(B, probes).K
    C = np.conj(E) / np.sqrt(K)[None, :]
    vals = np.einsum("mp,mn,np->p", np.conj(C), G, C).real
    return vals


def carleson_ratio(
    s: SymbolSpec,
    B: BasisTable,
    rule: Optional[DiscRule] = None,
    probes: Optional[np.ndarray] = None,
) -> float:
    """sup of carleson_profile over the probes: a lower witness for the
    Carleson constant of the pull-back measure, and unboundedness evidence
    for the composition operator when it diverges along a probe path."""
    return float(np.max(carleson_profile(s, B, rule, probes)))
