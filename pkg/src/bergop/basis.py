"""Orthonormal monomial basis, analytic projection, and space constants.

For a radial weight the monomials are orthogonal, so the Hilbert-space
(p = 2) machinery reduces to the moment sequence h_n: the normalized basis
is e_n(z) = z^n / sqrt(h_n), the projection onto analytic functions acts
coefficient-wise, and the reproducing-kernel diagonal is a power series in
|z|^2.  Everything here works with a truncated table of the first N moments.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import ParameterError
from .provenance import EXACT, LOWER_BOUND, ConstantEstimate
from .quadrature import DiscRule, _mesh_values, angular_profiles, disc_rule, integrate_disc
from .weights import Weight, moment_table, radial_integrals


@dataclass(frozen=True)
class BasisTable:
    """First N monomial moments of nu_p for a weight, with sanity checks."""

    weight: Weight
    p: float
    N: int
    h: np.ndarray

    def __post_init__(self):
        if self.h.shape != (self.N,):
            raise ParameterError("moment table has wrong length")
        if np.any(self.h <= 0.0):
            raise ParameterError("moments must be strictly positive")
        if np.any(np.diff(self.h) >= 0.0):
            raise ParameterError("moments must be strictly decreasing")

    def require_p2(self, what: str):
        if self.p != 2.0:
            raise ParameterError(f"{what} requires a p=2 basis table, got p={self.p}")


def basis_table(w: Weight, N: int, p: float = 2.0, rtol: float = 1e-12) -> BasisTable:
    if N < 1:
        raise ParameterError("basis size must be >= 1")
    return BasisTable(weight=w, p=float(p), N=int(N), h=moment_table(w, p, int(N), rtol=rtol))


def eval_basis(B: BasisTable, z) -> np.ndarray:
    """Values e_n(z) = z^n / sqrt(h_n), stacked along a leading axis of size N."""
    z = np.asarray(z, dtype=complex)
    out = np.empty((B.N,) + z.shape, dtype=complex)
    cur = np.ones_like(z)
    for n in range(B.N):
        if n:
            cur = cur * z
        out[n] = cur / np.sqrt(B.h[n])
    return out


def reconstruct(B: BasisTable, coeffs: np.ndarray) -> Callable:
    """The analytic function z -> sum_n coeffs[n] e_n(z)."""
    coeffs = np.asarray(coeffs, dtype=complex)
    if coeffs.shape != (B.N,):
        raise ParameterError("coefficient vector has wrong length")
    scaled = coeffs / np.sqrt(B.h)

    def f(z):
        z = np.asarray(z, dtype=complex)
        # Horner in z on the scaled monomial coefficients
        acc = np.full_like(z, scaled[-1])
        for c in scaled[-2::-1]:
            acc = acc * z + c
        return acc

    return f


def project_coeffs(B: BasisTable, f: Callable, rule: DiscRule) -> np.ndarray:
    """Coefficients <f, e_n> of the analytic projection of f, by disc quadrature.

    Works at p = 2 where the monomial basis is orthonormal.  The angular
    integral is an FFT over the uniform grid; the radial contraction weighs
    in omega and the monomial growth.
    """
    B.require_p2("project_coeffs")
    vals = _mesh_values(rule, f)
    prof = angular_profiles(rule, vals, np.arange(B.N))  # (N, n_r)
    r = rule.radial_nodes
    om = B.weight.omega(r)
    base = rule.area_radial_weights() * om
    powmat = np.exp(np.outer(np.arange(B.N), np.log(r)))  # r^n
    return (prof * powmat * base[None, :]).sum(axis=1) / np.sqrt(B.h)


@dataclass(frozen=True)
class KernelDiag:
    K: np.ndarray
    K1: np.ndarray


def kernel_diag(B: BasisTable, z) -> KernelDiag:
    """Truncated diagonal kernel sums sum |e_n(z)|^2 and sum |e_n'(z)|^2."""
    B.require_p2("kernel_diag")
    x = np.abs(np.asarray(z)) ** 2  # |z|^2
    n = np.arange(B.N, dtype=float)
    # sum x^n / h_n and sum n^2 x^(n-1) / h_n, evaluated stably for x in [0, 1)
    xs = np.atleast_1d(x).astype(float)
    powers = xs[..., None] ** n[None, :]
    K = (powers / B.h).sum(axis=-1)
    with np.errstate(divide="ignore"):
        pow1 = np.where(n[None, :] >= 1, xs[..., None] ** np.maximum(n - 1, 0.0), 0.0)
    K1 = (n * n * pow1 / B.h).sum(axis=-1)
    if np.isscalar(x) or np.asarray(z).ndim == 0:
        return KernelDiag(K=float(K[0]), K1=float(K1[0]))
    return KernelDiag(K=K.reshape(np.shape(x)), K1=K1.reshape(np.shape(x)))


def beta_infty(B: BasisTable, n_samples: int = 2001) -> ConstantEstimate:
    """sup over |z| <= 1/2 of max(sqrt(K), sqrt(K1)) on a radial sample grid.

    Bounds point values of f and f' on the half-disc by the norm.  Truncation
    and sampling both cut the sup from below, hence the lower-bound tag.
    """
    rs = np.linspace(0.0, 0.5, int(n_samples))
    kd = kernel_diag(B, rs)
    val = float(np.max(np.maximum(np.sqrt(kd.K), np.sqrt(kd.K1))))
    return ConstantEstimate(val, LOWER_BOUND, detail=f"N={B.N}, {n_samples} radial samples")


@dataclass(frozen=True)
class DlpEstimate:
    """Littlewood-Paley constant over the truncated basis, with tail trend."""

    value: float
    g: np.ndarray = field(repr=False)

    @property
    def g_last(self) -> float:
        return float(self.g[-1])

    @property
    def g_half(self) -> float:
        return float(self.g[len(self.g) // 2])


def d_lp(B: BasisTable, rtol: float = 1e-12) -> DlpEstimate:
    """Best constant in ||f'||_{rho2}^2 <= d^2 ||f||^2 over the first N basis elements.

    On basis vectors the two sides decouple: g_n = int |e_n'|^2 rho2 omega dA,
    and d^2 = max_n g_n.  The integrals share one graded panelization.
    """
    B.require_p2("d_lp")
    w = B.weight
    n = np.arange(1, B.N, dtype=float)
    if n.size == 0:
        return DlpEstimate(value=0.0, g=np.zeros(1))
    powers = 2.0 * n - 1.0
    vals = 2.0 * radial_integrals(lambda r: w.rho2(r) * w.omega(r), powers, rtol=rtol)
    g = np.concatenate([[0.0], n * n * vals / B.h[1:]])
    return DlpEstimate(value=float(np.sqrt(np.max(g))), g=g)


def _monomial_ratio_grid(B: BasisTable, p: float, cap: int, rtol: float) -> float:
    """max over single monomials z^a zbar^b, a,b < min(N, cap+1), of ||P f||_p / ||f||_p."""
    w = B.weight
    amax = min(B.N - 1, cap)
    idx = np.arange(amax + 1)
    # p-norm moments m(s) = 2 int r^(s+1) nu_p dr at s = k*p for k = 0 .. 2*amax
    ks = np.arange(2 * amax + 1)
    m = 2.0 * radial_integrals(lambda r: w.nu_p(p, r), ks * p + 1.0, rtol=rtol)
    best = 0.0
    for a in idx:
        for b in idx:
            if b > a:
                continue  # projection vanishes; ratio 0
            # P(z^a zbar^b) = (h_a / h_{a-b}) z^{a-b} with h the omega-moments
            coef = B.h[a] / B.h[a - b]
            ratio = coef * (m[a - b] / m[a + b]) ** (1.0 / p)
            best = max(best, float(ratio))
    return best


def _mixture_ratio(B: BasisTable, p: float, rule: DiscRule, rng, n_mix: int) -> float:
    """Lower bound from random low-bidegree mixtures, norms by disc quadrature."""
    w = B.weight
    best = 0.0
    Z = rule.mesh()
    nu = w.nu_p(p, np.abs(Z))
    wts = rule.area_radial_weights()

    def pnorm(vals):
        s = (np.abs(vals) ** p * nu).mean(axis=1) @ wts
        return float(s) ** (1.0 / p)

    for _ in range(n_mix):
        terms = rng.integers(2, 7)
        a = rng.integers(0, 9, size=terms)
        b = rng.integers(0, 9, size=terms)
        c = rng.normal(size=terms) + 1j * rng.normal(size=terms)
        f_vals = np.zeros_like(Z)
        proj_vals = np.zeros_like(Z)
        for ai, bi, ci in zip(a, b, c):
            f_vals += ci * Z ** ai * np.conj(Z) ** bi
            if ai >= bi:
                proj_vals += ci * (B.h[ai] / B.h[ai - bi]) * Z ** (ai - bi)
        denom = pnorm(f_vals)
        if denom > 0:
            best = max(best, pnorm(proj_vals) / denom)
    return best


def d_p(
    B: BasisTable,
    p: Optional[float] = None,
    rule: Optional[DiscRule] = None,
    monomial_cap: int = 64,
    n_mixtures: int = 32,
    seed: int = 0,
    rtol: float = 1e-12,
) -> ConstantEstimate:
    """Norm of the analytic projection on the p-norm scale.

    Exactly 1 at p = 2 (orthogonal projection).  For other p, a lower bound
    from monomials (closed form) and seeded random monomial mixtures (norms
    by quadrature).
    """
    B.require_p2("d_p")
    p = B.p if p is None else float(p)
    if not p > 0:
        raise ParameterError("p must be positive")
    if p == 2.0:
        return ConstantEstimate(1.0, EXACT, detail="orthogonal projection at p=2")
    if B.weight.kind != "standard" and p != 2.0:
        # nu_p-norms for the exponential class follow the same estimator path
        pass
    best = _monomial_ratio_grid(B, p, monomial_cap, rtol)
    if n_mixtures > 0:
        rule = rule or disc_rule(128, 256)
        rng = np.random.default_rng(seed)
        best = max(best, _mixture_ratio(B, p, rule, rng, n_mixtures))
    return ConstantEstimate(
        best, LOWER_BOUND, detail=f"monomials to degree {min(B.N - 1, monomial_cap)}, {n_mixtures} mixtures"
    )
