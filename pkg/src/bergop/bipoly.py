"""Polynomials in z and conj(z): dbar calculus and the correction operator.

A bidegree polynomial sum c[a,b] z^a zbar^b is the test-field class on which
everything is exact: the anti-analytic derivative acts index-wise, it has an
index-wise right inverse, and inner products against a radial weight reduce
to moments, because <z^a zbar^b, z^c zbar^d> vanishes unless a - b = c - d
and otherwise equals h_{(a+b+c+d)/2}.

The correction operator M sends g to u - P u where dbar u = g; composed with
dbar it reproduces f - P f.  Its norm on the truncated bidegree scale is
estimated block-by-block: the charge a - b is conserved, so each block is a
small generalized eigenproblem in the moment data.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Tuple

import numpy as np
from scipy.linalg import eigh

from .basis import BasisTable
from .errors import ConditioningError, ParameterError
from .provenance import LOWER_BOUND, ConstantEstimate


@dataclass
class BiPoly:
    """Coefficient array c[a, b] for sum c[a,b] z^a zbar^b."""

    coef: np.ndarray

    def __post_init__(self):
        self.coef = np.atleast_2d(np.asarray(self.coef, dtype=complex))

    @classmethod
    def zero(cls, deg_z: int = 0, deg_zbar: int = 0) -> "BiPoly":
        return cls(np.zeros((deg_z + 1, deg_zbar + 1), dtype=complex))

    @classmethod
    def monomial(cls, a: int, b: int, c: complex = 1.0) -> "BiPoly":
        if a < 0 or b < 0:
            raise ParameterError("monomial bidegrees must be nonnegative")
        out = cls.zero(a, b)
        out.coef[a, b] = c
        return out

    @property
    def deg_z(self) -> int:
        return self.coef.shape[0] - 1

    @property
    def deg_zbar(self) -> int:
        return self.coef.shape[1] - 1

    def eval(self, z):
        z = np.asarray(z, dtype=complex)
        zb = np.conj(z)
        out = np.zeros_like(z)
        zpow = np.ones_like(z)
        for a in range(self.coef.shape[0]):
            if a:
                zpow = zpow * z
            row = self.coef[a]
            nz = np.nonzero(row)[0]
            if nz.size == 0:
                continue
            acc = np.zeros_like(z)
            for b in nz[::-1]:
                acc = acc + row[b] * zb ** int(b)
            out += zpow * acc
        return out

    __call__ = eval

    def dbar(self) -> "BiPoly":
        """Derivative in conj(z): c[a,b] z^a zbar^b -> b c[a,b] z^a zbar^{b-1}."""
        if self.deg_zbar == 0:
            return BiPoly.zero(self.deg_z, 0)
        b = np.arange(1, self.deg_zbar + 1)
        return BiPoly(self.coef[:, 1:] * b[None, :])

    def dbar_antiderivative(self) -> "BiPoly":
        """Index-wise right inverse of dbar: c[a,b] -> c[a,b]/(b+1) at (a, b+1)."""
        b = np.arange(self.coef.shape[1])
        out = np.zeros((self.coef.shape[0], self.coef.shape[1] + 1), dtype=complex)
        out[:, 1:] = self.coef / (b + 1.0)[None, :]
        return BiPoly(out)

    def _padded(self, shape) -> np.ndarray:
        out = np.zeros(shape, dtype=complex)
        out[: self.coef.shape[0], : self.coef.shape[1]] = self.coef
        return out

    def __add__(self, other: "BiPoly") -> "BiPoly":
        shape = (
            max(self.coef.shape[0], other.coef.shape[0]),
            max(self.coef.shape[1], other.coef.shape[1]),
        )
        return BiPoly(self._padded(shape) + other._padded(shape))

    def __sub__(self, other: "BiPoly") -> "BiPoly":
        shape = (
            max(self.coef.shape[0], other.coef.shape[0]),
            max(self.coef.shape[1], other.coef.shape[1]),
        )
        return BiPoly(self._padded(shape) - other._padded(shape))

    def __mul__(self, scalar: complex) -> "BiPoly":
        return BiPoly(self.coef * scalar)

    __rmul__ = __mul__

    def max_abs_coef(self) -> float:
        return float(np.max(np.abs(self.coef)))

    def coeffs_match(self, other: "BiPoly", tol: float = 1e-10) -> bool:
        diff = self - other
        scale = max(1.0, self.max_abs_coef(), other.max_abs_coef())
        return diff.max_abs_coef() <= tol * scale


def _required_moments(B: BasisTable, needed: int, what: str):
    if B.N <= needed:
        raise ParameterError(
            f"{what} needs moments up to index {needed}; basis table has N={B.N}"
        )


def inner_product(f: BiPoly, g: BiPoly, B: BasisTable) -> complex:
    """<f, g> against omega, exactly: matching-charge terms pick up a moment."""
    B.require_p2("inner_product")
    needed = (f.deg_z + f.deg_zbar + g.deg_z + g.deg_zbar) // 2
    _required_moments(B, needed, "inner_product")
    out = 0.0 + 0.0j
    for a in range(f.coef.shape[0]):
        for b in range(f.coef.shape[1]):
            fc = f.coef[a, b]
            if fc == 0:
                continue
            for c in range(g.coef.shape[0]):
                d = c - (a - b)  # charge matching: a - b = c - d
                if 0 <= d < g.coef.shape[1]:
                    gc = g.coef[c, d]
                    if gc == 0:
                        continue
                    idx = (a + b + c + d) // 2
                    out += fc * np.conj(gc) * B.h[idx]
    return complex(out)


def norm(f: BiPoly, B: BasisTable) -> float:
    val = inner_product(f, f, B).real
    return float(np.sqrt(max(val, 0.0)))


def analytic_projection(f: BiPoly, B: BasisTable) -> BiPoly:
    """P f: the analytic polynomial with coefficients sum_b c[n+b, b] h_{n+b} / h_n."""
    B.require_p2("analytic_projection")
    _required_moments(B, f.deg_z, "analytic_projection")
    out = np.zeros((f.coef.shape[0], 1), dtype=complex)
    for n in range(f.coef.shape[0]):
        acc = 0.0 + 0.0j
        for b in range(f.coef.shape[1]):
            a = n + b
            if a >= f.coef.shape[0]:
                break
            acc += f.coef[a, b] * B.h[a]
        out[n, 0] = acc / B.h[n]
    return BiPoly(out)


def complement_projection(f: BiPoly, B: BasisTable) -> BiPoly:
    """Q f = f - P f, the part orthogonal to analytic polynomials."""
    return f - analytic_projection(f, B)


def m_apply(g: BiPoly, B: BasisTable) -> BiPoly:
    """M g = u - P u for the index-wise antiderivative u of g.

    Adding any analytic polynomial to u does not change the result, since the
    complement projection kills it.
    """
    u = g.dbar_antiderivative()
    return complement_projection(u, B)


# ---------------------------------------------------------------------------
# norm of M over the truncated bidegree scale


def _charge_block(B: BasisTable, D: int, k: int):
    """Gram and M-image Gram for monomials of charge a - b = k, bidegree <= D.

    For k >= 0 the monomials are z^{b+k} zbar^b, b = 0..D-k; for k < 0 use
    b = -k..D.  Both Grams are real and expressible in moments:

        G[b, c] = h_{b+c+k}
        <M m_b, M m_c> = h_{b+c+k+1} / ((b+1)(c+1)) - beta_b beta_c

    where the rank-one term is the analytic component, present only when the
    antiderivative has nonnegative charge k - 1 >= 0, with
    beta_b = h_{b+k} / ((b+1) sqrt(h_{k-1})).
    """
    bs = np.arange(0, D - k + 1) if k >= 0 else np.arange(-k, D + 1)
    if bs.size == 0:
        return None, None
    idx = bs[:, None] + bs[None, :] + k
    G = B.h[idx]
    A = B.h[idx + 1] / ((bs[:, None] + 1.0) * (bs[None, :] + 1.0))
    if k >= 1:
        beta = B.h[bs + k] / ((bs + 1.0) * np.sqrt(B.h[k - 1]))
        A = A - np.outer(beta, beta)
    return G, A


def estimate_d_m(B: BasisTable, D: int, rcond: float = 1e-12) -> ConstantEstimate:
    """Largest ratio ||M g|| / ||g|| over bidegree-D polynomial test fields.

    The charge decouples the problem into blocks of size <= D + 1; each block
    is whitened through the eigendecomposition of its Gram with small
    eigenvalues clipped (the Grams are moment matrices and become singular in
    finite precision), and the clipping only removes test directions, so the
    result stays a certified lower bound of the truncated norm.
    """
    B.require_p2("estimate_d_m")
    if D < 0:
        raise ParameterError("bidegree must be nonnegative")
    _required_moments(B, 2 * D + 1, "estimate_d_m")
    best = 0.0
    best_block = 0
    kept_min = None
    for k in range(-D, D + 1):
        G, A = _charge_block(B, D, k)
        if G is None:
            continue
        lam, V = eigh(G)
        cutoff = rcond * float(lam[-1])
        keep = lam > cutoff
        if not np.any(keep):
            raise ConditioningError(f"charge-{k} Gram is numerically zero")
        kept = int(np.count_nonzero(keep))
        kept_min = kept if kept_min is None else min(kept_min, kept)
        W = V[:, keep] / np.sqrt(lam[keep])[None, :]
        Mw = W.T @ A @ W
        top = float(eigh(Mw, eigvals_only=True)[-1])
        if top > best:
            best = top
            best_block = k
    value = float(np.sqrt(max(best, 0.0)))
    return ConstantEstimate(
        value,
        LOWER_BOUND,
        detail=f"bidegree D={D}, extremal charge {best_block}, min kept directions {kept_min}",
    )


def estimate_d_m_direct(B: BasisTable, D: int, rcond: float = 1e-12) -> float:
    """Same quantity through explicit M applications; cross-check for small D."""
    mons = [(a, b) for a in range(D + 1) for b in range(D + 1)]
    n = len(mons)
    G = np.zeros((n, n), dtype=complex)
    A = np.zeros((n, n), dtype=complex)
    images = [m_apply(BiPoly.monomial(a, b), B) for a, b in mons]
    fields = [BiPoly.monomial(a, b) for a, b in mons]
    for i in range(n):
        for j in range(n):
            G[i, j] = inner_product(fields[j], fields[i], B)
            A[i, j] = inner_product(images[j], images[i], B)
    lam, V = eigh(G)
    keep = lam > rcond * lam[-1]
    W = V[:, keep] / np.sqrt(lam[keep])[None, :]
    top = eigh(W.conj().T @ A @ W, eigvals_only=True)[-1]
    return float(np.sqrt(max(float(top.real), 0.0)))
