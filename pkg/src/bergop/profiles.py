"""Smooth radial profiles: mollifier templates and mollified ramps.

The counterexample symbol needs C-infinity radial profiles with sharply
localized transitions.  Everything here is built from one normalized bump

    Phi(x) = C * exp(-1/(1 - x^2)) on (-1, 1), zero outside, int Phi = 1,

its cumulative S(y) = int_{-1}^y Phi and first moment T(y) = int_{-1}^y s Phi(s) ds.
A piecewise-linear anchor convolved with Phi_eps is affine away from the
corners and has closed forms through S and T inside each +-eps corner window,
so no per-point quadrature is ever needed.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from .errors import ParameterError
from .weights import _gl01

_MOLL_ORDER = 96


def _bump_raw(x):
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    m = np.abs(x) < 1.0
    xm = x[m]
    out[m] = np.exp(-1.0 / (1.0 - xm * xm))
    return out


@lru_cache(maxsize=1)
def _moll_norm() -> float:
    x0, w0 = _gl01(_MOLL_ORDER)
    s = -1.0 + 2.0 * x0
    return float(1.0 / np.sum(2.0 * w0 * _bump_raw(s)))


def mollifier(x):
    """Unit-mass C-infinity bump supported on [-1, 1]."""
    return _moll_norm() * _bump_raw(x)


def _cumulative(y, weight_s: bool) -> np.ndarray:
    """int_{-1}^{y} Phi(s) ds, or with the extra factor s when weight_s."""
    y = np.asarray(y, dtype=float)
    yc = np.clip(y, -1.0, 1.0)
    x0, w0 = _gl01(_MOLL_ORDER)
    flat_y = np.atleast_1d(yc).ravel()
    length = flat_y + 1.0
    nodes = -1.0 + length[:, None] * x0[None, :]
    vals = mollifier(nodes)
    if weight_s:
        vals = vals * nodes
    out = length * (vals @ w0)
    return out.reshape(np.shape(yc)) if np.ndim(y) else float(out[0])


def mollifier_cumulative(y):
    """S(y): 0 for y <= -1, 1 for y >= 1, smooth and increasing between."""
    return _cumulative(y, weight_s=False)


def mollifier_first_moment(y):
    """T(y) = int_{-1}^y s Phi(s) ds; vanishes at both ends by symmetry."""
    return _cumulative(y, weight_s=True)


# ---------------------------------------------------------------------------
# angle templates

def ramp_down(t):
    """Smooth ramp pi -> 0 on [0, 1] with flat contact at both ends."""
    return np.pi * (1.0 - mollifier_cumulative(2.0 * np.asarray(t, dtype=float) - 1.0))


def ramp_down_deriv(t):
    return -2.0 * np.pi * mollifier(2.0 * np.asarray(t, dtype=float) - 1.0)


def dip(u):
    """Smooth nonpositive bump on [-1, 1] with minimum -1 at u = 0."""
    return -np.e * _bump_raw(u)


def dip_deriv(u):
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    m = np.abs(u) < 1.0
    um = u[m]
    s = 1.0 - um * um
    out[m] = dip(um) * (-2.0 * um / (s * s))
    return out


# ---------------------------------------------------------------------------
# generic profile protocol: value(r) and deriv(r) on ndarray radii


@dataclass(frozen=True)
class IdentityProfile:
    def value(self, r):
        return np.asarray(r, dtype=float).copy()

    def deriv(self, r):
        return np.ones_like(np.asarray(r, dtype=float))


@dataclass(frozen=True)
class ConstantProfile:
    c: float = 0.0

    def value(self, r):
        return np.full_like(np.asarray(r, dtype=float), self.c)

    def deriv(self, r):
        return np.zeros_like(np.asarray(r, dtype=float))


@dataclass(frozen=True)
class PolyTwistAngle:
    """Angle profile C (r - r^3/3), whose derivative C (1 - r^2) dies at the rim."""

    C: float

    def value(self, r):
        r = np.asarray(r, dtype=float)
        return self.C * (r - r ** 3 / 3.0)

    def deriv(self, r):
        r = np.asarray(r, dtype=float)
        return self.C * (1.0 - r * r)


@dataclass(frozen=True)
class CallableProfile:
    """Wrap plain callables; derivative falls back to a centered difference."""

    f: Callable
    fprime: Optional[Callable] = None
    h: float = 1e-7

    def value(self, r):
        return np.asarray(self.f(np.asarray(r, dtype=float)), dtype=float)

    def deriv(self, r):
        r = np.asarray(r, dtype=float)
        if self.fprime is not None:
            return np.asarray(self.fprime(r), dtype=float)
        return (self.value(r + self.h) - self.value(r - self.h)) / (2.0 * self.h)


@dataclass(frozen=True)
class PowerModulus:
    """|z| -> R^(1-a) |z|^a inside radius R, identity outside."""

    a: float
    R: float

    def value(self, r):
        r = np.asarray(r, dtype=float)
        inside = r <= self.R
        out = r.astype(float).copy()
        out[inside] = self.R ** (1.0 - self.a) * r[inside] ** self.a
        return out

    def deriv(self, r):
        r = np.asarray(r, dtype=float)
        inside = r <= self.R
        out = np.ones_like(r)
        with np.errstate(divide="ignore"):
            vals = self.a * self.R ** (1.0 - self.a) * np.where(inside, r, 1.0) ** (self.a - 1.0)
        out[inside] = vals[inside]
        return out

    def invert(self, t):
        t = np.asarray(t, dtype=float)
        inside = t <= self.R
        out = t.astype(float).copy()
        out[inside] = self.R ** (1.0 - 1.0 / self.a) * t[inside] ** (1.0 / self.a)
        return out


@dataclass(frozen=True)
class MollifiedPiecewiseLinear:
    """Piecewise-linear anchor smoothed by a width-eps mollifier.

    ``knots``/``values`` are the anchor corners, ``slopes`` the segment slopes
    (one more than the number of knots).  Corner windows must not overlap.
    The smoothed profile equals the anchor outside the windows exactly.
    """

    knots: tuple
    values: tuple
    slopes: tuple
    eps: float

    def __post_init__(self):
        k = np.asarray(self.knots, dtype=float)
        v = np.asarray(self.values, dtype=float)
        s = np.asarray(self.slopes, dtype=float)
        if len(s) != len(k) + 1:
            raise ParameterError("need one slope per segment (len(knots)+1)")
        if np.any(np.diff(k) <= 2.0 * self.eps):
            raise ParameterError("mollification windows overlap between knots")
        if self.eps <= 0.0:
            raise ParameterError("mollifier width must be positive")
        # anchor consistency: values must agree with slopes along the chain
        for i in range(len(k) - 1):
            expect = v[i] + s[i + 1] * (k[i + 1] - k[i])
            if abs(expect - v[i + 1]) > 1e-12 * max(1.0, abs(v[i + 1])):
                raise ParameterError("anchor values inconsistent with slopes")

    def _segment_arrays(self, r):
        k = np.asarray(self.knots, dtype=float)
        v = np.asarray(self.values, dtype=float)
        s = np.asarray(self.slopes, dtype=float)
        idx = np.searchsorted(k, r)
        ref_i = np.maximum(idx - 1, 0)
        return v[ref_i] , k[ref_i], s[idx]

    def value(self, r):
        r = np.asarray(r, dtype=float)
        base_v, base_k, slope = self._segment_arrays(r)
        out = base_v + slope * (r - base_k)
        for i, kappa in enumerate(self.knots):
            m = np.abs(r - kappa) < self.eps
            if not np.any(m):
                continue
            y = (r[m] - kappa) / self.eps
            S = mollifier_cumulative(y)
            T = mollifier_first_moment(y)
            k1, k2 = self.slopes[i], self.slopes[i + 1]
            out[m] = (
                self.values[i]
                + (r[m] - kappa) * (k2 * S + k1 * (1.0 - S))
                - self.eps * (k2 - k1) * T
            )
        return out

    def deriv(self, r):
        r = np.asarray(r, dtype=float)
        _, _, slope = self._segment_arrays(r)
        out = slope.astype(float)
        for i, kappa in enumerate(self.knots):
            m = np.abs(r - kappa) < self.eps
            if not np.any(m):
                continue
            S = mollifier_cumulative((r[m] - kappa) / self.eps)
            k1, k2 = self.slopes[i], self.slopes[i + 1]
            out[m] = k2 * S + k1 * (1.0 - S)
        return out

    def window_edges(self) -> list:
        edges = []
        for kappa in self.knots:
            edges.extend((kappa - self.eps, kappa, kappa + self.eps))
        return edges
