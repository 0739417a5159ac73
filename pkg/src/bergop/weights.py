"""Radial weights on the unit disc and their derived quantities.

Two families are supported:

* ``standard``: (1 - |z|^2)^alpha with alpha >= 0.  These are doubling
  weights; the associated distortion scale is rho_2(z) = (1 - |z|^2)^2.
* ``exponential``: exp(-b / (1 - |z|^2)^a) with a, b > 0.  Writing the
  weight as exp(-2*phi) with phi(r) = (b/2) * (1 - r^2)^(-a), the Laplacian
  of phi has the closed form

      lap_phi(r) = 2*a*b * (1 - r^2)^(-a-2) * (1 + a*r^2),

  which is strictly positive on [0, 1).  From it we derive
  tau(r) = lap_phi(r)^(-1/2), R(r) = tau(r)^2 / (1 - r), and the
  distortion scale rho_2(z) = R(|z|)^2.

The p-norm density nu_p is the weight itself for standard weights and
omega^(p/2) for exponential ones; at p = 2 the two conventions coincide.

Moments h_n = 2 * int_0^1 r^(2n+1) * nu_p(r) dr are computed by composite
Gauss-Legendre panels, geometrically graded toward r = 1 and refined by
doubling until two consecutive levels agree to the requested tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from .errors import DomainError, ParameterError, QuadratureError

STANDARD = "standard"
EXPONENTIAL = "exponential"

#: tag for the doubling class and for the exponential class
CLASS_STANDARD = "standard"
CLASS_WA = "W_A"


@dataclass(frozen=True)
class Weight:
    """A radial weight on the unit disc.

    Use :func:`standard_weight` / :func:`exponential_weight` instead of the
    raw constructor; they validate the parameter ranges.
    """

    kind: str
    alpha: float = 0.0
    a: float = 0.0
    b: float = 0.0

    def __post_init__(self):
        if self.kind == STANDARD:
            if not (self.alpha >= 0.0 and np.isfinite(self.alpha)):
                raise ParameterError(f"standard weight needs alpha >= 0, got {self.alpha}")
        elif self.kind == EXPONENTIAL:
            if not (self.a > 0.0 and self.b > 0.0):
                raise ParameterError(
                    f"exponential weight needs a > 0 and b > 0, got a={self.a}, b={self.b}"
                )
            # positivity of the potential's Laplacian at the origin
            if not 2.0 * self.a * self.b > 0.0:
                raise ParameterError("degenerate exponential weight")
        else:
            raise ParameterError(f"unknown weight kind {self.kind!r}")

    @property
    def class_tag(self) -> str:
        return CLASS_STANDARD if self.kind == STANDARD else CLASS_WA

    # radial evaluations; r may be a scalar or an ndarray of |z| values in [0, 1)

    def omega(self, r):
        r = np.asarray(r, dtype=float)
        if self.kind == STANDARD:
            return (1.0 - r * r) ** self.alpha
        return np.exp(-self.b * (1.0 - r * r) ** (-self.a))

    def log_omega(self, r):
        """log omega(r); stays finite where omega itself under/overflows."""
        r = np.asarray(r, dtype=float)
        if self.kind == STANDARD:
            if self.alpha == 0.0:
                return np.zeros_like(r)
            return self.alpha * np.log1p(-r * r)
        return -self.b * (1.0 - r * r) ** (-self.a)

    def nu_p(self, p, r):
        """Density of the p-norm: omega for standard, omega^(p/2) for exponential."""
        if not p > 0:
            raise ParameterError(f"exponent p must be positive, got {p}")
        r = np.asarray(r, dtype=float)
        if self.kind == STANDARD:
            return self.omega(r)
        return np.exp(-0.5 * p * self.b * (1.0 - r * r) ** (-self.a))

    def lap_potential(self, r):
        """Laplacian of the log-potential phi (exponential weights only).

        For phi = b (1-|z|^2)^(-a) the closed form is
        4ab (1-r^2)^(-a-2) (1 + a r^2), from Delta = 4 d/dz d/dzbar.
        """
        self._require_wa("lap_potential")
        r = np.asarray(r, dtype=float)
        s = 1.0 - r * r
        return 4.0 * self.a * self.b * s ** (-self.a - 2.0) * (1.0 + self.a * r * r)

    def tau(self, r):
        """Inverse square root of the potential's Laplacian."""
        self._require_wa("tau")
        r = np.asarray(r, dtype=float)
        s = 1.0 - r * r
        return s ** (1.0 + 0.5 * self.a) / np.sqrt(4.0 * self.a * self.b * (1.0 + self.a * r * r))

    def R_of(self, r):
        """tau(r)^2 / (1 - r); the boundary-distance-normalized scale."""
        self._require_wa("R_of")
        r = np.asarray(r, dtype=float)
        return self.tau(r) ** 2 / (1.0 - r)

    def rho2(self, r):
        """Squared distortion scale entering the derivative-smallness conditions."""
        r = np.asarray(r, dtype=float)
        if self.kind == STANDARD:
            return (1.0 - r * r) ** 2
        return self.R_of(r) ** 2

    def _require_wa(self, what: str):
        if self.kind != EXPONENTIAL:
            raise ParameterError(f"{what} is defined only for exponential weights")

    def spec_string(self) -> str:
        if self.kind == STANDARD:
            return f"standard:{_fmt(self.alpha)}"
        return f"exp:{_fmt(self.a)}:{_fmt(self.b)}"


def _fmt(x: float) -> str:
    return f"{x:g}"


def standard_weight(alpha: float) -> Weight:
    return Weight(STANDARD, alpha=float(alpha))


def exponential_weight(a: float, b: float) -> Weight:
    return Weight(EXPONENTIAL, a=float(a), b=float(b))


def parse_weight(spec: str) -> Weight:
    """Parse ``standard:<alpha>`` or ``exp:<a>:<b>``."""
    parts = str(spec).strip().split(":")
    try:
        if parts[0] == "standard" and len(parts) == 2:
            return standard_weight(float(parts[1]))
        if parts[0] == "exp" and len(parts) == 3:
            return exponential_weight(float(parts[1]), float(parts[2]))
    except ValueError as exc:
        raise ParameterError(f"bad weight spec {spec!r}: {exc}") from None
    raise ParameterError(f"bad weight spec {spec!r} (expected standard:<alpha> or exp:<a>:<b>)")


@dataclass(frozen=True)
class WeightFields:
    """Pointwise values of a weight and its derived fields at a disc point."""

    omega: object
    rho2: object
    nu_p: object
    tau: Optional[object] = None
    R: Optional[object] = None


def eval_fields(w: Weight, z, p: float = 2.0) -> WeightFields:
    """Evaluate omega, rho2, nu_p (and tau, R for exponential weights) at z.

    Raises DomainError when any point satisfies |z| >= 1.
    """
    r = np.abs(np.asarray(z))
    if np.any(r >= 1.0):
        raise DomainError("eval_fields requires |z| < 1")
    if w.kind == EXPONENTIAL:
        return WeightFields(
            omega=w.omega(r), rho2=w.rho2(r), nu_p=w.nu_p(p, r), tau=w.tau(r), R=w.R_of(r)
        )
    return WeightFields(omega=w.omega(r), rho2=w.rho2(r), nu_p=w.nu_p(p, r))


# ---------------------------------------------------------------------------
# radial moment engine


@lru_cache(maxsize=64)
def _gl01(n: int):
    """Gauss-Legendre nodes and weights mapped to [0, 1]."""
    x, w = np.polynomial.legendre.leggauss(int(n))
    return (x + 1.0) / 2.0, w / 2.0


def _graded_breaks(max_power: float, extra=None) -> np.ndarray:
    """Panel breakpoints on [0, 1], geometrically refined toward 1.

    The depth scales with the largest monomial power so that the O(1/power)
    boundary layer of r^power is resolved by the seed panels already.
    """
    depth = int(np.clip(np.ceil(np.log2(8.0 * max(max_power, 2.0))), 8, 24))
    pts = [0.0] + [1.0 - 0.5 ** k for k in range(1, depth + 1)] + [1.0]
    if extra is not None:
        pts.extend(float(t) for t in extra if 0.0 < t < 1.0)
    return np.unique(np.asarray(pts, dtype=float))


def _halve(breaks: np.ndarray) -> np.ndarray:
    mids = 0.5 * (breaks[:-1] + breaks[1:])
    return np.sort(np.concatenate([breaks, mids]))


def radial_integrals(
    density: Callable,
    powers,
    rtol: float = 1e-12,
    breaks: Optional[np.ndarray] = None,
    order: int = 24,
    max_doublings: int = 7,
) -> np.ndarray:
    """int_0^1 r^powers[k] * density(r) dr for every requested power.

    The integrand is sampled on composite Gauss-Legendre panels which are
    halved globally until two consecutive levels agree to ``rtol`` in relative
    terms; a QuadratureError carrying the last estimate is raised otherwise.
    """
    powers = np.atleast_1d(np.asarray(powers, dtype=float))
    if np.any(powers < 0):
        raise ParameterError("monomial powers must be nonnegative")
    if breaks is None:
        breaks = _graded_breaks(float(powers.max()))
    x0, w0 = _gl01(order)

    def level_value(brk):
        lo = brk[:-1]
        wid = np.diff(brk)
        nodes = (lo[:, None] + wid[:, None] * x0[None, :]).ravel()
        wts = (wid[:, None] * w0[None, :]).ravel()
        base = np.asarray(density(nodes), dtype=float) * wts
        # nodes lie strictly inside (0, 1); exp/log keeps huge powers stable
        powmat = np.exp(powers[:, None] * np.log(nodes)[None, :])
        return powmat @ base

    cur = level_value(breaks)
    rel = np.inf
    for _ in range(max_doublings):
        breaks = _halve(breaks)
        new = level_value(breaks)
        scale = np.maximum(np.abs(new), 1e-300)
        rel = float(np.max(np.abs(new - cur) / scale))
        cur = new
        if rel < rtol:
            return cur
    raise QuadratureError(
        f"radial integrals did not converge to rtol={rtol:g} (achieved {rel:.3e})",
        estimate=cur,
        achieved_rtol=rel,
    )


def moment(w: Weight, p: float, n: int, rtol: float = 1e-12) -> float:
    """h_n = 2 * int_0^1 r^(2n+1) nu_p(r) dr."""
    if n < 0 or int(n) != n:
        raise ParameterError(f"moment index must be a nonnegative integer, got {n}")
    vals = radial_integrals(lambda r: w.nu_p(p, r), [2 * int(n) + 1], rtol=rtol)
    return 2.0 * float(vals[0])


def moment_table(w: Weight, p: float, N: int, rtol: float = 1e-12) -> np.ndarray:
    """Vector of moments h_0 .. h_{N-1}, all from one shared panelization."""
    if N < 1:
        raise ParameterError("need at least one moment")
    powers = 2 * np.arange(int(N)) + 1
    return 2.0 * radial_integrals(lambda r: w.nu_p(p, r), powers, rtol=rtol)
