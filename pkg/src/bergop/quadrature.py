"""Tensor quadrature over the unit disc.

A rule couples composite Gauss-Legendre nodes in the radius with a uniform
angular grid, against the normalized area measure dA = (1/pi) r dr dtheta,
so that the disc has total mass 1.  Radial panels can be graded toward the
boundary and aligned with structural radii of a symbol (thin transition
annuli), which is what makes sharply localized integrands converge.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

import numpy as np

from .errors import AliasingError, EvaluationError, ParameterError
from .weights import _gl01

_MIN_PANEL_ORDER = 24


@dataclass(frozen=True)
class DiscRule:
    """Radial nodes/weights (for dr on [0,1]) plus a uniform angular grid."""

    radial_nodes: np.ndarray
    radial_weights: np.ndarray
    n_theta: int
    breakpoints: tuple = ()

    def __post_init__(self):
        r, w = self.radial_nodes, self.radial_weights
        if r.ndim != 1 or w.shape != r.shape:
            raise ParameterError("radial nodes and weights must be matching 1-D arrays")
        if np.any(r <= 0.0) or np.any(r >= 1.0) or np.any(np.diff(r) <= 0):
            raise ParameterError("radial nodes must be strictly increasing inside (0, 1)")
        if np.any(w <= 0.0):
            raise ParameterError("radial weights must be positive")
        if self.n_theta < 8 or self.n_theta % 2 != 0:
            raise ParameterError("n_theta must be an even integer >= 8")
        mass = float(np.sum(2.0 * r * w))
        if abs(mass - 1.0) > 1e-12:
            raise ParameterError(f"rule does not reproduce unit disc mass: {mass!r}")

    @property
    def n_radial(self) -> int:
        return self.radial_nodes.size

    @property
    def thetas(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.n_theta) / self.n_theta

    def mesh(self) -> np.ndarray:
        """Complex evaluation mesh of shape (n_radial, n_theta)."""
        return self.radial_nodes[:, None] * np.exp(1j * self.thetas)[None, :]

    def area_radial_weights(self) -> np.ndarray:
        """Per-radius weights w_i * 2 r_i; angular averaging supplies 1/n_theta."""
        return 2.0 * self.radial_nodes * self.radial_weights

    def describe(self) -> dict:
        return {
            "n_radial": int(self.n_radial),
            "n_theta": int(self.n_theta),
            "n_panels": int(len(self.breakpoints) + 1),
        }


def _allocate_orders(widths: np.ndarray, target_total: int, min_order: int) -> np.ndarray:
    """Split a radial node budget across panels, biased toward wide panels."""
    share = np.sqrt(widths)
    share = share / share.sum()
    orders = np.maximum(min_order, np.rint(target_total * share).astype(int))
    return orders


def disc_rule(
    n_r: int = 256,
    n_theta: int = 1024,
    *,
    breakpoints: Iterable[float] = (),
    boundary_refine: int = 0,
    min_panel_order: int = _MIN_PANEL_ORDER,
) -> DiscRule:
    """Build a rule with ``n_r`` target radial nodes and ``n_theta`` angles.

    ``breakpoints`` are radii in (0,1) that radial panels must not straddle
    (for symbols with thin transition annuli).  ``boundary_refine=k`` adds
    geometric breakpoints 1 - 2^-1 .. 1 - 2^-k for weights concentrated at
    the boundary.
    """
    if n_r < 4:
        raise ParameterError("need at least 4 radial nodes")
    pts = [float(t) for t in breakpoints if 0.0 < float(t) < 1.0]
    pts += [1.0 - 0.5 ** k for k in range(1, int(boundary_refine) + 1)]
    brk = np.unique(np.concatenate([[0.0, 1.0], pts]))
    # drop breakpoints that coalesce numerically
    keep = np.concatenate([[True], np.diff(brk) > 1e-13])
    brk = brk[keep]

    widths = np.diff(brk)
    if widths.size == 1:
        orders = np.array([int(n_r)])
    else:
        orders = _allocate_orders(widths, int(n_r), int(min_panel_order))
    nodes, wts = [], []
    for lo, wid, order in zip(brk[:-1], widths, orders):
        x0, w0 = _gl01(int(order))
        nodes.append(lo + wid * x0)
        wts.append(wid * w0)
    return DiscRule(
        radial_nodes=np.concatenate(nodes),
        radial_weights=np.concatenate(wts),
        n_theta=int(n_theta),
        breakpoints=tuple(float(b) for b in brk[1:-1]),
    )


def _mesh_values(rule: DiscRule, f: Callable) -> np.ndarray:
    vals = np.asarray(f(rule.mesh()))
    if vals.shape != (rule.n_radial, rule.n_theta):
        raise ParameterError(
            f"integrand returned shape {vals.shape}, expected {(rule.n_radial, rule.n_theta)}"
        )
    bad = ~np.isfinite(vals)
    if np.any(bad):
        i, j = np.argwhere(bad)[0]
        z = rule.radial_nodes[i] * np.exp(1j * rule.thetas[j])
        raise EvaluationError(
            f"integrand not finite at node (radial={int(i)}, angular={int(j)}), z={z:.6g}"
        )
    return vals


def integrate_disc(rule: DiscRule, f: Callable) -> complex:
    """Integral of f against normalized area measure over the unit disc.

    ``f`` must accept a complex ndarray and return values of the same shape.
    """
    vals = _mesh_values(rule, f)
    radial = vals.mean(axis=1)  # uniform angular average
    out = np.sum(radial * rule.area_radial_weights())
    return complex(out) if np.iscomplexobj(vals) else float(out)


def angular_profiles(rule: DiscRule, values: np.ndarray, ks) -> np.ndarray:
    """Angular Fourier coefficients (1/2pi) int f(r e^{i t}) e^{-i k t} dt per radius.

    ``values`` are mesh samples of shape (n_radial, n_theta); returns an array
    of shape (len(ks), n_radial).
    """
    ks = np.atleast_1d(np.asarray(ks, dtype=int))
    ny = rule.n_theta // 2
    if np.any(np.abs(ks) >= ny):
        raise AliasingError(
            f"angular mode beyond Nyquist limit: |k| must be < {ny} for n_theta={rule.n_theta}"
        )
    hat = np.fft.fft(values, axis=1) / rule.n_theta
    return hat[:, ks % rule.n_theta].T


def angular_fourier_profile(rule: DiscRule, f: Callable, k: int) -> np.ndarray:
    """Radial profile of the k-th angular Fourier mode of f."""
    vals = _mesh_values(rule, f)
    return angular_profiles(rule, vals, [int(k)])[0]
