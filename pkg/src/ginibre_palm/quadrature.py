"""Quadrature grids for integrals against the planar Gaussian weight.

Radial integrals are in the squared-modulus variable t, against e^{-t} dt.
Semi-infinite smooth integrands get Gauss-Laguerre nodes; integrands with a
hard radial window get Gauss-Legendre on the window, where Laguerre nodes
would see the discontinuity and stall at a few percent accuracy.  Planar
grids combine a radial rule with a uniform angular grid, which is spectrally
accurate for the trigonometric-polynomial angular dependence of all kernels
here.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_genlaguerre, roots_laguerre, roots_legendre


@lru_cache(maxsize=32)
def laguerre_rule(n: int):
    """Nodes and weights for integral of f(t) e^{-t} on [0, inf)."""
    t, w = roots_laguerre(n)
    return t, w


@lru_cache(maxsize=32)
def laguerre_half_rule(n: int):
    """Nodes and weights for integral of sqrt(t) f(t) e^{-t} on [0, inf)."""
    t, w = roots_genlaguerre(n, 0.5)
    return t, w


@lru_cache(maxsize=64)
def legendre_window_rule(n: int, t_lo: float, t_hi: float):
    """Nodes and raw weights for integral of f(t) dt on [t_lo, t_hi]."""
    x, w = roots_legendre(n)
    half = 0.5 * (t_hi - t_lo)
    return half * x + 0.5 * (t_hi + t_lo), half * w


@dataclass(frozen=True)
class QuadratureSpec:
    """Planar product grid: radial rule times uniform angles.

    t_max = None uses Gauss-Laguerre in t.  A finite t_max uses Legendre on
    [0, t_max] plus a shifted Laguerre tail, so that hard cutoffs at t_max
    (disk indicators) are integrated cleanly while smooth kernel factors
    still see the whole half line.
    """

    radial_nodes: int = 64
    angular_nodes: int = 64
    t_max: float | None = None
    tail_nodes: int = 32

    def radial(self):
        """Nodes t and weights for integral of f(t) e^{-t} dt on [0, inf)."""
        if self.t_max is None:
            return laguerre_rule(self.radial_nodes)
        t_in, w_in = legendre_window_rule(self.radial_nodes, 0.0, float(self.t_max))
        w_in = w_in * np.exp(-t_in)
        t_tail, w_tail = laguerre_rule(self.tail_nodes)
        scale = np.exp(-float(self.t_max))
        return (
            np.concatenate([t_in, t_tail + self.t_max]),
            np.concatenate([w_in, w_tail * scale]),
        )

    def planar(self):
        """Complex nodes z and weights v with sum v F(z) ~ integral of F
        against the standard Gaussian probability measure on the plane."""
        t, wt = self.radial()
        m = self.angular_nodes
        ang = np.exp(2j * np.pi * np.arange(m) / m)
        z = (np.sqrt(t)[:, None] * ang[None, :]).ravel()
        v = np.repeat(wt / m, m)
        return z, v


def reproducing_residual(eval_fn, z: complex, w: complex, quad: QuadratureSpec) -> float:
    """Relative defect of the reproducing identity at one pair of points.

    eval_fn(a, b) must return kernel values against the Gaussian reference
    measure, broadcasting over arrays.  Returns
    |integral of K(z,u) K(u,w) dGauss(u) - K(z,w)| / (1 + |K(z,w)|).
    """
    u, v = quad.planar()
    left = np.sum(v * eval_fn(z, u) * eval_fn(u, w))
    right = eval_fn(z, w)
    return float(abs(left - right) / (1.0 + abs(right)))
