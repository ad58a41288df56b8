"""Exact sampling of squared radii for radially invariant kernels.

For a kernel projecting onto a set of normalized monomials, the squared
moduli of the points are independent, one per monomial degree k, each
distributed Gamma(k + 1, 1).  This gives exact draws with no rejection
loop, which is how the large radial batches for the detector tests are
produced.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import gammaln

from ..core import RadialConfiguration
from .rng import as_generator


def sample_radial_indices(indices, rng) -> RadialConfiguration:
    """Squared radii for the projection onto the given monomial degrees."""
    gen = as_generator(rng)
    degrees = np.asarray(sorted(int(i) for i in indices), dtype=float)
    if degrees.size and degrees[0] < 0:
        raise ValueError("monomial degrees must be nonnegative")
    return RadialConfiguration(gen.standard_gamma(degrees + 1.0))


def sample_radial_ginibre(n: int, rng) -> RadialConfiguration:
    """Squared radii of the rank-n truncation."""
    if n < 1:
        raise ValueError("n must be positive")
    return sample_radial_indices(range(n), rng)


def radial_horizon(t_max: float) -> int:
    """Largest monomial degree that can place a point inside [0, t_max].

    A Gamma(k + 1) draw concentrates at k with spread sqrt(k); the bound
    leaves a margin of twelve standard deviations plus a constant floor,
    so the probability of a missed point is negligible at double precision
    scales.
    """
    if t_max <= 0:
        raise ValueError("t_max must be positive")
    return int(math.ceil(t_max + 12.0 * math.sqrt(t_max + 1.0) + 50.0))


def sample_radial_palm(ell: int, t_max: float, rng) -> RadialConfiguration:
    """Squared radii in [0, t_max] of the ensemble conditioned on ell
    points at the origin.

    Conditioning removes the lowest ell monomial degrees; the remaining
    degrees are truncated at a horizon far enough out that the window
    [0, t_max] is complete.  ell = 0 gives the unconditioned ensemble.
    """
    if ell < 0:
        raise ValueError("ell must be nonnegative")
    gen = as_generator(rng)
    horizon = radial_horizon(t_max)
    draws = sample_radial_indices(range(ell, horizon + 1), gen).values
    return RadialConfiguration(draws[draws <= t_max])


def sample_radial_dpp(coeff_sq, radial_sampler=None, rng=None) -> RadialConfiguration:
    """Radial sample for a kernel sum of a_k^2 (z w-bar)^k monomial terms.

    coeff_sq lists the squared coefficients a_k^2; indices with a zero
    entry carry no point.  Each nonzero index must give a normalized
    radial density, which against the Gaussian reference means
    a_k^2 = 1/k!.  radial_sampler(k, gen) may override the per-index draw;
    the default draws Gamma(k + 1), and with it a run of leading zeros of
    length ell consumes the stream exactly like sample_radial_palm.
    """
    if rng is None:
        raise ValueError("rng is required")
    gen = as_generator(rng)
    coeff_sq = [float(c) for c in coeff_sq]
    active = []
    for k, c in enumerate(coeff_sq):
        if c < 0:
            raise ValueError("squared coefficients must be nonnegative")
        if c == 0.0:
            continue
        if abs(math.log(c) + gammaln(k + 1)) > 1e-8:
            raise ValueError(
                f"coefficient at degree {k} does not normalize its radial density"
            )
        active.append(k)
    if radial_sampler is None:
        return sample_radial_indices(active, gen)
    return RadialConfiguration([float(radial_sampler(k, gen)) for k in active])
