"""Exact sequential sampler for rank-n projection ensembles.

Points are drawn one at a time: each proposal comes from the normalized
diagonal of the rank-n kernel (a uniform mixture of Gamma radii with a
uniform angle), is thinned against the part of the kernel orthogonal to
the points already placed, and on acceptance the projection basis grows by
one orthonormalized feature vector.  Conditioning on a tuple of anchor
points just pre-loads that basis with an orthonormal span of the anchor
features, derivatives standing in for repeated anchors, after which the
loop runs unchanged and returns the remaining n - ell points.
"""

from __future__ import annotations

import numpy as np
from scipy.special import gammaln

from .. import _jit
from ..core import Configuration
from ..errors import DimensionMismatchError, PalmDegeneracyError, RejectionBudgetError
from . import _proj_numpy
from .rng import as_generator

REJECTION_BUDGET = 1_000_000
BASIS_RTOL = 1e-12


def feature_row(z: complex, n: int) -> np.ndarray:
    """Feature vector (z^k / sqrt(k!)) for k below n."""
    inv = 1.0 / np.sqrt(np.arange(1.0, n))
    return np.concatenate(([1.0 + 0j], np.cumprod(z * inv)))


def _feature_deriv_over_factorial(z: complex, n: int, m: int) -> np.ndarray:
    """m-th derivative of the feature vector divided by m factorial."""
    k = np.arange(n)
    out = np.zeros(n, dtype=np.complex128)
    kk = k[k >= m]
    logb = gammaln(kk + 1) - gammaln(m + 1) - gammaln(kk - m + 1)
    coef = np.exp(logb - 0.5 * gammaln(kk + 1))
    if z == 0:
        vals = np.where(kk == m, coef, 0.0).astype(np.complex128)
    else:
        vals = coef * z ** (kk - m)
    out[k >= m] = vals
    return out


def _divided_difference_rows(anchors, n: int) -> np.ndarray:
    """Newton divided differences of the feature map over the anchors.

    The rows span the same space as the anchor feature vectors but stay
    well conditioned as anchors approach each other; exactly repeated
    anchors fall back to derivative rows, which is the confluent limit.
    """
    ell = len(anchors)
    table = {}
    for i in range(ell):
        table[(i, i)] = feature_row(anchors[i], n)
    for span in range(1, ell):
        for i in range(ell - span):
            j = i + span
            if anchors[i] == anchors[j]:
                table[(i, j)] = _feature_deriv_over_factorial(anchors[i], n, span)
            else:
                denom = anchors[j] - anchors[i]
                table[(i, j)] = (table[(i + 1, j)] - table[(i, j - 1)]) / denom
    return np.array([table[(0, j)] for j in range(ell)])


def anchor_basis(anchors, n: int) -> np.ndarray:
    """Orthonormal rows spanning the anchor feature vectors in rank n.

    Anchors are sorted first so repeats sit adjacently and hit the
    derivative fallback.  Raises PalmDegeneracyError when the anchor span
    collapses, which for distinct or confluent anchors can only happen if
    there are more anchors than features.
    """
    anchors = [complex(a) for a in anchors]
    ell = len(anchors)
    if ell == 0:
        return np.zeros((0, n), dtype=np.complex128)
    if ell > n:
        raise PalmDegeneracyError(
            f"{ell} anchors cannot be independent in rank {n}"
        )
    rows = _divided_difference_rows(sorted(anchors, key=lambda c: (c.real, c.imag)), n)
    q, r = np.linalg.qr(rows.T)
    diag = np.abs(np.diag(r))
    if diag.min() < BASIS_RTOL * diag.max():
        raise PalmDegeneracyError("anchor feature vectors are numerically dependent")
    return q.T


def _run_core(E, k0, n_add, gen, budget):
    n = E.shape[1]
    inv_sqrt = 1.0 / np.sqrt(np.arange(1.0, n + 1.0))
    if _jit.jit_enabled():
        from . import _proj_numba

        pts = _proj_numba.core(E, k0, n_add, inv_sqrt, gen, budget)
    else:
        pts = _proj_numpy.core(E, k0, n_add, inv_sqrt, gen, budget)
    if len(pts) < n_add:
        raise RejectionBudgetError(
            f"sampler exhausted {budget} proposals at point {len(pts) + 1} of {n_add}"
        )
    return pts


def sample_ginibre_n(n: int, rng, budget: int = REJECTION_BUDGET) -> Configuration:
    """One draw of the rank-n ensemble, n points in the plane."""
    if n < 1:
        raise ValueError("n must be positive")
    E = np.zeros((n, n), dtype=np.complex128)
    return Configuration(_run_core(E, 0, n, as_generator(rng), budget))


def sample_palm_ginibre_n(n: int, anchors, rng,
                          budget: int = REJECTION_BUDGET) -> Configuration:
    """One draw of the rank-n ensemble conditioned on the anchor points.

    Returns the n - ell points other than the anchors themselves.  The
    rank must exceed the number of anchors; at n = ell the conditioned
    ensemble would have nothing left to place.
    """
    anchors = [complex(a) for a in anchors]
    ell = len(anchors)
    if n <= ell:
        raise DimensionMismatchError(
            f"rank {n} must exceed the {ell} conditioned points"
        )
    E = np.zeros((n, n), dtype=np.complex128)
    if ell:
        E[:ell] = anchor_basis(anchors, n)
    return Configuration(_run_core(E, ell, n - ell, as_generator(rng), budget))
