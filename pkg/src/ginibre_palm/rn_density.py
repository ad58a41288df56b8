"""Density between two conditioned ensembles with the same number of
anchors, evaluated as a truncated product over dyadic radii.

The density of the ensemble conditioned on x against the one conditioned
on y is the normalizing ratio times the limit over growing disks of the
product of |x_j - s|^2 / |y_j - s|^2 over points s in the disk.  On a
finite sample the limit is diagnosed through the per-shell increments of
the log product.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .core import Configuration
from .errors import AnchorCollisionError, DimensionMismatchError
from .kernel import partition_ratio_exact, z_ratio
from .sampler.projection import sample_palm_ginibre_n
from .sampler.rng import as_generator
from .statistics import estimate

COLLISION_ATOL = 1e-12
SHELL_TOL = 1e-3


def _anchor_tuple(anchors):
    return tuple(complex(a) for a in anchors)


def _anchorwise_log_terms(points: np.ndarray, x, y) -> np.ndarray:
    """Per-point log of the product over anchors of |x_j - s|^2 / |y_j - s|^2.

    A point sitting on a y anchor makes the density infinite and means the
    configuration could not have come from the y-conditioned ensemble, so
    it raises; a point on an x anchor sends the log to -inf, which is a
    legitimate value (the density vanishes there).
    """
    logs = np.zeros(len(points))
    for yj in y:
        d = np.abs(yj - points)
        if np.any(d < COLLISION_ATOL):
            raise AnchorCollisionError(
                f"configuration point within {COLLISION_ATOL} of anchor {yj}"
            )
        logs -= 2.0 * np.log(d)
    for xj in x:
        d = np.abs(xj - points)
        with np.errstate(divide="ignore"):
            logs += 2.0 * np.log(d)
    return logs


def truncated_log_product(config: Configuration, x, y, r: int | None = None) -> float:
    """Log of the anchor product over points with |s| < 2^r.

    r = None uses every point of the configuration.  Anchor tuples must
    have the same length.
    """
    x = _anchor_tuple(x)
    y = _anchor_tuple(y)
    if len(x) != len(y):
        raise DimensionMismatchError(
            f"anchor tuples of different lengths ({len(x)} vs {len(y)})"
        )
    pts = config.points
    if r is not None:
        pts = pts[np.abs(pts) < 2.0 ** int(r)]
    if len(pts) == 0:
        return 0.0
    return math.fsum(_anchorwise_log_terms(pts, x, y))


@dataclass(frozen=True)
class TailDiagnostics:
    """Shell-by-shell behavior of the truncated log product.

    log_increments holds (r, delta_log) pairs, where delta_log is the
    contribution of points with 2^(r-1) <= |s| < 2^r and the r = 0 entry
    covers the open unit disk; converged means two consecutive increments
    fell below the shell tolerance before r_max ran out, and r_stop is
    where that happened (or r_max if it never did).
    """

    log_increments: tuple
    converged: bool
    r_stop: int


def rn_density(config: Configuration, x, y, r_max: int | None = None,
               tol: float = SHELL_TOL):
    """Density of the x-conditioned ensemble against the y-conditioned one,
    evaluated on a configuration drawn from the latter.

    Returns (value, TailDiagnostics); the value uses the product truncated
    at the first radius where the shell increments settle below tol, or at
    r_max with converged = False when they never do.  Anchor tuples of
    different lengths describe mutually singular ensembles and raise
    before any points are touched.
    """
    x = _anchor_tuple(x)
    y = _anchor_tuple(y)
    ratio = z_ratio(x, y)
    pts = config.points
    if r_max is None:
        top = float(np.max(np.abs(pts))) if len(pts) else 1.0
        r_max = max(3, int(math.ceil(math.log2(max(top, 1.0)))) + 1)
    cums = [truncated_log_product(config, x, y, r=r) for r in range(r_max + 1)]
    incs = [cums[0]] + [b - a for a, b in zip(cums, cums[1:])]
    converged = False
    r_stop = r_max
    for r in range(1, r_max + 1):
        if abs(incs[r]) < tol and abs(incs[r - 1]) < tol:
            converged = True
            r_stop = r
            break
    diag = TailDiagnostics(
        log_increments=tuple(enumerate(incs)), converged=converged, r_stop=r_stop
    )
    return math.exp(cums[r_stop]) / ratio, diag


def tail_log_product(config: Configuration, x_single: complex, r: int, R: int) -> float:
    """Log of the product of |1 - x/s|^2 over points with 2^r < |s| <= 2^R.

    Any point exactly at the origin cannot enter the product and is
    skipped with a warning.
    """
    if not r < R:
        raise ValueError("need r < R")
    x = complex(x_single)
    pts = config.points
    mod = np.abs(pts)
    at_origin = int(np.count_nonzero(mod == 0.0))
    if at_origin:
        warnings.warn(f"skipped {at_origin} origin point(s) in tail product")
    sel = (mod > 2.0 ** int(r)) & (mod <= 2.0 ** int(R))
    if x == 0 or not np.any(sel):
        return 0.0
    terms = 2.0 * np.log(np.abs(1.0 - x / pts[sel]))
    return math.fsum(terms)


def expectation_consistency(n: int, x, y, n_samples: int, rng,
                            max_resamples: int = 100):
    """Monte Carlo check of the exact product-expectation identity.

    Draws n_samples configurations of n points from the rank ell + n
    ensemble conditioned on y, averages the full anchor product, and
    returns (mc, exact) where exact is the finite-rank partition ratio the
    average must match.  A draw that lands on an anchor is discarded with
    a warning and redrawn.
    """
    x = _anchor_tuple(x)
    y = _anchor_tuple(y)
    if len(x) != len(y):
        raise DimensionMismatchError(
            f"anchor tuples of different lengths ({len(x)} vs {len(y)})"
        )
    gen = as_generator(rng)
    rank = len(y) + n
    vals = []
    rejected = 0
    while len(vals) < n_samples:
        cfg = sample_palm_ginibre_n(rank, y, gen)
        try:
            vals.append(math.exp(truncated_log_product(cfg, x, y, r=None)))
        except AnchorCollisionError:
            rejected += 1
            if rejected > max_resamples:
                raise
    if rejected:
        warnings.warn(f"redrew {rejected} configuration(s) that hit an anchor")
    return estimate(vals), partition_ratio_exact(n, x, y)
