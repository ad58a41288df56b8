"""Schur polynomial evaluation and partition combinatorics.

Two evaluation routes are kept side by side: the ratio-of-alternants form,
fast and accurate for well separated arguments, and the determinant in
complete homogeneous symmetric functions, which has no Vandermonde division
and therefore survives coincident arguments.  The dispatcher picks a branch
from the minimal pairwise gap.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations

import numpy as np

from .core import Partition
from .errors import BudgetExceededError

# arguments closer than this (relative to scale) route to the
# coincidence-safe branch
SEPARATION_RTOL = 1e-4


def separation_scale(x) -> float:
    x = np.asarray(x, dtype=np.complex128)
    if x.size == 0:
        return SEPARATION_RTOL
    return SEPARATION_RTOL * (1.0 + float(np.max(np.abs(x))))


def min_pairwise_gap(x) -> float:
    x = np.asarray(x, dtype=np.complex128)
    if x.size < 2:
        return math.inf
    return min(abs(a - b) for a, b in combinations(x, 2))


def is_separated(x) -> bool:
    """Whether all pairwise gaps clear the branch threshold."""
    return min_pairwise_gap(x) > separation_scale(x)


def vandermonde(x) -> complex:
    """Product of (x_i - x_j) over i < j."""
    x = np.asarray(x, dtype=np.complex128)
    out = 1.0 + 0.0j
    for i, j in combinations(range(x.size), 2):
        out *= x[i] - x[j]
    return complex(out)


def _fsum_complex(terms) -> complex:
    terms = list(terms)
    return complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms))


def power_sums(x, m: int) -> np.ndarray:
    """p_1 .. p_m for the argument tuple, exactly rounded accumulation."""
    x = np.asarray(x, dtype=np.complex128)
    powers = np.ones_like(x)
    out = np.empty(m + 1, dtype=np.complex128)
    out[0] = x.size
    for k in range(1, m + 1):
        powers = powers * x
        out[k] = _fsum_complex(powers)
    return out


def complete_homogeneous(x, m: int) -> np.ndarray:
    """h_0 .. h_m via the Newton recurrence k h_k = sum_i p_i h_{k-i}."""
    p = power_sums(x, m)
    h = np.zeros(m + 1, dtype=np.complex128)
    h[0] = 1.0
    for k in range(1, m + 1):
        h[k] = _fsum_complex(p[i] * h[k - i] for i in range(1, k + 1)) / k
    return h


def elementary_symmetric(x, k: int) -> complex:
    """Elementary symmetric polynomial e_k by the stable one-point update."""
    x = np.asarray(x, dtype=np.complex128)
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k > x.size:
        return 0j
    e = np.zeros(k + 1, dtype=np.complex128)
    e[0] = 1.0
    for m, val in enumerate(x, start=1):
        for j in range(min(k, m), 0, -1):
            e[j] = e[j] + val * e[j - 1]
    return complex(e[k])


def _schur_alternant(lam: Partition, x: np.ndarray) -> complex:
    n = x.size
    exponents = np.array(lam.padded(n), dtype=np.float64) + np.arange(n - 1, -1, -1)
    num = np.linalg.det(np.power.outer(x, exponents))
    return complex(num / vandermonde(x))


def _schur_jacobi_trudi(lam: Partition, x: np.ndarray) -> complex:
    parts = lam.parts
    if not parts:
        return 1.0 + 0.0j
    r = len(parts)
    h = complete_homogeneous(x, parts[0] + r)
    mat = np.zeros((r, r), dtype=np.complex128)
    for i in range(r):
        for j in range(r):
            k = parts[i] - (i + 1) + (j + 1)
            if k >= 0:
                mat[i, j] = h[k]
    return complex(np.linalg.det(mat))


def schur_eval(lam, x) -> complex:
    """Schur polynomial s_lam at the argument tuple x.

    Arguments may repeat; the branch is chosen so that coincident tuples
    stay accurate.  A partition with more positive parts than arguments
    evaluates to zero.
    """
    lam = lam if isinstance(lam, Partition) else Partition(lam)
    x = np.atleast_1d(np.asarray(x, dtype=np.complex128))
    if len(lam) > x.size:
        return 0j
    if not lam.parts:
        return 1.0 + 0.0j
    if x.size == 1:
        return complex(x[0] ** lam[0])
    if is_separated(x):
        return _schur_alternant(lam, x)
    return _schur_jacobi_trudi(lam, x)


def partitions_of_weight(w: int, parts_max: int, part_max=None):
    """Yield partitions of exact weight w with at most parts_max parts.

    Parts are additionally capped at part_max when given.
    """
    cap = w if part_max is None else min(w, part_max)

    def rec(remaining, slots, bound):
        if remaining == 0:
            yield ()
            return
        if slots == 0:
            return
        for first in range(min(remaining, bound), 0, -1):
            for rest in rec(remaining - first, slots - 1, first):
                yield (first,) + rest

    for parts in rec(w, parts_max, cap):
        yield Partition(parts)


def partitions_up_to(weight_max: int, parts_max: int) -> list:
    """All partitions of weight at most weight_max with at most parts_max parts.

    Ordered by weight, then by parts in decreasing lexicographic order, so
    weight 2 lists (2) before (1, 1).
    """
    out = []
    for w in range(weight_max + 1):
        shell = list(partitions_of_weight(w, parts_max))
        shell.sort(key=lambda lam: tuple(-p for p in lam.parts))
        out.extend(shell)
    return out


def expansion_coefficient(i: int, lam) -> int:
    """Multiplicity of s_lam t^|lam| in the expansion of prod_j (1 + x_j t)^i.

    Equals the number of column-strict tableaux of the conjugate shape with
    entries at most i; computed exactly by the hook content product.
    """
    lam = lam if isinstance(lam, Partition) else Partition(lam)
    if i < 0:
        raise ValueError("i must be nonnegative")
    if not lam.parts:
        return 1
    if lam[0] > i:
        return 0
    mu = lam.conjugate()
    mu_conj = lam
    out = Fraction(1)
    for r, row in enumerate(mu.parts, start=1):
        for c in range(1, row + 1):
            arm = row - c
            leg = mu_conj[c - 1] - r
            hook = arm + leg + 1
            out *= Fraction(i + c - r, hook)
    assert out.denominator == 1
    return int(out)


def generating_identity_residual(x, i: int, t=1.0, budget: int = 16) -> float:
    """Residual of the finite product identity for powers of prod (1 + x_j t).

    Expands (prod_j (1 + x_j t))^i over partitions inside the len(x) by i
    box with exact integer coefficients and returns the absolute difference
    from the directly evaluated right side.  Exact enumeration only; the
    box area i * len(x) must not exceed the budget.
    """
    x = np.atleast_1d(np.asarray(x, dtype=np.complex128))
    t = complex(t)
    if i < 0:
        raise ValueError("i must be nonnegative")
    if i * x.size > budget:
        raise BudgetExceededError(
            f"box area {i * x.size} exceeds enumeration budget {budget}"
        )
    total = 0j
    for w in range(i * x.size + 1):
        for lam in partitions_of_weight(w, x.size, part_max=i):
            coef = expansion_coefficient(i, lam)
            if coef:
                total += coef * schur_eval(lam, x) * t**w
    direct = complex(np.prod(1.0 + x * t)) ** i
    return abs(total - direct)


def schur_sum_bound(x, i: int):
    """Left and right sides of the squared Schur sum bound.

    lhs = sum over |lam| <= i of |s_lam(x)|^2, rhs = prod (1 + |x_j|)^(2 i).
    The bound lhs <= rhs holds for every argument tuple.
    """
    x = np.atleast_1d(np.asarray(x, dtype=np.complex128))
    if i < 0:
        raise ValueError("i must be nonnegative")
    lhs = math.fsum(
        abs(schur_eval(lam, x)) ** 2 for lam in partitions_up_to(i, x.size)
    )
    rhs = float(np.prod((1.0 + np.abs(x)) ** 2)) ** i
    return lhs, rhs
