"""Correlation kernels for the infinite planar ensemble, finite truncations,
and their Palm conditionings.

All kernels act against the standard complex Gaussian reference measure
(analytic gauge).  The lebesgue gauge multiplies in the square roots of the
Gaussian density so that the same kernel works against Lebesgue measure.

Conditioning on an anchor tuple x replaces the kernel by its Schur
complement in the anchor block.  Near coincident anchors that complement
degenerates numerically; for finite truncations an equivalent expansion
over Schur polynomials takes over, and conditioning at the origin has a
closed tail form.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
from scipy.special import gammaln

from . import schur as _sp
from .core import PalmAnchor, Partition
from .errors import (
    BudgetExceededError,
    ConvergenceFailureError,
    DimensionMismatchError,
    PalmDegeneracyError,
)

GAUGES = ("analytic", "lebesgue")
FAMILIES = ("infinite", "truncated", "palm", "origin_palm")

# Gram determinant below this multiple of its diagonal product counts as
# degenerate for the Schur complement route.
DEGENERACY_RTOL = 1e-10


def _anchor_tuple(anchors) -> tuple:
    if isinstance(anchors, PalmAnchor):
        return anchors.points
    return tuple(complex(a) for a in anchors)


@dataclass(frozen=True)
class KernelSpec:
    """Immutable description of a kernel: family, truncation, anchors, gauge.

    family "palm" with n = None conditions the infinite kernel; with an
    integer n it conditions the rank n truncation (n must exceed the number
    of anchors).  family "origin_palm" is the closed form for anchors all
    at the origin.
    """

    family: str
    n: int | None = None
    anchors: tuple = field(default=())
    gauge: str = "analytic"

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown kernel family {self.family!r}")
        if self.gauge not in GAUGES:
            raise ValueError(f"unknown gauge {self.gauge!r}")
        object.__setattr__(self, "anchors", _anchor_tuple(self.anchors))
        if self.family == "infinite":
            if self.n is not None or self.anchors:
                raise ValueError("infinite kernel takes no n and no anchors")
        elif self.family == "truncated":
            if self.n is None or self.n < 1:
                raise ValueError("truncated kernel needs n >= 1")
            if self.anchors:
                raise ValueError("truncated kernel takes no anchors")
        elif self.family == "palm":
            if self.n is not None and self.n <= len(self.anchors):
                raise ValueError("palm conditioning of a truncation needs n > ell")
        elif self.family == "origin_palm":
            if self.n is not None:
                raise ValueError("origin_palm kernel takes no n")
            if any(a != 0 for a in self.anchors):
                raise ValueError("origin_palm anchors must all be zero")

    # -- constructors -------------------------------------------------

    @classmethod
    def infinite(cls, gauge="analytic") -> "KernelSpec":
        return cls("infinite", gauge=gauge)

    @classmethod
    def truncated(cls, n: int, gauge="analytic") -> "KernelSpec":
        return cls("truncated", n=n, gauge=gauge)

    @classmethod
    def origin_palm(cls, ell: int, gauge="analytic") -> "KernelSpec":
        return cls("origin_palm", anchors=(0j,) * ell, gauge=gauge)

    @classmethod
    def palm(cls, base: "KernelSpec", anchors) -> "KernelSpec":
        """Condition a base kernel on anchors; nested conditionings flatten."""
        anchors = _anchor_tuple(anchors)
        if base.family == "infinite":
            merged, n = anchors, None
        elif base.family == "truncated":
            merged, n = anchors, base.n
        elif base.family in ("palm", "origin_palm"):
            merged, n = base.anchors + anchors, base.n
        else:  # pragma: no cover
            raise ValueError(base.family)
        if not merged:
            if n is None:
                return cls.infinite(gauge=base.gauge)
            return cls.truncated(n, gauge=base.gauge)
        if n is None and all(a == 0 for a in merged):
            return cls.origin_palm(len(merged), gauge=base.gauge)
        return cls("palm", n=n, anchors=merged, gauge=base.gauge)

    # -- properties ---------------------------------------------------

    @property
    def ell(self) -> int:
        return len(self.anchors)

    def base(self) -> "KernelSpec":
        """The unconditioned kernel this spec is a conditioning of."""
        if self.family in ("infinite", "truncated"):
            return self
        if self.n is None:
            return KernelSpec.infinite(gauge=self.gauge)
        return KernelSpec.truncated(self.n, gauge=self.gauge)

    # -- serialization ------------------------------------------------

    def to_json(self) -> str:
        return json.dumps(
            {
                "family": self.family,
                "n": self.n,
                "anchors": [[a.real, a.imag] for a in self.anchors],
                "gauge": self.gauge,
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "KernelSpec":
        raw = json.loads(text)
        anchors = tuple(complex(re, im) for re, im in raw.get("anchors", []))
        return cls(
            raw["family"],
            n=raw.get("n"),
            anchors=anchors,
            gauge=raw.get("gauge", "analytic"),
        )


# -- evaluation -------------------------------------------------------


def _kahan_partial_exp(u: np.ndarray, n: int) -> np.ndarray:
    """Compensated partial exponential sum over k < n of u^k / k!."""
    acc = np.ones_like(u)
    comp = np.zeros_like(u)
    term = np.ones_like(u)
    for k in range(1, n):
        term = term * (u / k)
        y = term - comp
        t = acc + y
        comp = (t - acc) - y
        acc = t
    return acc


def _origin_tail(u: np.ndarray, ell: int, extra_terms: int = 64) -> np.ndarray:
    """Tail sum over k >= ell of u^k / k!, stable for every magnitude of u.

    Direct summation where the small argument makes the subtraction form
    cancel, exp minus compensated partial sum elsewhere.
    """
    if ell == 0:
        return np.exp(u)
    u = np.asarray(u, dtype=np.complex128)
    out = np.empty_like(u)
    small = np.abs(u) < 0.5 * ell
    if np.any(small):
        us = u[small]
        term = us**ell * math.exp(-gammaln(ell + 1))
        acc = term.copy()
        comp = np.zeros_like(acc)
        for k in range(ell + 1, ell + extra_terms):
            term = term * (us / k)
            y = term - comp
            t = acc + y
            comp = (t - acc) - y
            acc = t
        out[small] = acc
    if np.any(~small):
        ub = u[~small]
        out[~small] = np.exp(ub) - _kahan_partial_exp(ub, ell)
    return out


def _base_eval(spec: KernelSpec, z: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Unconditioned kernel value in the analytic gauge."""
    u = z * np.conj(w)
    if spec.family == "infinite":
        return np.exp(u)
    if spec.family == "truncated":
        return _kahan_partial_exp(u, spec.n)
    raise ValueError(spec.family)


def _gram_matrix(base: KernelSpec, x: tuple) -> np.ndarray:
    xa = np.asarray(x, dtype=np.complex128)
    return _base_eval(base, xa[:, None], xa[None, :])


def _gram_is_degenerate(gram: np.ndarray) -> bool:
    det = np.linalg.det(gram)
    scale = float(np.prod(np.abs(np.diag(gram))))
    return not (abs(det) > DEGENERACY_RTOL * scale)


def _palm_complement(base: KernelSpec, x: tuple, z: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Schur complement kernel K(z,w) - K(z,x) K(x,x)^{-1} K(x,w)."""
    xa = np.asarray(x, dtype=np.complex128)
    gram = _gram_matrix(base, x)
    if _gram_is_degenerate(gram):
        raise PalmDegeneracyError(
            "anchor Gram matrix is numerically singular; "
            "use the expansion form or origin closed form"
        )
    zf = z.ravel()
    wf = w.ravel()
    kzx = _base_eval(base, zf[:, None], xa[None, :])
    kxw = _base_eval(base, xa[:, None], wf[None, :])
    corr = np.einsum("ij,ji->i", kzx, np.linalg.solve(gram, kxw))
    return (_base_eval(base, zf, wf) - corr).reshape(z.shape)


def evaluate(spec: KernelSpec, z, w):
    """Kernel value K(z, w); broadcasts over array arguments.

    Palm families evaluate through the Schur complement and fall back to
    the Schur polynomial expansion when the anchor Gram matrix degenerates
    and the base is a finite truncation.
    """
    z_in, w_in = np.asarray(z, dtype=np.complex128), np.asarray(w, dtype=np.complex128)
    zb, wb = np.broadcast_arrays(np.atleast_1d(z_in), np.atleast_1d(w_in))
    zb, wb = zb.astype(np.complex128), wb.astype(np.complex128)
    if spec.family in ("infinite", "truncated"):
        val = _base_eval(spec, zb, wb)
    elif spec.family == "origin_palm":
        val = _origin_tail(zb * np.conj(wb), spec.ell)
    elif spec.family == "palm":
        try:
            val = _palm_complement(spec.base(), spec.anchors, zb, wb)
        except PalmDegeneracyError:
            if spec.n is None:
                raise
            flat = [
                palm_kernel_schur(spec.n, spec.anchors, a, b)
                for a, b in zip(zb.ravel(), wb.ravel())
            ]
            val = np.array(flat, dtype=np.complex128).reshape(zb.shape)
    else:  # pragma: no cover
        raise ValueError(spec.family)
    if spec.gauge == "lebesgue":
        val = val * np.exp(-0.5 * (np.abs(zb) ** 2 + np.abs(wb) ** 2)) / np.pi
    if z_in.ndim == 0 and w_in.ndim == 0:
        return complex(val.ravel()[0])
    return val


def palm_kernel_det(base: KernelSpec, anchors, z, w):
    """Palm kernel through the explicit Schur complement, no fallback."""
    x = _anchor_tuple(anchors)
    if base.family not in ("infinite", "truncated"):
        raise ValueError("base must be an unconditioned kernel")
    if not x:
        return evaluate(base, z, w)
    zb, wb = np.broadcast_arrays(
        np.atleast_1d(np.asarray(z, dtype=np.complex128)),
        np.atleast_1d(np.asarray(w, dtype=np.complex128)),
    )
    val = _palm_complement(base, x, zb.astype(np.complex128), wb.astype(np.complex128))
    if np.asarray(z).ndim == 0 and np.asarray(w).ndim == 0:
        return complex(val.ravel()[0])
    return val


def _index_partition(index_set) -> Partition:
    """Partition lambda with lambda_j = I_desc[j] - (m - 1 - j) for a strict index set."""
    desc = sorted(index_set, reverse=True)
    m = len(desc)
    return Partition(tuple(desc[j] - (m - 1 - j) for j in range(m)))


def _log_index_factorial(index_set) -> float:
    return float(sum(gammaln(i + 1) for i in index_set))


def palm_kernel_schur(n: int, anchors, z, w, budget: int = 200_000) -> complex:
    """Palm kernel of the rank n truncation by Schur polynomial expansion.

    Valid for every anchor tuple including coincident ones.  Enumerates
    index subsets of {0..n-1}; raises when the subset count exceeds the
    budget.  Returns 0 when n <= ell.
    """
    x = _anchor_tuple(anchors)
    ell = len(x)
    if n <= ell:
        return 0j
    if math.comb(n, ell + 1) > budget:
        raise BudgetExceededError(
            f"C({n},{ell + 1}) = {math.comb(n, ell + 1)} exceeds budget {budget}"
        )
    z = complex(z)
    w = complex(w)
    xz = np.array((z,) + x, dtype=np.complex128)
    xw = np.array((w,) + x, dtype=np.complex128)
    xs = np.array(x, dtype=np.complex128)

    den_terms = []
    for idx in combinations(range(n), ell):
        lam = _index_partition(idx)
        s = _sp.schur_eval(lam, xs) if ell else 1.0 + 0j
        den_terms.append(abs(s) ** 2 * math.exp(-_log_index_factorial(idx)))
    den = math.fsum(den_terms)

    num_re, num_im = [], []
    for idx in combinations(range(n), ell + 1):
        lam = _index_partition(idx)
        sz = _sp.schur_eval(lam, xz)
        sw = _sp.schur_eval(lam, xw)
        t = sz * np.conj(sw) * math.exp(-_log_index_factorial(idx))
        num_re.append(t.real)
        num_im.append(t.imag)
    num = complex(math.fsum(num_re), math.fsum(num_im))

    qz = complex(np.prod(z - xs)) if ell else 1.0 + 0j
    qw = complex(np.prod(w - xs)) if ell else 1.0 + 0j
    return qz * np.conj(qw) * num / den


# -- partition functions ----------------------------------------------


def _gram_det_over_vandermonde(x: tuple, n: int | None) -> float:
    base = KernelSpec.infinite() if n is None else KernelSpec.truncated(n)
    gram = _gram_matrix(base, x)
    det = np.linalg.det(gram).real
    return float(det / abs(_sp.vandermonde(x)) ** 2)


def _gram_series(x: tuple, n: int | None, rtol: float = 1e-13,
                 weight_cap: int = 160, budget: int = 500_000) -> float:
    """Sum over index sets of |s_{I - delta}(x)|^2 / I!.

    n bounds the index range (None for unbounded).  Enumerates by weight
    shells; for unbounded range stops once two consecutive shells are
    negligible and decreasing.
    """
    ell = len(x)
    if ell == 0:
        return 1.0
    xs = np.asarray(x, dtype=np.complex128)
    part_max = None if n is None else n - ell
    if n is not None and math.comb(n, ell) > budget:
        raise BudgetExceededError(
            f"C({n},{ell}) = {math.comb(n, ell)} exceeds budget {budget}"
        )
    max_weight = weight_cap if n is None else ell * (n - ell)
    min_weight = int(2.0 * float(np.max(np.abs(xs))) ** 2) + 6 if n is None else max_weight
    total = 0.0
    prev_shell = math.inf
    for w in range(max_weight + 1):
        shell_terms = []
        for lam in _sp.partitions_of_weight(w, ell, part_max=part_max):
            padded = lam.padded(ell)
            idx = [padded[j] + ell - 1 - j for j in range(ell)]
            s = _sp.schur_eval(lam, xs)
            shell_terms.append(abs(s) ** 2 * math.exp(-_log_index_factorial(idx)))
        shell = math.fsum(shell_terms)
        total += shell
        if n is None and w >= min_weight:
            if shell < rtol * total and prev_shell < rtol * total and shell <= prev_shell:
                return total
        prev_shell = shell
    if n is None:
        raise ConvergenceFailureError(
            f"series for the normalizing constant did not settle by weight {weight_cap}"
        )
    return total


def z_of(anchors, rtol: float = 1e-13) -> float:
    """Normalizing constant of the conditioned ensemble at the anchor tuple.

    Determinant over squared Vandermonde for separated anchors, the
    everywhere-valid Schur expansion otherwise.  At the ell-fold origin the
    value is 1 over the product of the first ell - 1 factorials.
    """
    x = _anchor_tuple(anchors)
    if not x:
        return 1.0
    if _sp.is_separated(x):
        return _gram_det_over_vandermonde(x, None)
    return _gram_series(x, None, rtol=rtol)


def z_ratio(anchors_x, anchors_y, rtol: float = 1e-13) -> float:
    """Ratio of normalizing constants for two anchor tuples of equal length."""
    x = _anchor_tuple(anchors_x)
    y = _anchor_tuple(anchors_y)
    if len(x) != len(y):
        raise DimensionMismatchError(
            f"anchor tuples of different lengths ({len(x)} vs {len(y)}): "
            "the conditioned ensembles are mutually singular and no density exists"
        )
    return z_of(x, rtol=rtol) / z_of(y, rtol=rtol)


def partition_ratio_exact(n: int, anchors_x, anchors_y, budget: int = 500_000) -> float:
    """Exact finite-rank partition function ratio for two anchor tuples.

    Ratio of the conditioned normalizing constants when n points accompany
    the ell anchors, so the underlying truncation has rank ell + n.  Each
    side is a determinant over a squared Vandermonde, evaluated through the
    finite Schur expansion when its anchors nearly coincide.
    """
    x = _anchor_tuple(anchors_x)
    y = _anchor_tuple(anchors_y)
    if len(x) != len(y):
        raise DimensionMismatchError(
            f"anchor tuples of different lengths ({len(x)} vs {len(y)})"
        )
    if n < 1:
        raise ValueError("n must be positive")
    rank = len(x) + n

    def side(t: tuple) -> float:
        if not t:
            return 1.0
        if _sp.is_separated(t):
            return _gram_det_over_vandermonde(t, rank)
        return _gram_series(t, rank, budget=budget)

    return side(x) / side(y)


def correlation_det(spec: KernelSpec, points) -> float:
    """Determinant of the kernel matrix at the given points.

    This is the n-point correlation function against the reference measure
    of the chosen gauge; it is real and nonnegative up to roundoff.
    """
    pts = np.asarray(list(points), dtype=np.complex128)
    if pts.size == 0:
        return 1.0
    mat = evaluate(spec, pts[:, None], pts[None, :])
    mat = 0.5 * (mat + np.conj(mat.T))
    return float(np.linalg.det(mat).real)


# -- conditioned reproducing coefficients ------------------------------


def cramer_coeff(anchors, i: int) -> float:
    """Squared norm of the coefficient vector expressing the degree-i
    orthonormal monomial over the anchor interpolation basis.

    Closed form: 1 for i < ell; for i >= ell a finite sum of squared Schur
    polynomials at the anchors with hook-shaped partitions.
    """
    x = _anchor_tuple(anchors)
    ell = len(x)
    if i < 0:
        raise ValueError("i must be nonnegative")
    if ell == 0:
        raise ValueError("need at least one anchor")
    if i < ell:
        return 1.0
    xs = np.asarray(x, dtype=np.complex128)
    total = 0.0
    for p in range(ell):
        lam = Partition((i - ell + 1,) + (1,) * (ell - 1 - p))
        s = _sp.schur_eval(lam, xs)
        total += math.exp(gammaln(p + 1) - gammaln(i + 1)) * abs(s) ** 2
    return total


def cramer_coeff_components(anchors, i: int) -> np.ndarray:
    """The coefficient vector itself, in the basis ordered by decreasing
    anchor interpolation degree.  Component ell - p follows Cramer's rule."""
    x = _anchor_tuple(anchors)
    ell = len(x)
    if ell == 0:
        raise ValueError("need at least one anchor")
    xs = np.asarray(x, dtype=np.complex128)
    out = np.zeros(ell, dtype=np.complex128)
    for p in range(ell):
        if i < ell:
            out[ell - 1 - p] = 1.0 if i == p else 0.0
        else:
            lam = Partition((i - ell + 1,) + (1,) * (ell - 1 - p))
            s = _sp.schur_eval(lam, xs)
            sign = -1.0 if (ell - 1 - p) % 2 else 1.0
            out[ell - 1 - p] = sign * math.exp(0.5 * (gammaln(p + 1) - gammaln(i + 1))) * s
    return out


def palm_diff_bound_check(n, anchors, z, w):
    """Difference between the base kernel and its conditioning, with the
    uniform anchor-product bound it must respect.

    n is a positive truncation rank or None for the infinite kernel.
    Returns (diff, bound) with diff = |K(z,w) - K_x(z,w)| and
    bound = (ell-1)! exp(C(x) (|z| + |w|)), C(x) = prod (1 + |x_j|).
    """
    x = _anchor_tuple(anchors)
    ell = len(x)
    if n is not None and n <= ell:
        raise ValueError("need n > ell")
    base = KernelSpec.infinite() if n is None else KernelSpec.truncated(n)
    spec = KernelSpec.palm(base, x)
    z = complex(z)
    w = complex(w)
    diff = abs(evaluate(base, z, w) - evaluate(spec, z, w))
    cx = float(np.prod([1.0 + abs(a) for a in x])) if ell else 1.0
    lead = math.exp(gammaln(ell)) if ell >= 1 else 1.0
    bound = lead * math.exp(cx * (abs(z) + abs(w)))
    return diff, bound
