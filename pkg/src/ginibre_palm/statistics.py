"""Linear statistics, the averaged disk-count functional, and variance
identities used to detect the number of conditioned points."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import gammaln, logsumexp

from .core import Configuration, RadialConfiguration, theta
from .kernel import KernelSpec, evaluate
from .quadrature import QuadratureSpec, laguerre_half_rule, laguerre_rule, legendre_window_rule

MOMENT_NODES = 256
WINDOW_NODES = 96


@dataclass(frozen=True)
class EstimatorResult:
    """Summary of one Monte Carlo estimate."""

    mean: float
    variance: float
    std_error: float
    n_samples: int
    seed: int


def estimate(values, seed: int = 0) -> EstimatorResult:
    """Two-pass mean and unbiased variance with exactly rounded accumulation.

    Deterministic for any ordering of the same values except for the mean
    division, which is order independent anyway because math.fsum is exact.
    """
    vals = [float(v) for v in values]
    n = len(vals)
    if n < 2:
        raise ValueError("need at least 2 samples")
    mean = math.fsum(vals) / n
    var = math.fsum((v - mean) ** 2 for v in vals) / (n - 1)
    return EstimatorResult(
        mean=mean,
        variance=var,
        std_error=math.sqrt(var / n),
        n_samples=n,
        seed=int(seed),
    )


def f_T(radial: RadialConfiguration, T: float) -> float:
    """Time-averaged centered counting functional of a radial configuration.

    Equals the average over r in [0, T] of (number of values <= r) - r,
    computed in closed form as sum of max(1 - y/T, 0) minus T/2.  The
    configuration must contain every value up to T.
    """
    if T <= 0:
        raise ValueError("T must be positive")
    vals = radial.values
    inside = vals[vals <= T]
    return math.fsum(1.0 - y / T for y in inside) - 0.5 * T


def F_T(config: Configuration, T: float) -> float:
    """The same functional on a planar configuration via squared moduli."""
    return f_T(theta(config), T)


def ell_detector(samples, T: float, seed: int = 0):
    """Estimate how many points the sampled ensemble was conditioned on.

    samples is a sequence of RadialConfiguration draws.  The mean of the
    statistic concentrates near minus the number of conditioned points, so
    the detected count is round(-mean) clamped to be nonnegative.
    Returns (ell_hat, EstimatorResult).
    """
    values = [f_T(s, T) for s in samples]
    est = estimate(values, seed=seed)
    ell_hat = max(0, round(-est.mean))
    return ell_hat, est


# -- radial profiles and moments --------------------------------------


@dataclass(frozen=True)
class RadialProfile:
    """Nonnegative bounded radial test profile h(rho).

    rho_max = None means unbounded support; bounded profiles are integrated
    on their window with a Legendre rule, unbounded ones with (generalized)
    Laguerre rules.  sup is the known sup-norm, used only in bounds.
    """

    fn: Callable
    rho_min: float = 0.0
    rho_max: float | None = None
    sup: float = 1.0

    @classmethod
    def one(cls) -> "RadialProfile":
        return cls(fn=lambda rho: np.ones_like(np.asarray(rho, dtype=float)), sup=1.0)

    @classmethod
    def indicator(cls, rho_lo: float, rho_hi: float) -> "RadialProfile":
        def fn(rho):
            rho = np.asarray(rho, dtype=float)
            return ((rho > rho_lo) & (rho <= rho_hi)).astype(float)

        return cls(fn=fn, rho_min=rho_lo, rho_max=rho_hi, sup=1.0)

    def squared(self) -> "RadialProfile":
        return RadialProfile(
            fn=lambda rho: np.asarray(self.fn(rho)) ** 2,
            rho_min=self.rho_min,
            rho_max=self.rho_max,
            sup=self.sup**2,
        )


def radial_log_moment(profile: RadialProfile, s: float, nodes: int = MOMENT_NODES) -> float:
    """log of integral h(sqrt t) t^s e^{-t} dt over the profile support.

    s may be integer or half integer.  Everything runs in the log domain so
    that large orders neither overflow nor lose the cancellation structure
    of the identities built on these moments.
    """
    half = abs(2 * s - round(2 * s)) < 1e-12 and (round(2 * s) % 2 == 1)
    if profile.rho_max is None:
        if half:
            t, w = laguerre_half_rule(nodes)
            power = s - 0.5
        else:
            t, w = laguerre_rule(nodes)
            power = s
        h = np.asarray(profile.fn(np.sqrt(t)), dtype=float)
        if np.any(h < 0):
            raise ValueError("unbounded profiles must be nonnegative")
        mask = (h > 0) & (w > 0)
        if not np.any(mask):
            return -math.inf
        return float(
            logsumexp(np.log(w[mask]) + np.log(h[mask]) + power * np.log(t[mask]))
        )
    t_lo = profile.rho_min**2
    t_hi = profile.rho_max**2
    t, w = legendre_window_rule(WINDOW_NODES, t_lo, t_hi)
    h = np.asarray(profile.fn(np.sqrt(t)), dtype=float)
    if np.any(h < 0):
        raise ValueError("profiles must be nonnegative")
    mask = h > 0
    if not np.any(mask):
        return -math.inf
    # Gauss nodes are interior so log(t) is finite even when t_lo is 0
    return float(
        logsumexp(np.log(w[mask]) + np.log(h[mask]) + s * np.log(t[mask]) - t[mask])
    )


def radial_moment(profile: RadialProfile, s: float, nodes: int = MOMENT_NODES) -> float:
    return math.exp(radial_log_moment(profile, s, nodes=nodes))


# -- variance of linear statistics ------------------------------------


def variance_linear_statistic(spec: KernelSpec, g, quad: QuadratureSpec):
    """Variance of the linear statistic sum g(s_i) under the given kernel.

    Returns the pair (var0, var_repro): the direct two-term form, and the
    half-squared-difference form that is equivalent whenever the kernel
    reproduces itself against the reference measure.  g maps complex arrays
    to complex arrays; it should be supported inside the quadrature window.
    """
    z, v = quad.planar()
    gz = np.asarray(g(z), dtype=np.complex128)
    kdiag = np.real(evaluate(spec, z, z))

    support = np.abs(gz) > 0
    zs = z[support]
    gs = gz[support]
    vs = v[support]

    first = float(np.sum(vs * np.abs(gs) ** 2 * kdiag[support]))

    ksup = evaluate(spec, zs[:, None], z[None, :])
    k2 = np.abs(ksup) ** 2
    k2_ss = k2[:, support]

    pair = float(np.real(np.sum((vs * gs)[:, None] * np.conj(vs * gs)[None, :] * k2_ss)))
    var0 = first - pair

    # half |g(z)-g(w)|^2 |K|^2 over all pairs; pairs with both ends outside
    # the support vanish, pairs with one end outside contribute |g|^2 |K|^2
    diff2 = np.abs(gs[:, None] - gz[None, :]) ** 2
    var_repro = 0.5 * float(np.sum(vs[:, None] * v[None, :] * diff2 * k2))
    outside = ~support
    if np.any(outside):
        # the symmetric copies (z outside, w inside) double the one-sided sum
        var_repro += 0.5 * float(
            np.sum(vs[:, None] * v[outside][None, :] * np.abs(gs[:, None]) ** 2 * k2[:, outside])
        )
    return var0, var_repro


# -- variance monotonicity defect -------------------------------------


def i_n_p(n: int, p: int, profile: RadialProfile, nodes: int = MOMENT_NODES):
    """Exact defect in variance additivity across the rank-n split.

    For the twisted statistic built from h and winding number p, the
    variance under the rank n truncation plus the variance under the
    complementary conditioned ensemble exceeds the full-ensemble variance
    by a finite sum of |p| cross moments.  Returns (value, bound) with
    bound = |p| sup(h)^2; value <= bound always.
    """
    if n < 1:
        raise ValueError("n must be positive")
    ap = abs(int(p))
    terms = []
    for k in range(max(0, n - ap), n):
        lm = radial_log_moment(profile, k + 0.5 * ap, nodes=nodes)
        terms.append(math.exp(2.0 * lm - gammaln(k + 1) - gammaln(k + ap + 1)))
    value = math.fsum(terms)
    bound = ap * profile.sup**2
    return value, bound


def _variance_radial(index_set, p: int, profile: RadialProfile, nodes: int) -> float:
    """Variance of the twisted linear statistic for a kernel carrying the
    given set of radial indices, reduced to one-dimensional moments."""
    ap = abs(int(p))
    sq = profile.squared()
    idx = sorted(index_set)
    first = math.fsum(
        math.exp(radial_log_moment(sq, k, nodes=nodes) - gammaln(k + 1)) for k in idx
    )
    members = set(idx)
    cross = math.fsum(
        math.exp(
            2.0 * radial_log_moment(profile, k + 0.5 * ap, nodes=nodes)
            - gammaln(k + 1)
            - gammaln(k + ap + 1)
        )
        for k in idx
        if (k + ap) in members
    )
    return first - cross


def i_n_p_direct(n: int, p: int, profile: RadialProfile, nodes: int = MOMENT_NODES,
                 horizon_extra: int = 48) -> float:
    """The same defect assembled from three variances.

    Variances for the truncation, the conditioned remainder, and the full
    ensemble are each computed by the radial reduction, with the two
    infinite index ranges sharing one finite horizon; contributions beyond
    it cancel exactly between the pieces.
    """
    if n < 1:
        raise ValueError("n must be positive")
    ap = abs(int(p))
    horizon = n + horizon_extra + ap
    v_trunc = _variance_radial(range(n), p, profile, nodes)
    v_rest = _variance_radial(range(n, horizon + 1), p, profile, nodes)
    v_full = _variance_radial(range(horizon + 1), p, profile, nodes)
    return v_trunc + v_rest - v_full


# -- tail statistics ---------------------------------------------------


def tail_statistic_F(config: Configuration, alpha: int, r: float) -> complex:
    """Sum of (ceil|s|/s)^alpha over points with 1 < |s| <= r."""
    pts = config.points
    mod = np.abs(pts)
    sel = (mod > 1.0) & (mod <= r)
    if not np.any(sel):
        return 0j
    terms = (np.ceil(mod[sel]) / pts[sel]) ** alpha
    return complex(math.fsum(terms.real), math.fsum(terms.imag))


def tail_statistic_G(config: Configuration, alpha: int, r: float, R: float) -> complex:
    """Sum of s^(-alpha) over points with r < |s| <= R."""
    pts = config.points
    mod = np.abs(pts)
    sel = (mod > r) & (mod <= R)
    if not np.any(sel):
        return 0j
    terms = pts[sel] ** (-float(alpha))
    return complex(math.fsum(terms.real), math.fsum(terms.imag))
