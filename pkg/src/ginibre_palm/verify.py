"""Self-contained identity suite: every block recomputes one exact
relation along two independent routes and reports the worst error.

Blocks call library functions through their module namespaces on purpose,
so a perturbed build (or a monkeypatched function in tests) is caught
rather than silently compared against itself.
"""

from __future__ import annotations

import math

import numpy as np

from . import kernel, schur, statistics
from .kernel import KernelSpec
from .quadrature import QuadratureSpec
from .statistics import RadialProfile

BLOCK_NAMES = (
    "decomposition",
    "palm_schur",
    "cramer",
    "generating",
    "in_p",
    "variance",
)


def _block(name, tolerance, errors):
    worst = max(errors) if errors else 0.0
    return {
        "name": name,
        "passed": bool(worst <= tolerance),
        "max_error": float(worst),
        "tolerance": float(tolerance),
        "cases": len(errors),
    }


def _grid_points():
    axis = (-2.1, 0.0, 2.1)
    return [complex(a, b) for a in axis for b in axis]


def check_decomposition() -> dict:
    """Full kernel equals truncation plus origin-conditioned tail, and the
    small-ell origin kernels match their closed forms."""
    pts = _grid_points()
    full = KernelSpec.infinite()
    errors = []
    for n in (1, 5, 20):
        trunc = KernelSpec.truncated(n)
        tail = KernelSpec.origin_palm(n)
        for z in pts:
            for w in pts:
                k = kernel.evaluate(full, z, w)
                split = kernel.evaluate(trunc, z, w) + kernel.evaluate(tail, z, w)
                errors.append(abs(k - split) / (1.0 + abs(k)))
    for z in pts:
        for w in pts:
            u = z * np.conj(w)
            one = kernel.evaluate(KernelSpec.origin_palm(1), z, w)
            two = kernel.evaluate(KernelSpec.origin_palm(2), z, w)
            errors.append(abs(one - (np.exp(u) - 1.0)) / (1.0 + abs(one)))
            errors.append(abs(two - (np.exp(u) - 1.0 - u)) / (1.0 + abs(two)))
    return _block("decomposition", 1e-12, errors)


def _random_separated(rng, ell, radius=1.5):
    while True:
        x = tuple(
            complex(a, b)
            for a, b in zip(rng.uniform(-radius, radius, ell), rng.uniform(-radius, radius, ell))
        )
        if schur.is_separated(x):
            return x


def check_palm_schur() -> dict:
    """Schur-complement and Schur-expansion forms of the conditioned
    truncated kernel agree on random anchor sets."""
    rng = np.random.default_rng(1105)
    z, w = 1.7 - 0.4j, -1.2 + 0.9j
    errors = []
    for case in range(50):
        ell = case % 3 + 1
        n = 4 + case % 9
        if n <= ell:
            n = ell + 1
        x = _random_separated(rng, ell)
        det_form = kernel.palm_kernel_det(KernelSpec.truncated(n), x, z, w)
        schur_form = kernel.palm_kernel_schur(n, x, z, w)
        errors.append(abs(det_form - schur_form) / (1.0 + abs(det_form)))
    return _block("palm_schur", 1e-10, errors)


def check_cramer() -> dict:
    """Closed-form interpolation coefficients against a direct linear solve
    of the anchor interpolation system."""
    rng = np.random.default_rng(554)
    errors = []
    for case in range(100):
        ell = case % 4 + 1
        i = (3 * case + 2) % 13
        x = _random_separated(rng, ell)
        closed = kernel.cramer_coeff(x, i)
        if i < ell:
            errors.append(abs(closed - 1.0))
            continue
        xs = np.asarray(x, dtype=np.complex128)
        ks = np.arange(ell)
        sqrt_fact = np.sqrt([float(math.factorial(int(k))) for k in ks])
        vmat = xs[:, None] ** ks[None, :] / sqrt_fact[None, :]
        rhs = xs**i / math.sqrt(math.factorial(i))
        coeffs = np.linalg.solve(vmat, rhs)
        solved = float(np.sum(np.abs(coeffs) ** 2))
        errors.append(abs(closed - solved) / (1.0 + abs(closed)))
    return _block("cramer", 1e-10, errors)


def check_generating() -> dict:
    """Box expansion of powers of the anchor product polynomial against
    direct evaluation, plus the squared Schur sum bound."""
    rng = np.random.default_rng(77)
    errors = []
    for case in range(60):
        ell = case % 3 + 1
        i = 1 + case % max(1, 8 // ell)
        x = tuple(
            complex(a, b)
            for a, b in zip(rng.uniform(-0.7, 0.7, ell), rng.uniform(-0.7, 0.7, ell))
        )
        t = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        errors.append(schur.generating_identity_residual(x, i, t=t))
        lhs, rhs = schur.schur_sum_bound(x, i)
        errors.append(max(0.0, lhs - rhs))
    return _block("generating", 1e-10, errors)


def check_in_p() -> dict:
    """Windowed-sum and three-variance forms of the variance defect agree,
    and the defect never exceeds its uniform bound."""
    profiles = [RadialProfile.one(), RadialProfile.indicator(1.0, 2.0)]
    errors = []
    for profile in profiles:
        for n in (1, 2, 5, 10, 20):
            for p in (0, 1, -1, 2, 4):
                sum_form, bound = statistics.i_n_p(n, p, profile)
                direct = statistics.i_n_p_direct(n, p, profile)
                errors.append(abs(sum_form - direct) / (1e-3 + abs(sum_form)))
                errors.append(max(0.0, sum_form - bound) / (1e-3 + bound))
    return _block("in_p", 1e-6, errors)


def check_variance() -> dict:
    """Two-term and half-squared-difference variance forms agree for the
    reproducing truncated kernel; a constant statistic has no variance."""
    spec = KernelSpec.truncated(12)
    quad = QuadratureSpec()
    errors = []

    def disk(z):
        return (np.abs(z) <= 1.5).astype(np.complex128)

    var0, var_repro = statistics.variance_linear_statistic(spec, disk, quad)
    errors.append(abs(var0 - var_repro) / (1e-3 + abs(var0)))

    def const(z):
        return np.full(np.shape(z), 0.7 + 0.0j)

    _, vr_const = statistics.variance_linear_statistic(spec, const, quad)
    errors.append(abs(vr_const))
    return _block("variance", 1e-6, errors)


_CHECKS = {
    "decomposition": check_decomposition,
    "palm_schur": check_palm_schur,
    "cramer": check_cramer,
    "generating": check_generating,
    "in_p": check_in_p,
    "variance": check_variance,
}


def run_verify(only=None) -> dict:
    """Run the identity blocks (all, or the named one) and collect a report."""
    if only is not None and only not in _CHECKS:
        raise ValueError(f"unknown block {only!r}; choose from {', '.join(BLOCK_NAMES)}")
    names = (only,) if only else BLOCK_NAMES
    blocks = [_CHECKS[name]() for name in names]
    return {"passed": all(b["passed"] for b in blocks), "blocks": blocks}
