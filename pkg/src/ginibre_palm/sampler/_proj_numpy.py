"""Pure-numpy twin of the compiled sampler loop.

Draws from the generator in exactly the same order as _proj_numba.core,
so a fixed seed produces the same configuration on either path.
"""

import numpy as np


def core(E, k0, n_add, inv_sqrt, gen, budget):
    n = E.shape[1]
    out = np.empty(n_add, dtype=np.complex128)
    v = np.empty(n, dtype=np.complex128)
    k = k0
    for j in range(n_add):
        accepted = False
        for _trial in range(budget):
            m = int(gen.random() * n)
            if m == n:
                m = n - 1
            t = gen.standard_gamma(m + 1.0)
            th = 2.0 * np.pi * gen.random()
            z = np.sqrt(t) * complex(np.cos(th), np.sin(th))
            v[0] = 1.0
            v[1:] = np.cumprod(z * inv_sqrt[: n - 1])
            knn = float(np.vdot(v, v).real)
            if k:
                coef = np.conj(E[:k]) @ v
                proj = float(np.vdot(coef, coef).real)
            else:
                proj = 0.0
            ratio = (knn - proj) / knn
            if gen.random() < ratio:
                out[j] = z
                for _sweep in range(2):
                    for r in range(k):
                        v -= np.vdot(E[r], v) * E[r]
                E[k] = v / np.sqrt(float(np.vdot(v, v).real))
                k += 1
                accepted = True
                break
        if not accepted:
            return out[:j]
    return out
