"""Compiled inner loop of the sequential projection sampler.

Kept in lockstep with the pure-numpy twin in _proj_numpy: any change to
the order of generator calls here must be mirrored there, or fixed seeds
stop agreeing across the two paths.
"""

import numpy as np
from numba import njit


@njit(cache=True, fastmath=True)
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
            for i in range(1, n):
                v[i] = v[i - 1] * z * inv_sqrt[i - 1]
            knn = 0.0
            for i in range(n):
                knn += v[i].real * v[i].real + v[i].imag * v[i].imag
            proj = 0.0
            for r in range(k):
                ar = 0.0
                ai = 0.0
                for i in range(n):
                    er = E[r, i].real
                    ei = E[r, i].imag
                    vr = v[i].real
                    vi = v[i].imag
                    ar += er * vr + ei * vi
                    ai += er * vi - ei * vr
                proj += ar * ar + ai * ai
            ratio = (knn - proj) / knn
            if gen.random() < ratio:
                out[j] = z
                for _sweep in range(2):
                    for r in range(k):
                        acc = 0.0 + 0.0j
                        for i in range(n):
                            acc += np.conj(E[r, i]) * v[i]
                        for i in range(n):
                            v[i] -= acc * E[r, i]
                nrm = 0.0
                for i in range(n):
                    nrm += v[i].real * v[i].real + v[i].imag * v[i].imag
                nrm = np.sqrt(nrm)
                for i in range(n):
                    E[k, i] = v[i] / nrm
                k += 1
                accepted = True
                break
        if not accepted:
            return out[:j]
    return out
