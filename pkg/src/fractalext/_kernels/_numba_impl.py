"""numba-jitted kernels. Parallel over output elements only; each element is
a sequential sum, so values do not depend on the thread count."""

import math

import numpy as np
from numba import njit, prange

_TWO_PI = 2.0 * math.pi


@njit(cache=True, parallel=True)
def nudft(positions, weights, xis):
    n = positions.shape[0]
    out = np.empty(xis.shape[0], dtype=np.complex128)
    for j in prange(xis.shape[0]):
        c = -_TWO_PI * xis[j]
        acc_re = 0.0
        acc_im = 0.0
        for i in range(n):
            ang = c * positions[i]
            acc_re += weights[i] * math.cos(ang)
            acc_im += weights[i] * math.sin(ang)
        out[j] = complex(acc_re, acc_im)
    return out


@njit(cache=True, parallel=True)
def pair_energy(positions, weights, s):
    n = positions.shape[0]
    row = np.zeros(n, dtype=np.float64)
    for i in prange(n):
        acc = 0.0
        for j in range(n):
            if j != i:
                acc += weights[j] * abs(positions[i] - positions[j]) ** (-s)
        row[i] = weights[i] * acc
    return float(np.sum(row))
