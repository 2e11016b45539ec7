"""Pure-numpy kernel fallbacks. Chunked so the phase matrix stays ~32 MB."""

import numpy as np

_CHUNK_ENTRIES = 2_000_000


def nudft(positions, weights, xis):
    n = max(len(positions), 1)
    out = np.empty(len(xis), dtype=np.complex128)
    step = max(1, _CHUNK_ENTRIES // n)
    for j0 in range(0, len(xis), step):
        chunk = xis[j0 : j0 + step]
        phases = np.exp(np.outer(chunk, positions) * (-2j * np.pi))
        out[j0 : j0 + step] = phases @ weights
    return out


def pair_energy(positions, weights, s):
    n = len(positions)
    total = 0.0
    step = max(1, _CHUNK_ENTRIES // n)
    for i0 in range(0, n, step):
        d = np.abs(positions[i0 : i0 + step, None] - positions[None, :])
        mask = d == 0.0
        d[mask] = 1.0
        inv = d ** (-s)
        inv[mask] = 0.0
        total += float(weights[i0 : i0 + step] @ inv @ weights)
    return total
