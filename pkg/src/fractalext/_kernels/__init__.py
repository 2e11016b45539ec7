"""Hot numeric kernels with a numba fast path and a pure-numpy fallback.

The backend is chosen once at import time from the environment variable
``FRACTALEXT_KERNELS``:

* ``auto`` (default) -- use numba if it imports, else fall back to numpy;
* ``numba``          -- require the numba path, raise if unavailable;
* ``numpy``          -- force the pure-numpy path.

Both backends expose the same functions and agree to ~1e-12:

* ``nudft(positions, weights, xis)``   -- sum_a w_a exp(-2 pi i a xi)
* ``pair_energy(positions, weights, s)`` -- sum_{i != j} w_i w_j |x_i - x_j|^-s

Each output element is accumulated by a single sequential loop, so results
are bit-for-bit reproducible regardless of thread count.
"""

import os

_REQUESTED = os.environ.get("FRACTALEXT_KERNELS", "auto").lower()
if _REQUESTED not in ("auto", "numba", "numpy"):
    raise ValueError(
        f"FRACTALEXT_KERNELS must be 'auto', 'numba' or 'numpy', got {_REQUESTED!r}"
    )

if _REQUESTED in ("auto", "numba"):
    try:
        from ._numba_impl import nudft, pair_energy

        BACKEND = "numba"
    except ImportError:
        if _REQUESTED == "numba":
            raise
        from ._numpy_impl import nudft, pair_energy

        BACKEND = "numpy"
else:
    from ._numpy_impl import nudft, pair_energy

    BACKEND = "numpy"


def backend_name() -> str:
    """Name of the kernel backend selected at import time."""
    return BACKEND


__all__ = ["nudft", "pair_energy", "backend_name", "BACKEND"]
