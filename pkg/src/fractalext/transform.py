"""Fourier extension transforms of discrete measures and frequency-side norms.

The transform of a weighted measure is ``sum_a f(a) w_a exp(-2 pi i a xi)``;
block atoms contribute the exact closed-form factor
``exp(-i pi h xi) * sinc(h xi)`` with ``sinc(x) = sin(pi x)/(pi x)``, so the
transform of the unit indicator of ``[0,1)`` is exactly ``sinc``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels
from .measures import DiscreteMeasure


@dataclass(frozen=True)
class FrequencyGrid:
    """Symmetric grid covering [-R, R] with uniform step."""

    R: float
    step: float

    def __post_init__(self):
        if self.R <= 0 or self.step <= 0:
            raise ValueError("R and step must be positive")

    @property
    def n_half(self) -> int:
        return int(math.ceil(self.R / self.step - 1e-12))

    def xs(self) -> np.ndarray:
        n = self.n_half
        return np.arange(-n, n + 1, dtype=np.float64) * self.step

    def nyquist_ok(self, diameter: float) -> bool:
        """Quadrature guard: step <= 1/(4 * diameter of the support)."""
        if diameter <= 0:
            return True
        return self.step <= 1.0 / (4.0 * diameter) + 1e-15


def extension_transform(
    measure: DiscreteMeasure,
    f: np.ndarray | None,
    xi: float | np.ndarray,
):
    """Evaluate the extension transform of ``f dmu`` at one or many frequencies.

    ``f`` holds one real value per atom (``None`` means f == 1).  Returns a
    complex scalar for scalar ``xi``, else a complex array. Exact at xi = 0.
    """
    scalar = np.isscalar(xi)
    xs = np.atleast_1d(np.asarray(xi, dtype=np.float64))
    if f is None:
        fw = np.asarray(measure.weights, dtype=np.float64)
    else:
        f = np.asarray(f, dtype=np.float64)
        if f.shape != (len(measure.positions),):
            raise ValueError("f must supply exactly one value per atom")
        fw = f * measure.weights
    out = _kernels.nudft(measure.positions_f64, fw, xs)
    if measure.kind == "block":
        h = float(measure.block_width)
        out = out * np.exp(-1j * math.pi * h * xs) * np.sinc(h * xs)
    return complex(out[0]) if scalar else out


def lq_freq_norm(values: np.ndarray, q: float, grid: FrequencyGrid) -> float:
    """L^q norm of sampled |values| over [-R, R] by trapezoid quadrature.

    q = inf returns the max sample.
    """
    v = np.abs(np.asarray(values, dtype=np.float64))
    if math.isinf(q):
        return float(np.max(v))
    if q < 1:
        raise ValueError("q must be >= 1 or infinity")
    integrand = v**q
    total = float(np.trapezoid(integrand, dx=grid.step))
    return total ** (1.0 / q)


def atom_lp_norm(measure: DiscreteMeasure, f: np.ndarray | None, p: float) -> float:
    """||f||_{L^p(mu)} = (sum |f(a)|^p w_a)^{1/p}; p = inf is the sup over atoms."""
    if f is None:
        f = np.ones(len(measure.positions))
    f = np.abs(np.asarray(f, dtype=np.float64))
    if math.isinf(p):
        return float(np.max(f[measure.weights > 0], initial=0.0))
    if p < 1:
        raise ValueError("p must be >= 1 or infinity")
    return float(np.sum(f**p * measure.weights)) ** (1.0 / p)


def multilinear_ratio(
    measures: list[DiscreteMeasure],
    fs: list[np.ndarray | None],
    p: float,
    q: float,
    grid: FrequencyGrid,
) -> float:
    """Ratio ||prod_m (f_m dmu_m)^||_{L^q(grid)} / prod_m ||f_m||_{L^p(mu_m)}."""
    if len(measures) < 1 or len(fs) != len(measures):
        raise ValueError("need one f per measure")
    total_diam = sum(m.diameter for m in measures)
    if not grid.nyquist_ok(total_diam):
        raise ValueError(
            f"grid step {grid.step} violates the quadrature guard "
            f"1/(4*{total_diam}) for these supports"
        )
    xs = grid.xs()
    prod = np.ones(len(xs), dtype=np.complex128)
    denom = 1.0
    for mu, f in zip(measures, fs):
        prod *= extension_transform(mu, f, xs)
        nf = atom_lp_norm(mu, f, p)
        if nf == 0.0:
            raise ValueError("an input function vanishes mu-a.e.")
        denom *= nf
    return lq_freq_norm(np.abs(prod), q, grid) / denom


def bspline_hatK(n: int, x: float) -> float:
    """Centered cardinal B-spline of order n (the Fourier transform of sinc^n).

    Equals the n-fold autoconvolution of the indicator of [-1/2, 1/2]:
    supported on (-n/2, n/2), even, nonnegative, and summing to 1 over the
    integers.  Evaluated by the alternating-sum closed form in exact
    rational arithmetic (the argument is taken at its exact binary value),
    so the partition-of-unity identity holds to the last bit.
    """
    if n < 2 or n % 2:
        raise ValueError("order n must be a positive even integer >= 2")
    t = Fraction(x) + Fraction(n, 2)
    if t <= 0 or t >= n:
        return 0.0
    acc = Fraction(0)
    for j in range(int(t) + 1):
        term = math.comb(n, j) * (t - j) ** (n - 1)
        acc += -term if j % 2 else term
    return float(acc / math.factorial(n - 1))
