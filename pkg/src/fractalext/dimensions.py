"""Dimension quantities of discrete measures.

Closed-form L^q dimensions for homogeneous self-similar measures,
pair-sum s-energies, ball-mass exponent fits, box-counting statistics,
and Fourier-decay envelope fits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import _kernels
from .measures import DiscreteMeasure, as_rational
from .transform import extension_transform


def lq_dimension_homogeneous(
    probs: Sequence[float], ratio: float, q: float
) -> float:
    """L^q dimension of a homogeneous separated self-similar measure.

    For contraction ratio lam in (0,1) and probability vector (p_i):
    q != 1 gives log(sum p_i^q) / ((q-1) log lam); q = 1 gives the entropy
    formula (sum p_i log p_i) / log lam.  Separation is the caller's
    responsibility (pair with measures.check_separation).
    """
    if q < 0:
        raise ValueError("q must be >= 0")
    lam = float(ratio)
    if not 0 < lam < 1:
        raise ValueError("ratio must lie in (0,1)")
    ps = np.asarray([float(p) for p in probs], dtype=np.float64)
    if np.any(ps < 0) or abs(float(np.sum(ps)) - 1.0) > 1e-12:
        raise ValueError("probs must be a probability vector")
    log_lam = math.log(lam)
    if q == 1:
        mask = ps > 0
        return float(np.sum(ps[mask] * np.log(ps[mask]))) / log_lam
    s = float(np.sum(ps[ps > 0] ** q))
    return math.log(s) / ((q - 1.0) * log_lam)


def energy_integral(measure: DiscreteMeasure, s: float) -> float:
    """s-energy pair sum: sum over ordered pairs i != j of w_i w_j |x_i - x_j|^-s.

    Block atoms are replaced by their centers.  The diagonal is excluded;
    coincident positions cannot occur (measure positions are strictly
    increasing by construction).
    """
    if not 0 < s < 1:
        raise ValueError("s must lie in (0,1)")
    if len(measure.positions) < 2:
        raise ValueError("energy needs at least two atoms")
    pos = measure.centers_f64()
    w = np.asarray(measure.weights, dtype=np.float64)
    return float(_kernels.pair_energy(pos, w, float(s)))


def frostman_fit(
    measure: DiscreteMeasure, scales: Sequence[float]
) -> tuple[float, float]:
    """Ball-mass exponent fits over atom centers.

    Balls are sampled at every atom center; at each radius the sup and inf
    of mu(B(x,r)) over the centers are taken, and each envelope gets one
    least-squares fit of log mass against log radius.  The sup-envelope
    slope (returned first) is the best exponent for an upper ball bound
    mu(B) <~ r^a, the inf-envelope slope the best for the lower bound; the
    envelope fits absorb the bounds' constants, so upper <= lower.
    """
    r = np.asarray(list(scales), dtype=np.float64)
    if len(r) == 0:
        raise ValueError("scales must be nonempty")
    if np.any(r <= 0):
        raise ValueError("scales must be positive")
    if np.any(np.diff(r) >= 0):
        raise ValueError("scales must be strictly descending")
    centers = measure.centers_f64()
    masses = np.stack([measure.ball_masses(float(x), r) for x in centers])
    sup_env = np.max(masses, axis=0)
    inf_env = np.min(masses, axis=0)
    if len(r) == 1:
        return (
            math.log(sup_env[0]) / math.log(r[0]),
            math.log(inf_env[0]) / math.log(r[0]),
        )
    log_r = np.log(r)
    upper = float(np.polyfit(log_r, np.log(sup_env), 1)[0])
    lower = float(np.polyfit(log_r, np.log(inf_env), 1)[0])
    # fit noise can swap the envelope slopes by a hair; keep the pair ordered
    return min(upper, lower), max(upper, lower)


def box_counts(
    measure: DiscreteMeasure, deltas: Sequence
) -> list[tuple[Fraction, int]]:
    """Number of delta-mesh cells [j*delta, (j+1)*delta) meeting the support.

    Mesh sizes are taken at their exact rational values, so triadic counts
    come out exact when deltas are passed as Fractions or strings.
    """
    out = []
    for d in deltas:
        delta = as_rational(d) if isinstance(d, (Fraction, int, str)) else Fraction(d)
        if delta <= 0:
            raise ValueError("mesh sizes must be positive")
        if measure.kind == "atomic":
            cells = {p // delta for p in measure.positions}
            out.append((delta, len(cells)))
            continue
        w = measure.block_width
        intervals = []
        for p in measure.positions:
            first = p // delta
            end = p + w
            last = -((-end) // delta) - 1  # largest j with j*delta < end
            intervals.append((first, last))
        intervals.sort()
        count, cur_lo, cur_hi = 0, None, None
        for lo, hi in intervals:
            if cur_hi is None or lo > cur_hi + 1:
                if cur_hi is not None:
                    count += cur_hi - cur_lo + 1
                cur_lo, cur_hi = lo, hi
            else:
                cur_hi = max(cur_hi, hi)
        count += cur_hi - cur_lo + 1
        out.append((delta, count))
    return out


@dataclass(frozen=True)
class DecayFit:
    """Fitted Fourier-decay envelope |mu^(xi)| ~ C |xi|^-exponent."""

    exponent: float
    constant: float
    sup_product: float  # max over samples of |xi|^exponent * |mu^(xi)|
    freq_range: tuple[float, float]

    def __post_init__(self):
        if self.exponent < 0 or self.sup_product < 0 or self.freq_range[0] < 1:
            raise ValueError("invalid decay fit")


def decay_samples(
    measure: DiscreteMeasure, xi_min: float, xi_max: float, samples: int
) -> tuple[np.ndarray, np.ndarray]:
    """Log-uniform frequency samples and |mu^| values on them."""
    xs = np.geomspace(xi_min, xi_max, samples)
    vals = np.abs(extension_transform(measure, None, xs))
    return xs, vals


def fourier_decay_fit(
    measure: DiscreteMeasure,
    xi_min: float = 1.0,
    xi_max: float = 1e3,
    samples: int = 2000,
) -> DecayFit:
    """Fit the decay exponent of |mu^| on [xi_min, xi_max].

    |mu^| oscillates, so the fit uses the upper envelope of window maxima
    (samples/20 windows) in log-log coordinates; the exponent is clamped at
    zero since |mu^| is bounded by the total mass.
    """
    if not (xi_max > xi_min >= 1):
        raise ValueError("need xi_max > xi_min >= 1")
    if samples < 100:
        raise ValueError("need at least 100 samples")
    xs, vals = decay_samples(measure, xi_min, xi_max, samples)
    n_windows = max(2, samples // 20)
    idx = np.array_split(np.arange(samples), n_windows)
    env_x = np.array([xs[i[np.argmax(vals[i])]] for i in idx])
    env_v = np.array([np.max(vals[i]) for i in idx])
    pos = env_v > 0
    slope, intercept = np.polyfit(np.log(env_x[pos]), np.log(env_v[pos]), 1)
    exponent = max(0.0, -float(slope))
    constant = float(math.exp(intercept))
    sup_product = float(np.max(vals * xs**exponent))
    return DecayFit(exponent, constant, sup_product, (float(xi_min), float(xi_max)))


def sup_decay_product(
    measure: DiscreteMeasure,
    exponent: float,
    xi_min: float = 1.0,
    xi_max: float = 1e3,
    samples: int = 512,
) -> float:
    """sup over sampled xi of |xi|^exponent |mu^(xi)| at a fixed exponent."""
    xs, vals = decay_samples(measure, xi_min, xi_max, samples)
    return float(np.max(vals * xs**exponent))


def frequency_energy(
    measure: DiscreteMeasure, s: float, R: float, step: float
) -> float:
    """Frequency-side energy quadrature int_{1<=|xi|<=R} |mu^|^2 |xi|^{s-1} dxi."""
    xs = np.arange(1.0, R, step)
    vals = np.abs(extension_transform(measure, None, xs)) ** 2 * xs ** (s - 1.0)
    return 2.0 * float(np.trapezoid(vals, dx=step))
