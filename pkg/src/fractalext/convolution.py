"""Grid convolution of measures, density norms, and the exponent algebra
``p0 = q(p-1)/(q(p-1)-p)`` together with its numerical verification harness."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ResourceLimitError
from .measures import DiscreteMeasure
from .dimensions import lq_dimension_homogeneous
from .transform import FrequencyGrid, atom_lp_norm, lq_freq_norm

DEFAULT_BIN_CAP = 10**9


@dataclass(frozen=True)
class DensityEstimate:
    """Piecewise-constant density on a uniform grid.

    ``values[i]`` is the density (mass per unit length) on
    ``[start + i*cell_width, start + (i+1)*cell_width)``.
    """

    start: float
    cell_width: float
    values: np.ndarray

    def __post_init__(self):
        if self.cell_width <= 0:
            raise ValueError("cell_width must be positive")
        v = np.asarray(self.values, dtype=np.float64)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def integral(self) -> float:
        return float(np.sum(self.values)) * self.cell_width

    def centers(self) -> np.ndarray:
        n = len(self.values)
        return self.start + (np.arange(n) + 0.5) * self.cell_width


def _bin_measure(measure: DiscreteMeasure, h: float) -> tuple[float, np.ndarray]:
    """Mass-preserving nearest-cell binning at cell width h.

    Returns the grid origin and the per-cell mass sequence.  Block atoms
    are assigned by their centers, atomic ones by their positions.
    """
    centers = measure.centers_f64()
    origin = float(measure.support_min)
    idx = np.floor((centers - origin) / h).astype(np.int64)
    n = int(idx.max()) + 1
    masses = np.zeros(n)
    np.add.at(masses, idx, measure.weights)
    return origin, masses


def _conv_sequences(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n = len(a) + len(b) - 1
    if n <= 4096:
        return np.convolve(a, b)
    size = 1 << (n - 1).bit_length()
    fa = np.fft.rfft(a, size)
    fb = np.fft.rfft(b, size)
    out = np.fft.irfft(fa * fb, size)[:n]
    return np.maximum(out, 0.0)


def convolve_grid(
    measures: Sequence[DiscreteMeasure], cells: int, bin_cap: int = DEFAULT_BIN_CAP
) -> DensityEstimate:
    """Convolve k >= 2 measures on a common grid covering the sum of supports.

    Each measure is binned (mass-preserving) at the common cell width, the
    mass sequences are convolved, and a single division by the cell width
    turns the resulting per-cell masses into a density, which keeps
    ``integral() == prod(total masses)`` for every k.
    """
    if len(measures) < 2:
        raise ValueError("need at least two measures")
    if cells < 16:
        raise ValueError("cells must be >= 16")
    extent = sum(m.diameter for m in measures)
    if extent <= 0:
        extent = 1.0  # purely atomic degenerate case: arbitrary unit window
    h = extent / cells
    if sum(len(m.positions) for m in measures) * cells > bin_cap:
        raise ResourceLimitError("atom-count x cell-count exceeds the bin cap")
    origin_total = 0.0
    seq = None
    for m in measures:
        origin, masses = _bin_measure(m, h)
        origin_total += origin
        seq = masses if seq is None else _conv_sequences(seq, masses)
    return DensityEstimate(origin_total, h, seq / h)


def density_lp_norm(d: DensityEstimate, p: float) -> float:
    """(sum values^p * cell_width)^(1/p); p = inf gives the max value."""
    if math.isinf(p):
        return float(np.max(d.values))
    if p < 1:
        raise ValueError("p must be >= 1 or infinity")
    return float(np.sum(d.values**p) * d.cell_width) ** (1.0 / p)


def convolution_exponent(p: float, q: float) -> float | None:
    """The Lebesgue exponent p0 = q(p-1)/(q(p-1)-p) of the transfer bound.

    Returns +inf when q(p-1) == p (the L^infinity-density endpoint) and
    None when q(p-1) < p, where the hypothesis is not an L^p0 condition.
    """
    if p < 1 or q < 2:
        raise ValueError("need p >= 1 and q >= 2")
    a = q * (p - 1.0)
    if abs(a - p) <= 1e-12 * max(a, p):
        return math.inf
    if a < p:
        return None
    return a / (a - p)


def transfer_boundary_q(p: float, p0_available: float) -> float:
    """Least q >= 2 whose exponent p0(p, q) is <= the available p0."""
    if p <= 1:
        return math.inf
    if p0_available <= 1:
        return math.inf
    if math.isinf(p0_available):
        return max(2.0, p / (p - 1.0))
    return max(2.0, p * p0_available / ((p - 1.0) * (p0_available - 1.0)))


def verify_transfer_bound(
    measure_levels: Sequence[Sequence[DiscreteMeasure]],
    p: float,
    q: float,
    trials: int = 64,
    seed: int = 0,
    grid: FrequencyGrid | None = None,
    conv_cells: Sequence[int] | None = None,
) -> dict:
    """Numerically probe the convolution-to-extension transfer at (p, q).

    ``measure_levels`` lists the same k measures at two or more refinement
    levels, coarse first.  The check has two parts:

    1. hypothesis: the L^p0 norm of the grid convolution is stable under
       refinement (consecutive levels differ by < 10%);
    2. probes: per level, the maximum multilinear ratio over ``trials``
       random per-atom inputs (i.i.d. uniform on [0,1], seeded per trial);
       the max at the finest level must exceed the coarsest by < 25%.

    Returns the report dict with verdict PASS / hypothesis-fail /
    ratio-growth-fail.
    """
    if len(measure_levels) < 2:
        raise ValueError("need measures at >= 2 refinement levels")
    p0 = convolution_exponent(p, q)
    if p0 is None:
        raise ValueError("q(p-1) < p: transfer hypothesis undefined at these exponents")
    k = len(measure_levels[0])
    if any(len(level) != k for level in measure_levels):
        raise ValueError("every level must supply the same number of measures")

    if conv_cells is None:
        conv_cells = [
            max(64, 1 << int(np.ceil(np.log2(max(len(m.positions) for m in level)))))
            for level in measure_levels
        ]
    norms = []
    for level, cells in zip(measure_levels, conv_cells):
        dens = convolve_grid(level, cells)
        norms.append(density_lp_norm(dens, p0))
    stable = all(
        abs(b - a) < 0.10 * abs(a) for a, b in zip(norms, norms[1:]) if a > 0
    ) and all(n > 0 for n in norms)

    if grid is None:
        diam = sum(m.diameter for m in measure_levels[0])
        step = 1.0 / (4.0 * diam) if diam > 0 else 0.01
        grid = FrequencyGrid(R=32.0, step=step)
    xs = grid.xs()
    max_ratios = []
    for level in measure_levels:
        transforms = []
        block_factors = []
        for m in level:
            phases = np.exp(np.outer(xs, m.positions_f64) * (-2j * np.pi))
            transforms.append(phases)
            if m.kind == "block":
                h = float(m.block_width)
                block_factors.append(np.exp(-1j * math.pi * h * xs) * np.sinc(h * xs))
            else:
                block_factors.append(np.ones(len(xs)))
        best = 0.0
        for t in range(trials):
            rng = np.random.default_rng(seed + t)
            prod = np.ones(len(xs), dtype=np.complex128)
            denom = 1.0
            for m, phases, bf in zip(level, transforms, block_factors):
                f = rng.uniform(0.0, 1.0, len(m.positions))
                prod = prod * (phases @ (f * m.weights)) * bf
                denom *= atom_lp_norm(m, f, p)
            best = max(best, lq_freq_norm(np.abs(prod), q, grid) / denom)
        max_ratios.append(best)

    growth = max_ratios[-1] / max_ratios[0] - 1.0 if max_ratios[0] > 0 else math.inf
    if not stable:
        verdict = "hypothesis-fail"
    elif growth >= 0.25:
        verdict = "ratio-growth-fail"
    else:
        verdict = "PASS"
    return {
        "hypothesis": {"p0": p0, "norms": norms, "stable": stable},
        "trials": {"max_ratio_by_level": max_ratios, "growth": growth},
        "verdict": verdict,
    }


def check_transfer_hypotheses(kind: str, params: dict) -> dict:
    """Evaluate the dimension-side hypotheses that feed the transfer bound.

    kinds:
      * ``fourier_gap``:     d - D_{p0}(mu) < dim_F nu for a measure pair;
      * ``self_similar_pair``: two homogeneous SSC systems; checks the
        dimension gate log m1/|log l1| + log m2/|log l2| > 1 and
        D_{p0}(mu1) + D_{p0}(mu2) > 1.  The irrationality of
        log|l2|/log|l1| cannot be decided numerically and is flagged.
      * ``quarter_third``:   the concrete 3-map ratio-1/4 and 2-map
        ratio-1/3 pair; condition D_{p0}(mu1) + D_{p0}(mu2) > 1 expressed
        through the closed forms.

    Returns {"ok": bool, "margin": float, "flags": {...}, "values": {...}}.
    """
    flags: dict = {}
    values: dict = {}
    if kind == "fourier_gap":
        d = params.get("d", 1.0)
        if "lq_dim" in params:
            dim_mu = params["lq_dim"]
        else:
            dim_mu = lq_dimension_homogeneous(
                params["probs"], params["ratio"], params["p0"]
            )
        margin = params["fourier_dim_nu"] - (d - dim_mu)
        values = {"lq_dim_mu": dim_mu, "fourier_dim_nu": params["fourier_dim_nu"]}
    elif kind == "self_similar_pair":
        m1, l1 = params["m1"], abs(params["lambda1"])
        m2, l2 = params["m2"], abs(params["lambda2"])
        gate = math.log(m1) / abs(math.log(l1)) + math.log(m2) / abs(math.log(l2))
        d1 = lq_dimension_homogeneous(params["probs1"], l1, params["p0"])
        d2 = lq_dimension_homogeneous(params["probs2"], l2, params["p0"])
        margin = min(gate - 1.0, d1 + d2 - 1.0)
        flags["log_ratio_irrationality_assumed"] = True
        values = {"dimension_gate": gate, "lq_dims": (d1, d2)}
    elif kind == "quarter_third":
        rho = params["rho"]
        gamma = params["gamma"]
        p0 = params["p0"]
        d1 = lq_dimension_homogeneous(rho, 0.25, p0)
        d2 = lq_dimension_homogeneous([gamma, 1.0 - gamma], 1.0 / 3.0, p0)
        margin = d1 + d2 - 1.0
        values = {"lq_dims": (d1, d2)}
    else:
        raise ValueError(f"unknown hypothesis kind {kind!r}")
    return {"ok": margin > 0, "margin": margin, "flags": flags, "values": values}
