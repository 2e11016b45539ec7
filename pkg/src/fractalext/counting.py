"""Exact integer combinatorics behind the structured-input norm expansion.

Everything here is exact: sumset cardinalities by brute force, the
representation histogram g by iterated count-map convolution (Python
integers, so counts never overflow), the solution count as ||g||_2^2, and
its Cauchy-Schwarz lower bound ||g||_1^2 / |supp g| as a Fraction.
``norm_identity_check`` ties the combinatorics to quadrature: the 2r-th
power of the frequency norm of a product of progression-cylinder
transforms equals a B-spline-weighted sum over the autocorrelation of g.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import ResourceLimitError
from .knapp import KnappFamily, knapp_indicator
from .transform import FrequencyGrid, bspline_hatK, extension_transform

SUMSET_CAP = 10**8
HISTOGRAM_CAP = 10**9


def sumset_cardinality(aps: Sequence[Sequence[int]]) -> int:
    """Exact cardinality of the Minkowski sum of k integer sets.

    Brute force: all cross sums are materialized (progressively
    deduplicated); refuses when the product of sizes exceeds 1e8.
    """
    if not aps:
        raise ValueError("need at least one set")
    size = 1
    for ap in aps:
        size *= len(ap)
    if size > SUMSET_CAP:
        raise ResourceLimitError(f"{size} cross sums exceed the cap {SUMSET_CAP}")
    sums = np.zeros(1, dtype=np.int64)
    for ap in aps:
        arr = np.asarray(sorted(ap), dtype=np.int64)
        sums = np.unique(sums[:, None] + arr[None, :])
    return int(len(sums))


@dataclass(frozen=True)
class SumHistogram:
    """Counts g(z) of representations z = sum of r elements from each set."""

    entries: dict[int, int]
    r_fold: int
    source_sizes: tuple[int, ...]

    def l1(self) -> int:
        return sum(self.entries.values())

    def support_size(self) -> int:
        return len(self.entries)

    def check_mass(self) -> bool:
        """l1 invariant: sum g(z) == prod |A_m|^r, exactly."""
        expect = 1
        for s in self.source_sizes:
            expect *= s**self.r_fold
        return self.l1() == expect

    def autocorrelation(self, delta: int) -> int:
        """(g*g)(delta) = sum_z g(z) g(z + delta)."""
        if len(self.entries) == 0:
            return 0
        return sum(v * self.entries.get(z + delta, 0) for z, v in self.entries.items())


def _conv_counts(a: dict[int, int], b: Counter) -> dict[int, int]:
    out: dict[int, int] = {}
    for z, va in a.items():
        for x, vb in b.items():
            key = z + x
            out[key] = out.get(key, 0) + va * vb
    return out


def g_histogram(atom_sets: Sequence[Sequence[int]], r: int) -> SumHistogram:
    """Histogram of r-fold sums drawing r elements from every set.

    Built by r * k successive convolutions of the per-set count maps;
    tuples are never materialized.  Counts are Python integers, so there is
    no overflow to guard.
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    if not atom_sets:
        raise ValueError("need at least one atom set")
    mass = 1
    for s in atom_sets:
        if len(s) == 0:
            raise ValueError("atom sets must be nonempty")
        mass *= len(s) ** r
    if mass > HISTOGRAM_CAP:
        raise ResourceLimitError(f"l1 mass {mass} exceeds the cap {HISTOGRAM_CAP}")
    h: dict[int, int] = {0: 1}
    for s in atom_sets:
        cm = Counter(int(x) for x in s)
        for _ in range(r):
            h = _conv_counts(h, cm)
    return SumHistogram(h, r, tuple(len(s) for s in atom_sets))


def count_solutions(h: SumHistogram) -> int:
    """||g||_2^2: the number of 2r-index tuples whose first and second
    r-fold sums agree."""
    return sum(v * v for v in h.entries.values())


def cs_lower_bound(h: SumHistogram) -> Fraction:
    """Cauchy-Schwarz bound ||g||_1^2 / |supp g| <= count_solutions, exact."""
    l1 = h.l1()
    return Fraction(l1 * l1, h.support_size())


def _check_gamma_args(family: KnappFamily, ell: int, q: float, p: float, r: int):
    expected_r = family.r_coef
    if r != expected_r:
        raise ValueError(f"r must equal ceil(1/sum(beta)) = {expected_r}")
    if q > 2 * r:
        raise ValueError(f"the norm reduction requires q <= 2r = {2 * r}")
    if p < 1:
        raise ValueError("p must be >= 1")
    if not 0 <= ell < family.depth:
        raise ValueError("need 0 <= ell < family depth (psi(ell+1) is used)")


def gamma_bound(family: KnappFamily, ell: int, q: float, p: float, r: int) -> float:
    """Leading-order lower bound for the multilinear ratio at depth ell.

    Returns the reciprocal of the power skeleton
    Psi(ell)^(-1 + sum alpha - (1/2)(1 + q/p - q) sum beta) * psi(ell+1)^(sum alpha),
    the part of the bound that drives its divergence or decay in ell.  The
    value is meaningful modulo an absolute constant and slowly varying
    combinatorial prefactors; those are reported by
    :func:`gamma_bound_detail` together with the exact-integer form.
    """
    _check_gamma_args(family, ell, q, p, r)
    sum_a = sum(family.alphas)
    sum_b = sum(family.betas)
    expo = -1.0 + sum_a - 0.5 * (1.0 + q / p - q) * sum_b
    Psi_ell = float(family.Psi(ell)) if ell >= 1 else 1.0
    gamma = Psi_ell**expo * float(family.psi(ell + 1)) ** sum_a
    return 1.0 / gamma


def gamma_bound_detail(
    family: KnappFamily, ell: int, q: float, p: float, r: int
) -> dict:
    """Full decomposition of the depth-ell ratio lower bound.

    ``exact_inverse`` evaluates the complete expression with the family's
    realized t and tau: denominator
    Psi(ell)^-1 [ r^(k ell + 1) prod tau + r L ] prod (tau^(q/p-q) t^(q-q/p))
    with the lower-order term L expanded exactly as
    prod (r(tau - 1) + 1) - r^(k ell) prod tau over all (level, coordinate)
    pairs up to ell.
    """
    _check_gamma_args(family, ell, q, p, r)
    k = family.k
    prod_tau = 1
    prod_shift = 1  # prod of (r (tau - 1) + 1)
    weight = 1.0  # prod of tau^(q/p - q) * t^(q - q/p)
    for lp in family.levels[:ell]:
        for m in range(k):
            prod_tau *= lp.tau[m]
            prod_shift *= r * (lp.tau[m] - 1) + 1
            weight *= lp.tau[m] ** (q / p - q) * lp.t[m] ** (q - q / p)
    lower_order = prod_shift - r ** (k * ell) * prod_tau
    Psi_ell = family.Psi(ell) if ell >= 1 else 1
    main = r ** (k * ell + 1) * prod_tau
    exact_gamma = (main + r * lower_order) * weight / Psi_ell
    sum_a = sum(family.alphas)
    log_factor = math.log(8.0 * family.Psi(ell + 1)) ** k
    return {
        "leading_inverse": gamma_bound(family, ell, q, p, r),
        "exact_inverse": 1.0 / exact_gamma,
        "main_term": main,
        "lower_order": lower_order,
        "weight": weight,
        "r_power": r ** (k * ell + 1),
        "log_factor": log_factor,
        "psi_next_power": float(family.psi(ell + 1)) ** sum_a,
    }


def divergence_threshold_q(family: KnappFamily, p: float) -> float:
    """q below which the depth trend of the ratio bound diverges:
    q = (2p(1 - sum alpha) + p sum beta) / ((p-1) sum beta)."""
    sum_a, sum_b = sum(family.alphas), sum(family.betas)
    if p <= 1 or sum_b <= 0:
        return math.inf
    return (2.0 * p * (1.0 - sum_a) + p * sum_b) / ((p - 1.0) * sum_b)


def norm_identity_check(
    family: KnappFamily,
    ell: int,
    level: int | None = None,
    r: int = 1,
    grid: FrequencyGrid | None = None,
) -> dict:
    """Cross-check quadrature against the exact combinatorial expansion.

    LHS: trapezoid quadrature of prod_m |(f_{ell,m} dmu_m)^|^(2r) over the
    grid.  RHS: (prod_m 1/(t_1...t_N))^(2r) * Psi(N) * sum over integer
    shifts of (g*g)(delta) * hatK(delta) with hatK the order-2kr B-spline,
    whose support |delta| < kr makes the sum finite.  The identity is exact;
    the returned relative error is pure quadrature truncation.
    """
    level = family.depth if level is None else level
    if not 1 <= ell <= level:
        raise ValueError("need 1 <= ell <= level")
    if r < 1:
        raise ValueError("r must be >= 1")
    Ps = family.Psi(level)
    if Ps > 10**3:
        raise ValueError("identity check restricted to Psi(level) <= 1e3")
    k = family.k
    if grid is None:
        # the integrand decays like |xi|^(-2kr); 50 resolutions of tail keep
        # the truncation error well under a percent even at k = r = 1
        grid = FrequencyGrid(R=50.0 * Ps, step=1.0 / 64.0)
    if grid.step > 1.0 / (4.0 * k):
        raise ValueError("grid step violates the quadrature guard 1/(4k)")

    xs = grid.xs()
    prod = np.ones(len(xs), dtype=np.complex128)
    atom_sets = []
    weight_scale = 1.0
    for m in range(k):
        mu = family.measure(m, level)
        f = knapp_indicator(family, ell, m, level)
        prod *= extension_transform(mu, f, xs)
        nums = family.atom_numerators(m, level)
        atom_sets.append([a for a, fa in zip(nums, f) if fa > 0])
        weight_scale /= float(family.t_product(m, level)) ** (2 * r)
    lhs = float(np.trapezoid(np.abs(prod) ** (2 * r), dx=grid.step))

    h = g_histogram(atom_sets, r)
    order = 2 * k * r
    half = k * r
    acc = 0.0
    for delta in range(-half + 1, half):
        c = h.autocorrelation(delta)
        if c:
            acc += c * bspline_hatK(order, float(delta))
    rhs = weight_scale * Ps * acc
    rel = abs(lhs - rhs) / rhs if rhs != 0 else math.inf
    return {"lhs": lhs, "rhs": rhs, "rel_error": rel, "R": grid.R, "step": grid.step}
