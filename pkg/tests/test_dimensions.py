import math

import pytest
from fractions import Fraction

from hypothesis import given, settings, strategies as st

from fractalext.dimensions import (
    box_counts,
    energy_integral,
    fourier_decay_fit,
    frequency_energy,
    frostman_fit,
    lq_dimension_homogeneous,
)
from fractalext.measures import DiscreteMeasure, SimilarityIFS, build_self_similar
from fractalext.transform import extension_transform

MT = SimilarityIFS.create([("1/3", "0"), ("1/3", "2/3")])
LOG23 = math.log(2) / math.log(3)


class TestLqDimension:
    def test_middle_third_correlation(self):
        assert lq_dimension_homogeneous([0.5, 0.5], 1 / 3, 2.0) == pytest.approx(
            LOG23, abs=1e-14
        )

    def test_entropy_matches_for_uniform_probs(self):
        assert lq_dimension_homogeneous([0.5, 0.5], 1 / 3, 1.0) == pytest.approx(
            LOG23, abs=1e-14
        )

    def test_quarter_system(self):
        got = lq_dimension_homogeneous([0.1, 0.65, 0.25], 0.25, 2.0)
        want = math.log(0.1**2 + 0.65**2 + 0.25**2) / (-math.log(4.0))
        assert got == pytest.approx(want, abs=1e-14)
        assert got == pytest.approx(0.50724, abs=1e-4)

    def test_negative_q_rejected(self):
        with pytest.raises(ValueError):
            lq_dimension_homogeneous([0.5, 0.5], 1 / 3, -1.0)

    @given(
        p1=st.floats(0.05, 0.95),
        lam_den=st.integers(2, 9),
    )
    @settings(max_examples=50, deadline=None)
    def test_non_increasing_in_q(self, p1, lam_den):
        probs = [p1, 1.0 - p1]
        lam = 1.0 / lam_den
        grid = [0.0, 0.5, 1.0, 2.0, 4.0, 64.0]
        dims = [lq_dimension_homogeneous(probs, lam, q) for q in grid]
        assert all(b <= a + 1e-9 for a, b in zip(dims, dims[1:]))


class TestEnergy:
    def test_two_atoms(self):
        mu = DiscreteMeasure.atomic([(0, 0.5), (1, 0.5)])
        assert energy_integral(mu, 0.5) == pytest.approx(0.5, abs=1e-14)

    def test_convergent_exponent_trend(self):
        # oracle-computed growth at depth 6 -> 8 is 18.4% for s = 0.5 < D2
        e6 = energy_integral(build_self_similar(MT, 6), 0.5)
        e8 = energy_integral(build_self_similar(MT, 8), 0.5)
        growth = e8 / e6 - 1.0
        assert 0.0 < growth <= 0.20

    def test_divergent_exponent_trend(self):
        # s = 0.7 > D2: depth 8 exceeds depth 6 by at least 20%
        e6 = energy_integral(build_self_similar(MT, 6), 0.7)
        e8 = energy_integral(build_self_similar(MT, 8), 0.7)
        assert e8 / e6 - 1.0 >= 0.20

    def test_block_measure_uses_centers(self):
        blocks = DiscreteMeasure.block([(0, 0.5), ("1/2", 0.5)], "1/4")
        atoms = DiscreteMeasure.atomic([("1/8", 0.5), ("5/8", 0.5)])
        assert energy_integral(blocks, 0.3) == pytest.approx(
            energy_integral(atoms, 0.3), abs=1e-14
        )

    def test_bad_arguments(self):
        mu = DiscreteMeasure.atomic([(0, 0.5), (1, 0.5)])
        with pytest.raises(ValueError):
            energy_integral(mu, 1.2)
        with pytest.raises(ValueError):
            energy_integral(DiscreteMeasure.point_mass(), 0.5)

    def test_parseval_cross_check(self):
        # pair-sum and frequency-side energies stay at the same constant
        # level: ratio changes by < 50% between depths 6 and 8
        ratios = []
        for n in (6, 8):
            mu = build_self_similar(MT, n)
            ie = energy_integral(mu, 0.5)
            fe = frequency_energy(mu, 0.5, R=4.0 * 3**n, step=0.25)
            ratios.append(ie / fe)
        assert abs(ratios[1] / ratios[0] - 1.0) < 0.5


class TestFrostman:
    def test_uniform_blocks(self):
        mu = DiscreteMeasure.uniform_blocks(1024)
        lo, hi = frostman_fit(mu, [2.0**-j for j in range(2, 9)])
        assert lo == pytest.approx(1.0, abs=0.05)
        assert hi == pytest.approx(1.0, abs=0.05)

    def test_single_atom(self):
        lo, hi = frostman_fit(DiscreteMeasure.point_mass(), [0.25, 0.125])
        assert lo == 0.0 and hi == 0.0

    def test_middle_third(self):
        mu = build_self_similar(MT, 10)
        lo, hi = frostman_fit(mu, [3.0**-j for j in range(2, 9)])
        assert lo == pytest.approx(LOG23, abs=0.05)
        assert hi == pytest.approx(LOG23, abs=0.05)
        assert lo <= hi

    def test_scale_validation(self):
        mu = DiscreteMeasure.uniform_blocks(8)
        with pytest.raises(ValueError):
            frostman_fit(mu, [])
        with pytest.raises(ValueError):
            frostman_fit(mu, [0.1, 0.2])

    def test_exponents_in_unit_range(self):
        mu = build_self_similar(MT, 8)
        lo, hi = frostman_fit(mu, [2.0**-j for j in range(2, 8)])
        assert 0.0 <= lo <= hi <= 1.0 + 1e-9


class TestBoxCounts:
    def test_unit_interval(self):
        mu = DiscreteMeasure.uniform_blocks(16)
        [(d, n)] = box_counts(mu, [Fraction(1, 4)])
        assert n == 4

    def test_middle_third_level_three(self):
        # depth-4 endpoints carrying width 3^-4 blocks, counted at mesh 3^-3
        ends = build_self_similar(MT, 4)
        mu = DiscreteMeasure.block(
            [(p, w) for p, w in zip(ends.positions, ends.weights)], Fraction(1, 81)
        )
        [(d, n)] = box_counts(mu, [Fraction(1, 27)])
        assert n == 8

    def test_single_atom(self):
        for d in (Fraction(1, 3), Fraction(1, 100), Fraction(2)):
            [(_, n)] = box_counts(DiscreteMeasure.point_mass("1/7"), [d])
            assert n == 1

    def test_monotone_and_capped(self):
        mu = build_self_similar(MT, 6)
        deltas = [Fraction(1, 3**j) for j in range(1, 7)]
        counts = box_counts(mu, deltas)
        ns = [n for _, n in counts]
        assert all(a <= b for a, b in zip(ns, ns[1:]))  # finer mesh, more cells
        for d, n in counts:
            assert n <= math.ceil(1.0 / float(d)) + 1


class TestDecayFit:
    def test_uniform_interval(self):
        mu = DiscreteMeasure.uniform_blocks(64)
        fit = fourier_decay_fit(mu, 1.0, 1e3, 2000)
        assert fit.exponent == pytest.approx(1.0, abs=0.1)

    def test_single_atom(self):
        fit = fourier_decay_fit(DiscreteMeasure.point_mass(0, 1.0), 1.0, 1e3, 500)
        assert fit.exponent == pytest.approx(0.0, abs=1e-9)
        assert fit.sup_product == pytest.approx(1.0, abs=1e-12)

    def test_middle_third_no_polynomial_decay(self):
        mu = build_self_similar(MT, 12)
        # sharp oracle: |mu^| does not vanish along the 3^k frequencies
        vals = [abs(extension_transform(mu, None, float(3**k))) for k in range(11)]
        assert min(vals) > 0.35
        # the fitted envelope exponent stays far below the uniform measure's
        fit = fourier_decay_fit(mu, 1.0, 3.0**10, 4096)
        assert fit.exponent < 0.3

    def test_argument_validation(self):
        mu = DiscreteMeasure.uniform_blocks(4)
        with pytest.raises(ValueError):
            fourier_decay_fit(mu, 0.5, 100.0, 500)
        with pytest.raises(ValueError):
            fourier_decay_fit(mu, 1.0, 100.0, 50)
