import math

import numpy as np
import pytest
from fractions import Fraction

from fractalext.measures import DiscreteMeasure
from fractalext.transform import (
    FrequencyGrid,
    atom_lp_norm,
    bspline_hatK,
    extension_transform,
    lq_freq_norm,
    multilinear_ratio,
)


def gauss_panels(f, a, b, panels, nodes=64):
    """Composite Gauss-Legendre quadrature oracle."""
    x, w = np.polynomial.legendre.leggauss(nodes)
    total = 0.0
    edges = np.linspace(a, b, panels + 1)
    for lo, hi in zip(edges, edges[1:]):
        u = 0.5 * (hi - lo) * x + 0.5 * (lo + hi)
        total += 0.5 * (hi - lo) * np.sum(w * f(u))
    return total


class TestExtensionTransform:
    def test_single_atom_constant(self):
        mu = DiscreteMeasure.point_mass(0, 1.0)
        for xi in (0.0, 0.37, -12.5):
            assert extension_transform(mu, None, xi) == pytest.approx(1.0 + 0.0j)

    def test_two_atoms_cancel_at_one(self):
        mu = DiscreteMeasure.atomic([(0, 0.5), ("1/2", 0.5)])
        val = extension_transform(mu, None, 1.0)
        assert abs(val) < 1e-15

    def test_unit_block_sinc_zero(self):
        mu = DiscreteMeasure.uniform_blocks(1)
        assert abs(extension_transform(mu, None, 1.0)) < 1e-15

    def test_value_at_zero_is_mass(self):
        mu = DiscreteMeasure.atomic([(0, 0.25), (1, 0.5), (2, 0.75)])
        assert extension_transform(mu, None, 0.0) == 1.5 + 0.0j

    def test_conjugate_symmetry(self):
        rng = np.random.default_rng(11)
        mu = DiscreteMeasure.atomic(
            [(Fraction(i, 7), w) for i, w in enumerate(rng.uniform(0, 1, 7))]
        )
        xs = rng.uniform(-20, 20, 32)
        plus = extension_transform(mu, None, xs)
        minus = extension_transform(mu, None, -xs)
        assert np.allclose(minus, np.conj(plus), rtol=0, atol=1e-12)

    def test_bounded_by_mass(self):
        mu = DiscreteMeasure.uniform_blocks(64)
        xs = np.linspace(-100, 100, 2001)
        assert np.all(np.abs(extension_transform(mu, None, xs)) <= 1.0 + 1e-12)

    def test_f_length_checked(self):
        mu = DiscreteMeasure.uniform_blocks(4)
        with pytest.raises(ValueError):
            extension_transform(mu, np.ones(3), 1.0)

    @pytest.mark.parametrize("xi", [0.3, 7.7, 480.0, 990.0])
    def test_block_closed_form_vs_quadrature(self, xi):
        # per-block integral oracle, enough panels for the oscillation count
        h = 1.0 / 8.0
        mu = DiscreteMeasure.block([(0, 0.25), ("1/2", 0.75)], "1/8")
        panels = max(4, int(math.ceil(h * xi)) * 2)
        expected = 0.0 + 0.0j
        for pos, w in zip(mu.positions_f64, mu.weights):
            re = gauss_panels(
                lambda x: np.cos(-2 * np.pi * x * xi), pos, pos + h, panels
            )
            im = gauss_panels(
                lambda x: np.sin(-2 * np.pi * x * xi), pos, pos + h, panels
            )
            expected += (w / h) * (re + 1j * im)
        got = extension_transform(mu, None, xi)
        assert abs(got - expected) < 1e-10


class TestFreqNorms:
    def test_constant_l2(self):
        grid = FrequencyGrid(R=1.0, step=0.01)
        vals = np.ones(len(grid.xs()))
        assert lq_freq_norm(vals, 2.0, grid) == pytest.approx(math.sqrt(2.0), abs=1e-6)

    def test_sup_norm_of_sinc(self):
        grid = FrequencyGrid(R=50.0, step=0.05)
        vals = np.abs(np.sinc(grid.xs()))
        assert lq_freq_norm(vals, math.inf, grid) == 1.0

    def test_sinc_squared_l1(self):
        grid = FrequencyGrid(R=100.0, step=0.02)
        vals = np.sinc(grid.xs()) ** 2
        assert lq_freq_norm(vals, 1.0, grid) == pytest.approx(1.0, rel=0.02)

    def test_q_below_one_rejected(self):
        grid = FrequencyGrid(R=1.0, step=0.1)
        with pytest.raises(ValueError):
            lq_freq_norm(np.ones(len(grid.xs())), 0.5, grid)


class TestMultilinearRatio:
    def test_single_probability_measure_sup(self):
        mu = DiscreteMeasure.uniform_blocks(16)
        grid = FrequencyGrid(R=4.0, step=1.0 / 16)
        ratio = multilinear_ratio([mu], [None], p=2.0, q=math.inf, grid=grid)
        assert ratio == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("q", [1.0, 2.0, 4.0])
    def test_two_unit_atoms(self, q):
        mu = DiscreteMeasure.point_mass(0, 1.0)
        grid = FrequencyGrid(R=1.0, step=0.01)
        ratio = multilinear_ratio([mu, mu], [None, None], p=2.0, q=q, grid=grid)
        assert ratio == pytest.approx(2.0 ** (1.0 / q), rel=1e-9)

    def test_vanishing_f_rejected(self):
        mu = DiscreteMeasure.uniform_blocks(4)
        grid = FrequencyGrid(R=1.0, step=1.0 / 16)
        with pytest.raises(ValueError):
            multilinear_ratio([mu], [np.zeros(4)], p=2.0, q=2.0, grid=grid)

    def test_nyquist_guard(self):
        mu = DiscreteMeasure.uniform_blocks(4)
        grid = FrequencyGrid(R=4.0, step=1.0)  # far too coarse for diam 2
        with pytest.raises(ValueError):
            multilinear_ratio([mu, mu], [None, None], p=2.0, q=2.0, grid=grid)

    def test_atom_lp_norms(self):
        mu = DiscreteMeasure.atomic([(0, 0.25), (1, 0.75)])
        f = np.array([2.0, 1.0])
        assert atom_lp_norm(mu, f, 2.0) == pytest.approx(math.sqrt(4 * 0.25 + 0.75))
        assert atom_lp_norm(mu, f, math.inf) == 2.0


class TestBSpline:
    def test_order_two_triangle(self):
        assert bspline_hatK(2, 0.0) == 1.0
        assert bspline_hatK(2, 0.5) == 0.5
        assert bspline_hatK(2, -0.5) == 0.5
        assert bspline_hatK(2, 1.0) == 0.0

    def test_order_four_center_vs_quadrature(self):
        # oracle: K-hat(0) = integral of sinc^4 over the line
        xs = np.arange(-400.0, 400.0, 0.01)
        oracle = float(np.trapezoid(np.sinc(xs) ** 4, dx=0.01))
        assert bspline_hatK(4, 0.0) == pytest.approx(2.0 / 3.0, abs=1e-12)
        assert bspline_hatK(4, 0.0) == pytest.approx(oracle, rel=1e-4)

    @pytest.mark.parametrize("n", [2, 4, 8, 12])
    def test_partition_of_unity(self, n):
        total = sum(bspline_hatK(n, float(j)) for j in range(-n // 2, n // 2 + 1))
        assert total == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("n", [2, 4, 6])
    @pytest.mark.parametrize("x", [0.25, 0.375, 0.8125])
    def test_partition_of_unity_shifted(self, n, x):
        # B-splines sum to 1 over every shifted integer lattice; each value
        # is exact rational, the float sum is correct to one ulp
        total = sum(bspline_hatK(n, x + j) for j in range(-n // 2 - 1, n // 2 + 1))
        assert total == pytest.approx(1.0, abs=1e-15)

    @pytest.mark.parametrize("n", [2, 4, 6, 10])
    def test_even_and_supported(self, n):
        for x in (0.3, 1.1, n / 2 - 0.25):
            assert bspline_hatK(n, x) == bspline_hatK(n, -x)
            assert bspline_hatK(n, x) >= 0.0
        assert bspline_hatK(n, n / 2) == 0.0
        assert bspline_hatK(n, n / 2 + 3.0) == 0.0

    def test_odd_order_rejected(self):
        for bad in (1, 3, 0, -2):
            with pytest.raises(ValueError):
                bspline_hatK(bad, 0.0)
