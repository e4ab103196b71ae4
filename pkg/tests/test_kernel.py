import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.polynomial import Polynomial

from siml.errors import ArgumentError
from siml.kernel import (
    basis_matrix,
    cell_integrals,
    cos_basis_weight,
    cos_product_integral,
    diagonal_integral,
    dirichlet_half,
    kernel_closed_form,
    kernel_direct_sum,
    kernel_sampled,
    l2_profile,
)
from siml.sampling import make_uniform_grid, sampling_map

finite_x = st.floats(-50, 50, allow_nan=False)
orders = st.integers(1, 512)


class TestBasisWeight:
    def test_single_interval_weight_is_one(self):
        assert cos_basis_weight(1, 1, 1) == pytest.approx(1.0, abs=1e-15)

    def test_matches_high_precision_oracle(self):
        # mpmath, 40 digits: sqrt(0.8) cos(pi/10) and sqrt(0.8) cos(9 pi/10)
        assert cos_basis_weight(2, 1, 1) == pytest.approx(0.8506508083520399, abs=1e-15)
        assert cos_basis_weight(2, 2, 2) == pytest.approx(-0.8506508083520399, abs=1e-15)

    @pytest.mark.parametrize("k,l", [(0, 1), (1, 0), (3, 1), (1, 3), (1.5, 1)])
    def test_out_of_range_index(self, k, l):
        with pytest.raises(ArgumentError):
            cos_basis_weight(2, k, l)

    def test_matrix_agrees_with_scalar(self):
        P = basis_matrix(7, 4)
        assert P.shape == (4, 7)
        for l in range(1, 5):
            for k in range(1, 8):
                assert P[l - 1, k - 1] == pytest.approx(cos_basis_weight(7, k, l), abs=1e-15)

    def test_rows_orthonormal(self):
        P = basis_matrix(50, 50)
        assert np.max(np.abs(P @ P.T - np.eye(50))) < 1e-12


class TestHalfKernel:
    def test_value_at_zero(self, backend):
        for m in (1, 2, 17, 512):
            assert dirichlet_half(0.0, m) == 1.0

    def test_first_order_is_cosine(self, backend):
        assert dirichlet_half(0.5, 1) == pytest.approx(0.7071067811865476, abs=1e-15)

    def test_zero_at_one(self, backend):
        for m in (1, 3, 8, 100):
            assert abs(dirichlet_half(1.0, m)) < 1e-15

    def test_high_precision_points(self, backend):
        # mpmath oracle at 40 digits
        assert dirichlet_half(0.37, 7) == pytest.approx(0.12493543778359875, abs=1e-14)
        assert dirichlet_half(1.3, 4) == pytest.approx(-0.08246085134279686, abs=1e-14)
        assert dirichlet_half(-2.6, 9) == pytest.approx(0.06530947247694146, abs=1e-14)

    def test_near_singularity_is_continuous(self, backend):
        for m in (3, 64):
            for x0 in (0.0, 2.0, -4.0):
                for eps in (1e-7, 1e-9, 1e-12):
                    assert dirichlet_half(x0 + eps, m) == pytest.approx(dirichlet_half(x0, m), abs=1e-9)

    def test_array_shape_kept(self, backend):
        x = np.linspace(-1, 1, 12).reshape(3, 4)
        assert dirichlet_half(x, 5).shape == (3, 4)

    def test_rejects_bad_order(self):
        for m in (0, -1, 2.5):
            with pytest.raises(ArgumentError):
                dirichlet_half(0.3, m)

    @settings(max_examples=300, deadline=None)
    @given(finite_x, orders)
    def test_antiperiodic(self, x, m):
        assert dirichlet_half(x + 2.0, m) == pytest.approx(-dirichlet_half(x, m), abs=1e-12)

    @settings(max_examples=300, deadline=None)
    @given(finite_x, orders)
    def test_even(self, x, m):
        assert dirichlet_half(-x, m) == dirichlet_half(x, m)

    @settings(max_examples=300, deadline=None)
    @given(st.floats(1e-9, 1.0), orders)
    def test_pointwise_bound(self, x, m):
        assert abs(dirichlet_half(x, m)) <= min(1.0, 1.0 / (2 * m * x)) * (1 + 1e-12)


class TestTwoArgumentKernel:
    def test_origin(self, backend):
        for m in (1, 9):
            assert kernel_direct_sum(0.0, 0.0, m) == pytest.approx(2.0, abs=1e-15)
            assert kernel_closed_form(0.0, 0.0, m) == 2.0

    def test_corner(self, backend):
        assert abs(kernel_direct_sum(1.0, 1.0, 1)) < 1e-15
        assert abs(kernel_closed_form(1.0, 1.0, 3)) < 1e-15

    def test_diagonal_examples(self, backend):
        assert kernel_closed_form(0.25, 0.25, 2) == pytest.approx(1.0, abs=1e-15)

    def test_forms_agree_at_reference_point(self, backend):
        # mpmath oracle: both half-kernels vanish here
        assert abs(kernel_direct_sum(0.3, 0.7, 5)) < 1e-14
        assert kernel_closed_form(0.3, 0.7, 5) == pytest.approx(kernel_direct_sum(0.3, 0.7, 5), abs=1e-12)

    def test_identity_random(self, backend, rng):
        u, s = rng.uniform(-2, 2, (2, 5000))
        m = rng.integers(1, 513, 5000)
        assert np.max(np.abs(kernel_direct_sum(u, s, m) - kernel_closed_form(u, s, m))) < 1e-10

    @settings(max_examples=300, deadline=None)
    @given(finite_x, finite_x, orders)
    def test_symmetric_exactly(self, u, s, m):
        assert kernel_closed_form(u, s, m) == kernel_closed_form(s, u, m)

    @settings(max_examples=200, deadline=None)
    @given(st.floats(0, 1), orders)
    def test_diagonal_formula(self, s, m):
        assert kernel_closed_form(s, s, m) == pytest.approx(1.0 + dirichlet_half(2 * s, m), abs=1e-12)

    @settings(max_examples=200, deadline=None)
    @given(st.floats(-2, 2), st.floats(-2, 2), orders)
    def test_bounded_by_two(self, u, s, m):
        assert abs(kernel_closed_form(u, s, m)) <= 2.0 + 1e-12

    def test_l2_profile_is_diagonal(self):
        s = np.linspace(0, 1, 33)
        assert np.allclose(l2_profile(s, 12), kernel_closed_form(s, s, 12), atol=1e-14)


class TestSampledKernel:
    def test_ksss_kronecker_cells(self):
        smap = sampling_map(make_uniform_grid(5), "ksss")
        assert kernel_sampled(0.1, 0.05, 11, smap, smap) == pytest.approx(1.0, abs=1e-12)
        assert abs(kernel_sampled(0.1, 0.3, 11, smap, smap)) < 1e-12

    def test_fine_map_at_origin(self):
        smap = sampling_map(make_uniform_grid(1000), "left")
        assert kernel_sampled(0.0, 0.0, 7, smap, smap) == 2.0

    def test_outside_unit_interval(self):
        smap = sampling_map(make_uniform_grid(4), "left")
        with pytest.raises(ArgumentError):
            kernel_sampled(1.2, 0.1, 3, smap, smap)


class TestIntegrals:
    def test_orthogonality(self):
        worst = max(
            abs(cos_product_integral(l, lp) - (0.5 if l == lp else 0.0))
            for l in range(1, 65)
            for lp in range(1, 65)
        )
        assert worst < 1e-12

    def test_partial_interval(self):
        # int_0^{1/2} cos^2(pi s / 2) ds = 1/4 + 1/(2 pi)
        assert cos_product_integral(1, 1, 0.0, 0.5) == pytest.approx(0.25 + 0.5 / math.pi, abs=1e-15)

    def test_cell_integrals_kinds(self):
        edges = np.array([0.0, 0.25, 1.0])
        assert np.allclose(cell_integrals(None, edges), [0.25, 0.75])
        assert np.allclose(cell_integrals(2.0, edges), [0.5, 1.5])
        poly = Polynomial([0, 0, 3])  # 3 s^2
        assert np.allclose(cell_integrals(poly, edges), [0.25**3, 1 - 0.25**3], atol=1e-15)
        assert np.allclose(cell_integrals(np.exp, edges), np.diff(np.exp(edges)), atol=1e-13)
        with pytest.raises(ArgumentError):
            cell_integrals("x", edges)

    def test_left_endpoint_diagonal(self, backend):
        for n in (4, 9, 64):
            left = sampling_map(make_uniform_grid(n), "left")
            assert diagonal_integral(2 * n, left, left) == pytest.approx(1.0 + 1.0 / n, abs=1e-12)

    def test_mixed_endpoint_diagonal(self, backend):
        grid = make_uniform_grid(4)
        val = diagonal_integral(8, sampling_map(grid, "left"), sampling_map(grid, "right"))
        assert abs(val) < 1e-12

    def test_ksss_diagonal(self, backend):
        smap = sampling_map(make_uniform_grid(5), "ksss")
        assert diagonal_integral(11, smap, smap) == pytest.approx(1.0, abs=1e-12)

    def test_asynchronous_maps(self, backend):
        a = sampling_map(make_uniform_grid(3), "midpoint")
        b = sampling_map(make_uniform_grid(4), "left")
        # oracle: explicit refinement {0, 1/4, 1/3, 1/2, 2/3, 3/4, 1}
        cuts = [0, 1 / 4, 1 / 3, 1 / 2, 2 / 3, 3 / 4, 1]
        expected = sum(
            (hi - lo) * kernel_direct_sum(a(lo), b(lo), 6) for lo, hi in zip(cuts[:-1], cuts[1:])
        )
        assert diagonal_integral(6, a, b) == pytest.approx(expected, abs=1e-13)

    def test_weighted_polynomial(self):
        smap = sampling_map(make_uniform_grid(8), "ksss")
        g = Polynomial([0.1, 0.2])
        h = 1 / 8
        k = np.arange(8)
        exact = np.sum(kernel_direct_sum(smap.representatives, smap.representatives, 3) * (0.1 * h + 0.1 * h * h * (2 * k + 1)))
        assert diagonal_integral(3, smap, smap, g) == pytest.approx(exact, abs=1e-14)
