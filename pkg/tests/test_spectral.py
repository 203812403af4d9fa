"""Tests for grids, transforms and Sobolev norms."""

import numpy as np
import pytest

from trigwave.spectral import (CoeffVector, SpectralGrid, State, make_grid, pair_norm,
                               project_initial_data, sobolev_norm, to_physical,
                               to_physical_naive, to_spectral, to_spectral_naive)


class TestGrid:
    def test_k2_indices_and_points(self):
        g = make_grid(2)
        assert list(g.indices) == [-2, -1, 0, 1]
        assert np.allclose(g.points, [-np.pi, -np.pi / 2, 0.0, np.pi / 2])

    def test_k1(self):
        g = make_grid(1)
        assert list(g.indices) == [-1, 0]
        assert np.allclose(g.points, [-np.pi, 0.0])

    def test_k32_has_64_modes(self):
        assert make_grid(32).n_modes == 64

    def test_spacing_exact(self):
        g = make_grid(24)
        assert np.max(np.abs(np.diff(g.points) - np.pi / 24)) < 1e-15

    def test_invalid_k(self):
        with pytest.raises(ValueError):
            make_grid(0)
        with pytest.raises(ValueError):
            make_grid(-4)
        with pytest.raises(ValueError):
            make_grid(2 ** 14 + 2)  # above the default maximum

    def test_fft_order(self):
        g = make_grid(4)
        assert list(g.indices_fft) == [0, 1, 2, 3, -4, -3, -2, -1]
        assert g.slot(-4) == 4
        assert g.slot(-1) == 7
        with pytest.raises(ValueError):
            g.slot(4)


class TestCoeffVector:
    def test_math_index_access(self):
        g = make_grid(4)
        y = CoeffVector.unit(g, -3, amplitude=2.0 + 1.0j)
        assert y[-3] == 2.0 + 1.0j
        assert y[0] == 0.0

    def test_math_order_round_trip(self):
        g = make_grid(8)
        rng = np.random.default_rng(3)
        values = rng.normal(size=16) + 1j * rng.normal(size=16)
        y = CoeffVector.from_math_order(g, values)
        assert np.array_equal(y.to_math_order(), values)
        assert y[-8] == values[0]
        assert y[7] == values[15]

    def test_length_validation(self):
        g = make_grid(4)
        with pytest.raises(ValueError):
            CoeffVector(g, np.zeros(7, dtype=complex))

    def test_values_immutable(self):
        y = CoeffVector.zeros(make_grid(4))
        with pytest.raises(ValueError):
            y.values[0] = 1.0

    def test_grid_mismatch_arithmetic(self):
        a = CoeffVector.zeros(make_grid(4))
        b = CoeffVector.zeros(make_grid(8))
        with pytest.raises(ValueError):
            a + b

    def test_real_in_collocation_predicate(self):
        g = make_grid(8)
        rng = np.random.default_rng(5)
        u = rng.normal(size=16)  # real collocation values
        y = to_spectral(u, g)
        assert y.is_real_in_collocation()
        broken = dict(zip(g.indices, y.to_math_order()))
        broken[3] = broken[3] + 0.1  # breaks conjugate symmetry
        z = CoeffVector.from_coeff_map(g, broken)
        assert not z.is_real_in_collocation()

    def test_reality_predicate_matches_physical_values(self):
        g = make_grid(16)
        rng = np.random.default_rng(11)
        for _ in range(20):
            y = CoeffVector(g, rng.normal(size=32) + 1j * rng.normal(size=32))
            imag = np.max(np.abs(to_physical(y).imag))
            assert y.is_real_in_collocation(1e-12) == (imag < 1e-12)


class TestTransforms:
    def test_unit_dc_mode_gives_ones(self):
        g = make_grid(4)
        u = to_physical(CoeffVector.unit(g, 0))
        assert np.allclose(u, 1.0)

    def test_unit_first_mode(self):
        g = make_grid(2)
        u = to_physical(CoeffVector.unit(g, 1))
        assert np.allclose(u, np.exp(1j * g.points))

    def test_round_trip_random(self):
        g = make_grid(64)
        rng = np.random.default_rng(0)
        y = CoeffVector(g, rng.normal(size=128) + 1j * rng.normal(size=128))
        back = to_spectral(to_physical(y), g)
        assert np.max(np.abs(back.values - y.values)) < 1e-12
        u = rng.normal(size=128) + 1j * rng.normal(size=128)
        again = to_physical(to_spectral(u, g))
        assert np.max(np.abs(again - u)) < 1e-12

    def test_constant_to_dc(self):
        g = make_grid(8)
        y = to_spectral(np.ones(16), g)
        expected = CoeffVector.unit(g, 0)
        assert np.max(np.abs(y.values - expected.values)) < 1e-14

    def test_cosine_samples(self):
        # cos(x_k) splits into half masses at j = +-1.
        g = make_grid(4)
        y = to_spectral(np.cos(g.points), g)
        assert abs(y[1] - 0.5) < 1e-14
        assert abs(y[-1] - 0.5) < 1e-14
        others = [j for j in g.indices if j not in (-1, 1)]
        assert all(abs(y[j]) < 1e-14 for j in others)

    @pytest.mark.parametrize("K", [3, 5, 8, 17])  # includes non powers of two
    def test_fft_matches_naive(self, K):
        g = make_grid(K)
        rng = np.random.default_rng(K)
        y = CoeffVector(g, rng.normal(size=2 * K) + 1j * rng.normal(size=2 * K))
        assert np.max(np.abs(to_physical(y) - to_physical_naive(y))) < 1e-11
        u = rng.normal(size=2 * K) + 1j * rng.normal(size=2 * K)
        a = to_spectral(u, g)
        b = to_spectral_naive(u, g)
        assert np.max(np.abs(a.values - b.values)) < 1e-12

    def test_wrong_length(self):
        with pytest.raises(ValueError):
            to_spectral(np.ones(7), make_grid(4))


class TestProjection:
    def test_support_inside_grid_fold_equals_truncate(self):
        g = make_grid(4)
        coeffs = {-3: 1.0 + 2j, 0: 0.5, 2: -1.0}
        fold = project_initial_data(coeffs, g, mode="fold")
        trunc = project_initial_data(coeffs, g, mode="truncate")
        assert np.array_equal(fold.values, trunc.values)

    def test_fold_aliases_outside_mode(self):
        g = make_grid(2)
        fold = project_initial_data({3: 1.0}, g, mode="fold")
        assert fold[-1] == 1.0  # 3 = -1 mod 4
        trunc = project_initial_data({3: 1.0}, g, mode="truncate")
        assert np.all(trunc.values == 0)

    def test_fold_accumulates(self):
        g = make_grid(2)
        fold = project_initial_data({1: 1.0, 5: 1.0}, g, mode="fold")
        assert fold[1] == 2.0  # 5 = 1 mod 4

    def test_bad_mode(self):
        with pytest.raises(ValueError):
            project_initial_data({}, make_grid(2), mode="clip")


class TestNorms:
    def test_unit_masses(self):
        g = make_grid(4)
        y0 = CoeffVector.unit(g, 0)
        assert sobolev_norm(y0, 0.0) == 1.0
        assert sobolev_norm(y0, 3.7) == 1.0  # <0> = 1 for any order
        y2 = CoeffVector.unit(g, 2)
        assert sobolev_norm(y2, 1.0) == pytest.approx(2.0, abs=1e-15)
        assert sobolev_norm(y2, -1.0) == pytest.approx(0.5, abs=1e-15)

    def test_euclidean_at_order_zero(self):
        g = make_grid(4)
        y = CoeffVector.from_coeff_map(g, {1: 3.0, -2: 4.0})
        assert sobolev_norm(y, 0.0) == pytest.approx(5.0, abs=1e-14)

    def test_zero_iff_zero(self):
        g = make_grid(8)
        assert sobolev_norm(CoeffVector.zeros(g), -2.5) == 0.0
        assert sobolev_norm(CoeffVector.unit(g, 5, 1e-150), 0.0) > 0.0

    def test_monotone_in_order(self):
        g = make_grid(32)
        rng = np.random.default_rng(7)
        y = CoeffVector(g, rng.normal(size=64) + 1j * rng.normal(size=64))
        orders = [-2.0, -1.0, -0.3, 0.0, 0.4, 1.0, 2.0]
        values = [sobolev_norm(y, s) for s in orders]
        assert all(a <= b + 1e-12 for a, b in zip(values, values[1:]))

    @pytest.mark.parametrize("K", [2, 16, 128, 512])
    def test_parseval(self, K):
        g = make_grid(K)
        rng = np.random.default_rng(K)
        y = CoeffVector(g, rng.normal(size=2 * K) + 1j * rng.normal(size=2 * K))
        lhs = sobolev_norm(y, 0.0)
        rhs = np.linalg.norm(to_physical(y)) / np.sqrt(2 * K)
        assert abs(lhs - rhs) < 1e-12 * max(1.0, lhs)

    def test_pair_norm_reduces_to_components(self):
        g = make_grid(4)
        y = CoeffVector.unit(g, 2, 3.0)
        zero = CoeffVector.zeros(g)
        assert pair_norm(State(y, zero), 0.0) == pytest.approx(sobolev_norm(y, 1.0))
        assert pair_norm(State(zero, y), 0.0) == pytest.approx(sobolev_norm(y, 0.0))

    def test_pair_norm_values(self):
        g = make_grid(4)
        # <1> = max(1, 1) = 1, so equal unit masses at j = 1 give sqrt(2);
        # at j = 2 the position weight is <2>^2 = 4 and the norm is sqrt(5).
        st1 = State(CoeffVector.unit(g, 1), CoeffVector.unit(g, 1))
        assert pair_norm(st1, 0.0) == pytest.approx(np.sqrt(2.0), abs=1e-14)
        st2 = State(CoeffVector.unit(g, 2), CoeffVector.unit(g, 2))
        assert pair_norm(st2, 0.0) == pytest.approx(np.sqrt(5.0), abs=1e-14)

    def test_state_grid_mismatch(self):
        with pytest.raises(ValueError):
            State(CoeffVector.zeros(make_grid(2)), CoeffVector.zeros(make_grid(4)))
