import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from codiff.charfn import (CharFn, DomainError, PairedSample, check_ray_unimodality,
                           ecf, ecf_real, elliptical_cf, empirical_cf, gaussian_cf,
                           linear_map_cf, marginal_cf, mixture_cf, product_cf)

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)
samples = arrays(np.float64, st.integers(1, 50), elements=finite)
thetas = st.floats(-20, 20, allow_nan=False, allow_infinity=False)


class TestEcf:
    def test_constant_zero(self):
        assert ecf([0.0, 0.0, 0.0], 1.0) == complex(1.0, 0.0)

    def test_plus_minus_pi(self):
        val = ecf([math.pi, -math.pi], 1.0)
        assert val.real == pytest.approx(-1.0, abs=1e-15)
        assert val.imag == pytest.approx(0.0, abs=1e-15)

    def test_gaussian_sample(self, rng):
        val = ecf(rng.standard_normal(10 ** 6), 1.0)
        assert abs(val - math.exp(-0.5)) < 3e-3

    def test_empty_sample(self):
        with pytest.raises(DomainError):
            ecf([], 1.0)
        with pytest.raises(DomainError):
            ecf_real(np.array([]), 1.0)

    def test_real_part_examples(self):
        assert ecf_real([0.0, 0.0], 5.0) == 1.0
        assert ecf_real([math.pi / 2, -math.pi / 2], 1.0) == pytest.approx(0.0, abs=1e-16)
        assert ecf_real([1.0, -1.0], 1.0) == pytest.approx(math.cos(1.0), abs=1e-15)
        assert ecf_real([1.0, -1.0], 1.0) == pytest.approx(0.5403, abs=1e-4)

    @given(samples, thetas)
    def test_conjugate_symmetry(self, x, theta):
        assert ecf(x, -theta) == pytest.approx(ecf(x, theta).conjugate(), abs=1e-15)

    @given(samples, thetas)
    def test_modulus_bounded(self, x, theta):
        assert abs(ecf(x, theta)) <= 1.0 + 1e-15
        assert -1.0 <= ecf_real(x, theta) <= 1.0

    @given(st.integers(1, 40).flatmap(
        lambda n: st.tuples(arrays(np.float64, n, elements=finite),
                            arrays(np.float64, n, elements=finite))), thetas)
    def test_concatenation_averages(self, pair, theta):
        a, b = pair
        joint = ecf(np.concatenate([a, b]), theta)
        avg = 0.5 * (ecf(a, theta) + ecf(b, theta))
        assert joint == pytest.approx(avg, abs=1e-14)


class TestProviders:
    def test_zero_is_one(self):
        cf = CharFn(lambda t: np.full(t.shape[:-1], 0.7 + 0j), 2)
        assert cf(0.0, 0.0) == 1.0
        assert cf(1.0, 0.0) == 0.7

    def test_empirical_matches_ecf(self, rng):
        x = rng.standard_normal(100)
        y = rng.standard_normal(100)
        cf = empirical_cf(PairedSample(x, y))
        assert cf.kind == "empirical"
        assert cf(0.3, -0.7) == pytest.approx(ecf(0.3 * x - 0.7 * y, 1.0), abs=1e-15)

    def test_gaussian_and_marginal(self):
        cov = np.array([[1.0, 0.5], [0.5, 2.0]])
        cf = gaussian_cf(cov)
        assert cf.real(1.0, 1.0) == pytest.approx(math.exp(-0.5 * 4.0))
        m = marginal_cf(cf, (1.0, -1.0))
        assert m.dim == 1
        assert m.real(1.0) == pytest.approx(math.exp(-0.5 * 2.0))

    def test_linear_map_dimension_check(self):
        with pytest.raises(DomainError):
            linear_map_cf(gaussian_cf(np.eye(2)), np.eye(3))

    def test_product_is_sum_of_independent(self):
        a = gaussian_cf(np.eye(2))
        b = gaussian_cf(np.diag([2.0, 3.0]))
        assert product_cf(a, b).real(1.0, 1.0) == pytest.approx(math.exp(-0.5 * 7.0))

    def test_elliptical(self):
        cf = elliptical_cf(lambda q: 1.0 / (1.0 + q), np.eye(2))
        assert cf.real(1.0, 1.0) == pytest.approx(1.0 / 3.0)

    def test_wrong_dimension(self):
        with pytest.raises(DomainError):
            gaussian_cf(np.eye(2)).eval((1.0, 2.0, 3.0))


class TestMixture:
    def test_single_component(self):
        g = gaussian_cf(2.0)
        m = mixture_cf([g], [1.0])
        for t in (0.1, 1.0, 3.0):
            assert m.real(t) == g.real(t)

    def test_two_gaussians(self):
        m = mixture_cf([gaussian_cf(1.0), gaussian_cf(4.0)], [0.5, 0.5])
        assert m.real(1.0) == pytest.approx(0.5 * (math.exp(-0.5) + math.exp(-2.0)), abs=1e-15)
        assert m.real(1.0) == pytest.approx(0.370935, abs=5e-6)

    def test_atom_at_zero_survives(self):
        m = mixture_cf([gaussian_cf(1.0), gaussian_cf(0.0)], [0.3, 0.7])
        assert m.real(60.0) == pytest.approx(0.7, abs=1e-15)

    @pytest.mark.parametrize("w", [(0.5, 0.6), (1.2, -0.2), (0.5, 0.5 + 1e-9)])
    def test_bad_weights(self, w):
        with pytest.raises(DomainError):
            mixture_cf([gaussian_cf(1.0), gaussian_cf(2.0)], w)

    def test_dimension_mismatch(self):
        with pytest.raises(DomainError):
            mixture_cf([gaussian_cf(1.0), gaussian_cf(np.eye(2))], [0.5, 0.5])

    @settings(max_examples=50)
    @given(st.lists(st.floats(0.01, 1.0), min_size=1, max_size=5),
           st.lists(st.floats(0.1, 5.0), min_size=5, max_size=5),
           st.floats(-5, 5))
    def test_linear_in_weights(self, raw, variances, theta):
        w = np.asarray(raw) / np.sum(raw)
        w[-1] = 1.0 - np.sum(w[:-1])
        comps = [gaussian_cf(v) for v in variances[:len(w)]]
        expected = sum(p * c.real(theta) for p, c in zip(w, comps))
        assert mixture_cf(comps, w).real(theta) == pytest.approx(expected, abs=1e-15)


class TestRayUnimodality:
    def test_gaussian(self):
        grid = np.linspace(0.1, 10.0, 100)
        for d in ((1.0, 0.0), (1.0, 1.0), (-0.3, 2.0)):
            assert check_ray_unimodality(gaussian_cf(np.eye(2)), d, grid)

    def test_two_point_law(self):
        cf = CharFn(lambda t: np.cos(t[..., 0]), 1)
        grid = np.linspace(0.1, 2 * math.pi, 200)
        res = check_ray_unimodality(cf, 1.0, grid)
        assert not res
        assert res.location > math.pi
        assert grid[res.first_violation - 1] <= math.pi + 0.05

    def test_spherical_laplace(self):
        cf = elliptical_cf(lambda q: 1.0 / (1.0 + q), np.eye(2))
        grid = np.linspace(0.01, 50.0, 500)
        for ang in np.linspace(0.0, math.pi, 7):
            assert check_ray_unimodality(cf, (math.cos(ang), math.sin(ang)), grid)

    def test_bad_arguments(self):
        cf = gaussian_cf(1.0)
        with pytest.raises(DomainError):
            check_ray_unimodality(cf, 0.0, [1.0, 2.0])
        with pytest.raises(DomainError):
            check_ray_unimodality(cf, 1.0, [0.0, 1.0])
        with pytest.raises(DomainError):
            check_ray_unimodality(cf, 1.0, [2.0, 1.0])
