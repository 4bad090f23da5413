import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from codiff.charfn import (CharFn, DomainError, elliptical_cf, gaussian_cf, linear_map_cf,
                           marginal_cf, mixture_cf, product_cf)
from codiff.measures import (MeasureKind, acdf, codiff_operator, cov_operator, dynfun,
                             is_flagged, lcf, lcf_cumulant_approx, measure, scdf,
                             scdf_general)
from codiff.models import MODELS, BulkTail, DiscreteGaussianMixture, VarianceGammaPair
from codiff.oracle import quad_cf


def laplace_cf(c=1.0):
    return CharFn(lambda t: 1.0 / (1.0 + (c * t[..., 0]) ** 2), 1, name="laplace")


def pair_of(cf1: CharFn, matrix) -> CharFn:
    """Pair provider ``M X`` for a scalar provider ``cf1``."""
    return linear_map_cf(cf1, np.asarray(matrix, dtype=float).reshape(2, 1))


def gauss2(vx, vy, rho):
    c = rho * math.sqrt(vx * vy)
    return gaussian_cf(np.array([[vx, c], [c, vy]]))


def swapped(cf):
    return linear_map_cf(cf, [[0.0, 1.0], [1.0, 0.0]])


def reflected(cf):
    return linear_map_cf(cf, [[1.0, 0.0], [0.0, -1.0]])


def catalog():
    return [cls() for cls in MODELS.values()]


covariances = st.tuples(st.floats(0.1, 4.0), st.floats(0.1, 4.0),
                        st.floats(-0.95, 0.95)).map(lambda a: gauss2(*a))
scales = st.floats(0.1, 3.0)


class TestLcf:
    @pytest.mark.parametrize("theta", [0.1, 1.0, 3.0])
    def test_gaussian_is_variance(self, theta):
        assert lcf(gaussian_cf(2.5), theta) == pytest.approx(2.5, rel=1e-13)

    def test_constant_zero(self):
        assert lcf(gaussian_cf(0.0), 1.0) == 0.0

    def test_laplace_against_quadrature(self):
        phi = quad_cf(lambda x: 0.5 * math.exp(-x), 1.0, half_support=60.0)
        oracle = -2.0 * math.log(phi)
        assert lcf(laplace_cf(), 1.0) == pytest.approx(oracle, abs=1e-9)
        assert lcf(laplace_cf(), 1.0) == pytest.approx(2 * math.log(2), abs=1e-14)

    def test_nonpositive_cf_is_infinite(self):
        cf = CharFn(lambda t: np.cos(t[..., 0]), 1)
        val = lcf(cf, 2.0)
        assert val == math.inf and is_flagged(val)

    def test_zero_theta(self):
        with pytest.raises(DomainError):
            lcf(gaussian_cf(1.0), 0.0)

    def test_needs_scalar_provider(self):
        with pytest.raises(DomainError):
            lcf(gaussian_cf(np.eye(2)), 1.0)


class TestCodifferences:
    @pytest.mark.parametrize("rho", [-0.8, 0.0, 0.3, 0.9])
    @pytest.mark.parametrize("theta", [0.5, 1.0, 2.0])
    def test_gaussian_equals_covariance(self, rho, theta):
        cf = gauss2(1.0, 1.0, rho)
        assert scdf(cf, theta) == pytest.approx(rho, abs=1e-13)
        assert acdf(cf, theta, +1) == pytest.approx(rho, abs=1e-13)
        assert acdf(cf, theta, -1) == pytest.approx(rho, abs=1e-13)

    def test_independent_is_zero(self):
        cf = CharFn(lambda t: 1.0 / (1.0 + t[..., 0] ** 2) / (1.0 + 4.0 * t[..., 1] ** 2), 2)
        for theta in (0.5, 1.0, 2.0):
            assert scdf(cf, theta) == pytest.approx(0.0, abs=1e-15)
            assert acdf(cf, theta, 1) == pytest.approx(0.0, abs=1e-15)
            assert acdf(cf, theta, -1) == pytest.approx(0.0, abs=1e-15)
            assert dynfun(cf, theta) == pytest.approx(0.0, abs=1e-15)

    def test_variance_gamma_value(self):
        cf = VarianceGammaPair(1.0, 0.5).cf()
        assert scdf(cf, 1.0) == pytest.approx(0.5 * math.log(2.0), abs=1e-14)
        assert scdf(cf, 1.0) == pytest.approx(0.34657, abs=1e-5)

    def test_antithetic_laplace_positive_acdf(self):
        cf = pair_of(laplace_cf(), [1.0, -1.0])
        val = acdf(cf, 2.0, +1)
        assert val == pytest.approx(0.25 * math.log(25.0 / 17.0), abs=1e-14)
        assert val > 0
        # below sqrt(2)/c the sign is the usual negative one
        assert acdf(cf, 1.0, +1) < 0

    def test_dynfun_examples(self):
        x_eq_y = pair_of(gaussian_cf(1.0), [1.0, 1.0])
        assert dynfun(x_eq_y, 1.0) == pytest.approx(1 - math.exp(-1.0), abs=1e-15)
        assert dynfun(x_eq_y, 1.0) == pytest.approx(0.63212, abs=1e-5)
        assert dynfun(x_eq_y, 0.0) == 0.0

    def test_measure_dispatch(self):
        cf = gauss2(1.0, 2.0, 0.3)
        assert measure(cf, "scdf", 0.7) == scdf(cf, 0.7)
        assert measure(cf, MeasureKind.ACDF_MINUS, 0.7) == acdf(cf, 0.7, -1)
        assert measure(marginal_cf(cf, (1, 0)), "lcf", 0.7) == pytest.approx(1.0)
        with pytest.raises(DomainError):
            measure(cf, "covariance", 1.0)

    def test_zero_theta(self):
        cf = gauss2(1, 1, 0.5)
        for fn in (scdf, lambda c, t: acdf(c, t, 1)):
            with pytest.raises(DomainError):
                fn(cf, 0.0)

    def test_flagged_when_cf_not_positive(self):
        cf = pair_of(CharFn(lambda t: np.cos(t[..., 0]), 1), [1.0, 1.0])
        assert is_flagged(scdf(cf, 1.0))  # phi(2 theta) = cos 2 < 0


class TestScdfGeneral:
    @given(covariances, scales)
    def test_diagonal_equals_scdf(self, cf, theta):
        assert scdf_general(cf, theta, theta) == scdf(cf, theta)

    @given(st.floats(-0.95, 0.95), scales, scales)
    def test_gaussian_any_scales(self, rho, t1, t2):
        assert scdf_general(gauss2(1, 1, rho), t1, t2) == pytest.approx(rho, abs=1e-12)

    def test_independent(self):
        cf = product_cf(gauss2(1, 0, 0), gauss2(0, 3, 0))
        assert scdf_general(cf, 0.4, 1.7) == pytest.approx(0.0, abs=1e-15)

    def test_zero_scale(self):
        with pytest.raises(DomainError):
            scdf_general(gauss2(1, 1, 0), 0.0, 1.0)


class TestCumulants:
    def test_gaussian(self):
        assert lcf_cumulant_approx([2.0, 0.0, 0.0], 1.7) == 2.0

    def test_two_terms(self):
        assert lcf_cumulant_approx([1.0, 3.0], 1.0) == pytest.approx(0.75, abs=1e-15)

    def test_laplace_small_theta(self):
        approx = lcf_cumulant_approx([2.0, 12.0], 0.1)
        exact = lcf(laplace_cf(), 0.1)
        assert approx == pytest.approx(1.99, abs=1e-14)
        assert exact == pytest.approx(200 * math.log(1.01), abs=1e-12)
        assert abs(approx - exact) < 1e-3  # O(theta^4) remainder

    def test_empty(self):
        with pytest.raises(DomainError):
            lcf_cumulant_approx([], 1.0)


class TestOperators:
    def test_spherical_perpendicular(self):
        assert codiff_operator(gaussian_cf(np.eye(3)), [1, 2, 0], [-2, 1, 5]) == \
            pytest.approx(0.0, abs=1e-15)

    def test_independent_disjoint_coordinates(self):
        cf = CharFn(lambda t: 1.0 / (1.0 + t[..., 0] ** 2) * np.exp(-np.abs(t[..., 1])), 2)
        assert codiff_operator(cf, [1, 0], [0, 1]) == pytest.approx(0.0, abs=1e-15)

    def test_cov_operator_examples(self):
        assert cov_operator(np.eye(2), [1, 0], [0, 1]) == 0.0
        assert cov_operator(np.eye(2), [1, 1], [1, 1]) == 2.0
        with pytest.raises(DomainError):
            cov_operator(np.eye(2), [1, 0, 0], [0, 1, 0])

    @settings(max_examples=50)
    @given(st.integers(0, 2 ** 32 - 1))
    def test_gaussian_operator_is_bilinear_form(self, seed):
        r = np.random.default_rng(seed)
        m = r.normal(size=(3, 3))
        s = m @ m.T / 3
        a, b = r.normal(size=3), r.normal(size=3)
        cf = gaussian_cf(s)
        assert codiff_operator(cf, a, b) == pytest.approx(cov_operator(s, a, b), abs=1e-10)
        assert codiff_operator(cf, a, -b) == -codiff_operator(cf, a, b)

    @settings(max_examples=50)
    @given(st.integers(0, 2 ** 32 - 1))
    def test_operator_additive_over_independent_sums(self, seed):
        r = np.random.default_rng(seed)
        a, b = r.normal(size=2) * 0.5, r.normal(size=2) * 0.5
        f1 = elliptical_cf(lambda q: 1.0 / (1.0 + q), np.diag(r.uniform(0.2, 2, 2)))
        f2 = gaussian_cf(np.array([[1.0, 0.4], [0.4, 2.0]]))
        total = codiff_operator(product_cf(f1, f2), a, b)
        assert total == pytest.approx(codiff_operator(f1, a, b) + codiff_operator(f2, a, b),
                                      abs=1e-13)


class TestIdentities:
    @given(covariances, scales)
    def test_polarisation(self, cf, theta):
        s = scdf(cf, theta)
        assert s == pytest.approx(0.5 * (acdf(cf, theta, 1) + acdf(cf, theta, -1)), abs=1e-12)

    @given(covariances, scales)
    def test_reflected_minus_is_negated_plus(self, cf, theta):
        assert acdf(reflected(cf), theta, -1) == pytest.approx(-acdf(cf, theta, +1), abs=1e-12)

    @pytest.mark.parametrize("theta", [0.3, 1.0, 2.0])
    def test_lcf_as_self_codifference(self, theta):
        x = laplace_cf(0.7)
        ell = lcf(x, theta)
        assert acdf(pair_of(x, [1, 1]), theta, +1) == pytest.approx(ell, abs=1e-13)
        assert 4 * scdf(pair_of(x, [0.5, 0.5]), theta) == pytest.approx(ell, abs=1e-13)

    @pytest.mark.parametrize("model", catalog(), ids=lambda m: m.tag)
    def test_swap_symmetry(self, model):
        cf = model.cf()
        for theta in (0.5, 1.0):
            for fn in (scdf, dynfun, lambda c, t: acdf(c, t, 1), lambda c, t: acdf(c, t, -1)):
                a, b = fn(cf, theta), fn(swapped(cf), theta)
                assert a == pytest.approx(b, rel=1e-12, abs=1e-14)

    @pytest.mark.parametrize("model", catalog(), ids=lambda m: m.tag)
    def test_reflection_antisymmetry(self, model):
        cf = model.cf()
        for theta in (0.5, 1.0):
            assert scdf(reflected(cf), theta) == -scdf(cf, theta)

    @settings(max_examples=50)
    @given(covariances, covariances, scales)
    def test_additive_over_independent_sums(self, f1, f2, theta):
        vg = VarianceGammaPair(1.3, -0.4).cf()
        both = product_cf(f1, f2, vg)
        for fn in (scdf, lambda c, t: acdf(c, t, 1), lambda c, t: acdf(c, t, -1)):
            parts = fn(f1, theta) + fn(f2, theta) + fn(vg, theta)
            assert fn(both, theta) == pytest.approx(parts, abs=1e-12)


def _self_pairs(cf):
    xx = linear_map_cf(cf, [[1.0, 0.0], [1.0, 0.0]])
    yy = linear_map_cf(cf, [[0.0, 1.0], [0.0, 1.0]])
    return xx, yy


def _reference_levels(cf, theta):
    xx, yy = _self_pairs(cf)
    return {"s": scdf(cf, theta), "s_ref": max(scdf(xx, theta), scdf(yy, theta)),
            "c": acdf(cf, theta, 1), "c_ref": max(acdf(xx, theta, 1), acdf(yy, theta, 1)),
            "d": dynfun(cf, theta),
            "d_ref": 1 - math.sqrt(1 - dynfun(xx, theta)) * math.sqrt(1 - dynfun(yy, theta))}


def _random_gaussian_mixture(seed):
    r = np.random.default_rng(seed)
    k = r.integers(2, 6)
    comps = []
    for _ in range(k):
        m = r.normal(size=(2, 2))
        comps.append(gaussian_cf(m @ m.T))
    w = r.dirichlet(np.ones(k))
    return mixture_cf(comps, w / w.sum(), tol=1e-9)


class TestReferenceLevels:
    @pytest.mark.parametrize("model", catalog(), ids=lambda m: m.tag)
    @pytest.mark.parametrize("theta", [0.5, 1.0, 2.0])
    def test_catalog(self, model, theta):
        r = _reference_levels(model.cf(), theta)
        assert -r["s_ref"] - 1e-12 <= r["s"] <= r["s_ref"] + 1e-12
        assert r["c"] <= r["c_ref"] + 1e-12
        assert r["d"] <= r["d_ref"] + 1e-12

    @settings(max_examples=200)
    @given(st.integers(0, 2 ** 32 - 1), st.sampled_from([0.5, 1.0, 2.0]))
    def test_acdf_and_dynfun_bounds_on_random_mixtures(self, seed, theta):
        r = _reference_levels(_random_gaussian_mixture(seed), theta)
        assert r["c"] <= r["c_ref"] + 1e-12
        assert r["d"] <= r["d_ref"] + 1e-12

    def test_scdf_bound_fails_for_some_gaussian_mixtures(self):
        # a three-component Gaussian mixture (positive cf, so a valid input)
        # whose scdf lies below -max{s(X,X), s(Y,Y)}; values confirmed with
        # 40-digit arithmetic
        r = _reference_levels(_random_gaussian_mixture(3347), 2.0)
        assert r["s"] == pytest.approx(-0.8419281395273672, abs=1e-12)
        assert r["s_ref"] == pytest.approx(0.7630790257417853, abs=1e-12)
        assert r["s"] < -r["s_ref"]


class TestSignCriterion:
    @pytest.mark.parametrize("tag", ["variance_gamma_pair", "discrete_gaussian_mixture",
                                     "symmetric_stable", "amplitude_product", "random_sum",
                                     "burst"])
    def test_sign_matches_sine_moment(self, tag):
        if tag == "random_sum":
            model = MODELS[tag](rho=0.7)
        else:
            model = MODELS[tag]()
        r = np.random.default_rng(11)
        data = model.sample_pairs(10 ** 6, r)
        for theta in (0.5, 1.0):
            prod = np.sin(theta * data.xs) * np.sin(theta * data.ys)
            mean, se = prod.mean(), prod.std(ddof=1) / math.sqrt(prod.size)
            assert abs(mean) > 4 * se, "oracle cannot resolve the sign"
            assert np.sign(scdf(model.cf(), theta)) == np.sign(mean)


class TestLimits:
    @pytest.mark.parametrize("model", [
        DiscreteGaussianMixture(),
        DiscreteGaussianMixture((0.2, 0.3, 0.5), (1.0, 2.0, 0.5), (3.0, 1.0, 1.0),
                                (1.0, -0.5, 0.2)),
        VarianceGammaPair(2.0, -0.3),
        MODELS["gaussian_pair"](2.0, 1.0, 0.4),
        MODELS["laplace_spherical_2d"](0.8),
        MODELS["psi_mixture"](),
    ], ids=lambda m: m.tag)
    def test_small_theta_moments(self, model):
        cf = model.cf()
        eps = 1e-6
        # second moments by central differences of the cf itself
        var_x = 2 * (1 - cf.real(eps, 0.0)) / eps ** 2
        cov = (cf.real(eps, -eps) - cf.real(eps, eps)) / (2 * eps ** 2)
        if isinstance(model, DiscreteGaussianMixture):
            w = np.asarray(model.weights)
            var_x, cov = float(w @ model.var_x), float(w @ model.cov_xy)
        elif isinstance(model, VarianceGammaPair):
            var_x, cov = 2 * model.shape, 2 * model.shape * model.rho
        theta = 1e-3
        assert abs(scdf(cf, theta) - cov) < 1e-4
        assert abs(lcf(marginal_cf(cf, (1, 0)), theta) - var_x) < 1e-4

    def test_tail_ignoring(self):
        m = BulkTail(p=0.9, w=1e3, bulk_var=1.0, bulk_rho=0.6, tail_var=1.0, tail_rho=-0.5)
        cf = m.cf()
        lx = lcf(marginal_cf(cf, (1, 0)), 1.0)
        assert abs(lx - (1.0 - 2 * math.log(0.9))) < 1e-6
        assert abs(scdf(cf, 1.0) - 0.6) < 1e-6
