import json
import math

import numpy as np
import pytest
from scipy import stats

from codiff.charfn import DomainError, ecf_real
from codiff.models import GaussianPair, Levy, VarianceGammaPair
from codiff.oracle import (FAIL_Z, PASS_Z, OracleReport, discrepancy, mc_measure, quad_cf,
                           replicate, summarize)


def gauss_density(x):
    return math.exp(-0.5 * x * x) / math.sqrt(2 * math.pi)


def laplace_density(x):
    return 0.5 * math.exp(-abs(x))


class TestMonteCarlo:
    def test_independent_gaussian(self):
        rep = mc_measure(GaussianPair(), "scdf", 1.0, n=10 ** 4, reps=100, seed=1)
        assert abs(rep.mc_mean) < 4 * rep.mc_se
        assert rep.analytic == 0.0 and rep.z_score < 4

    def test_variance_gamma(self):
        rep = mc_measure(VarianceGammaPair(1.0, 0.5), "scdf", 1.0, n=10 ** 5, reps=50, seed=2)
        assert rep.analytic == pytest.approx(0.34657, abs=1e-5)
        assert rep.z_score < 4

    def test_brownian(self):
        rep = mc_measure(Levy(t1=1.0, t2=3.0), "scdf", 1.0, n=10 ** 4, reps=50, seed=3)
        assert rep.analytic == pytest.approx(1.0, abs=1e-14)
        assert rep.z_score < 4

    def test_se_scales_with_reps(self):
        small = mc_measure(GaussianPair(rho=0.3), "scdf", 1.0, n=2000, reps=50, seed=4)
        large = mc_measure(GaussianPair(rho=0.3), "scdf", 1.0, n=2000, reps=200, seed=5)
        assert small.mc_se / large.mc_se == pytest.approx(2.0, rel=0.25)

    def test_workers_do_not_change_results(self):
        a = mc_measure(GaussianPair(rho=0.3), "acdf_plus", 1.0, n=500, reps=8, seed=6)
        b = mc_measure(GaussianPair(rho=0.3), "acdf_plus", 1.0, n=500, reps=8, seed=6,
                       workers=4)
        assert a == b

    def test_small_theta_matches_covariance(self):
        model, reps, n, seed = GaussianPair(1.0, 1.0, 0.5), 200, 2000, 7
        rep = mc_measure(model, "scdf", 1e-3, n=n, reps=reps, seed=seed)

        def cov(rng):
            d = model.sample_pairs(n, rng)
            return float(np.mean(d.xs * d.ys))

        covs = replicate(cov, reps, seed)
        joint_se = math.hypot(rep.mc_se, np.std(covs, ddof=1) / math.sqrt(reps))
        assert abs(rep.mc_mean - np.mean(covs)) < 4 * joint_se

    def test_errors(self):
        with pytest.raises(DomainError):
            mc_measure(GaussianPair(), "scdf", 1.0, n=10, reps=1)
        with pytest.raises(DomainError):
            mc_measure(GaussianPair(), "scdf", 1.0, n=0, reps=5)


class TestReports:
    def test_json_fields(self):
        rep = mc_measure(GaussianPair(rho=0.2), "scdf", 1.0, n=200, reps=5, seed=8)
        rec = json.loads(rep.to_json())
        assert set(rec) == {"analytic", "mc_mean", "mc_se", "z_score", "reps", "n_per_rep",
                            "seed"}
        assert rec["reps"] == 5 and rec["n_per_rep"] == 200 and rec["seed"] == 8

    def test_no_analytic_no_z(self):
        rep = summarize([1.0, 2.0, 3.0], None, 10, 0)
        assert rep.z_score is None and rep.mc_se > 0

    def test_flagged_replicates_invalidate(self):
        vals = [0.1] * 98 + [math.inf, math.nan]
        rep = summarize(vals, 0.1, 10, 0)
        assert rep.n_flagged == 2 and not rep.valid
        assert summarize([0.1] * 99 + [math.inf], 0.1, 10, 0).valid


class TestQuadrature:
    def test_gaussian(self):
        assert quad_cf(gauss_density, 1.0) == pytest.approx(math.exp(-0.5), abs=1e-9)

    def test_laplace(self):
        assert quad_cf(laplace_density, 1.0) == pytest.approx(0.5, abs=1e-9)

    def test_zero_frequency(self):
        assert quad_cf(laplace_density, 0.0) == pytest.approx(1.0, abs=1e-10)

    def test_normalisation_guard(self):
        with pytest.raises(DomainError):
            quad_cf(lambda x: 2 * gauss_density(x), 1.0)
        with pytest.raises(DomainError):
            quad_cf(laplace_density, 1.0, half_support=5.0)

    def test_agrees_with_ecf(self, rng):
        n = 10 ** 6
        for density, draw in ((gauss_density, rng.standard_normal(n)),
                              (laplace_density, rng.laplace(0.0, 1.0, n))):
            for theta in (0.5, 1.0, 2.0):
                assert abs(quad_cf(density, theta) - ecf_real(draw, theta)) < 5 / math.sqrt(n)


class TestDiscrepancy:
    def _report(self, mean=1.0, se=0.1):
        return OracleReport(None, mean, se, None, 50, 100, 0)

    def test_exact_match(self):
        assert discrepancy(1.0, self._report()) == (0.0, "pass")

    def test_thresholds(self):
        rep = self._report()
        assert discrepancy(1.0 + 10 * 0.1, rep)[1] == "fail"
        assert discrepancy(1.0 + 5 * 0.1, rep)[1] == "marginal"
        assert discrepancy(1.0 - 3.9 * 0.1, rep)[1] == "pass"
        assert (PASS_Z, FAIL_Z) == (4.0, 6.0)

    def test_requires_positive_se(self):
        with pytest.raises(DomainError):
            discrepancy(1.0, self._report(se=0.0))

    def test_z_distribution_under_truth(self):
        # z-scores of a correct closed form behave like |N(0, 1)|
        zs = [mc_measure(GaussianPair(rho=0.4), "acdf_minus", 1.0, n=500, reps=20,
                         seed=s).z_score for s in range(60)]
        assert stats.kstest(zs, stats.halfnorm.cdf).pvalue > 1e-3
