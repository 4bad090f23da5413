"""Characteristic-function dispersion and dependence measures: the lcf,
symmetric and asymmetric codifferences and the dynamical functional, with
plug-in estimators, a model catalog and Monte Carlo verification."""

from .charfn import (CharFn, DomainError, PairedSample, check_ray_unimodality, ecf,
                     ecf_real, elliptical_cf, empirical_cf, gaussian_cf, linear_map_cf,
                     marginal_cf, mixture_cf, product_cf)
from .estimation import (MeasureEstimate, Trajectory, asymptotic_variance,
                         confidence_interval, estimate, estimate_measure,
                         population_asymptotic_variance, time_avg_measure, time_avg_sweep,
                         zero_dependence_test)
from .measures import (MeasureKind, acdf, codiff_operator, cov_operator, dynfun,
                       is_flagged, lcf, lcf_cumulant_approx, measure, scdf, scdf_general)

__version__ = "0.1.0"
