"""Catalog of analytic models with samplers and closed-form measures."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Dict, Mapping, Optional, Type, Union

import numpy as np

from ..charfn import DomainError, PairedSample, marginal_cf
from ..estimation import Trajectory
from ..measures import MeasureKind, acdf, dynfun, lcf, scdf
from .expansions import (WeakMoments, StrongMoments, burst_pair_cf, burst_scdf,
                         burst_scdf_perturbative, cond_gaussian_expansion,
                         continuous_gaussian_lcf, discrete_gaussian_lcf,
                         high_prob_lcf, large_scale_offset, levy_codiff,
                         mixture_asymptotics, mixture_lcf, small_scale_lcf,
                         amplitude_product_leading, strong_moments, weak_moments)
from .families import (AR1Gaussian, AmplitudeProduct, BulkTail, Burst, CrossShaped,
                       DiscreteGaussianMixture, GaussianPair, LaplaceSpherical2D, Levy,
                       Model, PsiMixture, RandomSum, SymmetricStable, VarianceGammaPair)

MODELS: Dict[str, Type[Model]] = {cls.tag: cls for cls in (
    GaussianPair, LaplaceSpherical2D, SymmetricStable, VarianceGammaPair, PsiMixture,
    DiscreteGaussianMixture, RandomSum, Levy, CrossShaped, Burst, AR1Gaussian,
    AmplitudeProduct, BulkTail)}


@dataclass(frozen=True)
class MeasureSet:
    """Analytic measure values; ``None`` where no finite value is available."""

    lcf_x: Optional[float] = None
    lcf_y: Optional[float] = None
    scdf: Optional[float] = None
    acdf_plus: Optional[float] = None
    acdf_minus: Optional[float] = None
    dynfun: Optional[float] = None

    def get(self, kind) -> Optional[float]:
        kind = MeasureKind.parse(kind)
        return self.lcf_x if kind is MeasureKind.LCF else getattr(self, kind.value)

    def as_dict(self) -> Dict[str, float]:
        return {k: v for k, v in asdict(self).items() if v is not None}


def build_model(tag: str, params: Optional[Mapping[str, str]] = None) -> Model:
    """Look up a family by tag and build it from flat string parameters."""
    if tag not in MODELS:
        raise DomainError(f"unknown model {tag!r}; valid: {', '.join(sorted(MODELS))}")
    return MODELS[tag].from_params(dict(params or {}))


def _from_cf(model: Model, name: str, theta: float) -> float:
    cf = model.cf()
    if name == "lcf_x":
        return lcf(marginal_cf(cf, (1.0, 0.0)), theta)
    if name == "lcf_y":
        return lcf(marginal_cf(cf, (0.0, 1.0)), theta)
    if name == "scdf":
        return scdf(cf, theta)
    if name == "acdf_plus":
        return acdf(cf, theta, +1)
    if name == "acdf_minus":
        return acdf(cf, theta, -1)
    return dynfun(cf, theta)


def analytic_measures(model: Model, theta: float = 1.0) -> MeasureSet:
    """Every measure available for ``model`` at ``theta``.

    Explicit formulas are used where the family has them; remaining
    entries are evaluated from the exact joint characteristic function.
    Nonfinite values are left out.
    """
    if theta == 0 or not math.isfinite(theta):
        raise DomainError("theta must be finite and nonzero")
    vals = dict(model.closed_form(theta))
    for name in MeasureSet.__dataclass_fields__:
        if name not in vals:
            vals[name] = _from_cf(model, name, theta)
    return MeasureSet(**{k: float(v) + 0.0 for k, v in vals.items() if math.isfinite(v)})


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def sample_pairs(model: Model, n: int, seed=None) -> PairedSample:
    """``n`` i.i.d. pairs; for process models, pairs at the model's lag."""
    if n < 1:
        raise DomainError("n must be >= 1")
    return model.sample_pairs(int(n), _rng(seed))


def sample(model: Model, n: int, seed=None) -> Union[PairedSample, Trajectory]:
    """Pairs for pair models, a path of length ``n`` for process models."""
    if n < 1:
        raise DomainError("n must be >= 1")
    if model.process:
        return model.sample_path(int(n), _rng(seed))
    return model.sample_pairs(int(n), _rng(seed))


__all__ = [
    "MODELS", "MeasureSet", "Model", "analytic_measures", "build_model", "sample",
    "sample_pairs", "AR1Gaussian", "AmplitudeProduct", "BulkTail", "Burst", "CrossShaped",
    "DiscreteGaussianMixture", "GaussianPair", "LaplaceSpherical2D", "Levy", "PsiMixture",
    "RandomSum", "SymmetricStable", "VarianceGammaPair", "WeakMoments", "StrongMoments",
    "burst_pair_cf", "burst_scdf", "burst_scdf_perturbative", "cond_gaussian_expansion",
    "continuous_gaussian_lcf", "discrete_gaussian_lcf", "high_prob_lcf",
    "large_scale_offset", "levy_codiff", "mixture_asymptotics", "mixture_lcf",
    "small_scale_lcf", "amplitude_product_leading", "strong_moments", "weak_moments",
]
