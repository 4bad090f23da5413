"""Brute-force verification: replicated Monte Carlo estimates, quadrature
characteristic functions and z-score verdicts."""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np
from scipy import integrate

from .charfn import DomainError
from .estimation import estimate_measure
from .measures import MeasureKind
from .models import Model, analytic_measures

PASS_Z = 4.0
FAIL_Z = 6.0
MAX_FLAGGED = 0.01


@dataclass(frozen=True)
class OracleReport:
    analytic: Optional[float]
    mc_mean: float
    mc_se: float
    z_score: Optional[float]
    reps: int
    n_per_rep: int
    seed: int
    n_flagged: int = 0

    @property
    def valid(self) -> bool:
        return self.n_flagged <= MAX_FLAGGED * self.reps

    def to_dict(self) -> dict:
        return {"analytic": self.analytic, "mc_mean": self.mc_mean, "mc_se": self.mc_se,
                "z_score": self.z_score, "reps": self.reps,
                "n_per_rep": self.n_per_rep, "seed": self.seed}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _z(analytic: float, mean: float, se: float) -> float:
    diff = abs(analytic - mean)
    if se > 0:
        return diff / se
    return 0.0 if diff == 0 else math.inf


def replicate(fn: Callable[[np.random.Generator], float], reps: int, seed: int,
              workers: int = 1) -> np.ndarray:
    """Evaluate ``fn`` on ``reps`` independent generators spawned from
    ``seed``; results keep replicate order regardless of ``workers``."""
    if reps < 1:
        raise DomainError("reps must be >= 1")
    children = np.random.SeedSequence(seed).spawn(reps)

    def run(ss):
        return fn(np.random.default_rng(ss))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            out = list(pool.map(run, children))
    else:
        out = [run(ss) for ss in children]
    return np.asarray(out, dtype=float)


def summarize(values, analytic: Optional[float], n_per_rep: int, seed: int) -> OracleReport:
    """Mean and standard error over the finite replicate values."""
    values = np.asarray(values, dtype=float)
    finite = values[np.isfinite(values)]
    n_flagged = int(values.size - finite.size)
    mean = float(np.mean(finite)) if finite.size else math.nan
    se = float(np.std(finite, ddof=1) / math.sqrt(finite.size)) if finite.size > 1 else math.nan
    z = None if analytic is None else _z(analytic, mean, se)
    return OracleReport(analytic, mean, se, z, int(values.size), n_per_rep, seed, n_flagged)


def mc_measure(model: Model, kind, theta: float = 1.0, n: int = 10_000, reps: int = 50,
               seed: int = 0, workers: int = 1,
               analytic: Optional[float] = None) -> OracleReport:
    """Replicated plug-in estimates of a measure on draws from ``model``.

    ``analytic`` defaults to the catalog value, when one exists.
    """
    kind = MeasureKind.parse(kind)
    if reps < 2:
        raise DomainError("reps must be >= 2")
    if n < 1:
        raise DomainError("n must be >= 1")
    if analytic is None:
        analytic = analytic_measures(model, theta).get(kind)

    def one(rng):
        return estimate_measure(model.sample_pairs(n, rng), kind, theta)

    return summarize(replicate(one, reps, seed, workers), analytic, n, seed)


def quad_cf(density: Callable[[float], float], theta: float,
            half_support: float = 40.0) -> float:
    """``2 int_0^H cos(theta x) f(x) dx`` for a symmetric density ``f``."""
    if half_support <= 0:
        raise DomainError("half_support must be positive")
    mass, _ = integrate.quad(density, 0.0, half_support, epsabs=1e-12, epsrel=1e-12,
                             limit=500)
    if abs(2.0 * mass - 1.0) > 1e-8:
        raise DomainError(f"density integrates to {2.0 * mass!r} on the support, not 1")
    if theta == 0:
        return 2.0 * mass
    val, _ = integrate.quad(density, 0.0, half_support, weight="cos", wvar=theta,
                            epsabs=1e-10, limit=500)
    return 2.0 * val


def discrepancy(analytic: float, report: OracleReport) -> Tuple[float, str]:
    """z-score and verdict: ``pass`` below 4, ``marginal`` below 6, else ``fail``."""
    if not report.mc_se > 0:
        raise DomainError("report needs a positive standard error")
    z = abs(analytic - report.mc_mean) / report.mc_se
    if not report.valid or not math.isfinite(z):
        return z, "fail"
    if z < PASS_Z:
        return z, "pass"
    if z < FAIL_Z:
        return z, "marginal"
    return z, "fail"


__all__ = ["OracleReport", "mc_measure", "quad_cf", "discrepancy", "replicate",
           "summarize"]
