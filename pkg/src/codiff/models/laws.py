"""Building blocks for the model catalog: mixing variables for Gaussian
scale mixtures, Lévy exponents, and scalar laws for amplitude models.

Every law exposes an analytic transform together with a sampler, so the
same object feeds closed forms and Monte Carlo checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Tuple

import numpy as np
from scipy.stats import levy_stable

from ..charfn import DomainError


def symmetric_stable_rvs(rng: np.random.Generator, alpha: float, scale: float,
                         size) -> np.ndarray:
    """Draws with cf ``exp(-|scale*theta|^alpha)``."""
    if not 0 < alpha <= 2:
        raise DomainError("alpha must lie in (0, 2]")
    return levy_stable.rvs(alpha, 0.0, scale=scale, size=size, random_state=rng)


def positive_stable_rvs(rng: np.random.Generator, beta: float, size) -> np.ndarray:
    """Draws of ``S >= 0`` with ``E exp(-u S) = exp(-u^beta)``."""
    if not 0 < beta < 1:
        raise DomainError("beta must lie in (0, 1)")
    # totally skewed stable law; this scale turns its Laplace exponent into u^beta
    scale = math.cos(0.5 * math.pi * beta) ** (1.0 / beta)
    return levy_stable.rvs(beta, 1.0, scale=scale, size=size, random_state=rng)


# -- mixing variables ---------------------------------------------------------

class MixingLaw:
    """Nonnegative mixing variable ``S`` with ``E exp(-u S) = exp(-psi(u))``."""

    tag = ""

    def psi(self, u):
        raise NotImplementedError

    def laplace(self, u):
        return np.exp(-self.psi(u))

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        raise NotImplementedError

    @property
    def mean(self) -> float:
        return math.inf

    def __add__(self, other: "MixingLaw") -> "MixingLaw":
        return SumMixing(self, other)

    @staticmethod
    def from_params(params: Mapping[str, str]) -> Tuple["MixingLaw", set]:
        """Build from flat CLI keys; returns the law and the keys consumed."""
        kind = params.get("mixing", "gamma")
        if kind == "gamma":
            return (GammaMixing(float(params.get("shape", 1.0)),
                                float(params.get("rate", 0.5))),
                    {"mixing", "shape", "rate"})
        if kind == "exponential":
            return GammaMixing(1.0, float(params.get("rate", 1.0))), {"mixing", "rate"}
        if kind == "constant":
            return ConstantMixing(float(params.get("value", 1.0))), {"mixing", "value"}
        if kind == "stable":
            return (PositiveStableMixing(float(params.get("index", 1.0))),
                    {"mixing", "index"})
        raise DomainError(f"unknown mixing law {kind!r}; expected gamma, "
                          "exponential, constant or stable")


@dataclass(frozen=True)
class ConstantMixing(MixingLaw):
    value: float = 1.0
    tag = "constant"

    def __post_init__(self):
        if self.value < 0:
            raise DomainError("mixing value must be nonnegative")

    def psi(self, u):
        return self.value * np.asarray(u, dtype=float)

    def sample(self, rng, n):
        return np.full(n, self.value)

    @property
    def mean(self):
        return self.value


@dataclass(frozen=True)
class GammaMixing(MixingLaw):
    """Gamma(shape, rate); rate 1/2 gives the variance gamma law."""

    shape: float = 1.0
    rate: float = 0.5
    tag = "gamma"

    def __post_init__(self):
        if self.shape <= 0 or self.rate <= 0:
            raise DomainError("gamma shape and rate must be positive")

    def psi(self, u):
        return self.shape * np.log1p(np.asarray(u, dtype=float) / self.rate)

    def sample(self, rng, n):
        return rng.gamma(self.shape, 1.0 / self.rate, n)

    @property
    def mean(self):
        return self.shape / self.rate


@dataclass(frozen=True)
class PositiveStableMixing(MixingLaw):
    """``psi(u) = u^(index/2)``; mixing a Gaussian gives a sub-Gaussian
    symmetric stable vector of the given index."""

    index: float = 1.0
    tag = "stable"

    def __post_init__(self):
        if not 0 < self.index < 2:
            raise DomainError("stable index must lie in (0, 2)")

    def psi(self, u):
        return np.asarray(u, dtype=float) ** (0.5 * self.index)

    def sample(self, rng, n):
        return positive_stable_rvs(rng, 0.5 * self.index, n)


@dataclass(frozen=True)
class DiscreteMixing(MixingLaw):
    values: Tuple[float, ...]
    probs: Tuple[float, ...]
    tag = "discrete"

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        p = np.asarray(self.probs, dtype=float)
        if v.shape != p.shape or np.any(v < 0) or np.any(p < 0) or abs(p.sum() - 1) > 1e-12:
            raise DomainError("need nonnegative values and a probability vector")

    def psi(self, u):
        u = np.asarray(u, dtype=float)
        v = np.asarray(self.values)
        p = np.asarray(self.probs)
        return -np.log(np.sum(p * np.exp(-u[..., None] * v), axis=-1))

    def sample(self, rng, n):
        return rng.choice(np.asarray(self.values), size=n, p=np.asarray(self.probs))

    @property
    def mean(self):
        return float(np.dot(self.values, self.probs))


@dataclass(frozen=True)
class SumMixing(MixingLaw):
    """``S = S1 + S2`` with independent parts; exponents add."""

    first: MixingLaw
    second: MixingLaw
    tag = "sum"

    def psi(self, u):
        return self.first.psi(u) + self.second.psi(u)

    def sample(self, rng, n):
        return self.first.sample(rng, n) + self.second.sample(rng, n)

    @property
    def mean(self):
        return self.first.mean + self.second.mean


# -- Lévy exponents -----------------------------------------------------------

class LevyExponent:
    """Symmetric Lévy process with ``E exp(i theta X_t) = exp(t Psi(theta))``."""

    tag = ""

    def __call__(self, theta):
        raise NotImplementedError

    def increments(self, rng: np.random.Generator, dt, size) -> np.ndarray:
        raise NotImplementedError

    @staticmethod
    def from_params(params: Mapping[str, str]) -> Tuple["LevyExponent", set]:
        kind = params.get("process", "brownian")
        if kind == "brownian":
            return BrownianExponent(float(params.get("sigma2", 1.0))), {"process", "sigma2"}
        if kind == "stable":
            return (StableExponent(float(params.get("alpha", 1.5)),
                                   float(params.get("c", 1.0))),
                    {"process", "alpha", "c"})
        if kind == "compound_poisson":
            return (CompoundPoissonExponent(float(params.get("rate", 1.0)),
                                            float(params.get("jump_var", 1.0))),
                    {"process", "rate", "jump_var"})
        raise DomainError(f"unknown Lévy process {kind!r}; expected brownian, "
                          "stable or compound_poisson")


@dataclass(frozen=True)
class BrownianExponent(LevyExponent):
    sigma2: float = 1.0
    tag = "brownian"

    def __call__(self, theta):
        return -0.5 * self.sigma2 * np.square(theta)

    def increments(self, rng, dt, size):
        return rng.normal(0.0, 1.0, size) * np.sqrt(self.sigma2 * np.asarray(dt, dtype=float))


@dataclass(frozen=True)
class StableExponent(LevyExponent):
    alpha: float = 1.5
    c: float = 1.0
    tag = "stable"

    def __post_init__(self):
        if not 0 < self.alpha <= 2 or self.c <= 0:
            raise DomainError("need alpha in (0, 2] and c > 0")

    def __call__(self, theta):
        return -np.abs(self.c * np.asarray(theta, dtype=float)) ** self.alpha

    def increments(self, rng, dt, size):
        scale = self.c * np.asarray(dt, dtype=float) ** (1.0 / self.alpha)
        return symmetric_stable_rvs(rng, self.alpha, 1.0, size) * scale


@dataclass(frozen=True)
class CompoundPoissonExponent(LevyExponent):
    """Poisson jumps at ``rate`` with centred Gaussian sizes."""

    rate: float = 1.0
    jump_var: float = 1.0
    tag = "compound_poisson"

    def __post_init__(self):
        if self.rate <= 0 or self.jump_var <= 0:
            raise DomainError("rate and jump variance must be positive")

    def __call__(self, theta):
        return self.rate * np.expm1(-0.5 * self.jump_var * np.square(theta))

    def increments(self, rng, dt, size):
        counts = rng.poisson(self.rate * np.asarray(dt, dtype=float), size)
        return np.sqrt(counts * self.jump_var) * rng.normal(0.0, 1.0, size)


# -- scalar laws for amplitude models -----------------------------------------

@dataclass(frozen=True)
class ScalarLaw:
    """Symmetric Gaussian (``scale`` = variance) or Laplace (``scale`` = c)."""

    family: str = "gaussian"
    scale: float = 1.0

    def __post_init__(self):
        if self.family not in ("gaussian", "laplace"):
            raise DomainError("scalar law must be gaussian or laplace")
        if self.scale <= 0:
            raise DomainError("scale must be positive")

    def cf(self, t):
        t = np.asarray(t, dtype=float)
        if self.family == "gaussian":
            return np.exp(-0.5 * self.scale * t * t)
        return 1.0 / (1.0 + (self.scale * t) ** 2)

    def sample(self, rng, n):
        if self.family == "gaussian":
            return rng.normal(0.0, math.sqrt(self.scale), n)
        return rng.laplace(0.0, self.scale, n)

    def moment(self, k: int) -> float:
        """``E[A^k]`` for even ``k``."""
        if k % 2:
            return 0.0
        if self.family == "gaussian":
            return self.scale ** (k // 2) * math.prod(range(k - 1, 0, -2))
        return math.factorial(k) * self.scale ** k


@dataclass(frozen=True)
class TwoPoint:
    """Zero-mean two-point law: ``b_plus`` w.p. ``prob``, else
    ``-b_plus*prob/(1-prob)``."""

    b_plus: float = 1.0
    prob: float = 0.25

    def __post_init__(self):
        if not 0 < self.prob < 1 or self.b_plus <= 0:
            raise DomainError("need 0 < prob < 1 and b_plus > 0")

    @property
    def atoms(self) -> Tuple[Tuple[float, float], ...]:
        b_minus = -self.b_plus * self.prob / (1.0 - self.prob)
        return ((self.b_plus, self.prob), (b_minus, 1.0 - self.prob))

    def moment(self, k: int) -> float:
        return sum(p * b ** k for b, p in self.atoms)

    def sample(self, rng, n):
        (b1, p1), (b2, _) = self.atoms
        return np.where(rng.random(n) < p1, b1, b2)
