"""Model records: each bundles a joint characteristic function, a sampler
and whatever closed-form measures are known for the family.

Pairs are ordered ``(x, y)``.  For process models the pair is the later
value first, ``(X(t + lag), X(t))``, which matches the time-average
estimators; all catalog processes are reversible so the order does not
change any measure.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from typing import ClassVar, Dict, Mapping, Optional, Tuple

import numpy as np
from scipy.signal import lfilter

from ..charfn import CharFn, DomainError, PairedSample, gaussian_cf, mixture_cf
from ..estimation import Trajectory
from .expansions import burst_pair_cf, levy_codiff
from .laws import (BrownianExponent, ConstantMixing, GammaMixing, LevyExponent, MixingLaw,
                   ScalarLaw, TwoPoint, symmetric_stable_rvs)


def _cov2(var_x: float, var_y: float, rho: float) -> np.ndarray:
    if var_x < 0 or var_y < 0:
        raise DomainError("variances must be nonnegative")
    if not -1.0 <= rho <= 1.0:
        raise DomainError("correlation must lie in [-1, 1]")
    c = rho * math.sqrt(var_x * var_y)
    return np.array([[var_x, c], [c, var_y]])


def _log_cosh(a: float) -> float:
    return float(np.logaddexp(a, -a)) - math.log(2.0)


def _gaussian_pairs(rng: np.random.Generator, cov: np.ndarray, n: int):
    z1 = rng.standard_normal(n)
    z2 = rng.standard_normal(n)
    sx = math.sqrt(cov[0, 0])
    x = sx * z1
    if sx > 0:
        b = cov[0, 1] / sx
        rest = max(cov[1, 1] - b * b, 0.0)
        y = b * z1 + math.sqrt(rest) * z2
    else:
        y = math.sqrt(cov[1, 1]) * z2
    return x, y


def _parse_bool(raw: str) -> bool:
    low = str(raw).strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise DomainError(f"not a boolean: {raw!r}")


def _parse_float(key: str, raw) -> float:
    try:
        return float(raw)
    except (TypeError, ValueError):
        raise DomainError(f"parameter {key!r} expects a number, got {raw!r}") from None


class Model:
    """Base class for catalog entries."""

    tag: ClassVar[str] = ""
    process: ClassVar[bool] = False
    aliases: ClassVar[Dict[str, str]] = {}

    def cf(self) -> CharFn:
        raise NotImplementedError

    def closed_form(self, theta: float) -> Dict[str, float]:
        """Entries of :class:`MeasureSet` with an explicit formula."""
        return {}

    def sample_pairs(self, n: int, rng: np.random.Generator) -> PairedSample:
        raise NotImplementedError

    def sample_path(self, T: int, rng: np.random.Generator) -> Trajectory:
        raise DomainError(f"{self.tag} is not a process model")

    @classmethod
    def param_names(cls):
        return sorted(set(f.name for f in dataclasses.fields(cls)) | set(cls.aliases))

    @classmethod
    def from_params(cls, params: Mapping[str, str]) -> "Model":
        """Build from flat ``key=value`` strings; list values use ``:``."""
        fmap = {f.name: f for f in dataclasses.fields(cls)}
        kwargs = {}
        for key, raw in params.items():
            name = cls.aliases.get(key, key)
            if name not in fmap:
                raise DomainError(f"unknown parameter {key!r} for {cls.tag}; "
                                  f"valid: {', '.join(cls.param_names())}")
            kwargs[name] = _convert(key, raw, fmap[name])
        return cls(**kwargs)


def _convert(key: str, raw, f: dataclasses.Field):
    default = f.default
    if default is dataclasses.MISSING and f.default_factory is not dataclasses.MISSING:
        default = f.default_factory()
    if not isinstance(raw, str):
        return raw
    if isinstance(default, bool):
        return _parse_bool(raw)
    if isinstance(default, int):
        try:
            return int(raw)
        except ValueError:
            raise DomainError(f"parameter {key!r} expects an integer, got {raw!r}") from None
    if isinstance(default, tuple):
        return tuple(_parse_float(key, v) for v in raw.split(":"))
    if isinstance(default, str):
        return raw
    return _parse_float(key, raw)


# -- Gaussian scale mixtures ------------------------------------------------

class _ScaleMixture(Model):
    """``sqrt(S) * G`` with ``G`` a centred Gaussian pair and ``S`` independent."""

    @property
    def law(self) -> MixingLaw:
        raise NotImplementedError

    @property
    def cov(self) -> np.ndarray:
        raise NotImplementedError

    def cf(self) -> CharFn:
        cov = self.cov
        psi = self.law.psi

        def fn(t):
            q = 0.5 * np.einsum("...i,ij,...j->...", t, cov, t)
            return np.exp(-psi(q))

        return CharFn(fn, 2, name=self.tag)

    def _psis(self, theta: float):
        c = self.cov
        half = 0.5 * theta * theta
        psi = self.law.psi
        return (float(psi(half * c[0, 0])), float(psi(half * c[1, 1])),
                float(psi(half * (c[0, 0] + c[1, 1] + 2 * c[0, 1]))),
                float(psi(half * (c[0, 0] + c[1, 1] - 2 * c[0, 1]))))

    def closed_form(self, theta):
        if theta == 0:
            raise DomainError("theta must be nonzero")
        px, py, pp, pm = self._psis(theta)
        t2 = theta * theta
        return {"lcf_x": 2.0 * px / t2, "lcf_y": 2.0 * py / t2,
                "scdf": (pp - pm) / (2.0 * t2),
                "acdf_plus": (px + py - pm) / t2,
                "acdf_minus": -(px + py - pp) / t2,
                "dynfun": math.exp(-pm) - math.exp(-px - py)}

    def sample_pairs(self, n, rng):
        s = self.law.sample(rng, n)
        x, y = _gaussian_pairs(rng, self.cov, n)
        r = np.sqrt(s)
        return PairedSample(r * x, r * y)


@dataclass(frozen=True)
class GaussianPair(_ScaleMixture):
    var_x: float = 1.0
    var_y: float = 1.0
    rho: float = 0.0
    tag: ClassVar[str] = "gaussian_pair"

    def __post_init__(self):
        _cov2(self.var_x, self.var_y, self.rho)

    @property
    def law(self):
        return ConstantMixing(1.0)

    @property
    def cov(self):
        return _cov2(self.var_x, self.var_y, self.rho)

    def cf(self):
        return gaussian_cf(self.cov)

    def closed_form(self, theta):
        c = self.cov
        t2 = theta * theta
        out = {"lcf_x": c[0, 0], "lcf_y": c[1, 1], "scdf": c[0, 1],
               "acdf_plus": c[0, 1], "acdf_minus": c[0, 1]}
        out["dynfun"] = (math.exp(-0.5 * t2 * (c[0, 0] + c[1, 1] - 2 * c[0, 1]))
                         - math.exp(-0.5 * t2 * (c[0, 0] + c[1, 1])))
        return out

    def sample_pairs(self, n, rng):
        return PairedSample(*_gaussian_pairs(rng, self.cov, n))


@dataclass(frozen=True)
class PsiMixture(_ScaleMixture):
    """Gaussian pair with a random variance factor given by its Laplace
    exponent; the measures are linear in ``psi``."""

    mixing: MixingLaw = field(default_factory=lambda: GammaMixing(1.0, 0.5))
    var_x: float = 1.0
    var_y: float = 1.0
    rho: float = 0.0
    tag: ClassVar[str] = "psi_mixture"

    def __post_init__(self):
        _cov2(self.var_x, self.var_y, self.rho)

    @property
    def law(self):
        return self.mixing

    @property
    def cov(self):
        return _cov2(self.var_x, self.var_y, self.rho)

    @classmethod
    def param_names(cls):
        return sorted({"var_x", "var_y", "rho", "mixing", "shape", "rate", "value", "index"})

    @classmethod
    def from_params(cls, params):
        law, used = MixingLaw.from_params(params)
        rest = {k: v for k, v in params.items() if k not in used}
        for key in rest:
            if key not in ("var_x", "var_y", "rho"):
                raise DomainError(f"unknown parameter {key!r} for {cls.tag}; "
                                  f"valid: {', '.join(cls.param_names())}")
        return cls(law, **{k: _parse_float(k, v) for k, v in rest.items()})


@dataclass(frozen=True)
class VarianceGammaPair(_ScaleMixture):
    """Unit-correlation-``rho`` Gaussian pair scaled by ``S ~ Gamma(shape, 1/2)``."""

    shape: float = 1.0
    rho: float = 0.5
    tag: ClassVar[str] = "variance_gamma_pair"
    aliases: ClassVar[Dict[str, str]] = {"alpha": "shape"}

    def __post_init__(self):
        if self.shape <= 0:
            raise DomainError("shape must be positive")
        if not -1 < self.rho < 1:
            raise DomainError("rho must lie in (-1, 1)")

    @property
    def law(self):
        return GammaMixing(self.shape, 0.5)

    @property
    def cov(self):
        return _cov2(1.0, 1.0, self.rho)

    def closed_form(self, theta):
        # unit-shape forms times the shape keeps the scaling exact
        t2 = theta * theta
        a = self.shape
        lx = math.log1p(t2)
        lp = math.log1p(2 * t2 * (1 + self.rho))
        lm = math.log1p(2 * t2 * (1 - self.rho))
        return {"lcf_x": a * (2.0 * lx / t2), "lcf_y": a * (2.0 * lx / t2),
                "scdf": a * ((lp - lm) / (2.0 * t2)),
                "acdf_plus": a * ((2.0 * lx - lm) / t2),
                "acdf_minus": a * (-(2.0 * lx - lp) / t2),
                "dynfun": math.exp(-a * lm) - math.exp(-2.0 * a * lx)}


@dataclass(frozen=True)
class LaplaceSpherical2D(_ScaleMixture):
    """Spherical bivariate Laplace law with cf ``1/(1 + scale^2 |t|^2)``."""

    scale: float = 1.0
    tag: ClassVar[str] = "laplace_spherical_2d"

    def __post_init__(self):
        if self.scale <= 0:
            raise DomainError("scale must be positive")

    @property
    def law(self):
        return GammaMixing(1.0, 1.0)

    @property
    def cov(self):
        return 2.0 * self.scale ** 2 * np.eye(2)


# -- symmetric stable -----------------------------------------------------

@dataclass(frozen=True)
class SymmetricStable(Model):
    """``X = c Z1``, ``Y = c (b Z1 + Z2)`` with i.i.d. standard symmetric
    ``alpha``-stable ``Z`` (cf ``exp(-|t|^alpha)``) and coupling ``b``."""

    alpha: float = 1.5
    c: float = 1.0
    coupling: float = 0.5
    tag: ClassVar[str] = "symmetric_stable"

    def __post_init__(self):
        if not 0 < self.alpha <= 2:
            raise DomainError("alpha must lie in (0, 2]")
        if self.c <= 0:
            raise DomainError("c must be positive")

    def cf(self):
        a, c, b = self.alpha, self.c, self.coupling

        def fn(t):
            u, v = t[..., 0], t[..., 1]
            return np.exp(-np.abs(c * (u + b * v)) ** a - np.abs(c * v) ** a)

        return CharFn(fn, 2, name=self.tag)

    def closed_form(self, theta):
        if theta == 0:
            raise DomainError("theta must be nonzero")
        a, b = self.alpha, self.coupling
        k = self.c ** a * abs(theta) ** (a - 2.0)
        return {"lcf_x": 2.0 * k, "lcf_y": 2.0 * k * (1.0 + abs(b) ** a),
                "scdf": 0.5 * k * (abs(1 + b) ** a - abs(1 - b) ** a),
                "acdf_plus": k * (1.0 + abs(b) ** a - abs(1 - b) ** a),
                "acdf_minus": k * (abs(1 + b) ** a - 1.0 - abs(b) ** a),
                "dynfun": (math.exp(-(self.c * abs(theta)) ** a * (abs(1 - b) ** a + 1.0))
                           - math.exp(-(self.c * abs(theta)) ** a * (2.0 + abs(b) ** a)))}

    def sample_pairs(self, n, rng):
        z1 = symmetric_stable_rvs(rng, self.alpha, 1.0, n)
        z2 = symmetric_stable_rvs(rng, self.alpha, 1.0, n)
        return PairedSample(self.c * z1, self.c * (self.coupling * z1 + z2))


# -- finite Gaussian mixtures ---------------------------------------------

@dataclass(frozen=True)
class DiscreteGaussianMixture(Model):
    """Mixture of centred Gaussian pairs given entrywise."""

    weights: Tuple[float, ...] = (0.5, 0.5)
    var_x: Tuple[float, ...] = (1.0, 4.0)
    var_y: Tuple[float, ...] = (1.0, 4.0)
    cov_xy: Tuple[float, ...] = (0.5, -1.0)
    tag: ClassVar[str] = "discrete_gaussian_mixture"

    def __post_init__(self):
        k = len(self.weights)
        if not (len(self.var_x) == len(self.var_y) == len(self.cov_xy) == k) or k == 0:
            raise DomainError("need one variance/covariance triple per weight")
        p = np.asarray(self.weights, dtype=float)
        if np.any(p < 0) or abs(p.sum() - 1.0) > 1e-12:
            raise DomainError("weights must be a probability vector")
        for vx, vy, c in zip(self.var_x, self.var_y, self.cov_xy):
            if vx < 0 or vy < 0 or c * c > vx * vy * (1 + 1e-12):
                raise DomainError("component covariance is not positive semidefinite")

    def covs(self):
        return [np.array([[vx, c], [c, vy]])
                for vx, vy, c in zip(self.var_x, self.var_y, self.cov_xy)]

    def cf(self):
        return mixture_cf([gaussian_cf(c) for c in self.covs()], self.weights)

    def sample_pairs(self, n, rng):
        k = rng.choice(len(self.weights), size=n, p=np.asarray(self.weights))
        x = np.empty(n)
        y = np.empty(n)
        for j, c in enumerate(self.covs()):
            idx = np.nonzero(k == j)[0]
            x[idx], y[idx] = _gaussian_pairs(rng, c, idx.size)
        return PairedSample(x, y)


@dataclass(frozen=True)
class CrossShaped(Model):
    """Equal mixture of ``N(diag(1, s2))`` and ``N(diag(s2, 1))``; the
    rotated variant mixes unit-variance pairs with correlation ``+-rho``."""

    sigma2: float = 0.04
    rotated: bool = False
    rho: Optional[float] = None
    tag: ClassVar[str] = "cross_shaped"

    def __post_init__(self):
        if not 0 <= self.sigma2 <= 1:
            raise DomainError("sigma2 must lie in [0, 1]")
        if self.rho is not None and not -1 <= self.rho <= 1:
            raise DomainError("rho must lie in [-1, 1]")

    @property
    def corr(self) -> float:
        if self.rho is not None:
            return self.rho
        return (1.0 - self.sigma2) / (1.0 + self.sigma2)

    def covs(self):
        if self.rotated:
            r = self.corr
            return [_cov2(1.0, 1.0, r), _cov2(1.0, 1.0, -r)]
        s = self.sigma2
        return [np.diag([1.0, s]), np.diag([s, 1.0])]

    def cf(self):
        return mixture_cf([gaussian_cf(c) for c in self.covs()], [0.5, 0.5])

    def closed_form(self, theta):
        if theta == 0:
            raise DomainError("theta must be nonzero")
        t2 = theta * theta
        if self.rotated:
            r = self.corr
            lc = _log_cosh(r * t2)
            return {"lcf_x": 1.0, "lcf_y": 1.0, "scdf": 0.0,
                    "acdf_plus": lc / t2, "acdf_minus": -lc / t2,
                    "dynfun": 0.5 * (math.exp(-t2 * (1 - r)) + math.exp(-t2 * (1 + r)))
                    - math.exp(-t2)}
        s = self.sigma2
        arg = 0.25 * t2 * (1.0 - s)
        lc = _log_cosh(arg)
        return {"lcf_x": 0.5 * (1 + s) - 2.0 / t2 * lc,
                "lcf_y": 0.5 * (1 + s) - 2.0 / t2 * lc,
                "scdf": 0.0,
                "acdf_plus": -2.0 / t2 * lc, "acdf_minus": 2.0 / t2 * lc,
                "dynfun": -0.25 * (math.exp(-t2 * s) + math.exp(-t2)
                                   - 2.0 * math.exp(-0.5 * t2 * (1 + s)))}

    def sample_pairs(self, n, rng):
        branch = rng.random(n) < 0.5
        c0, c1 = self.covs()
        x0, y0 = _gaussian_pairs(rng, c0, n)
        x1, y1 = _gaussian_pairs(rng, c1, n)
        return PairedSample(np.where(branch, x0, x1), np.where(branch, y0, y1))


@dataclass(frozen=True)
class BulkTail(Model):
    """Bulk pair with probability ``p``, otherwise ``w`` times a tail pair
    (one indicator for both coordinates)."""

    p: float = 0.9
    w: float = 1000.0
    bulk_var: float = 1.0
    bulk_rho: float = 0.0
    tail_var: float = 1.0
    tail_rho: float = 0.0
    tag: ClassVar[str] = "bulk_tail"

    def __post_init__(self):
        if not 0 < self.p < 1:
            raise DomainError("p must lie in (0, 1)")
        if self.w <= 0:
            raise DomainError("w must be positive")
        if self.tail_var <= 0:
            raise DomainError("the tail component must not be degenerate at 0")
        _cov2(self.bulk_var, self.bulk_var, self.bulk_rho)
        _cov2(self.tail_var, self.tail_var, self.tail_rho)

    def cf(self):
        bulk = _cov2(self.bulk_var, self.bulk_var, self.bulk_rho)
        tail = self.w ** 2 * _cov2(self.tail_var, self.tail_var, self.tail_rho)
        return mixture_cf([gaussian_cf(bulk), gaussian_cf(tail)], [self.p, 1.0 - self.p])

    def limits(self, theta: float = 1.0) -> Dict[str, float]:
        """``w -> inf`` limits: the bulk measures with the lost-mass offset."""
        t2 = theta * theta
        lnp = math.log(self.p)
        c = self.bulk_var * self.bulk_rho
        return {"lcf_x": self.bulk_var - 2.0 * lnp / t2,
                "lcf_y": self.bulk_var - 2.0 * lnp / t2,
                "scdf": c, "acdf_plus": c - lnp / t2, "acdf_minus": c + lnp / t2}

    def sample_pairs(self, n, rng):
        bulk = rng.random(n) < self.p
        xb, yb = _gaussian_pairs(rng, _cov2(self.bulk_var, self.bulk_var, self.bulk_rho), n)
        xt, yt = _gaussian_pairs(rng, _cov2(self.tail_var, self.tail_var, self.tail_rho), n)
        return PairedSample(np.where(bulk, xb, self.w * xt), np.where(bulk, yb, self.w * yt))


# -- compound and product constructions -----------------------------------

@dataclass(frozen=True)
class RandomSum(Model):
    """Sums of ``N ~ Poisson(lam)`` i.i.d. Gaussian summand pairs."""

    lam: float = 2.0
    var_x: float = 1.0
    var_y: float = 1.0
    rho: float = 0.0
    tag: ClassVar[str] = "random_sum"
    aliases: ClassVar[Dict[str, str]] = {"lambda": "lam"}

    def __post_init__(self):
        if self.lam <= 0:
            raise DomainError("lambda must be positive")
        _cov2(self.var_x, self.var_y, self.rho)

    def cf(self):
        cov = _cov2(self.var_x, self.var_y, self.rho)
        lam = self.lam

        def fn(t):
            q = np.einsum("...i,ij,...j->...", t, cov, t)
            return np.exp(lam * np.expm1(-0.5 * q))

        return CharFn(fn, 2, name=self.tag)

    def closed_form(self, theta):
        if theta == 0:
            raise DomainError("theta must be nonzero")
        c = _cov2(self.var_x, self.var_y, self.rho)
        t2 = theta * theta
        lam = self.lam
        fx = math.exp(-0.5 * t2 * c[0, 0])
        fy = math.exp(-0.5 * t2 * c[1, 1])
        fm = math.exp(-0.5 * t2 * (c[0, 0] + c[1, 1] - 2 * c[0, 1]))
        fp = math.exp(-0.5 * t2 * (c[0, 0] + c[1, 1] + 2 * c[0, 1]))
        return {"lcf_x": 2.0 * lam / t2 * (1.0 - fx),
                "lcf_y": 2.0 * lam / t2 * (1.0 - fy),
                "scdf": lam / (2.0 * t2) * (fm - fp),
                "acdf_plus": lam / t2 * (fm - fx - fy + 1.0),
                "acdf_minus": -lam / t2 * (fp - fx - fy + 1.0),
                "dynfun": math.exp(lam * (fm - 1.0)) - math.exp(lam * (fx + fy - 2.0))}

    def sample_pairs(self, n, rng):
        counts = rng.poisson(self.lam, n)
        x, y = _gaussian_pairs(rng, _cov2(self.var_x, self.var_y, self.rho), n)
        r = np.sqrt(counts)
        return PairedSample(r * x, r * y)


@dataclass(frozen=True)
class AmplitudeProduct(Model):
    """``X = A``, ``Y = B A`` with symmetric ``A`` and a zero-mean
    two-point ``B`` independent of ``A``."""

    a_law: str = "laplace"
    a_scale: float = 1.0
    b_plus: float = 1.0
    b_prob: float = 0.25
    tag: ClassVar[str] = "amplitude_product"

    def __post_init__(self):
        ScalarLaw(self.a_law, self.a_scale)
        TwoPoint(self.b_plus, self.b_prob)

    @property
    def a(self) -> ScalarLaw:
        return ScalarLaw(self.a_law, self.a_scale)

    @property
    def b(self) -> TwoPoint:
        return TwoPoint(self.b_plus, self.b_prob)

    def cf(self):
        a = self.a
        atoms = self.b.atoms

        def fn(t):
            u, v = t[..., 0], t[..., 1]
            return sum(p * a.cf(u + v * bv) for bv, p in atoms)

        return CharFn(fn, 2, name=self.tag)

    def sample_pairs(self, n, rng):
        a = self.a.sample(rng, n)
        b = self.b.sample(rng, n)
        return PairedSample(a, b * a)


# -- processes ----------------------------------------------------------

@dataclass(frozen=True)
class Levy(Model):
    """Pair ``(X_{t1}, X_{t2})`` of a symmetric Lévy process started at 0."""

    exponent: LevyExponent = field(default_factory=BrownianExponent)
    t1: float = 1.0
    t2: float = 3.0
    tag: ClassVar[str] = "levy"
    process: ClassVar[bool] = True

    def __post_init__(self):
        if self.t1 < 0 or self.t2 < 0:
            raise DomainError("times must be nonnegative")

    @classmethod
    def param_names(cls):
        return sorted({"t1", "t2", "process", "sigma2", "alpha", "c", "rate", "jump_var"})

    @classmethod
    def from_params(cls, params):
        exp, used = LevyExponent.from_params(params)
        rest = {k: v for k, v in params.items() if k not in used}
        for key in rest:
            if key not in ("t1", "t2"):
                raise DomainError(f"unknown parameter {key!r} for {cls.tag}; "
                                  f"valid: {', '.join(cls.param_names())}")
        return cls(exp, **{k: _parse_float(k, v) for k, v in rest.items()})

    def cf(self):
        psi = self.exponent
        t1, t2 = self.t1, self.t2

        def fn(t):
            u, v = t[..., 0], t[..., 1]
            if t1 <= t2:
                return np.exp(t1 * psi(u + v) + (t2 - t1) * psi(v))
            return np.exp(t2 * psi(u + v) + (t1 - t2) * psi(u))

        return CharFn(fn, 2, name=self.tag)

    def closed_form(self, theta):
        if theta == 0:
            raise DomainError("theta must be nonzero")
        t2_ = theta * theta
        p = float(self.exponent(theta))
        out = {"lcf_x": -2.0 * self.t1 * p / t2_, "lcf_y": -2.0 * self.t2 * p / t2_}
        for kind in ("scdf", "acdf_plus", "acdf_minus", "dynfun"):
            out[kind] = levy_codiff(self.exponent, self.t1, self.t2, theta, kind)
        return out

    def sample_pairs(self, n, rng):
        lo, hi = sorted((self.t1, self.t2))
        first = self.exponent.increments(rng, lo, n)
        second = first + self.exponent.increments(rng, hi - lo, n)
        if self.t1 <= self.t2:
            return PairedSample(first, second)
        return PairedSample(second, first)

    def sample_path(self, T, rng):
        return Trajectory(np.cumsum(self.exponent.increments(rng, 1.0, T)))


@dataclass(frozen=True)
class AR1Gaussian(Model):
    """Stationary Gaussian AR(1) with coefficient ``a`` and variance ``var``;
    the pair is taken at ``lag``."""

    a: float = 0.5
    var: float = 1.0
    lag: int = 1
    tag: ClassVar[str] = "ar1_gaussian"
    process: ClassVar[bool] = True

    def __post_init__(self):
        if not -1 < self.a < 1:
            raise DomainError("a must lie in (-1, 1)")
        if self.var <= 0:
            raise DomainError("var must be positive")
        if self.lag < 0:
            raise DomainError("lag must be nonnegative")

    def pair_cov(self) -> np.ndarray:
        c = self.var * self.a ** self.lag
        return np.array([[self.var, c], [c, self.var]])

    def cf(self):
        return gaussian_cf(self.pair_cov())

    def closed_form(self, theta):
        return GaussianPair(self.var, self.var, self.a ** self.lag).closed_form(theta)

    def sample_pairs(self, n, rng):
        x0 = math.sqrt(self.var) * rng.standard_normal(n)
        k = self.a ** self.lag
        xt = k * x0 + math.sqrt(self.var * (1.0 - k * k)) * rng.standard_normal(n)
        return PairedSample(xt, x0)

    def sample_path(self, T, rng):
        if T < 2:
            raise DomainError("T must be >= 2")
        e = math.sqrt(self.var * (1.0 - self.a ** 2)) * rng.standard_normal(T)
        e[0] = math.sqrt(self.var) * rng.standard_normal()
        return Trajectory(lfilter([1.0], [1.0, -self.a], e))


@dataclass(frozen=True)
class Burst(Model):
    """Alternating two-state process.  State ``k`` lasts ``Exp(lam_k)`` and
    runs a Gaussian AR(1) with coefficient ``a_k`` and variance ``var_k``;
    every switch restarts the state process from its stationary law."""

    lam1: float = 1.0
    lam2: float = 10.0
    a1: float = 0.5
    var1: float = 1.0
    a2: float = 0.5
    var2: float = 25.0
    lag: int = 1
    tag: ClassVar[str] = "burst"
    process: ClassVar[bool] = True

    def __post_init__(self):
        if self.lam1 <= 0 or self.lam2 <= 0:
            raise DomainError("rates must be positive")
        for a, v in ((self.a1, self.var1), (self.a2, self.var2)):
            if not -1 < a < 1 or v <= 0:
                raise DomainError("state AR coefficients must lie in (-1, 1) "
                                  "and variances be positive")
        if self.lag < 0:
            raise DomainError("lag must be nonnegative")

    @property
    def pi1(self) -> float:
        m1, m2 = 1.0 / self.lam1, 1.0 / self.lam2
        return m1 / (m1 + m2)

    def state_cfs(self, lag: Optional[int] = None):
        lag = self.lag if lag is None else lag
        return [AR1Gaussian(a, v, lag).cf()
                for a, v in ((self.a1, self.var1), (self.a2, self.var2))]

    def cf(self):
        return burst_pair_cf(self.lam1, self.lam2, self.state_cfs(), self.lag)

    def sample_pairs(self, n, rng):
        lam = np.array([self.lam1, self.lam2])
        a = np.array([self.a1, self.a2])
        v = np.array([self.var1, self.var2])
        pi = np.array([self.pi1, 1.0 - self.pi1])
        tau = self.lag
        k0 = np.where(rng.random(n) < pi[0], 0, 1)
        stay_p = np.exp(-lam[k0] * tau)
        stay = rng.random(n) < stay_p
        # state at tau given at least one switch
        big = math.exp(-(self.lam1 + self.lam2) * tau)
        p_same = pi[k0] + (1.0 - pi[k0]) * big
        with np.errstate(invalid="ignore", divide="ignore"):
            same_given_switch = np.where(stay_p < 1.0, (p_same - stay_p) / (1.0 - stay_p), 1.0)
        same = rng.random(n) < same_given_switch
        k1 = np.where(same, k0, 1 - k0)
        x0 = np.sqrt(v[k0]) * rng.standard_normal(n)
        z = rng.standard_normal(n)
        coef = a[k0] ** tau
        linked = coef * x0 + np.sqrt(v[k0] * (1.0 - coef * coef)) * z
        fresh = np.sqrt(v[k1]) * z
        return PairedSample(np.where(stay, linked, fresh), x0)

    def _renewals(self, T: int, k0: int, rng) -> np.ndarray:
        rates = (self.lam1, self.lam2)
        cycle = 1.0 / rates[0] + 1.0 / rates[1]
        m = 2 * (int(T / cycle) + 32)
        times = np.empty(0)
        start = 0.0
        k = k0
        while start <= T:
            scale = np.empty(m)
            scale[0::2] = 1.0 / rates[k]
            scale[1::2] = 1.0 / rates[1 - k]
            steps = rng.exponential(scale)
            chunk = start + np.cumsum(steps)
            times = np.concatenate([times, chunk])
            start = chunk[-1]
            # m is even, so the next chunk starts in state k again
        return times

    def sample_path(self, T, rng):
        if T < 2:
            raise DomainError("T must be >= 2")
        k0 = 0 if rng.random() < self.pi1 else 1
        times = self._renewals(T, k0, rng)
        grid = np.arange(T, dtype=float)
        counts = np.searchsorted(times, grid, side="right")
        state = (k0 + counts) % 2
        start = np.ones(T, dtype=bool)
        start[1:] = counts[1:] != counts[:-1]
        a = np.array([self.a1, self.a2])
        v = np.array([self.var1, self.var2])
        z = rng.standard_normal(T)
        e = np.where(start, np.sqrt(v[state]), np.sqrt(v[state] * (1.0 - a[state] ** 2))) * z
        x = np.empty(T)
        for k in (0, 1):
            idx = np.nonzero(state == k)[0]
            if idx.size == 0:
                continue
            y = lfilter([1.0], [1.0, -a[k]], e[idx])
            starts = start[idx]
            first = np.nonzero(starts)[0]
            seg = np.cumsum(starts) - 1
            s0 = first[seg]
            # remove the carry-over from earlier segments of the same state
            prev = np.where(s0 > 0, y[np.maximum(s0 - 1, 0)], 0.0)
            power = np.arange(idx.size) - s0 + 1
            x[idx] = y - a[k] ** power * prev
        return Trajectory(x)
