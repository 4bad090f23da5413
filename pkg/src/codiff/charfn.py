"""Characteristic functions: empirical and analytic providers, mixtures,
and a grid diagnostic for unimodality along rays.

A provider evaluates ``phi(theta) = E[exp(i <theta, V>)]`` for a real
argument vector of fixed dimension.  Providers are immutable; evaluation
is vectorised over leading axes of the argument array.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

WEIGHT_TOL = 1e-12
UNIMODAL_TOL = 1e-9


class DomainError(ValueError):
    """Raised when an operation is called outside its mathematical domain."""


@dataclass(frozen=True)
class PairedSample:
    """Two equal-length columns of i.i.d. observations."""

    xs: np.ndarray
    ys: np.ndarray

    def __post_init__(self):
        xs = np.asarray(self.xs, dtype=float)
        ys = np.asarray(self.ys, dtype=float)
        if xs.ndim != 1 or ys.ndim != 1 or xs.shape != ys.shape:
            raise DomainError("xs and ys must be 1-D arrays of equal length")
        if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(ys))):
            raise DomainError("sample contains non-finite values")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)

    def __len__(self):
        return self.xs.size

    @classmethod
    def coerce(cls, data) -> "PairedSample":
        if isinstance(data, cls):
            return data
        if isinstance(data, np.ndarray) and data.ndim == 1:
            # a single column: only the lcf is meaningful
            return cls(data, data)
        xs, ys = data
        return cls(xs, ys)

    def combine(self, a: float, b: float) -> np.ndarray:
        """Return the column ``a*xs + b*ys`` (exact for a, b in {0, +-1})."""
        if b == 0:
            return self.xs if a == 1 else a * self.xs
        if a == 0:
            return self.ys if b == 1 else b * self.ys
        if a == 1 and b == 1:
            return self.xs + self.ys
        if a == 1 and b == -1:
            return self.xs - self.ys
        return a * self.xs + b * self.ys


def _as_sample(sample) -> np.ndarray:
    x = np.asarray(sample, dtype=float).ravel()
    if x.size == 0:
        raise DomainError("empty sample")
    return x


def ecf(sample, theta: float) -> complex:
    """Empirical characteristic function ``mean(exp(i*theta*X_k))``."""
    x = _as_sample(sample)
    arg = theta * x
    return complex(np.mean(np.cos(arg)), np.mean(np.sin(arg)))


def ecf_real(sample, theta: float) -> float:
    """Real part of the ecf, ``mean(cos(theta*X_k))``."""
    x = _as_sample(sample)
    return float(np.mean(np.cos(theta * x)))


class CharFn:
    """A characteristic function of a ``dim``-dimensional law.

    Parameters
    ----------
    fn : callable
        Maps an array of shape ``(..., dim)`` to complex (or real) values
        of shape ``(...)``.
    dim : int
        Dimension of the argument.
    kind : {"analytic", "empirical"}
    """

    def __init__(self, fn: Callable[[np.ndarray], np.ndarray], dim: int,
                 kind: str = "analytic", name: str = ""):
        if dim < 1:
            raise DomainError("dimension must be >= 1")
        if kind not in ("analytic", "empirical"):
            raise DomainError(f"unknown provider kind {kind!r}")
        self._fn = fn
        self.dim = dim
        self.kind = kind
        self.name = name

    def eval(self, theta) -> np.ndarray:
        t = np.asarray(theta, dtype=float)
        if self.dim == 1 and (t.ndim == 0 or t.shape[-1] != 1):
            t = t[..., None]
        if t.shape[-1] != self.dim:
            raise DomainError(f"argument has dimension {t.shape[-1]}, "
                              f"expected {self.dim}")
        out = np.asarray(self._fn(t))
        # phi(0) = 1 exactly, whatever rounding the formula does
        zero = np.all(t == 0, axis=-1)
        if np.any(zero):
            out = np.where(zero, 1.0, out)
        return out

    def __call__(self, *theta) -> complex:
        if len(theta) == 1 and np.ndim(theta[0]) > 0:
            theta = tuple(np.asarray(theta[0], dtype=float))
        val = self.eval(np.asarray(theta, dtype=float))
        return complex(val)

    def real(self, *theta) -> float:
        return self(*theta).real

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"<CharFn{label} dim={self.dim} kind={self.kind}>"


def empirical_cf(data) -> CharFn:
    """Empirical provider from an ``(n, d)`` array, a 1-D sample or a
    :class:`PairedSample`."""
    if isinstance(data, PairedSample):
        arr = np.column_stack([data.xs, data.ys])
    else:
        arr = np.asarray(data, dtype=float)
        if arr.ndim == 1:
            arr = arr[:, None]
    if arr.shape[0] == 0:
        raise DomainError("empty sample")

    def fn(t):
        arg = t @ arr.T  # (..., n)
        return np.mean(np.cos(arg), axis=-1) + 1j * np.mean(np.sin(arg), axis=-1)

    return CharFn(fn, arr.shape[1], kind="empirical", name="ecf")


def gaussian_cf(cov) -> CharFn:
    """Centred Gaussian with covariance ``cov`` (scalar for 1-D)."""
    cov = np.atleast_2d(np.asarray(cov, dtype=float))
    d = cov.shape[0]

    def fn(t):
        q = np.einsum("...i,ij,...j->...", t, cov, t)
        return np.exp(-0.5 * q)

    return CharFn(fn, d, name="gaussian")


def elliptical_cf(f: Callable[[np.ndarray], np.ndarray], shape) -> CharFn:
    """Provider ``phi(t) = f(<t, shape t>)``."""
    shape = np.atleast_2d(np.asarray(shape, dtype=float))

    def fn(t):
        return f(np.einsum("...i,ij,...j->...", t, shape, t))

    return CharFn(fn, shape.shape[0], name="elliptical")


def product_cf(*cfs: CharFn) -> CharFn:
    """Characteristic function of a sum of independent vectors."""
    dims = {c.dim for c in cfs}
    if len(dims) != 1:
        raise DomainError("components must share a dimension")

    def fn(t):
        out = 1.0
        for c in cfs:
            out = out * c.eval(t)
        return out

    return CharFn(fn, dims.pop(), name="product")


def linear_map_cf(cf: CharFn, matrix) -> CharFn:
    """Provider of ``M V`` given the provider of ``V``: phi(t) = phi_V(M^T t)."""
    m = np.atleast_2d(np.asarray(matrix, dtype=float))
    if m.shape[1] != cf.dim:
        raise DomainError("matrix columns must match provider dimension")
    return CharFn(lambda t: cf.eval(t @ m), m.shape[0], kind=cf.kind,
                  name=f"linear({cf.name})")


def marginal_cf(cf: CharFn, coeffs) -> CharFn:
    """One-dimensional provider of ``<coeffs, V>``."""
    return linear_map_cf(cf, np.asarray(coeffs, dtype=float)[None, :])


def mixture_cf(components: Sequence[CharFn], weights: Sequence[float],
               tol: float = WEIGHT_TOL) -> CharFn:
    """Mixture ``sum_k p_k phi_k``."""
    comps = list(components)
    w = np.asarray(weights, dtype=float)
    if len(comps) == 0 or len(comps) != w.size:
        raise DomainError("need one weight per component")
    if np.any(w < 0) or abs(w.sum() - 1.0) > tol:
        raise DomainError(f"weights must be nonnegative and sum to 1 (got {w.sum()!r})")
    if len({c.dim for c in comps}) != 1:
        raise DomainError("components must share a dimension")

    def fn(t):
        out = 0.0
        for p, c in zip(w, comps):
            out = out + p * c.eval(t)
        return out

    return CharFn(fn, comps[0].dim, name="mixture")


@dataclass(frozen=True)
class RayCheck:
    """Outcome of :func:`check_ray_unimodality`.

    ``first_violation`` indexes the grid point whose value exceeds its
    predecessor by more than the tolerance.
    """

    unimodal: bool
    first_violation: Optional[int] = None
    location: Optional[float] = None

    def __bool__(self):
        return self.unimodal


def check_ray_unimodality(cf: CharFn, direction, grid,
                          tol: float = UNIMODAL_TOL) -> RayCheck:
    """Check that ``s -> re phi(s * direction)`` does not increase on ``grid``.

    This samples the ray, so a ``True`` result is evidence only; it does not
    prove unimodality between grid points.
    """
    v = np.atleast_1d(np.asarray(direction, dtype=float))
    s = np.asarray(grid, dtype=float)
    if not np.any(v):
        raise DomainError("direction must be nonzero")
    if s.ndim != 1 or s.size == 0 or s[0] <= 0 or np.any(np.diff(s) <= 0):
        raise DomainError("grid must be strictly increasing and start above 0")
    vals = np.real(cf.eval(s[:, None] * v[None, :]))
    vals = np.concatenate([[1.0], vals])
    bad = np.nonzero(vals[1:] > vals[:-1] + tol)[0]
    if bad.size == 0:
        return RayCheck(True)
    i = int(bad[0])
    return RayCheck(False, i, float(s[i]))
