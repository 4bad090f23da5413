"""Population-level dispersion and dependence measures built on a
characteristic-function provider.

All codifferences are linear combinations of ``log re phi`` evaluated at a
handful of linear combinations of the two coordinates, so one table of
log-weights serves the analytic and the empirical route alike.

Nonpositive real parts are not errors.  ``log`` of such a value is taken
as ``-inf``; the lcf is then ``+inf`` and any codifference built from it is
``+-inf`` or ``nan`` according to IEEE arithmetic.  Use
:func:`is_flagged` to test a result.
"""

from __future__ import annotations

import math
from enum import Enum
from typing import Dict, Mapping, Sequence, Tuple

import numpy as np

from .charfn import CharFn, DomainError

Combo = Tuple[float, float]

X: Combo = (1.0, 0.0)
Y: Combo = (0.0, 1.0)
PLUS: Combo = (1.0, 1.0)
MINUS: Combo = (1.0, -1.0)

COMBO_NAMES = {X: "x", Y: "y", PLUS: "x+y", MINUS: "x-y"}


class MeasureKind(str, Enum):
    LCF = "lcf"
    SCDF = "scdf"
    ACDF_PLUS = "acdf_plus"
    ACDF_MINUS = "acdf_minus"
    DYNFUN = "dynfun"

    @classmethod
    def parse(cls, value) -> "MeasureKind":
        try:
            return cls(value)
        except ValueError:
            names = ", ".join(k.value for k in cls)
            raise DomainError(f"unknown measure {value!r}; expected one of {names}") from None


# value = sum_j w_j * log(re phi_j(theta)) / theta**2
LOG_WEIGHTS: Dict[MeasureKind, Dict[Combo, float]] = {
    MeasureKind.LCF: {X: -2.0},
    MeasureKind.SCDF: {MINUS: 0.5, PLUS: -0.5},
    MeasureKind.ACDF_PLUS: {MINUS: 1.0, X: -1.0, Y: -1.0},
    MeasureKind.ACDF_MINUS: {PLUS: -1.0, X: 1.0, Y: 1.0},
}

COMBINATIONS: Dict[MeasureKind, Tuple[Combo, ...]] = {
    **{k: tuple(w) for k, w in LOG_WEIGHTS.items()},
    MeasureKind.DYNFUN: (MINUS, X, Y),
}


def _log(v: float) -> float:
    return math.log(v) if v > 0 else -math.inf


def is_flagged(value: float) -> bool:
    """True when a measure value is infinite or undefined."""
    return not math.isfinite(value)


def from_phis(kind: MeasureKind, theta: float, phis: Mapping[Combo, float]) -> float:
    """Combine real cf values ``phis[combo] = re phi_{aX+bY}(theta)``.

    This is the single arithmetic core shared by population measures and
    plug-in estimators.
    """
    kind = MeasureKind(kind)
    if kind is MeasureKind.DYNFUN:
        return phis[MINUS] - phis[X] * phis[Y]
    if theta == 0:
        raise DomainError("theta must be nonzero")
    total = 0.0
    with np.errstate(invalid="ignore"):
        for combo, w in LOG_WEIGHTS[kind].items():
            total = total + w * _log(phis[combo])
    return total / (theta * theta)


def _pair_phis(cf: CharFn, kind: MeasureKind, theta: float) -> Dict[Combo, float]:
    if cf.dim != 2:
        raise DomainError(f"{kind.value} needs a 2-dimensional provider")
    return {c: float(np.real(cf.eval((c[0] * theta, c[1] * theta))))
            for c in COMBINATIONS[kind]}


def measure(cf: CharFn, kind, theta: float = 1.0) -> float:
    """Evaluate any :class:`MeasureKind` on a provider."""
    kind = MeasureKind.parse(kind)
    if kind is MeasureKind.LCF:
        return lcf(cf, theta)
    if kind is MeasureKind.SCDF:
        return scdf(cf, theta)
    if kind is MeasureKind.DYNFUN:
        return dynfun(cf, theta)
    return acdf(cf, theta, +1 if kind is MeasureKind.ACDF_PLUS else -1)


def lcf(cf: CharFn, theta: float = 1.0) -> float:
    """Logarithm of the characteristic function, ``-(2/theta^2) ln re phi``.

    Returns ``inf`` when ``re phi(theta) <= 0``.
    """
    if theta == 0:
        raise DomainError("theta must be nonzero")
    if cf.dim != 1:
        raise DomainError("lcf needs a 1-dimensional provider; use marginal_cf")
    phi = float(np.real(cf.eval(theta)))
    return from_phis(MeasureKind.LCF, theta, {X: phi})


def scdf_general(cf: CharFn, theta1: float, theta2: float) -> float:
    """Two-scale symmetric codifference
    ``(1/(2 t1 t2)) ln(re phi(t1,-t2) / re phi(t1,t2))``."""
    if theta1 == 0 or theta2 == 0:
        raise DomainError("both scales must be nonzero")
    if cf.dim != 2:
        raise DomainError("scdf needs a 2-dimensional provider")
    minus = float(np.real(cf.eval((theta1, -theta2))))
    plus = float(np.real(cf.eval((theta1, theta2))))
    with np.errstate(invalid="ignore"):
        total = 0.5 * _log(minus) + -0.5 * _log(plus)
    return total / (theta1 * theta2)


def scdf(cf: CharFn, theta: float = 1.0) -> float:
    """Symmetric codifference."""
    return scdf_general(cf, theta, theta)


def acdf(cf: CharFn, theta: float = 1.0, sign: int = +1) -> float:
    """Asymmetric codifference ``c_+`` (sign=+1) or ``c_-`` (sign=-1)."""
    if sign not in (1, -1):
        raise DomainError("sign must be +1 or -1")
    if theta == 0:
        raise DomainError("theta must be nonzero")
    kind = MeasureKind.ACDF_PLUS if sign > 0 else MeasureKind.ACDF_MINUS
    return from_phis(kind, theta, _pair_phis(cf, kind, theta))


def dynfun(cf: CharFn, theta: float = 1.0) -> float:
    """Dynamical functional ``re phi(t,-t) - re phi(t,0) re phi(0,t)``."""
    return from_phis(MeasureKind.DYNFUN, theta,
                     _pair_phis(cf, MeasureKind.DYNFUN, theta))


def lcf_cumulant_approx(kappas: Sequence[float], theta: float = 1.0) -> float:
    """Truncated cumulant series of the lcf.

    ``kappas`` lists the even cumulants ``k2, k4, ..., k_2m``; the series
    ``2 sum_k (-1)^k k_{2k+2} theta^{2k} / (2k+2)!`` is cut after ``m`` terms.
    No convergence check is made.
    """
    ks = list(kappas)
    if not ks:
        raise DomainError("need at least one cumulant")
    if ks[0] < 0:
        raise DomainError("second cumulant must be nonnegative")
    total = 0.0
    for k, kappa in enumerate(ks):
        total += (-1) ** k * kappa * theta ** (2 * k) / math.factorial(2 * k + 2)
    return 2.0 * total


def codiff_operator(cf: CharFn, a, b) -> float:
    """Codifference operator ``T(a, b) = (1/2) ln(re phi(a-b) / re phi(a+b))``."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1 or a.size != cf.dim:
        raise DomainError("a and b must be vectors matching the provider dimension")
    minus = float(np.real(cf.eval(a - b)))
    plus = float(np.real(cf.eval(a + b)))
    with np.errstate(invalid="ignore"):
        return 0.5 * (_log(minus) - _log(plus))


def cov_operator(second_moments, a, b) -> float:
    """Covariance operator ``<a, S b>``."""
    s = np.atleast_2d(np.asarray(second_moments, dtype=float))
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if s.shape[0] != s.shape[1] or a.shape != (s.shape[0],) or b.shape != a.shape:
        raise DomainError("dimension mismatch")
    if not np.all(np.isfinite(s)) or not np.allclose(s, s.T, rtol=0, atol=1e-12):
        raise DomainError("second-moment matrix must be finite and symmetric")
    return float(a @ s @ b)
