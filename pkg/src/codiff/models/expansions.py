"""Asymptotic expansions and closed forms that are not tied to one model
record: mixture limits, conditionally Gaussian expansions, Lévy processes
and the two-state burst process.

Coefficients here were derived from the definitions of the measures and
checked against exact evaluation; see DISCREPANCIES.md for the places
where they differ from other published forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from ..charfn import CharFn, DomainError
from ..measures import MeasureKind, scdf


# -- mixtures -------------------------------------------------------------

def _check_weights(weights) -> np.ndarray:
    p = np.asarray(weights, dtype=float)
    if p.ndim != 1 or p.size == 0 or np.any(p < 0) or abs(p.sum() - 1.0) > 1e-12:
        raise DomainError("weights must be a probability vector")
    return p


def mixture_lcf(weights: Sequence[float], component_lcfs: Sequence[float],
                theta: float = 1.0) -> float:
    """lcf of a mixture from the component lcfs,
    ``-(2/theta^2) ln sum_k p_k exp(-theta^2 l_k / 2)``.

    The result lies between ``min l_k`` and ``sum p_k l_k``.
    """
    if theta == 0:
        raise DomainError("theta must be nonzero")
    p = _check_weights(weights)
    l = np.asarray(component_lcfs, dtype=float)
    if l.shape != p.shape or not np.all(np.isfinite(l)):
        raise DomainError("need one finite lcf per weight")
    t2 = theta * theta
    # shift by the minimum so the exponentials never underflow to zero
    lmin = l.min()
    keep = p > 0
    s = np.sum(p[keep] * np.exp(-0.5 * t2 * (l[keep] - lmin)))
    return float(lmin - 2.0 / t2 * math.log(s))


def large_scale_offset(p1: float, theta: float = 1.0) -> float:
    """Limit of ``l(wX) - l(wX_1)`` as ``w -> inf`` when component 1 has
    the slowest decaying cf: ``-(2/theta^2) ln p1``."""
    if not 0 < p1 <= 1:
        raise DomainError("p1 must lie in (0, 1]")
    return -2.0 / theta ** 2 * math.log(p1)


def small_scale_lcf(p1: float, phi1, eps: float, theta: float = 1.0) -> float:
    """Leading term ``(2 p1 / theta^2)(1 - phi_1(eps theta))`` of ``l(eps X)``
    as ``eps -> 0`` when component 1 dominates near the origin.

    ``phi1`` is the real characteristic function of component 1.
    """
    if not 0 < p1 <= 1:
        raise DomainError("p1 must lie in (0, 1]")
    return 2.0 * p1 / theta ** 2 * (1.0 - float(np.real(phi1(eps * theta))))


def high_prob_lcf(lcf1: float, phi1: float, phi2: float, eps: float,
                  theta: float = 1.0, order: int = 1) -> float:
    """Expansion of the lcf of ``X_1`` w.p. ``1-eps`` and ``X_2`` w.p. ``eps``.

    ``phi1``, ``phi2`` are the component cfs at ``theta``; the series in
    ``r = phi2/phi1 - 1`` is truncated after ``order`` terms.
    """
    if order < 1:
        raise DomainError("order must be >= 1")
    if phi1 <= 0:
        raise DomainError("phi1 must be positive")
    r = phi2 / phi1 - 1.0
    total = sum((-eps * r) ** k / k for k in range(1, order + 1))
    return lcf1 + 2.0 / theta ** 2 * total


def discrete_gaussian_lcf(weights: Sequence[float], variances: Sequence[float],
                          w: float, theta: float = 1.0) -> float:
    """Large-``w`` expansion of ``l(w sqrt(S) X)`` for a discrete variance
    mixture with strictly increasing variances."""
    p = _check_weights(weights)
    s2 = np.asarray(variances, dtype=float)
    if s2.shape != p.shape:
        raise DomainError("need one variance per weight")
    if np.any(np.diff(s2) <= 0) or s2[0] < 0:
        raise DomainError("variances must be nonnegative and strictly increasing")
    t2 = theta * theta
    tail = np.sum(p[1:] * np.exp(-0.5 * w * w * (s2[1:] - s2[0]) * t2))
    return float(w * w * s2[0] - 2.0 / t2 * math.log(p[0]) - 2.0 / (p[0] * t2) * tail)


def continuous_gaussian_lcf(sigma0_sq: float, alpha: float, L: float, w: float,
                            theta: float = 1.0) -> float:
    """Large-``w`` form of ``l(w sqrt(S) X)`` when ``S`` has density
    ``L s^alpha`` near its left edge ``sigma0_sq`` (constant ``L``)."""
    if alpha <= -1 or L <= 0 or w <= 0:
        raise DomainError("need alpha > -1, L > 0 and w > 0")
    t2 = theta * theta
    return (w * w * sigma0_sq
            + 2.0 / t2 * (2.0 * (1.0 + alpha) * math.log(w)
                          - math.log(math.gamma(1.0 + alpha) * L))
            + 2.0 / t2 * (1.0 + alpha) * math.log(t2 / 2.0))


def mixture_asymptotics(kind: str, params: Mapping[str, object], scale: float = 0.0,
                        theta: float = 1.0) -> float:
    """Dispatch to one of the mixture expansions.

    ``kind`` is one of ``large_scale``, ``small_scale``, ``high_prob``,
    ``discrete_gaussian`` or ``continuous_gaussian``; ``scale`` is ``w``
    for the large-scale kinds and ``eps`` for the others.
    """
    if kind == "large_scale":
        return large_scale_offset(float(params["p1"]), theta)
    if kind == "small_scale":
        return small_scale_lcf(float(params["p1"]), params["phi1"], scale, theta)
    if kind == "high_prob":
        return high_prob_lcf(float(params["lcf1"]), float(params["phi1"]),
                             float(params["phi2"]), scale, theta,
                             int(params.get("order", 1)))
    if kind == "discrete_gaussian":
        return discrete_gaussian_lcf(params["weights"], params["variances"], scale, theta)
    if kind == "continuous_gaussian":
        return continuous_gaussian_lcf(float(params["sigma0_sq"]), float(params["alpha"]),
                                       float(params.get("L", 1.0)), scale, theta)
    raise DomainError(f"unknown expansion kind {kind!r}")


# -- conditionally Gaussian vectors ---------------------------------------

@dataclass(frozen=True)
class WeakMoments:
    """``E[R e^{-(S1+S2)/2}]`` and ``E[e^{-(S1+S2)/2}]`` for the weakly
    dependent covariance ``[[S1, eps R], [eps R, S2]]``."""

    r_weighted: float
    weight: float


@dataclass(frozen=True)
class StrongMoments:
    """Weighted moments of ``W`` for ``[[S, aS - eps W], [aS - eps W, a^2 S]]``.

    ``wu[k] = E[W^k e^{-uS}]`` with ``u = (1-a)^2/2`` and ``wv[k]`` the same
    with ``v = (1+a)^2/2``, for ``k = 0, 1, 2``.
    """

    alpha: float
    wu: tuple
    wv: tuple


def weak_moments(r, s1, s2, probs=None) -> WeakMoments:
    """Moments from atoms (or equally weighted draws) of ``(R, S1, S2)``."""
    r, s1, s2 = (np.asarray(a, dtype=float) for a in (r, s1, s2))
    p = np.full(r.shape, 1.0 / r.size) if probs is None else np.asarray(probs, dtype=float)
    e = np.exp(-0.5 * (s1 + s2))
    return WeakMoments(float(np.sum(p * r * e)), float(np.sum(p * e)))


def strong_moments(w, s, alpha: float, probs=None) -> StrongMoments:
    w, s = np.asarray(w, dtype=float), np.asarray(s, dtype=float)
    p = np.full(w.shape, 1.0 / w.size) if probs is None else np.asarray(probs, dtype=float)
    eu = np.exp(-0.5 * (1.0 - alpha) ** 2 * s)
    ev = np.exp(-0.5 * (1.0 + alpha) ** 2 * s)
    wu = tuple(float(np.sum(p * w ** k * eu)) for k in range(3))
    wv = tuple(float(np.sum(p * w ** k * ev)) for k in range(3))
    return StrongMoments(alpha, wu, wv)


def cond_gaussian_expansion(kind: str, moments, eps: float, order: int = 2) -> float:
    """Small-``eps`` scdf (at unit frequency) of a conditionally Gaussian pair.

    Weak kind: ``s = eps m1 + O(eps^3)`` with
    ``m1 = E[R e^{-(S1+S2)/2}] / E[e^{-(S1+S2)/2}]``.  The scdf is odd in
    ``eps`` here, so the second-order coefficient vanishes.

    Strong kind: with ``a_k``, ``b_k`` the normalised moments of ``W`` under
    weights ``e^{-uS}``, ``e^{-vS}``,
    ``s = s(X, aX) - eps (a1 + b1)/2 + eps^2 (a2 - a1^2 - b2 + b1^2)/4``.

    For other frequencies scale all covariance entries by ``theta^2`` and
    divide the result by ``theta^2``.
    """
    if order not in (1, 2):
        raise DomainError("only orders 1 and 2 are supported")
    if kind == "weak":
        if moments.weight <= 0:
            raise DomainError("weight expectation must be positive")
        return eps * moments.r_weighted / moments.weight
    if kind == "strong":
        u0, u1, u2 = moments.wu
        v0, v1, v2 = moments.wv
        if u0 <= 0 or v0 <= 0:
            raise DomainError("weight expectations must be positive")
        a1, a2 = u1 / u0, u2 / u0
        b1, b2 = v1 / v0, v2 / v0
        base = 0.5 * math.log(u0 / v0)
        out = base - 0.5 * eps * (a1 + b1)
        if order == 2:
            out += 0.25 * eps * eps * (a2 - a1 * a1 - b2 + b1 * b1)
        return out
    raise DomainError("kind must be 'weak' or 'strong'")


# -- Lévy processes ---------------------------------------------------------

def levy_codiff(exponent, t1: float, t2: float, theta: float = 1.0,
                kind="scdf") -> float:
    """Measures of the pair ``(X_{t1}, X_{t2})`` of a symmetric Lévy process
    with exponent ``Psi`` (``E e^{i theta X_t} = e^{t Psi(theta)}``).

    With ``m = min(t1, t2)``: ``scdf = -m Psi(2 theta)/(2 theta^2)``,
    ``acdf_plus = -2 m Psi(theta)/theta^2``,
    ``acdf_minus = -m (Psi(2 theta) - 2 Psi(theta))/theta^2`` and
    ``dynfun = e^{|t2-t1| Psi(theta)} - e^{(t1+t2) Psi(theta)}``.
    """
    kind = MeasureKind.parse(kind)
    if t1 < 0 or t2 < 0:
        raise DomainError("times must be nonnegative")
    psi1 = float(exponent(theta))
    if psi1 > 0:
        raise DomainError("exponent must be nonpositive for a symmetric process")
    m = min(t1, t2)
    if kind is MeasureKind.DYNFUN:
        return math.exp(abs(t2 - t1) * psi1) - math.exp((t1 + t2) * psi1)
    if theta == 0:
        raise DomainError("theta must be nonzero")
    t2_ = theta * theta
    psi2 = float(exponent(2.0 * theta))
    if kind is MeasureKind.SCDF:
        return -m * psi2 / (2.0 * t2_)
    if kind is MeasureKind.ACDF_PLUS:
        return -2.0 * m * psi1 / t2_
    if kind is MeasureKind.ACDF_MINUS:
        return -m * (psi2 - 2.0 * psi1) / t2_
    raise DomainError("the lcf is a one-time quantity; use -2 t Psi(theta)/theta^2")


# -- two-state burst process -----------------------------------------------

def _stationary(lam1: float, lam2: float):
    if lam1 <= 0 or lam2 <= 0:
        raise DomainError("rates must be positive")
    m1, m2 = 1.0 / lam1, 1.0 / lam2
    return m1 / (m1 + m2), m2 / (m1 + m2)


def burst_pair_cf(lam1: float, lam2: float, state_cfs: Sequence[CharFn],
                  tau: float) -> CharFn:
    """Joint cf of ``(X(tau), X(0))`` for the alternating two-state process.

    State ``k`` lasts ``Exp(lam_k)`` and runs the stationary process whose
    lag-``tau`` pair cf is ``state_cfs[k]``.  Every switch resets memory, so
    values separated by a switch are independent draws from the state
    marginals.
    """
    if tau < 0:
        raise DomainError("lag must be nonnegative")
    if len(state_cfs) != 2 or any(c.dim != 2 for c in state_cfs):
        raise DomainError("need two pair providers")
    pi = _stationary(lam1, lam2)
    lam = (lam1, lam2)
    big = math.exp(-(lam1 + lam2) * tau)
    stay = [math.exp(-l * tau) for l in lam]
    trans = [[pi[j] + ((1.0 - pi[j]) if j == k else -pi[j]) * big for j in range(2)]
             for k in range(2)]

    def fn(t):
        u = t[..., 0]
        v = t[..., 1]
        zero = np.zeros_like(u)
        marg_u = [cf.eval(np.stack([u, zero], axis=-1)) for cf in state_cfs]
        marg_v = [cf.eval(np.stack([v, zero], axis=-1)) for cf in state_cfs]
        out = 0.0
        for k in range(2):
            term = stay[k] * state_cfs[k].eval(t)
            term = term + (trans[k][k] - stay[k]) * marg_u[k] * marg_v[k]
            j = 1 - k
            term = term + trans[k][j] * marg_u[j] * marg_v[k]
            out = out + pi[k] * term
        return out

    return CharFn(fn, 2, name="burst")


def burst_scdf(lam1: float, lam2: float, state_cfs: Sequence[CharFn], tau: float,
               theta: float = 1.0) -> float:
    """scdf at lag ``tau`` of the burst process; nonfinite when a cf value
    inside the logarithm is not positive."""
    return scdf(burst_pair_cf(lam1, lam2, state_cfs, tau), theta)


def burst_scdf_perturbative(lam1: float, lam2: float, state_cfs: Sequence[CharFn],
                            tau: float, theta: float = 1.0) -> float:
    """First order in the burst occupancy ``q = pi_2`` for short bursts.

    ``s ~ s0 + (q/(2 theta^2)) m1 (2 m2 - m1) (1/N0 - 1/D0)`` where
    ``m_k`` are the state marginal cfs at ``theta``,
    ``N0 = e^{-lam1 tau} A_- + (1 - e^{-lam1 tau}) m1^2`` with
    ``A_-+ = phi_1^{(tau)}(theta, -+theta)``, ``D0`` likewise with ``A_+``,
    and ``s0 = ln(N0/D0)/(2 theta^2)``.  Terms of order ``e^{-lam2 tau}`` are
    dropped, so the form is meant for ``tau >= 1/lam2``.
    """
    if theta == 0:
        raise DomainError("theta must be nonzero")
    _, q = _stationary(lam1, lam2)
    c1, c2 = state_cfs
    m1 = float(np.real(c1.eval((theta, 0.0))))
    m2 = float(np.real(c2.eval((theta, 0.0))))
    a_minus = float(np.real(c1.eval((theta, -theta))))
    a_plus = float(np.real(c1.eval((theta, theta))))
    e1 = math.exp(-lam1 * tau)
    n0 = e1 * a_minus + (1.0 - e1) * m1 * m1
    d0 = e1 * a_plus + (1.0 - e1) * m1 * m1
    if n0 <= 0 or d0 <= 0:
        return math.nan
    t2 = theta * theta
    s0 = math.log(n0 / d0) / (2.0 * t2)
    return s0 + q / (2.0 * t2) * m1 * (2.0 * m2 - m1) * (1.0 / n0 - 1.0 / d0)


def amplitude_product_leading(e_b3: float, e_a4: float, theta: float = 1.0) -> float:
    """Leading small-theta scdf of ``(A, BA)`` with ``E[B] = 0``:
    ``-theta^2 E[B^3] E[A^4] / 6``."""
    return -theta * theta * e_b3 * e_a4 / 6.0
