"""Plug-in estimators from i.i.d. pairs and from single stationary paths,
with delta-method variances, confidence intervals and a zero test.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Tuple

import numpy as np
from scipy.special import ndtr, ndtri

from .charfn import CharFn, DomainError, PairedSample, ecf_real
from .measures import (COMBINATIONS, COMBO_NAMES, LOG_WEIGHTS, MINUS, PLUS, X, Y,
                       Combo, MeasureKind, from_phis, is_flagged)


@dataclass(frozen=True)
class Trajectory:
    """Equally spaced observations of one stationary path."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float).ravel()
        if v.size < 2:
            raise DomainError("trajectory needs at least two points")
        if not np.all(np.isfinite(v)):
            raise DomainError("trajectory contains non-finite values")
        object.__setattr__(self, "values", v)

    def __len__(self):
        return self.values.size


@dataclass(frozen=True)
class MeasureEstimate:
    kind: MeasureKind
    theta: float
    value: float
    asympt_variance: float
    n: int
    ci_level: float
    ci: Tuple[float, float]
    flagged: bool = False
    failed: Tuple[str, ...] = field(default=())

    @property
    def stderr(self) -> float:
        return math.sqrt(self.asympt_variance / self.n)


def _add(c1: Combo, c2: Combo, sign: float = 1.0) -> Combo:
    return (c1[0] + sign * c2[0], c1[1] + sign * c2[1])


class _PhiTable:
    """Memoised ``re phi`` at linear combinations of the two coordinates."""

    def __init__(self, fn: Callable[[Combo], float]):
        self._fn = fn
        self._cache: Dict[Combo, float] = {}

    def __getitem__(self, combo: Combo) -> float:
        combo = (float(combo[0]) + 0.0, float(combo[1]) + 0.0)
        if combo == (0.0, 0.0):
            return 1.0
        if combo not in self._cache:
            self._cache[combo] = self._fn(combo)
        return self._cache[combo]

    def cov(self, a: Combo, b: Combo) -> float:
        """``C_{A,B} = (phi_{A+B} + phi_{A-B})/2 - phi_A phi_B``."""
        return 0.5 * (self[_add(a, b)] + self[_add(a, b, -1.0)]) - self[a] * self[b]


def _sample_table(data: PairedSample, theta: float) -> _PhiTable:
    return _PhiTable(lambda c: ecf_real(data.combine(*c), theta))


def _cf_table(cf: CharFn, theta: float) -> _PhiTable:
    if cf.dim == 1:
        return _PhiTable(lambda c: float(np.real(cf.eval(c[0] * theta))))
    return _PhiTable(lambda c: float(np.real(cf.eval((c[0] * theta, c[1] * theta)))))


def _gradient(kind: MeasureKind, theta: float, tab: _PhiTable) -> Dict[Combo, float]:
    if kind is MeasureKind.DYNFUN:
        return {MINUS: 1.0, X: -tab[Y], Y: -tab[X]}
    t2 = theta * theta
    return {c: w / (t2 * tab[c]) for c, w in LOG_WEIGHTS[kind].items()}


def _failed(kind: MeasureKind, tab: _PhiTable) -> Tuple[str, ...]:
    if kind is MeasureKind.DYNFUN:
        return ()
    return tuple(COMBO_NAMES[c] for c in LOG_WEIGHTS[kind] if tab[c] <= 0)


def _variance(kind: MeasureKind, theta: float, tab: _PhiTable) -> float:
    if _failed(kind, tab):
        return math.nan
    g = _gradient(kind, theta, tab)
    combos = list(g)
    var = 0.0
    for i, a in enumerate(combos):
        var += g[a] * g[a] * tab.cov(a, a)
        for b in combos[i + 1:]:
            var += 2.0 * g[a] * g[b] * tab.cov(a, b)
    # rounding can leave a tiny negative for degenerate data
    return max(var, 0.0)


def _bias(kind: MeasureKind, theta: float, tab: _PhiTable, n: int) -> float:
    """First-order bias ``(1/2n) sum H_jk C_jk`` of the plug-in estimator."""
    if kind is MeasureKind.DYNFUN:
        return -tab.cov(X, Y) / n
    t2 = theta * theta
    total = 0.0
    for c, w in LOG_WEIGHTS[kind].items():
        total += -w / (t2 * tab[c] ** 2) * tab.cov(c, c)
    return 0.5 * total / n


def _check_theta(kind: MeasureKind, theta: float):
    if not math.isfinite(theta):
        raise DomainError("theta must be finite")
    if theta == 0 and kind is not MeasureKind.DYNFUN:
        raise DomainError("theta must be nonzero")


def plugin_phis(data, kind, theta: float = 1.0) -> Dict[Combo, float]:
    """``re`` of the ecf at each linear combination the measure needs."""
    data = PairedSample.coerce(data)
    kind = MeasureKind.parse(kind)
    if len(data) == 0:
        raise DomainError("empty sample")
    tab = _sample_table(data, theta)
    return {c: tab[c] for c in COMBINATIONS[kind]}


def estimate_measure(data, kind, theta: float = 1.0,
                     bias_correction: bool = False) -> float:
    """Plug-in estimate; ``inf``/``nan`` when a logarithm's argument is <= 0.

    With ``bias_correction`` the first-order bias of the plug-in estimator
    is subtracted.
    """
    data = PairedSample.coerce(data)
    kind = MeasureKind.parse(kind)
    if len(data) == 0:
        raise DomainError("empty sample")
    _check_theta(kind, theta)
    tab = _sample_table(data, theta)
    value = from_phis(kind, theta, {c: tab[c] for c in COMBINATIONS[kind]})
    if bias_correction and not is_flagged(value) and not _failed(kind, tab):
        value -= _bias(kind, theta, tab, len(data))
    return value


def asymptotic_variance(data, kind, theta: float = 1.0) -> float:
    """Plug-in estimate of the variance of ``sqrt(n) (estimate - truth)``.

    Returns ``nan`` (unreliable) when a required ``re phi`` is <= 0.
    """
    data = PairedSample.coerce(data)
    kind = MeasureKind.parse(kind)
    if len(data) == 0:
        raise DomainError("empty sample")
    _check_theta(kind, theta)
    return _variance(kind, theta, _sample_table(data, theta))


def population_asymptotic_variance(cf: CharFn, kind, theta: float = 1.0) -> float:
    """Same variance formula evaluated with a known characteristic function."""
    kind = MeasureKind.parse(kind)
    _check_theta(kind, theta)
    if kind is not MeasureKind.LCF and cf.dim != 2:
        raise DomainError("pair measures need a 2-dimensional provider")
    return _variance(kind, theta, _cf_table(cf, theta))


def first_order_bias(data, kind, theta: float = 1.0) -> float:
    data = PairedSample.coerce(data)
    kind = MeasureKind.parse(kind)
    _check_theta(kind, theta)
    return _bias(kind, theta, _sample_table(data, theta), len(data))


def confidence_interval(value: float, asympt_variance: float, n: int,
                        level: float = 0.95) -> Tuple[float, float]:
    """``value -+ z * sqrt(variance / n)`` with ``z`` the upper
    ``(1-level)/2`` normal quantile."""
    if not 0.0 < level < 1.0:
        raise DomainError("level must lie in (0, 1)")
    if n < 1:
        raise DomainError("n must be >= 1")
    if asympt_variance < 0:
        raise DomainError("variance must be nonnegative")
    if asympt_variance == 0:
        return (value, value)
    half = float(ndtri(0.5 + 0.5 * level)) * math.sqrt(asympt_variance / n)
    return (value - half, value + half)


def estimate(data, kind, theta: float = 1.0, level: float = 0.95,
             bias_correction: bool = False) -> MeasureEstimate:
    """Estimate with variance and confidence interval in one record."""
    data = PairedSample.coerce(data)
    kind = MeasureKind.parse(kind)
    if len(data) == 0:
        raise DomainError("empty sample")
    _check_theta(kind, theta)
    tab = _sample_table(data, theta)
    n = len(data)
    value = from_phis(kind, theta, {c: tab[c] for c in COMBINATIONS[kind]})
    failed = _failed(kind, tab)
    var = _variance(kind, theta, tab)
    flagged = is_flagged(value) or bool(failed)
    if bias_correction and not flagged:
        value -= _bias(kind, theta, tab, n)
    if flagged:
        ci = (math.nan, math.nan)
    else:
        ci = confidence_interval(value, var, n, level)
    return MeasureEstimate(kind, theta, value, var, n, level, ci, flagged, failed)


def zero_dependence_test(data, kind, theta: float = 1.0) -> float:
    """Two-sided p-value for ``measure == 0`` at one fixed ``theta``."""
    est = estimate(data, kind, theta)
    if est.flagged or not math.isfinite(est.asympt_variance):
        raise DomainError("test refused: estimate or variance is unreliable "
                          f"(nonpositive ecf at {', '.join(est.failed) or 'n/a'})")
    if est.asympt_variance == 0:
        return 0.0 if est.value != 0 else 1.0
    z = math.sqrt(est.n) * est.value / math.sqrt(est.asympt_variance)
    return 2.0 * float(ndtr(-abs(z)))


def time_avg_measure(traj, lag: int, kind, theta: float = 1.0) -> float:
    """Time-averaged measure from overlapping pairs ``(X(t+tau), X(tau))``.

    The lcf at a given lag is computed from the leading values
    ``X(t+tau)``, ``tau = 1..T-t``.
    """
    if not isinstance(traj, Trajectory):
        traj = Trajectory(traj)
    kind = MeasureKind.parse(kind)
    _check_theta(kind, theta)
    lag = int(lag)
    T = len(traj)
    if lag < 0 or lag >= T:
        raise DomainError(f"lag must lie in [0, {T - 1}]")
    x = traj.values
    pairs = PairedSample(x[lag:], x[:T - lag])
    tab = _sample_table(pairs, theta)
    return from_phis(kind, theta, {c: tab[c] for c in COMBINATIONS[kind]})


def time_avg_sweep(traj, lags: Iterable[int], kinds: Iterable,
                   thetas: Iterable[float]) -> List[dict]:
    """Records ``{lag, measure, theta, estimate, flagged}`` for every
    combination, sorted by (lag, measure, theta)."""
    if not isinstance(traj, Trajectory):
        traj = Trajectory(traj)
    out = []
    for lag in sorted(set(int(l) for l in lags)):
        for kind in sorted({MeasureKind.parse(k) for k in kinds}, key=lambda k: k.value):
            for theta in sorted(set(thetas)):
                value = time_avg_measure(traj, lag, kind, theta)
                out.append({"lag": lag, "measure": kind.value, "theta": theta,
                            "estimate": value, "flagged": is_flagged(value)})
    return out
