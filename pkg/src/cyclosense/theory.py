"""
Closed-form false-alarm control for the cyclostationary ratio statistics.

Under H0 the multi-cycle statistic is a ratio of two independent
chi-square(2) variables, i.e. F(2, 2) distributed, with CDF r / (r + 1).
The general F CDF is provided through a self-contained regularized
incomplete beta so the identity can be checked numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.stats import norm

__all__ = [
    "FDistParams",
    "pf_of_threshold",
    "threshold_for_pf",
    "regularized_incomplete_beta",
    "f_cdf",
    "h0_cdf",
    "energy_threshold",
    "baseline_ratio_threshold",
]

_CF_TOL = 1e-15
_CF_MAX_ITER = 500
_TINY = 1e-300


@dataclass(frozen=True)
class FDistParams:
    d1: float = 2.0
    d2: float = 2.0

    def __post_init__(self) -> None:
        if not (self.d1 > 0 and self.d2 > 0):
            raise ValueError("degrees of freedom must be positive")


def _check_probability(p: float, name: str = "pf") -> None:
    if not 0.0 < p < 1.0:
        raise ValueError(f"{name} must lie in (0, 1), got {p}")


def pf_of_threshold(lam: float) -> float:
    """False-alarm probability ``1 / (lam + 1)`` of the ratio test."""
    if not lam > 0:
        raise ValueError(f"threshold must be positive, got {lam}")
    return 1.0 / (lam + 1.0)


def threshold_for_pf(pf: float) -> float:
    """Threshold achieving false-alarm probability ``pf`` (inverse of :func:`pf_of_threshold`)."""
    _check_probability(pf)
    return (1.0 - pf) / pf


def _beta_continued_fraction(z: float, a: float, b: float) -> float:
    # modified Lentz evaluation of the incomplete beta continued fraction
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * z / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, _CF_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * z / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * z / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _CF_TOL:
            return h
    raise ArithmeticError(f"incomplete beta did not converge for z={z}, a={a}, b={b}")


def regularized_incomplete_beta(z: float, a: float, b: float) -> float:
    """Regularized incomplete beta function ``I_z(a, b)``.

    Evaluated with a continued fraction on whichever of ``z`` or ``1 - z``
    converges faster.

    Raises:
        ValueError: if ``z`` is outside [0, 1] or ``a``, ``b`` are not positive.
    """
    z = float(z)
    if not (a > 0 and b > 0):
        raise ValueError(f"a and b must be positive, got a={a}, b={b}")
    if not 0.0 <= z <= 1.0:
        raise ValueError(f"z must lie in [0, 1], got {z}")
    if z == 0.0:
        return 0.0
    if z == 1.0:
        return 1.0
    log_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(z)
        + b * math.log1p(-z)
    )
    front = math.exp(log_front)
    if z < (a + 1.0) / (a + b + 2.0):
        value = front * _beta_continued_fraction(z, a, b) / a
    else:
        value = 1.0 - front * _beta_continued_fraction(1.0 - z, b, a) / b
    return min(1.0, max(0.0, value))


def f_cdf(r: float, params: FDistParams = FDistParams()) -> float:
    """CDF of the F(d1, d2) distribution at ``r``."""
    if r < 0:
        raise ValueError(f"r must be >= 0, got {r}")
    if r == 0:
        return 0.0
    if math.isinf(r):
        return 1.0
    d1, d2 = params.d1, params.d2
    # z = d1 r / (d1 r + d2) and 1 - z formed separately to keep precision
    denom = d1 * r + d2
    z = d1 * r / denom
    if z > 0.5:
        return 1.0 - regularized_incomplete_beta(d2 / denom, d2 / 2.0, d1 / 2.0)
    return regularized_incomplete_beta(z, d1 / 2.0, d2 / 2.0)


def h0_cdf(r):
    """H0 CDF ``r / (r + 1)`` of the ratio statistic; works elementwise on arrays."""
    return r / (r + 1.0)


def energy_threshold(pf: float, n: int, sigma2_nominal: float = 1.0) -> float:
    """Gaussian-approximation threshold for the mean-power detector.

    Uses the nominal variance: the detector has no access to the realized one.

    Raises:
        ValueError: if ``pf`` is outside (0, 1) or ``n < 100``.
    """
    _check_probability(pf)
    if n < 100:
        raise ValueError("energy threshold needs n >= 100 for the Gaussian approximation")
    return sigma2_nominal * (1.0 + norm.isf(pf) / math.sqrt(n))


def baseline_ratio_threshold(pf: float, n: int, tau: int, tau_bar: int) -> float:
    """Threshold for ``|R(tau)| / |R(tau_bar)|`` at false-alarm probability ``pf``.

    The squared ratio equals the F(2, 2) statistic times ``(n - tau_bar) / (n - tau)``.
    """
    lam = threshold_for_pf(pf)
    return math.sqrt(lam * (n - tau_bar) / (n - tau))
