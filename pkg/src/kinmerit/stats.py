"""Two-sample Student's t-test with the t distribution evaluated through the
regularized incomplete beta function (continued fraction, modified Lentz)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

_MAX_ITER = 10_000
_EPS = 1e-16
_TINY = 1e-300


class InsufficientDataError(ValueError):
    pass


@dataclass(frozen=True)
class TTestResult:
    t_statistic: float
    degrees_of_freedom: int | float
    p_two_tailed: float
    degenerate: bool = False


def _beta_cf(a: float, b: float, x: float) -> float:
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, _MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h
    raise ArithmeticError(f"incomplete beta did not converge for a={a}, b={b}, x={x}")


def betainc(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta I_x(a, b) for a, b > 0 and 0 <= x <= 1."""
    if a <= 0 or b <= 0:
        raise ValueError("a and b must be positive")
    if not 0.0 <= x <= 1.0:
        raise ValueError("x must lie in [0, 1]")
    if x == 0.0 or x == 1.0:
        return x
    log_front = (math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
                 + a * math.log(x) + b * math.log1p(-x))
    front = math.exp(log_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_cf(a, b, x) / a
    return 1.0 - front * _beta_cf(b, a, 1.0 - x) / b


def t_two_tailed_p(t: float, df: float) -> float:
    """P(|T| >= |t|) for Student's t with ``df`` degrees of freedom."""
    if df <= 0:
        raise ValueError("degrees of freedom must be positive")
    if math.isinf(t):
        return 0.0
    if t == 0.0:
        return 1.0
    x = df / (df + t * t)
    return min(1.0, max(0.0, betainc(df / 2.0, 0.5, x)))


def t_cdf(t: float, df: float) -> float:
    tail = 0.5 * t_two_tailed_p(t, df)
    return 1.0 - tail if t > 0 else tail


def _mean_var(xs: Sequence[float]) -> tuple[float, float]:
    n = len(xs)
    m = math.fsum(xs) / n
    return m, math.fsum((x - m) ** 2 for x in xs) / (n - 1)


def students_t_test(sample_a: Sequence[float], sample_b: Sequence[float],
                    welch: bool = False) -> TTestResult:
    """Two-sample t-test, pooled variance by default (Welch's variant on request).

    When both samples have zero variance the statistic is 0/0 or x/0; the
    result is then flagged ``degenerate`` with t = 0, p = 1 for equal means
    and t = +-inf, p = 0 otherwise.
    """
    a = [float(v) for v in sample_a]
    b = [float(v) for v in sample_b]
    na, nb = len(a), len(b)
    if na < 2 or nb < 2:
        raise InsufficientDataError(f"need at least 2 observations per sample, got {na} and {nb}")
    ma, va = _mean_var(a)
    mb, vb = _mean_var(b)
    diff = ma - mb
    if welch:
        qa, qb = va / na, vb / nb
        se2 = qa + qb
        df: int | float = (se2 * se2 / (qa * qa / (na - 1) + qb * qb / (nb - 1))
                           if se2 > 0 else float(na + nb - 2))
    else:
        df = na + nb - 2
        se2 = ((na - 1) * va + (nb - 1) * vb) / df * (1.0 / na + 1.0 / nb)
    if se2 == 0.0:
        if diff == 0.0:
            return TTestResult(0.0, df, 1.0, degenerate=True)
        return TTestResult(math.copysign(math.inf, diff), df, 0.0, degenerate=True)
    t = diff / math.sqrt(se2)
    return TTestResult(t, df, t_two_tailed_p(t, df))
