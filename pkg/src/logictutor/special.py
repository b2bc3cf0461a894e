"""Regularized incomplete gamma and beta functions, implemented in-house.

The statistical tests need chi-square, F, and Student-t survival functions;
all three reduce to the regularized incomplete gamma or beta.  Rather than
assuming a scientific stack, these use the classic series / continued
fraction pairs (Numerical Recipes style) on top of ``math.lgamma``, which
is accurate to ~1e-14 relative over the parameter ranges exercised here.
"""

from __future__ import annotations

import math

__all__ = [
    "regularized_gamma_p",
    "regularized_gamma_q",
    "regularized_beta",
    "chi2_sf",
    "f_sf",
    "student_t_sf",
]

_EPS = 1e-16
_MAX_ITER = 500
_TINY = 1e-300


def _gamma_series(a: float, x: float) -> float:
    # Lower series: P(a, x) = x^a e^-x / Gamma(a) * sum x^n / (a)_(n+1)
    term = 1.0 / a
    total = term
    n = a
    for _ in range(_MAX_ITER):
        n += 1.0
        term *= x / n
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))

def _gamma_cf(a: float, x: float) -> float:
    # Upper continued fraction (modified Lentz): Q(a, x).
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return h * math.exp(-x + a * math.log(x) - math.lgamma(a))


def regularized_gamma_p(a: float, x: float) -> float:
    """P(a, x), the regularized lower incomplete gamma function."""
    if a <= 0:
        raise ValueError("a must be positive")
    if x < 0:
        raise ValueError("x must be non-negative")
    if x == 0:
        return 0.0
    if x < a + 1.0:
        return _gamma_series(a, x)
    return 1.0 - _gamma_cf(a, x)


def regularized_gamma_q(a: float, x: float) -> float:
    """Q(a, x) = 1 - P(a, x), the regularized upper incomplete gamma."""
    if a <= 0:
        raise ValueError("a must be positive")
    if x < 0:
        raise ValueError("x must be non-negative")
    if x == 0:
        return 1.0
    if x < a + 1.0:
        return 1.0 - _gamma_series(a, x)
    return _gamma_cf(a, x)


def _beta_cf(a: float, b: float, x: float) -> float:
    # Continued fraction for the incomplete beta (modified Lentz).
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
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
            break
    return h


def regularized_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b), the regularized incomplete beta function."""
    if a <= 0 or b <= 0:
        raise ValueError("a and b must be positive")
    if x < 0 or x > 1:
        raise ValueError("x must be in [0, 1]")
    if x == 0.0 or x == 1.0:
        return x
    front = math.exp(
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    # The continued fraction converges fast for x below the distribution mean.
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_cf(a, b, x) / a
    return 1.0 - front * _beta_cf(b, a, 1.0 - x) / b


def chi2_sf(x: float, df: int) -> float:
    """Chi-square survival function P(X >= x)."""
    if df <= 0:
        raise ValueError("df must be positive")
    if x < 0:
        return 1.0
    if df == 1:
        # Equivalent to Q(1/2, x/2) but cheaper and exact at the boundary.
        return math.erfc(math.sqrt(x / 2.0))
    return regularized_gamma_q(df / 2.0, x / 2.0)


def f_sf(f: float, df_num: float, df_den: float) -> float:
    """F-distribution survival function P(F >= f)."""
    if df_num <= 0 or df_den <= 0:
        raise ValueError("degrees of freedom must be positive")
    if f <= 0:
        return 1.0
    x = df_den / (df_den + df_num * f)
    return regularized_beta(df_den / 2.0, df_num / 2.0, x)


def student_t_sf(t: float, df: float) -> float:
    """Two-sided Student-t survival function P(|T| >= |t|)."""
    if df <= 0:
        raise ValueError("df must be positive")
    if t == 0:
        return 1.0
    x = df / (df + t * t)
    return regularized_beta(df / 2.0, 0.5, x)
