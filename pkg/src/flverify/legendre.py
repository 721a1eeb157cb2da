"""Shifted Legendre polynomials P_n(2x-1) and coefficient transforms.

Normalization: a function f on (0,1) is expanded as f = sum c_n P_n(2x-1)
with int_0^1 P_n P_m = delta_{nm}/(2n+1), i.e. c_n = (2n+1) int_0^1 f P_n.

Transforms act on coefficient streams without materializing arrays:

* bonnet_multiply_x:        FL(f) -> FL(x f)
* reflect:                  FL(f) -> FL(f(1-x)),  c_n -> (-1)^n c_n
* bonnet_xf_minus_integral: FL(f) -> FL(x f - int f), defined for n >= 2
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Union

from .ball import Ball
from .constants import ConstExpr

Coefficient = Union[ConstExpr, Ball]


class Parity(enum.Enum):
    EVEN = "even"        # odd-index coefficients vanish identically
    GENERAL = "general"


class Exactness(enum.Enum):
    EXACT = "exact"           # coefficients are ConstExpr
    NUMERIC_ONLY = "numeric"


_CENTRAL_BINOM: list[Fraction] = [Fraction(1)]


def central_binomial_ratio(n: int) -> Fraction:
    """c_n = binom(2n,n)/4^n, built incrementally: c_n = c_{n-1} (2n-1)/(2n)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    while len(_CENTRAL_BINOM) <= n:
        m = len(_CENTRAL_BINOM)
        _CENTRAL_BINOM.append(_CENTRAL_BINOM[-1] * Fraction(2 * m - 1, 2 * m))
    return _CENTRAL_BINOM[n]


def shifted_legendre_eval(n: int, x: Ball, ctx=None) -> Ball:
    """P_n(2x-1) by the forward three-term recurrence with ball propagation."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if x.mid - x.rad < 0 or x.mid + x.rad > 1:
        raise ValueError("x must lie in [0, 1]")
    t = x * 2 - 1
    p_prev = Ball.exact(1)
    if n == 0:
        return p_prev
    p = t
    for k in range(1, n):
        # (k+1) P_{k+1} = (2k+1) t P_k - k P_{k-1}
        p, p_prev = (t * p * (2 * k + 1) - p_prev * k) / Ball.exact(k + 1), p
    return p


def legendre_stream(x: Ball):
    """Yields P_0(2x-1), P_1(2x-1), ... (for partial-sum evaluation)."""
    t = x * 2 - 1
    p_prev, p = Ball.exact(1), t
    yield p_prev
    yield p
    k = 1
    while True:
        p, p_prev = (t * p * (2 * k + 1) - p_prev * k) / Ball.exact(k + 1), p
        k += 1
        yield p


def shifted_legendre_zero_value(n: int) -> Fraction:
    """P_n(0) (i.e. x = 1/2): 0 for odd n, (-1)^m c_m for n = 2m."""
    if n % 2 == 1:
        return Fraction(0)
    m = n // 2
    return (-1) ** m * central_binomial_ratio(m)


def legendre_power_moment(m: int, n: int) -> Fraction:
    """int_0^1 x^m P_n(2x-1) dx = (m!)^2 / ((m-n)! (m+n+1)!), 0 for m < n."""
    if n > m:
        return Fraction(0)
    from math import factorial
    return Fraction(factorial(m) ** 2, factorial(m - n) * factorial(m + n + 1))


@dataclass
class FLSeries:
    """Lazy, memoized coefficient stream for sum c_n P_n(2x-1)."""

    coeff_fn: Callable[[int], Coefficient]
    parity: Parity = Parity.GENERAL
    decay_exponent: Optional[Fraction] = None   # |c_n| = Theta(n^-alpha)
    exactness: Exactness = Exactness.EXACT
    label: str = ""
    _memo: dict = field(default_factory=dict, repr=False)

    def coeff(self, n: int) -> Coefficient:
        if n < 0:
            raise ValueError("n must be >= 0")
        hit = self._memo.get(n)
        if hit is None:
            if self.parity is Parity.EVEN and n % 2 == 1:
                hit = ConstExpr.zero
            else:
                hit = self.coeff_fn(n)
            self._memo[n] = hit
        return hit


def bonnet_multiply_x(s: FLSeries) -> FLSeries:
    """FL series of x*f(x):
    d_n = n/(2(2n-1)) c_{n-1} + c_n/2 + (n+1)/(2(2n+3)) c_{n+1}, n >= 1,
    d_0 = c_0/2 + c_1/6.
    """

    def coeff(n: int) -> Coefficient:
        c_n = s.coeff(n)
        c_next = s.coeff(n + 1)
        if n == 0:
            return _lin(c_n, Fraction(1, 2), c_next, Fraction(1, 6))
        c_prev = s.coeff(n - 1)
        return _lin3(c_prev, Fraction(n, 2 * (2 * n - 1)),
                     c_n, Fraction(1, 2),
                     c_next, Fraction(n + 1, 2 * (2 * n + 3)))

    return FLSeries(coeff, parity=Parity.GENERAL,
                    decay_exponent=s.decay_exponent, exactness=s.exactness,
                    label=f"x*({s.label})" if s.label else "")


def reflect(s: FLSeries) -> FLSeries:
    """FL series of f(1-x): c_n -> (-1)^n c_n."""

    def coeff(n: int) -> Coefficient:
        c = s.coeff(n)
        if n % 2 == 0:
            return c
        return -c if isinstance(c, Ball) else c.scale(-1)

    return FLSeries(coeff, parity=s.parity, decay_exponent=s.decay_exponent,
                    exactness=s.exactness,
                    label=f"reflect({s.label})" if s.label else "")


class UndefinedByFormula(ValueError):
    """Index below the transform's range; the caller supplies it separately."""


def bonnet_xf_minus_integral(s: FLSeries) -> FLSeries:
    """FL series of x f(x) - int f(x) dx:
    b_n = (n-1)/(2(2n-1)) a_{n-1} + a_n/2 + (n+2)/(2(2n+3)) a_{n+1}, n >= 2.
    """

    def coeff(n: int) -> Coefficient:
        if n < 2:
            raise UndefinedByFormula(
                "transform defined for n >= 2; low coefficients depend on the "
                "integration constant")
        return _lin3(s.coeff(n - 1), Fraction(n - 1, 2 * (2 * n - 1)),
                     s.coeff(n), Fraction(1, 2),
                     s.coeff(n + 1), Fraction(n + 2, 2 * (2 * n + 3)))

    return FLSeries(coeff, parity=Parity.GENERAL,
                    decay_exponent=s.decay_exponent, exactness=s.exactness,
                    label=f"x*({s.label})-int" if s.label else "")


def _scaled(c: Coefficient, q: Fraction) -> Coefficient:
    return c * q if isinstance(c, Ball) else c.scale(q)


def _lin(c1, q1, c2, q2) -> Coefficient:
    return _scaled(c1, q1) + _scaled(c2, q2)


def _lin3(c1, q1, c2, q2, c3, q3) -> Coefficient:
    return _scaled(c1, q1) + _scaled(c2, q2) + _scaled(c3, q3)
