"""Ball arithmetic: midpoint-radius reals with rigorous enclosures.

Model
-----
A Ball(mid, rad) asserts the exact value lies in [mid-rad, mid+rad].
Midpoints are mpmath mpf computed at the ambient precision; radii are mpf
upper bounds.  Every operation returns a ball whose interval contains the
exact image of the operand intervals:

* rounding of the midpoint is covered by an ulp-sized addition to the
  radius (mpf +,-,*,/ round to nearest: error <= 2^(1-prec)|result|);
* mpmath transcendental functions are not correctly rounded, so their
  results carry a larger slack of 2^(6-prec)|result| (mpmath targets
  ~1-2 ulp; the factor 64 is margin, and the containment property suite
  re-checks against doubled precision);
* radius combinations are themselves computed in floating point, so each
  combined radius is inflated by (1 + 2^-40), which dominates the few
  nearest-rounded operations used to form it.

Inputs far outside these assumptions (rad >= |mid| in a division, log of
an interval touching 0, ...) raise BallDomainError rather than returning
a useless enclosure.
"""

from __future__ import annotations

from fractions import Fraction

import mpmath as mp
from mpmath import mpf

_UP = None          # lazy (1 + 2^-40) at import-time precision independence
_ARITH_SLACK = 1    # extra ulp bits for +,-,*,/
_FUNC_SLACK = 6     # extra ulp bits for library special functions


class BallDomainError(ArithmeticError):
    """Operand interval leaves the operation's domain."""


def _one_plus() -> mpf:
    global _UP
    if _UP is None:
        _UP = mpf(1) + mpf(2) ** -40
    return _UP


def _up(x):
    # upward-biased radius: covers nearest-rounding in the radius math itself
    return x * _one_plus()


def _ulp(x, extra_bits=_ARITH_SLACK):
    if x == 0:
        return mpf(2) ** (-mp.mp.prec + extra_bits)
    return mpf(2) ** (mp.mag(x) - mp.mp.prec + extra_bits)


class Ball:
    """Real number with a rigorous absolute error bound."""

    __slots__ = ("mid", "rad")

    def __init__(self, mid, rad=0):
        self.mid = mpf(mid)
        self.rad = mpf(rad)
        if self.rad < 0:
            raise ValueError("negative radius")

    # --- constructors -------------------------------------------------
    @staticmethod
    def exact(x) -> "Ball":
        """Ball of radius 0; x must be representable exactly (int/dyadic)."""
        return Ball(mpf(x), 0)

    @staticmethod
    def from_fraction(q) -> "Ball":
        q = Fraction(q)
        den = q.denominator
        mid = mpf(q.numerator) / den
        if den & (den - 1) == 0 and abs(q.numerator) < (1 << mp.mp.prec):
            return Ball(mid, 0)  # dyadic: exactly representable
        return Ball(mid, _ulp(mid))

    # --- helpers ------------------------------------------------------
    @property
    def lower(self):
        return self.mid - self.rad

    @property
    def upper(self):
        return self.mid + self.rad

    def abs_upper(self):
        return _up(abs(self.mid) + self.rad)

    def abs_lower(self):
        lo = abs(self.mid) - self.rad
        return lo if lo > 0 else mpf(0)

    def contains_zero(self) -> bool:
        return abs(self.mid) <= self.rad

    def overlaps(self, other: "Ball") -> bool:
        # comparison independent of the ambient precision
        with mp.extraprec(64):
            return abs(self.mid - other.mid) <= _up(self.rad + other.rad)

    def contains(self, x) -> bool:
        if isinstance(x, (int, Fraction)):
            x = Fraction(x)
            with mp.extraprec(64):
                diff = abs(self.mid * x.denominator - x.numerator)
                return diff <= self.rad * x.denominator
        with mp.extraprec(64):
            return abs(self.mid - x) <= self.rad

    def __repr__(self):
        return f"Ball({mp.nstr(self.mid, 20)}, rad={mp.nstr(self.rad, 3)})"

    # --- ring operations ----------------------------------------------
    @staticmethod
    def _coerce(x):
        if isinstance(x, Ball):
            return x
        if isinstance(x, Fraction):
            return Ball.from_fraction(x)
        if isinstance(x, int):
            return Ball.exact(x)
        if isinstance(x, mpf):
            return Ball(x, 0)
        raise TypeError(f"cannot coerce {type(x)!r} to Ball")

    def __neg__(self):
        return Ball(-self.mid, self.rad)

    def __add__(self, other):
        o = Ball._coerce(other)
        mid = self.mid + o.mid
        return Ball(mid, _up(self.rad + o.rad + _ulp(mid)))

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-Ball._coerce(other))

    def __rsub__(self, other):
        return Ball._coerce(other) + (-self)

    def __mul__(self, other):
        o = Ball._coerce(other)
        mid = self.mid * o.mid
        rad = _up(abs(self.mid) * o.rad + abs(o.mid) * self.rad
                  + self.rad * o.rad + _ulp(mid))
        return Ball(mid, rad)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = Ball._coerce(other)
        b = abs(o.mid)
        if b <= o.rad:
            raise BallDomainError("division by interval containing zero")
        mid = self.mid / o.mid
        rad = _up((abs(self.mid) * o.rad + b * self.rad) / (b * (b - o.rad))
                  + _ulp(mid))
        return Ball(mid, rad)

    def __rtruediv__(self, other):
        return Ball._coerce(other) / self

    def __abs__(self):
        if self.mid >= self.rad:
            return Ball(self.mid, self.rad)
        if self.mid <= -self.rad:
            return Ball(-self.mid, self.rad)
        hi = _up(max(self.mid + self.rad, self.rad - self.mid))
        half = hi / 2
        return Ball(half, _up(half))

    def powi(self, k: int) -> "Ball":
        """Integer power by repeated squaring (enclosure-safe)."""
        if k == 0:
            return Ball.exact(1)
        if k < 0:
            return Ball.exact(1) / self.powi(-k)
        result, base, e = None, self, k
        while e:
            if e & 1:
                result = base if result is None else result * base
            e >>= 1
            if e:
                base = base * base
        return result


# ---------------------------------------------------------------------
# elementary function kernel
# ---------------------------------------------------------------------

def _func_ball(mid_val, deriv_bound, rad_in) -> Ball:
    return Ball(mid_val, _up(deriv_bound * rad_in + _ulp(mid_val, _FUNC_SLACK)))


def ball_sqrt(x: Ball) -> Ball:
    lo = x.mid - x.rad
    if lo < 0:
        raise BallDomainError("sqrt of interval reaching below zero")
    mid = mp.sqrt(x.mid)
    if lo == 0:
        hi = mp.sqrt(x.mid + x.rad)
        return Ball(hi / 2, _up(hi / 2 + _ulp(hi, _FUNC_SLACK)))
    return _func_ball(mid, 1 / (2 * mp.sqrt(lo)), x.rad)


def ball_exp(x: Ball) -> Ball:
    mid = mp.exp(x.mid)
    bound = mp.exp(x.mid + x.rad)
    return _func_ball(mid, bound, x.rad)


def ball_log(x: Ball) -> Ball:
    lo = x.mid - x.rad
    if lo <= 0:
        raise BallDomainError("log of interval reaching zero")
    return _func_ball(mp.log(x.mid), 1 / lo, x.rad)


def ball_atan(x: Ball) -> Ball:
    return _func_ball(mp.atan(x.mid), 1, x.rad)


def ball_sin(x: Ball) -> Ball:
    return _func_ball(mp.sin(x.mid), 1, x.rad)


def ball_cos(x: Ball) -> Ball:
    return _func_ball(mp.cos(x.mid), 1, x.rad)


def _endpoint_deriv_bound(dfunc, x: Ball):
    # valid when |f'| attains its max over the interval at an endpoint
    return max(abs(dfunc(x.mid - x.rad)), abs(dfunc(x.mid + x.rad)))


def ball_gamma(x: Ball) -> Ball:
    """Gamma on (0, inf); Gamma' is monotone so endpoint bounds suffice."""
    if x.mid - x.rad <= 0:
        raise BallDomainError("gamma restricted to positive intervals")
    bound = _endpoint_deriv_bound(lambda t: mp.gamma(t) * mp.psi(0, t), x)
    return _func_ball(mp.gamma(x.mid), bound, x.rad)


def ball_psi(m: int, x: Ball) -> Ball:
    """Polygamma psi^(m) on (0, inf); |psi^(m+1)| is decreasing there."""
    lo = x.mid - x.rad
    if lo <= 0:
        raise BallDomainError("polygamma restricted to positive intervals")
    bound = abs(mp.psi(m + 1, lo))
    return _func_ball(mp.psi(m, x.mid), bound, x.rad)


def ball_zeta_hurwitz(s, a: Ball, deriv: int = 0) -> Ball:
    """Hurwitz zeta d^deriv/ds^deriv zeta(s, a), s real > 1, a > 0.

    s may be a Fraction/int (treated exactly).  d/da zeta(s,a) = -s*zeta(s+1,a)
    and |d/da zeta^(m)(s,a)| is bounded through the same shift, evaluated at
    the interval's lower end where the magnitude is largest.
    """
    lo = a.mid - a.rad
    if lo <= 0:
        raise BallDomainError("hurwitz zeta needs a > 0")
    s_mp = mpf(s.numerator) / s.denominator if isinstance(s, Fraction) else mpf(s)
    if s_mp <= 1:
        raise BallDomainError("hurwitz zeta tail evaluation needs s > 1")
    mid = mp.zeta(s_mp, a.mid, deriv) if deriv else mp.zeta(s_mp, a.mid)
    if a.rad == 0:
        return Ball(mid, _up(_ulp(mid, _FUNC_SLACK)))
    # |d/da ln^m-weighted tail| <= (|s| + m) * (1 + |ln lo|)^m * zeta(s+1-eps, lo)-ish;
    # coarse but safe envelope via the m=0 shift at the lower endpoint.
    base = abs(mp.zeta(s_mp + 1, lo, deriv)) if deriv else abs(mp.zeta(s_mp + 1, lo))
    bound = (abs(s_mp) + deriv + 1) * (base + 1)
    return _func_ball(mid, bound, a.rad)


def agm(a: Ball, b: Ball, ctx=None) -> Ball:
    """Arithmetic-geometric mean of positive balls.

    Quadratic convergence; iteration stops once |a-b| < 2^-prec * a, after
    which the common limit lies between the last geometric and arithmetic
    means, giving the radius directly.
    """
    if a.mid - a.rad <= 0 or b.mid - b.rad <= 0:
        raise BallDomainError("agm needs strictly positive operands")
    x, y = a, b
    eps = mpf(2) ** (-mp.mp.prec)
    for _ in range(mp.mp.prec.bit_length() + 8):
        if abs(x.mid - y.mid) < eps * abs(x.mid):
            break
        x, y = (x + y) / 2, ball_sqrt(x * y)
    # enclose the limit by the final bracket [min, max] of both balls
    lo = min(x.mid - x.rad, y.mid - y.rad)
    hi = max(x.mid + x.rad, y.mid + y.rad)
    mid = (lo + hi) / 2
    return Ball(mid, _up((hi - lo) / 2 + _ulp(mid)))


class workprec:
    """Context manager pinning mpmath precision to a PrecisionContext."""

    def __init__(self, ctx_or_bits):
        self.bits = getattr(ctx_or_bits, "working_bits", ctx_or_bits)

    def __enter__(self):
        self._saved = mp.mp.prec
        mp.mp.prec = self.bits
        return self

    def __exit__(self, *exc):
        mp.mp.prec = self._saved
        return False
