"""Complex balls and polylogarithms Li_s, s in {2,3,4}.

ComplexBall is a rectangular enclosure (independent real/imaginary balls).
complex_polylog picks one of three strategies by |z|:

* |z| <= 0.75           direct series, geometric tail |z|^N/(1-|z|);
* 0.75 < |z| <= 1.35    series in w = log z around the unit circle,
                        Li_n(e^w) = w^(n-1)/(n-1)! (H_{n-1} - log(-w))
                                    + sum_{k != n-1} zeta(n-k) w^k / k!,
                        valid for |w| < 2pi, tail geometric in |w|/2pi;
* |z| > 1.35            Bernoulli-polynomial inversion to 1/z:
                        Li_2(z) = -Li_2(1/z) - pi^2/6 - log^2(-z)/2
                        Li_3(z) =  Li_3(1/z) - log^3(-z)/6 - pi^2 log(-z)/6
                        Li_4(z) = -Li_4(1/z) - 7pi^4/360 - pi^2 log^2(-z)/12
                                  - log^4(-z)/24.

The branch cut sits on [1, inf); real arguments there raise BranchCutError
unless the caller asks for a side (evaluated as z +- i*0 via the formulas'
principal logs).
"""

from __future__ import annotations

from fractions import Fraction

import mpmath as mp
from mpmath import mpf

from .ball import Ball, BallDomainError, _ulp, _up, ball_log, ball_sqrt, _FUNC_SLACK


class BranchCutError(BallDomainError):
    """Argument sits on the polylog branch cut and no side was requested."""


class ComplexBall:
    """Rectangular complex enclosure: exact value in re-interval x im-interval."""

    __slots__ = ("re", "im")

    def __init__(self, re, im=None):
        self.re = re if isinstance(re, Ball) else Ball._coerce(re)
        if im is None:
            im = Ball.exact(0)
        self.im = im if isinstance(im, Ball) else Ball._coerce(im)

    @staticmethod
    def _coerce(z):
        if isinstance(z, ComplexBall):
            return z
        if isinstance(z, complex) or isinstance(z, mp.mpc):
            return ComplexBall(Ball(mpf(z.real), 0), Ball(mpf(z.imag), 0))
        return ComplexBall(Ball._coerce(z))

    def __repr__(self):
        return f"ComplexBall({self.re!r}, {self.im!r})"

    def mid(self):
        return mp.mpc(self.re.mid, self.im.mid)

    def rad_bound(self):
        # Euclidean bound on the enclosure half-diagonal
        return _up(self.re.rad + self.im.rad)

    def conj(self):
        return ComplexBall(self.re, -self.im)

    def __neg__(self):
        return ComplexBall(-self.re, -self.im)

    def __add__(self, other):
        o = ComplexBall._coerce(other)
        return ComplexBall(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-ComplexBall._coerce(other))

    def __rsub__(self, other):
        return ComplexBall._coerce(other) + (-self)

    def __mul__(self, other):
        o = ComplexBall._coerce(other)
        return ComplexBall(self.re * o.re - self.im * o.im,
                           self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def abs_sq(self) -> Ball:
        return self.re * self.re + self.im * self.im

    def abs_upper(self):
        return _up(mp.sqrt(self.re.abs_upper() ** 2 + self.im.abs_upper() ** 2))

    def abs_lower(self):
        m = abs(self.mid())
        lo = m - self.rad_bound()
        return lo if lo > 0 else mpf(0)

    def __truediv__(self, other):
        o = ComplexBall._coerce(other)
        den = o.abs_sq()
        num = self * o.conj()
        return ComplexBall(num.re / den, num.im / den)

    def __rtruediv__(self, other):
        return ComplexBall._coerce(other) / self

    def powi(self, k: int) -> "ComplexBall":
        if k == 0:
            return ComplexBall(Ball.exact(1))
        if k < 0:
            return ComplexBall(Ball.exact(1)) / self.powi(-k)
        result, base, e = None, self, k
        while e:
            if e & 1:
                result = base if result is None else result * base
            e >>= 1
            if e:
                base = base * base
        return result


def _clog_mid(z: ComplexBall, branch_lower: bool = False) -> ComplexBall:
    """Principal log with derivative bound 1/|z|_lo.

    branch_lower selects the log(-z) convention Im log = -pi for z on the
    positive real axis (used by the inversion formulas approached from below).
    """
    lo = z.abs_lower()
    if lo == 0:
        raise BallDomainError("log of complex interval containing 0")
    val = mp.log(z.mid())
    if branch_lower and z.im.mid == 0 and z.im.rad == 0 and z.re.mid < 0:
        pass  # principal value already has Im = pi for negative reals
    bound = 1 / lo
    dr = z.rad_bound()
    slack_re = _up(bound * dr + _ulp(val.real, _FUNC_SLACK))
    slack_im = _up(bound * dr + _ulp(val.imag if val.imag != 0 else mpf(1), _FUNC_SLACK))
    return ComplexBall(Ball(val.real, slack_re), Ball(val.imag, slack_im))


def _li_direct(s: int, z: ComplexBall) -> ComplexBall:
    """Direct series sum z^n/n^s, |z| <= 0.75, geometric tail."""
    q = z.abs_upper()
    assert q < mpf("0.8")
    prec = mp.mp.prec
    nmax = int(prec / (-mp.log(q, 2))) + 8 if q > 0 else 4
    term = ComplexBall(Ball.exact(1))
    total = ComplexBall(Ball.exact(0))
    for n in range(1, nmax + 1):
        term = term * z
        total = total + term * Ball.from_fraction(Fraction(1, n ** s))
    tail = _up(q ** (nmax + 1) / (1 - q))
    return ComplexBall(Ball(total.re.mid, _up(total.re.rad + tail)),
                       Ball(total.im.mid, _up(total.im.rad + tail)))


def _bernoulli_zeta_ball(k: int) -> Ball:
    # zeta at integer arguments <= 1 excluded by callers; mpmath value + slack
    v = mp.zeta(k)
    return Ball(v, _ulp(v, _FUNC_SLACK))


def _li_log_series(s: int, z: ComplexBall) -> ComplexBall:
    """Annulus strategy via w = log z, |w| < 2 pi."""
    w = _clog_mid(z)
    wabs = w.abs_upper()
    two_pi = 2 * mp.pi
    if wabs >= mpf("0.95") * two_pi:
        raise BallDomainError("log-series needs |log z| < 2 pi")
    # special term  w^(s-1)/(s-1)! * (H_{s-1} - log(-w))
    from math import factorial
    hs = Ball.from_fraction(sum(Fraction(1, j) for j in range(1, s)))
    logmw = _clog_mid(-w)
    special = w.powi(s - 1) * (ComplexBall(hs) - logmw) \
        * Ball.from_fraction(Fraction(1, factorial(s - 1)))
    special = ComplexBall(special.re, special.im)
    total = special
    # zeta(s-k) w^k / k!; |zeta| along negative arguments grows ~ 2 k!/(2pi)^k
    prec = mp.mp.prec
    q = wabs / two_pi
    nmax = int(prec / (-mp.log(q, 2))) + 12 if q > 0 else 8
    wk = ComplexBall(Ball.exact(1))
    fact = Fraction(1)
    for k in range(0, nmax + 1):
        if k > 0:
            wk = wk * w
            fact *= k
        if k == s - 1:
            continue
        zk = _bernoulli_zeta_ball(s - k)
        total = total + wk * (zk * Ball.from_fraction(Fraction(1, fact)))
    # |zeta(s-k) w^k/k!| <= 4 (|w|/2pi)^k for k >= s+1: geometric tail
    tail = _up(4 * q ** (nmax + 1) / (1 - q))
    return ComplexBall(Ball(total.re.mid, _up(total.re.rad + tail)),
                       Ball(total.im.mid, _up(total.im.rad + tail)))


def _pi_ball() -> Ball:
    v = +mp.pi
    return Ball(v, _ulp(v, _FUNC_SLACK))


def _li_inversion(s: int, z: ComplexBall) -> ComplexBall:
    inv = ComplexBall(Ball.exact(1)) / z
    li_inv = complex_polylog(s, inv)
    L = _clog_mid(-z)
    pi2 = _pi_ball() * _pi_ball()
    if s == 2:
        poly = ComplexBall(-(pi2 * Fraction(1, 6))) - L * L * Fraction(1, 2)
        return -li_inv + poly
    if s == 3:
        poly = -(L.powi(3) * Fraction(1, 6)) - ComplexBall(pi2 * Fraction(1, 6)) * L
        return li_inv + poly
    if s == 4:
        poly = ComplexBall(-(pi2 * pi2 * Fraction(7, 360))) \
            - ComplexBall(pi2 * Fraction(1, 12)) * L * L \
            - L.powi(4) * Fraction(1, 24)
        return -li_inv + poly
    raise ValueError("polylog order restricted to 2, 3, 4")


def complex_polylog(s: int, z: ComplexBall, ctx=None, cut_side: int = 0) -> ComplexBall:
    """Enclosure of Li_s(z) for s in {2,3,4}; branch cut on [1, inf).

    cut_side: 0 rejects arguments on the cut; +1/-1 evaluates the limit from
    the upper/lower half-plane.
    """
    if s not in (2, 3, 4):
        raise ValueError("polylog order restricted to 2, 3, 4")
    z = ComplexBall._coerce(z)
    on_axis = z.im.contains_zero()
    sided = False
    if on_axis and z.re.mid - z.re.rad >= 1:
        if cut_side == 0:
            raise BranchCutError("argument on [1, inf); pass cut_side=+1/-1")
        # nudge the midpoint off the axis; |Li_s'| stays small, the shift is
        # covered by the widened imaginary radius below
        eps = mpf(2) ** (-mp.mp.prec + 8)
        z = ComplexBall(z.re, z.im + Ball(cut_side * eps, 0))
        sided = True
    q = z.abs_upper()
    if q <= mpf("0.75"):
        out = _li_direct(s, z)
    elif q <= mpf("1.35") and z.abs_lower() >= mpf("0.7"):
        out = _li_log_series(s, z)
    elif z.abs_lower() > 1:
        out = _li_inversion(s, z)
    else:
        out = _li_log_series(s, z)
    if sided:
        pad = _up(eps * (64 + z.abs_upper() * 16))
        out = ComplexBall(Ball(out.re.mid, _up(out.re.rad + pad)),
                          Ball(out.im.mid, _up(out.im.rad + pad)))
    return out


def real_polylog(s: int, x: Ball) -> Ball:
    """Li_s on (-1, 1): real-axis convenience wrapper."""
    v = complex_polylog(s, ComplexBall(x))
    return v.re
