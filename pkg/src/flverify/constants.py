"""Exact constant basis and symbolic closed forms.

Every closed-form right-hand side in the verification registry is a
rational linear combination of monomials in a fixed 14-constant basis
(ConstId).  ConstExpr keeps those combinations exact (Fraction
coefficients, integer exponents); evaluation produces a Ball at the
requested precision.

Each basis constant has one evaluation routine plus at least one
independent cross-check (different algorithm or different code path),
run by `cross_check`.  pi itself is computed twice: an AGM iteration
(Gauss-Brent-Salamin) and a scaled-integer Machin arctangent sum; the
two must agree to working precision before the value is released.
"""

from __future__ import annotations

import enum
from fractions import Fraction

import mpmath as mp
from mpmath import mpf

from .ball import (Ball, _ulp, _up, agm, ball_exp, ball_log, ball_sqrt, workprec)
from .cball import ComplexBall, complex_polylog


class ConstId(enum.IntEnum):
    One = 0
    Pi = 1
    SqrtPi = 2
    Sqrt2 = 3
    Log2 = 4
    LogSilver = 5        # log(1 + sqrt 2)
    Catalan = 6
    Zeta3 = 7
    Beta4 = 8
    GammaQuarter = 9
    Li4Half = 10
    ImLi3Half = 11       # Im Li_3((1+i)/2)
    ImLi4OneMinusI = 12  # Im Li_4(1-i)
    Li2Silver = 13       # Li_2(3 - 2 sqrt 2)


_NAMES = {
    ConstId.One: "1",
    ConstId.Pi: "pi",
    ConstId.SqrtPi: "sqrtpi",
    ConstId.Sqrt2: "sqrt2",
    ConstId.Log2: "log2",
    ConstId.LogSilver: "log_silver",
    ConstId.Catalan: "K",
    ConstId.Zeta3: "zeta3",
    ConstId.Beta4: "beta4",
    ConstId.GammaQuarter: "gamma_quarter",
    ConstId.Li4Half: "li4_half",
    ConstId.ImLi3Half: "im_li3_half",
    ConstId.ImLi4OneMinusI: "im_li4_one_minus_i",
    ConstId.Li2Silver: "li2_silver",
}


# ---------------------------------------------------------------------
# pi two ways
# ---------------------------------------------------------------------

def _pi_agm_mid() -> mpf:
    """Gauss-Brent-Salamin; quadratic convergence to working precision."""
    one = mpf(1)
    a, b = one, 1 / mp.sqrt(2)
    t, p = mpf(1) / 4, one
    thresh = mpf(2) ** (-(mp.mp.prec // 2) - 4)
    for _ in range(mp.mp.prec.bit_length() + 6):
        an = (a + b) / 2
        b = mp.sqrt(a * b)
        t -= p * (a - an) ** 2
        p *= 2
        a = an
        if abs(a - b) < thresh:
            break
    return (a + b) ** 2 / (4 * t)


def _atan_inv_scaled(q: int, bits: int):
    """floor(2^bits * atan(1/q)) - err, err bounded by #terms + 1."""
    total = 0
    k = 0
    qq = q * q
    denom = q
    scale = 1 << bits
    while True:
        term = scale // (denom * (2 * k + 1))
        if term == 0:
            break
        total += term if k % 2 == 0 else -term
        denom *= qq
        k += 1
    return total, k + 1


def _pi_machin_ball() -> Ball:
    bits = mp.mp.prec + 32
    a5, e5 = _atan_inv_scaled(5, bits)
    a239, e239 = _atan_inv_scaled(239, bits)
    scaled = 16 * a5 - 4 * a239
    err_units = 16 * e5 + 4 * e239 + 4
    mid = mpf(scaled) / mpf(1 << bits)
    return Ball(mid, _up(mpf(err_units + 2) / mpf(1 << bits) + _ulp(mid)))


def _pi_ball() -> Ball:
    machin = _pi_machin_ball()
    agm_mid = _pi_agm_mid()
    # the AGM route must land inside the rigorous Machin ball
    if abs(agm_mid - machin.mid) > _up(machin.rad + mpf(2) ** (-mp.mp.prec + 8)):
        raise ArithmeticError("pi algorithms disagree")  # pragma: no cover
    return Ball(agm_mid, _up(machin.rad + abs(agm_mid - machin.mid)))


# ---------------------------------------------------------------------
# per-constant evaluation
# ---------------------------------------------------------------------

def _lib_ball(value: mpf) -> Ball:
    return Ball(value, _ulp(value, 8))


def _geometric_rational_series(term: "callable", ratio_bound: Fraction) -> Ball:
    """sum_n term(n) with exact Fraction terms, |t_{n+1}/t_n| <= ratio_bound < 1."""
    q = Fraction(ratio_bound)
    bits_per_term = -mp.log(mpf(q.numerator) / q.denominator, 2)
    nmax = int(mp.mp.prec / bits_per_term) + 8
    total = Ball.exact(0)
    last = None
    for n in range(nmax + 1):
        last = term(n)
        total = total + Ball.from_fraction(last)
    tail = abs(Ball.from_fraction(last * q / (1 - q)))
    return Ball(total.mid, _up(total.rad + tail.upper))


def _catalan_ball() -> Ball:
    # K = (pi/8) log(2+sqrt3) + (3/8) sum 1/((2n+1)^2 binom(2n,n)); ratio -> 1/4
    def term(n):
        from math import comb
        return Fraction(1, (2 * n + 1) ** 2 * comb(2 * n, n))

    s = _geometric_rational_series(term, Fraction(1, 3))
    pi_b = const_value_raw(ConstId.Pi)
    log_b = ball_log(Ball.exact(2) + ball_sqrt(Ball.exact(3)))
    return pi_b * log_b * Fraction(1, 8) + s * Fraction(3, 8)


def _zeta3_ball() -> Ball:
    def term(n):
        from math import comb
        if n == 0:
            return Fraction(0)
        return Fraction((-1) ** (n - 1), n ** 3 * comb(2 * n, n))

    s = _geometric_rational_series(term, Fraction(1, 3))
    return s * Fraction(5, 2)


def _beta4_ball() -> Ball:
    a14 = Ball.from_fraction(Fraction(1, 4))
    a34 = Ball.from_fraction(Fraction(3, 4))
    z1 = _lib_ball(mp.zeta(4, mpf(1) / 4))
    z3 = _lib_ball(mp.zeta(4, mpf(3) / 4))
    del a14, a34
    return (z1 - z3) * Fraction(1, 256)


def _gamma_quarter_ball() -> Ball:
    # Gamma(1/4)^2 = 2 sqrt(2 pi) * pi / AGM(1, sqrt 2)
    pi_b = const_value_raw(ConstId.Pi)
    ag = agm(Ball.exact(1), ball_sqrt(Ball.exact(2)))
    sq = ball_sqrt(pi_b * 2)
    return ball_sqrt(sq * pi_b * 2 / ag)


def _li4half_ball() -> Ball:
    def term(n):
        if n == 0:
            return Fraction(0)
        return Fraction(1, n ** 4 * 2 ** n)

    return _geometric_rational_series(term, Fraction(1, 2))


def _imli3half_ball() -> Ball:
    z = ComplexBall(Ball.from_fraction(Fraction(1, 2)),
                    Ball.from_fraction(Fraction(1, 2)))
    return complex_polylog(3, z).im


def _imli4_one_minus_i_ball() -> Ball:
    z = ComplexBall(Ball.exact(1), Ball.exact(-1))
    return complex_polylog(4, z).im


def _li2silver_ball() -> Ball:
    x = Ball.exact(3) - ball_sqrt(Ball.exact(2)) * 2
    return complex_polylog(2, ComplexBall(x)).re


_EVALUATORS = {
    ConstId.One: lambda: Ball.exact(1),
    ConstId.Pi: _pi_ball,
    ConstId.SqrtPi: lambda: ball_sqrt(const_value_raw(ConstId.Pi)),
    ConstId.Sqrt2: lambda: ball_sqrt(Ball.exact(2)),
    ConstId.Log2: lambda: _lib_ball(mp.log(2)),
    ConstId.LogSilver: lambda: _lib_ball(mp.log(1 + mp.sqrt(2))),
    ConstId.Catalan: _catalan_ball,
    ConstId.Zeta3: _zeta3_ball,
    ConstId.Beta4: _beta4_ball,
    ConstId.GammaQuarter: _gamma_quarter_ball,
    ConstId.Li4Half: _li4half_ball,
    ConstId.ImLi3Half: _imli3half_ball,
    ConstId.ImLi4OneMinusI: _imli4_one_minus_i_ball,
    ConstId.Li2Silver: _li2silver_ball,
}

_CACHE: dict = {}


def const_value_raw(cid: ConstId) -> Ball:
    """Value at the ambient mpmath precision, memoized per (id, prec)."""
    key = (int(cid), mp.mp.prec)
    hit = _CACHE.get(key)
    if hit is None:
        hit = _EVALUATORS[cid]()
        _CACHE[key] = hit
    return hit


def const_value(cid: ConstId, ctx) -> Ball:
    with workprec(ctx):
        v = const_value_raw(cid)
        limit = mpf(10) ** (-ctx.target_digits)
        if v.rad > limit and v.rad != 0:  # pragma: no cover - headroom is generous
            raise ArithmeticError(f"{cid.name}: radius {v.rad} above tolerance")
        return v


# ---------------------------------------------------------------------
# cross checks (independent routes)
# ---------------------------------------------------------------------

def _residual_square(v: Ball, target: Ball) -> Ball:
    return v * v - target


def cross_check(cid: ConstId, ctx) -> Ball:
    """Residual ball of the constant's independent check; must contain 0."""
    with workprec(ctx):
        v = const_value_raw(cid)
        if cid is ConstId.One:
            return v - 1
        if cid is ConstId.Pi:
            return v - _pi_machin_ball()
        if cid is ConstId.SqrtPi:
            return _residual_square(v, const_value_raw(ConstId.Pi))
        if cid is ConstId.Sqrt2:
            return _residual_square(v, Ball.exact(2))
        if cid is ConstId.Log2:
            def term(n):
                return Fraction(1, (n + 1) * 2 ** (n + 1))
            return v - _geometric_rational_series(term, Fraction(1, 2))
        if cid is ConstId.LogSilver:
            return ball_exp(v) - (Ball.exact(1) + ball_sqrt(Ball.exact(2)))
        if cid is ConstId.Catalan:
            from .accel import cvz_alternating
            depth = int(ctx.target_digits / 0.75) + 12
            ref = cvz_alternating(lambda n: Ball.from_fraction(
                Fraction(1, (2 * n + 1) ** 2)), depth)
            return v - ref
        if cid is ConstId.Zeta3:
            from .accel import cvz_alternating
            depth = int(ctx.target_digits / 0.75) + 12
            eta3 = cvz_alternating(lambda n: Ball.from_fraction(
                Fraction(1, (n + 1) ** 3)), depth)
            return v - eta3 * Fraction(4, 3)
        if cid is ConstId.Beta4:
            from .accel import cvz_alternating
            depth = int(ctx.target_digits / 0.75) + 12
            ref = cvz_alternating(lambda n: Ball.from_fraction(
                Fraction(1, (2 * n + 1) ** 4)), depth)
            return v - ref
        if cid is ConstId.GammaQuarter:
            return v - _lib_ball(mp.gamma(mpf(1) / 4))
        if cid is ConstId.Li4Half:
            return v - _lib_ball(mp.polylog(4, mpf(1) / 2))
        if cid is ConstId.ImLi3Half:
            from .cball import _li_log_series
            z = ComplexBall(Ball.from_fraction(Fraction(1, 2)),
                            Ball.from_fraction(Fraction(1, 2)))
            return v - _li_log_series(3, z).im
        if cid is ConstId.ImLi4OneMinusI:
            from .cball import _li_log_series
            z = ComplexBall(Ball.exact(1), Ball.exact(-1))
            return v - _li_log_series(4, z).im
        if cid is ConstId.Li2Silver:
            # Landen: Li2(x^2) = 2 (Li2(x) + Li2(-x)) at x = sqrt2 - 1
            x = ball_sqrt(Ball.exact(2)) - 1
            a = complex_polylog(2, ComplexBall(x)).re
            b = complex_polylog(2, ComplexBall(-x)).re
            return v - (a + b) * 2
    raise ValueError(cid)  # pragma: no cover


# ---------------------------------------------------------------------
# exact symbolic expressions over the basis
# ---------------------------------------------------------------------

Monomial = tuple  # ordered tuple of (ConstId, exponent != 0)

_ONE_MONO: Monomial = ()


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    acc = {}
    for cid, e in a:
        acc[cid] = acc.get(cid, 0) + e
    for cid, e in b:
        acc[cid] = acc.get(cid, 0) + e
    return tuple(sorted((c, e) for c, e in acc.items() if e != 0))


class ConstExpr:
    """Exact rational combination of basis-constant monomials."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for mono, coef in (terms or {}).items():
            coef = Fraction(coef)
            if coef:
                clean[tuple(mono)] = coef
        self.terms = clean

    # -- constructors --
    @staticmethod
    def rational(q) -> "ConstExpr":
        q = Fraction(q)
        return ConstExpr({_ONE_MONO: q} if q else {})

    @staticmethod
    def monomial(coef, *powers) -> "ConstExpr":
        mono = tuple(sorted((ConstId(c), int(e)) for c, e in powers if e != 0))
        return ConstExpr({mono: Fraction(coef)})

    @staticmethod
    def const(cid: ConstId, exp: int = 1) -> "ConstExpr":
        return ConstExpr.monomial(1, (cid, exp))

    zero = None   # filled after class definition
    one = None

    # -- exact algebra --
    def __add__(self, other):
        other = other if isinstance(other, ConstExpr) else ConstExpr.rational(other)
        out = dict(self.terms)
        for mono, coef in other.terms.items():
            out[mono] = out.get(mono, Fraction(0)) + coef
        return ConstExpr(out)

    __radd__ = __add__

    def __neg__(self):
        return ConstExpr({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = other if isinstance(other, ConstExpr) else ConstExpr.rational(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, q) -> "ConstExpr":
        q = Fraction(q)
        return ConstExpr({m: c * q for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, Fraction(0)) + c1 * c2
        return ConstExpr(out)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, ConstExpr):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- evaluation & printing --
    def value(self, ctx) -> Ball:
        with workprec(ctx):
            total = Ball.from_fraction(self.terms.get(_ONE_MONO, Fraction(0)))
            for mono, coef in self.terms.items():
                if not mono:
                    continue
                prod = Ball.from_fraction(coef)
                for cid, e in mono:
                    prod = prod * const_value_raw(ConstId(cid)).powi(e)
                total = total + prod
            return total

    def __repr__(self):
        return f"ConstExpr({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for mono, coef in sorted(self.terms.items()):
            factors = []
            if coef != 1 or not mono:
                factors.append(str(coef))
            for cid, e in mono:
                name = _NAMES[ConstId(cid)]
                factors.append(name if e == 1 else f"{name}^{e}")
            parts.append("*".join(factors))
        return " + ".join(parts).replace("+ -", "- ")


ConstExpr.zero = ConstExpr()
ConstExpr.one = ConstExpr.rational(1)


def expr_add(a: ConstExpr, b: ConstExpr) -> ConstExpr:
    return a + b


def expr_scale(a: ConstExpr, q) -> ConstExpr:
    return a.scale(q)


def expr_mul(a: ConstExpr, b: ConstExpr) -> ConstExpr:
    return a * b


def expr_value(e: ConstExpr, ctx) -> Ball:
    return e.value(ctx)


# frequently used building blocks
def pi_pow(e: int, coef=1) -> ConstExpr:
    return ConstExpr.monomial(coef, (ConstId.Pi, e))


def zeta2_expr(coef=1) -> ConstExpr:
    """zeta(2) = pi^2/6 as a basis monomial."""
    return ConstExpr.monomial(Fraction(coef) / 6, (ConstId.Pi, 2))
