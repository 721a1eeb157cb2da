from fractions import Fraction

import mpmath as mp
import pytest
from mpmath import mpf

from flverify.ball import workprec
from flverify.constants import (ConstExpr, ConstId, const_value, cross_check,
                                expr_add, expr_mul, expr_scale, expr_value,
                                pi_pow, zeta2_expr)
from flverify.precision import make_context

CTX = make_context(40)


LIBRARY_REFS = {
    ConstId.One: lambda: mpf(1),
    ConstId.Pi: lambda: +mp.pi,
    ConstId.SqrtPi: lambda: mp.sqrt(mp.pi),
    ConstId.Sqrt2: lambda: mp.sqrt(2),
    ConstId.Log2: lambda: mp.log(2),
    ConstId.LogSilver: lambda: mp.log(1 + mp.sqrt(2)),
    ConstId.Catalan: lambda: +mp.catalan,
    ConstId.Zeta3: lambda: mp.zeta(3),
    ConstId.Beta4: lambda: mp.beta if False else (mp.zeta(4, mpf(1) / 4) - mp.zeta(4, mpf(3) / 4)) / 256,
    ConstId.GammaQuarter: lambda: mp.gamma(mpf(1) / 4),
    ConstId.Li4Half: lambda: mp.polylog(4, mpf(1) / 2),
    ConstId.ImLi3Half: lambda: mp.im(mp.polylog(3, mp.mpc(1, 1) / 2)),
    ConstId.ImLi4OneMinusI: lambda: mp.im(mp.polylog(4, mp.mpc(1, -1))),
    ConstId.Li2Silver: lambda: mp.polylog(2, 3 - 2 * mp.sqrt(2)),
}


@pytest.mark.parametrize("cid", list(ConstId))
def test_const_values_against_library(cid):
    v = const_value(cid, CTX)
    with workprec(CTX):
        ref = LIBRARY_REFS[cid]()
    assert abs(v.mid - ref) < mpf(10) ** -38, cid
    assert v.rad < mpf(10) ** -40 or cid is ConstId.One


@pytest.mark.parametrize("cid", list(ConstId))
def test_cross_checks_contain_zero(cid):
    res = cross_check(cid, CTX)
    tol = mpf(10) ** (-CTX.target_digits)
    assert abs(res.mid) <= res.rad + tol, (cid, res)


def test_known_digit_strings():
    with workprec(CTX):
        pi_b = const_value(ConstId.Pi, CTX)
        assert abs(pi_b.mid - mpf("3.14159265358979323846264338327950288")) < mpf(10) ** -34
        k_b = const_value(ConstId.Catalan, CTX)
        assert abs(k_b.mid - mpf("0.91596559417721901505460351493238411")) < mpf(10) ** -34
        g_b = const_value(ConstId.GammaQuarter, CTX)
        assert abs(g_b.mid - mpf("3.62560990822190831193068515586767200")) < mpf(10) ** -34


def test_sqrtpi_square_relation():
    with workprec(CTX):
        s = const_value(ConstId.SqrtPi, CTX)
        p = const_value(ConstId.Pi, CTX)
        resid = s * s - p
        assert resid.contains_zero()


class TestConstExpr:
    def test_rational_only_exact(self):
        e = ConstExpr.rational(1)
        v = expr_value(e, CTX)
        assert v.mid == 1 and v.rad == 0

    def test_add_cancel(self):
        x = ConstExpr.monomial(Fraction(3, 7), (ConstId.Pi, 2))
        assert expr_add(x, -x).is_zero()

    def test_scale(self):
        e = expr_scale(ConstExpr.const(ConstId.Pi), Fraction(1, 8))
        v = expr_value(e, CTX)
        with workprec(CTX):
            assert v.contains(mp.pi / 8) or abs(v.mid - mp.pi / 8) < mpf(10) ** -38

    def test_mul_sqrtpi_squared_evaluates_to_pi(self):
        e = expr_mul(ConstExpr.const(ConstId.SqrtPi), ConstExpr.const(ConstId.SqrtPi))
        v = expr_value(e, CTX)
        p = expr_value(ConstExpr.const(ConstId.Pi), CTX)
        assert v.overlaps(p)

    def test_16_over_pi_minus_4(self):
        # oracle: sum c_n^2/(n+1)^2 partial + tail estimate agrees to ~9 digits
        e = pi_pow(-1, 16) + ConstExpr.rational(-4)
        v = expr_value(e, CTX)
        with workprec(make_context(30)):
            s, c = mpf(0), mpf(1)
            for n in range(100000):
                s += c * c / (n + 1) ** 2
                c = c * (2 * n + 1) / (2 * n + 2)
        assert abs(v.mid - s) < mpf("1e-9")
        with workprec(CTX):
            ref = 16 / mp.pi - 4
            assert abs(v.mid - ref) < mpf(10) ** -30

    def test_gamma_quarter_lemniscate_monomial(self):
        # (1/4) GammaQuarter^4 / pi^3, oracle value from sum c_n^3
        e = ConstExpr.monomial(Fraction(1, 4), (ConstId.GammaQuarter, 4), (ConstId.Pi, -3))
        v = expr_value(e, CTX)
        with workprec(CTX):
            ref = mp.gamma(mp.mpf(1) / 4) ** 4 / (4 * mp.pi ** 3)
            assert abs(v.mid - ref) < mpf(10) ** -30

    def test_expr_value_subset_of_ball_add(self):
        a = zeta2_expr() + ConstExpr.rational(Fraction(-1, 3))
        b = ConstExpr.monomial(Fraction(2, 5), (ConstId.Catalan, 1))
        va, vb = expr_value(a, CTX), expr_value(b, CTX)
        vsum = expr_value(expr_add(a, b), CTX)
        combined = va + vb
        assert abs(vsum.mid - combined.mid) <= combined.rad + vsum.rad

    def test_str_roundtrippable_names(self):
        e = pi_pow(2, Fraction(3, 8)) + ConstExpr.monomial(
            Fraction(-16), (ConstId.Pi, -1), (ConstId.ImLi3Half, 1))
        s = str(e)
        assert "pi^2" in s and "im_li3_half" in s
