import random
from fractions import Fraction

import mpmath as mp
import pytest
from mpmath import mpf

from flverify.ball import (Ball, BallDomainError, agm, ball_atan, ball_exp,
                           ball_log, ball_sqrt, ball_zeta_hurwitz, workprec)
from flverify.cball import BranchCutError, ComplexBall, complex_polylog
from flverify.precision import make_context


def test_make_context_bits():
    assert make_context(30).working_bits >= 182
    assert make_context(1).working_bits >= 86
    assert make_context(1000).working_bits >= 3405


def test_make_context_rejects_zero():
    with pytest.raises(ValueError):
        make_context(0)


def test_exact_and_fraction():
    with workprec(make_context(30)):
        b = Ball.exact(7)
        assert b.rad == 0
        q = Ball.from_fraction(Fraction(1, 3))
        assert q.contains(mp.mpf(1) / 3)
        assert q.rad > 0


def test_interval_ops_contानment_manual():
    with workprec(make_context(30)):
        a = Ball(mpf(2), mpf("1e-20"))
        b = Ball(mpf(3), mpf("1e-20"))
        assert (a + b).contains(5)
        assert (a * b).contains(6)
        assert (a / b).contains(mpf(2) / 3)
        assert abs(-(a)).contains(2)
        assert a.powi(10).contains(1024)


def test_div_by_zero_interval():
    with workprec(make_context(20)):
        with pytest.raises(BallDomainError):
            Ball.exact(1) / Ball(mpf(0), mpf(1))


RANDOM_OPS = 1000


def _rand_ball(rng):
    mid = mpf(rng.uniform(-10, 10))
    rad = mpf(abs(rng.gauss(0, 1e-12)))
    return Ball(mid, rad)


def test_containment_against_double_precision():
    """1000 random operand pairs: results contain the value computed at
    doubled working precision."""
    rng = random.Random(12345)
    ctx = make_context(25)
    hi = make_context(60)
    for _ in range(RANDOM_OPS):
        with workprec(ctx):
            a, b = _rand_ball(rng), _rand_ball(rng)
            ops = [a + b, a - b, a * b]
            if not b.contains_zero():
                ops.append(a / b)
        with workprec(hi):
            exacts = [a.mid + b.mid, a.mid - b.mid, a.mid * b.mid]
            if not b.contains_zero():
                exacts.append(a.mid / b.mid)
        for got, want in zip(ops, exacts):
            assert got.contains(want)


def test_elementary_containment():
    rng = random.Random(99)
    ctx = make_context(25)
    hi = make_context(60)
    for _ in range(200):
        x = mpf(rng.uniform(0.01, 20))
        with workprec(ctx):
            b = Ball(x, mpf("1e-15"))
            got = [ball_sqrt(b), ball_exp(Ball(x / 10, mpf("1e-15"))),
                   ball_log(b), ball_atan(b)]
        with workprec(hi):
            want = [mp.sqrt(x), mp.exp(x / 10), mp.log(x), mp.atan(x)]
        for g, w in zip(got, want):
            assert g.contains(w)


def test_monotone_refinement():
    """Higher target precision never yields a larger radius."""
    prev = None
    for digits in (15, 30, 60):
        ctx = make_context(digits)
        with workprec(ctx):
            v = ball_log(ball_sqrt(Ball.exact(2)) + 1)
        if prev is not None:
            assert v.rad <= prev
        prev = v.rad


def test_agm():
    ctx = make_context(50)
    with workprec(ctx):
        one = Ball.exact(1)
        assert agm(one, one).contains(1)
        v = agm(one, ball_sqrt(Ball.exact(2)))
        # oracle: hand-iterated AGM recurrence at 50 digits
        a, b = mpf(1), mp.sqrt(2)
        for _ in range(10):
            a, b = (a + b) / 2, mp.sqrt(a * b)
        assert v.contains(a)
        assert mp.nstr(v.mid, 15) == "1.19814023473559"
        # symmetry
        rng = random.Random(7)
        for _ in range(20):
            x = Ball(mpf(rng.uniform(0.1, 5)), 0)
            y = Ball(mpf(rng.uniform(0.1, 5)), 0)
            assert agm(x, y).overlaps(agm(y, x))
        with pytest.raises(BallDomainError):
            agm(Ball.exact(-1), one)


def test_hurwitz_zeta_derivative_vs_diff():
    ctx = make_context(30)
    with workprec(ctx):
        a = Ball.exact(5)
        for m in (0, 1, 2, 3):
            v = ball_zeta_hurwitz(Fraction(5, 2), a, m)
            ref = mp.diff(lambda s: mp.zeta(s, 5), mpf(5) / 2, m) if m else mp.zeta(mpf(5) / 2, 5)
            assert abs(v.mid - ref) < mpf(10) ** -25


class TestComplexPolylog:
    def test_li2_zero_and_half(self):
        ctx = make_context(40)
        with workprec(ctx):
            z0 = complex_polylog(2, ComplexBall(Ball.exact(0)))
            assert z0.re.contains(0) and z0.im.contains(0)
            v = complex_polylog(2, ComplexBall(Ball.from_fraction(Fraction(1, 2))))
            closed = mp.pi ** 2 / 12 - mp.log(2) ** 2 / 2
            assert v.re.contains(closed)
            # 50-digit direct-series oracle
            direct = mp.nsum(lambda n: mpf(2) ** -n / n ** 2, [1, mp.inf])
            assert v.re.contains(direct)

    def test_imli3_half_value(self):
        ctx = make_context(60)
        with workprec(ctx):
            z = ComplexBall(Ball.from_fraction(Fraction(1, 2)),
                            Ball.from_fraction(Fraction(1, 2)))
            v = complex_polylog(3, z)
            # 60-digit oracle: direct complex series, |z| = sqrt(2)/2
            s = mp.mpc(0)
            w = mp.mpc(0.5, 0.5)
            zz = mp.mpc(1)
            for n in range(1, 700):
                zz *= w
                s += zz / n ** 3
            assert abs(v.im.mid - s.imag) < mpf(10) ** -58
            assert abs(v.im.mid - mpf("0.5700774070887689782")) < mpf(10) ** -18

    @pytest.mark.parametrize("s", [2, 3, 4])
    def test_strategies_agree_with_library(self, s):
        ctx = make_context(35)
        pts = [mp.mpc("0.3", "0.2"), mp.mpc("0.9", "0.35"), mp.mpc("-1.1", "0.4"),
               mp.mpc("2.5", "-1.0"), mp.mpc("-3.0", "0.0"), mp.mpc("0.72", "-0.72")]
        with workprec(ctx):
            for zm in pts:
                z = ComplexBall(Ball(zm.real, 0), Ball(zm.imag, 0))
                got = complex_polylog(s, z)
                want = mp.polylog(s, zm)
                assert got.re.contains(want.real), (s, zm)
                assert got.im.contains(want.imag), (s, zm)

    def test_conjugation_symmetry(self):
        rng = random.Random(4242)
        ctx = make_context(25)
        with workprec(ctx):
            for _ in range(100):
                x = rng.uniform(-2.5, 0.95)
                y = rng.uniform(0.05, 2.0)
                z = ComplexBall(Ball(mpf(x), 0), Ball(mpf(y), 0))
                for s in (2, 3, 4):
                    v = complex_polylog(s, z)
                    vc = complex_polylog(s, z.conj())
                    assert v.re.overlaps(vc.re)
                    assert (-v.im).overlaps(vc.im)

    def test_branch_cut_rejected_then_sided(self):
        ctx = make_context(25)
        with workprec(ctx):
            z = ComplexBall(Ball.exact(2))
            with pytest.raises(BranchCutError):
                complex_polylog(2, z)
            up = complex_polylog(2, z, cut_side=+1)
            dn = complex_polylog(2, z, cut_side=-1)
            want = mp.polylog(2, mpf(2) + mp.mpc(0, "1e-30"))
            assert abs(up.re.mid - want.real) < mpf("1e-28")
            assert abs(up.im.mid - mp.pi * mp.log(2)) < mpf("1e-20")
            assert up.im.mid > 0 and dn.im.mid < 0
