"""Series summation with rigorous tails.

Structured terms are described by a SeriesModel: a hypergeometric core
(exact rational value at the start index plus an exact rational consecutive
ratio) times an optional product of harmonic-type weight atoms.  The
evaluator picks a strategy from the ratio's limit and sign:

* |limit| < 1          geometric tail bound;
* limit = 1, positive  exact partial sum + Hurwitz-zeta asymptotic tail
                       (window-verified envelope; see asymptotics.py);
* limit = 1 or -1,
  alternating          exact partial sum + iterated Euler averaging with a
                       Leibniz remainder.

Ad-hoc SeriesSpec callables (no model) fall back to direct summation with
the plain integral-comparison or Leibniz bounds, which caps reachable
digits but needs no structure.  CVZ acceleration is available separately
and always reports Accelerated-Empirical.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

import mpmath as mp
from mpmath import mpf

from .accel import cvz_alternating
from .asymptotics import (AsymSeries, EnvelopeError, averaged_alternating_tail,
                          eta2_tail_expansion, geometric_tail, hurwitz_tail,
                          psi0_expansion, psi1_expansion, psi2_expansion,
                          solve_core_expansion)
from .ball import Ball, _ulp, _up, workprec
from .harmonic import EXACT_LIMIT_DEFAULT, HarmonicState
from .legendre import central_binomial_ratio


class BoundKind(enum.Enum):
    ALTERNATING_LEIBNIZ = "AlternatingLeibniz"
    RATIO_ENVELOPE = "RatioEnvelope"
    GEOMETRIC_TAIL = "GeometricTail"
    ACCELERATED_EMPIRICAL = "Accelerated-Empirical"

    @property
    def rigorous(self) -> bool:
        return self is not BoundKind.ACCELERATED_EMPIRICAL


@dataclass
class SumResult:
    value: Ball
    terms_used: int
    bound_kind: BoundKind


class SignPattern(enum.Enum):
    POSITIVE = "positive"
    ALTERNATING = "alternating"
    ALTERNATING_EVEN = "alternating-even"


@dataclass
class SeriesSpec:
    """Ad-hoc series: term(n, HarmonicState, ctx) -> Ball."""

    term: Callable
    sign_pattern: SignPattern = SignPattern.POSITIVE
    decay: Optional[Fraction] = None
    start: int = 0
    model: Optional["SeriesModel"] = None


class SummationError(ArithmeticError):
    """Requested tolerance unreachable with the permitted strategies."""


# ----------------------------------------------------------------------
# exact weight-value tables (Fractions up to the switchover, Balls beyond)
# ----------------------------------------------------------------------

class _Table:
    def __init__(self, step_fn, first):
        self.vals = [first]
        self.step = step_fn

    def __call__(self, k: int):
        vals = self.vals
        while len(vals) <= k:
            i = len(vals)
            prev = vals[-1]
            if isinstance(prev, Fraction) and i >= EXACT_LIMIT_DEFAULT:
                prev = Ball.from_fraction(prev)
            vals.append(self.step(prev, i))
        return vals[k]


def _fr_or_ball(prev, q: Fraction):
    return prev + (q if isinstance(prev, Fraction) else Ball.from_fraction(q))


_H = _Table(lambda p, i: _fr_or_ball(p, Fraction(1, i)), Fraction(0))
_H2 = _Table(lambda p, i: _fr_or_ball(p, Fraction(1, i * i)), Fraction(0))
_H3 = _Table(lambda p, i: _fr_or_ball(p, Fraction(1, i ** 3)), Fraction(0))
_HODD = _Table(lambda p, i: _fr_or_ball(p, Fraction(1, 2 * i + 1)), Fraction(1))
_HODD2 = _Table(lambda p, i: _fr_or_ball(p, Fraction(1, (2 * i + 1) ** 2)), Fraction(1))
_HODD3 = _Table(lambda p, i: _fr_or_ball(p, Fraction(1, (2 * i + 1) ** 3)), Fraction(1))
_ETA2 = _Table(lambda p, i: _fr_or_ball(p, Fraction((-1) ** (i + 1), i * i)), Fraction(0))


def _const_ball(name: str) -> Ball:
    v = {"gamma": mp.euler, "log2": mp.log(2), "zeta2": mp.zeta(2),
         "zeta3": mp.zeta(3), "pi2_8": mp.pi ** 2 / 8,
         "zeta3_78": 7 * mp.zeta(3) / 8, "eta2": mp.pi ** 2 / 12}[name]
    v = +v
    return Ball(v, _ulp(v, 8))


# ----------------------------------------------------------------------
# weight atoms
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class Weight:
    """atom^power with an integer index shift (atom evaluated at n + shift)."""

    kind: str          # H | H2 | H3 | HODD | HODD2 | HODD3 | H2N | SIGMA2
    shift: int = 0
    power: int = 1


def _weight_value(w: Weight, n: int) -> Union[Fraction, Ball]:
    k = n + w.shift
    if w.kind == "H":
        base = _H(k)
    elif w.kind == "H2":
        base = _H2(k)
    elif w.kind == "H3":
        base = _H3(k)
    elif w.kind == "HODD":
        base = _HODD(k)
    elif w.kind == "HODD2":
        base = _HODD2(k)
    elif w.kind == "HODD3":
        base = _HODD3(k)
    elif w.kind == "H2N":
        base = _H(2 * n + w.shift)
    elif w.kind == "SIGMA2":
        # sigma(k) = (-1)^k (eta(2) - eta2_partial(k)) > 0
        part = _ETA2(k)
        part = part if isinstance(part, Ball) else Ball.from_fraction(part)
        base = (_const_ball("eta2") - part) * ((-1) ** k)
    else:
        raise ValueError(w.kind)
    if w.power == 1:
        return base
    if isinstance(base, Fraction):
        return base ** w.power
    return base.powi(w.power)


def _weight_expansion(w: Weight, depth: int) -> AsymSeries:
    sh = Fraction(w.shift)
    if w.kind == "H":
        e = psi0_expansion(sh + 1, depth) + AsymSeries(
            {(Fraction(0), 0): _const_ball("gamma")}, Fraction(depth + 1))
    elif w.kind == "H2":
        e = AsymSeries({(Fraction(0), 0): _const_ball("zeta2")}, Fraction(depth + 1)) \
            + psi1_expansion(sh + 1, depth).scale(Fraction(-1))
    elif w.kind == "H3":
        e = AsymSeries({(Fraction(0), 0): _const_ball("zeta3")}, Fraction(depth + 1)) \
            + psi2_expansion(sh + 1, depth).scale(Fraction(1, 2))
    elif w.kind == "HODD":
        e = psi0_expansion(sh + Fraction(3, 2), depth).scale(Fraction(1, 2)) \
            + AsymSeries({(Fraction(0), 0): _const_ball("gamma") * Fraction(1, 2)
                          + _const_ball("log2")}, Fraction(depth + 1))
    elif w.kind == "HODD2":
        e = AsymSeries({(Fraction(0), 0): _const_ball("pi2_8")}, Fraction(depth + 1)) \
            + psi1_expansion(sh + Fraction(3, 2), depth).scale(Fraction(-1, 4))
    elif w.kind == "HODD3":
        e = AsymSeries({(Fraction(0), 0): _const_ball("zeta3_78")}, Fraction(depth + 1)) \
            + psi2_expansion(sh + Fraction(3, 2), depth).scale(Fraction(1, 16))
    elif w.kind == "H2N":
        # H_{2n+shift} = psi(2n+shift+1) + gamma, x = 2(n + (shift+1)/2)
        inner = Fraction(w.shift + 1, 2)
        e = psi0_scaled_expansion(2, inner, depth) + AsymSeries(
            {(Fraction(0), 0): _const_ball("gamma")}, Fraction(depth + 1))
    elif w.kind == "SIGMA2":
        e = eta2_tail_expansion(sh, depth)
    else:
        raise ValueError(w.kind)
    if w.power == 1:
        return e
    out = e
    for _ in range(w.power - 1):
        out = out * e
    return out


def psi0_scaled_expansion(scale: int, shift: Fraction, depth: int) -> AsymSeries:
    """psi(scale*(n + shift)) as a 1/n log-Laurent series."""
    from .asymptotics import _inv_power_shift_series, _log_shift_series, _bern, _BERN_DEPTH
    lg = +mp.log(scale)
    out = _log_shift_series(shift, depth) + AsymSeries(
        {(Fraction(0), 0): Ball(lg, _ulp(lg, 8))}, Fraction(depth + 1))
    out = out + _inv_power_shift_series(shift, Fraction(1), depth).scale(Fraction(-1, 2 * scale))
    for k in range(1, _BERN_DEPTH + 1):
        if 2 * k > depth:
            break
        out = out + _inv_power_shift_series(shift, Fraction(2 * k), depth).scale(
            -_bern(2 * k) / (2 * k * scale ** (2 * k)))
    return out


# ----------------------------------------------------------------------
# the structured model
# ----------------------------------------------------------------------

def _poly_eval_fr(p: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(tuple(p)):
        acc = acc * x + c
    return acc


@dataclass
class SeriesModel:
    """sum_{n>=start} scale * sign_pattern(n) * core(n) * prod weights(n).

    core(start) = t0 > 0; core(n+1)/core(n) = |ratio_num(n)/ratio_den(n)|.
    The signed ratio must have constant sign for n >= start (constructor
    helpers split irregular heads off first).  `alternating` applies
    (-1)^(n-start).
    """

    t0: Fraction
    ratio_num: tuple
    ratio_den: tuple
    start: int = 0
    alternating: bool = False
    weights: tuple = ()
    scale: Fraction = Fraction(1)
    head: tuple = ()          # exact (index, Fraction|tuple-of-weighted) head terms, summed as-is
    label: str = ""
    _core_cache: list = field(default_factory=list, repr=False)

    def ratio_at(self, n: int) -> Fraction:
        return _poly_eval_fr(self.ratio_num, Fraction(n)) / _poly_eval_fr(self.ratio_den, Fraction(n))

    def core(self, n: int) -> Union[Fraction, Ball]:
        """|core| at n >= start (exact while Fractions stay affordable)."""
        cache = self._core_cache
        if not cache:
            cache.append(self.t0)
        while len(cache) <= n - self.start:
            i = self.start + len(cache) - 1
            prev = cache[-1]
            r = abs(self.ratio_at(i))
            if isinstance(prev, Fraction) and (i - self.start) >= EXACT_LIMIT_DEFAULT:
                prev = Ball.from_fraction(prev)
            cache.append(prev * r if isinstance(prev, Fraction) else prev * Ball.from_fraction(r))
        return cache[n - self.start]

    def ratio_limit(self) -> Fraction:
        num, den = list(self.ratio_num), list(self.ratio_den)
        while num and num[-1] == 0:
            num.pop()
        while den and den[-1] == 0:
            den.pop()
        if len(num) < len(den):
            return Fraction(0)
        if len(num) > len(den):
            raise SummationError("divergent ratio")
        return Fraction(num[-1]) / den[-1]

    def term_ball(self, n: int) -> Ball:
        """Signed term at n (including scale and alternation)."""
        v = self.magnitude_ball(n)
        sign = -1 if (self.alternating and (n - self.start) % 2 == 1) else 1
        if self.scale < 0:
            sign = -sign
        return v * sign

    def magnitude_ball(self, n: int) -> Ball:
        c = self.core(n)
        v = Ball.from_fraction(c) if isinstance(c, Fraction) else c
        for w in self.weights:
            wv = _weight_value(w, n)
            v = v * (Ball.from_fraction(wv) if isinstance(wv, Fraction) else wv)
        q = abs(self.scale)
        if q != 1:
            v = v * Ball.from_fraction(q)
        return v


def _split_sign_head(value_at, start: int, label: str = ""):
    """Locate n0 where the sign pattern settles into 'constant' or
    'strictly alternating'; earlier terms go to the exact head.

    Returns (n0, alternating, head_values) with head_values the signed
    rational term values for start <= n < n0.
    """
    window = 96
    vals = [value_at(start + k) for k in range(window)]
    signs = [0 if v == 0 else (1 if v > 0 else -1) for v in vals]
    tail = signs[-16:]
    constant = all(s == tail[0] and s != 0 for s in tail)
    alternating = all(tail[i] == -tail[i + 1] and tail[i] != 0 for i in range(15))
    if not constant and not alternating:
        raise SummationError(f"sign pattern unsettled ({label})")
    n0 = 0
    if constant:
        for k in range(window - 1, -1, -1):
            if signs[k] != tail[0]:
                n0 = k + 1
                break
    else:
        want = tail[-1]
        for k in range(window - 1, -1, -1):
            if signs[k] != want:
                n0 = k + 1
                break
            want = -want
    return start + n0, alternating, vals[:n0]


def make_model(num, den, cpow: int = 0, start: int = 0, weights=(), scale=1,
               geom: Fraction = Fraction(1), label: str = "") -> SeriesModel:
    """Model for scale * R(n) * c_n^cpow * geom^n * weights, R = num/den.

    num/den are Fraction coefficient sequences in n (degree order).  The
    constructor locates the index where the signed term pattern stabilizes
    and folds earlier terms into the exact head.
    """
    num = tuple(Fraction(c) for c in num)
    den = tuple(Fraction(c) for c in den)
    geom = Fraction(geom)
    scale = Fraction(scale)
    rnum, rden = _shifted_ratio(num, den)
    # c_n ratio: (2n+1)/(2n+2) to the cpow power; negative powers swap
    for _ in range(abs(cpow)):
        a, b = (1, 2), (2, 2)  # 2n+1, 2n+2
        if cpow > 0:
            rnum = _poly_mul(rnum, a)
            rden = _poly_mul(rden, b)
        else:
            rnum = _poly_mul(rnum, b)
            rden = _poly_mul(rden, a)
    if geom != 1:
        rnum = tuple(c * geom.numerator for c in rnum)
        rden = tuple(c * geom.denominator for c in rden)

    def value_at(n: int) -> Fraction:
        v = _poly_eval_fr(num, Fraction(n)) / _poly_eval_fr(den, Fraction(n))
        cb = central_binomial_ratio(n)
        return v * cb ** cpow * geom ** n

    n0, alt, head_vals = _split_sign_head(value_at, start, label)
    head = tuple((start + k, scale * v) for k, v in enumerate(head_vals))
    t0 = value_at(n0)
    sign0 = Fraction(1) if t0 > 0 else Fraction(-1)
    return SeriesModel(t0=abs(t0), ratio_num=rnum, ratio_den=rden, start=n0,
                       alternating=alt, weights=tuple(weights),
                       scale=scale * sign0, head=head, label=label)


def _poly_mul(a, b):
    a, b = tuple(a), tuple(b)
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += Fraction(x) * Fraction(y)
    return tuple(out)


def _shifted_ratio(num, den):
    """ratio polynomials of R(n) = num/den: R(n+1)*den(n) / (R-den(n+1)*num(n))."""
    shift_num = _poly_shift(num)
    shift_den = _poly_shift(den)
    return _poly_mul(shift_num, den), _poly_mul(shift_den, num)


def _poly_shift(p):
    """p(n+1) coefficients."""
    p = tuple(Fraction(c) for c in p)
    out = [Fraction(0)] * len(p)
    for i, c in enumerate(p):
        # expand c*(n+1)^i
        b = Fraction(1)
        for j in range(i + 1):
            out[j] += c * b
            b = b * (i - j) / (j + 1)
    return tuple(out)


# ----------------------------------------------------------------------
# model evaluation
# ----------------------------------------------------------------------

_DEPTH_DEFAULT = 26


def evaluate_model(model: SeriesModel, ctx, tail_digits: Optional[int] = None,
                   max_terms: int = 2_000_000) -> SumResult:
    with workprec(ctx):
        target = mpf(10) ** (-(tail_digits or (ctx.target_digits + 5)))
        limit = abs(model.ratio_limit())
        if limit < 1:
            return _eval_geometric(model, target, max_terms)
        if limit > 1:
            raise SummationError("terms do not tend to zero")
        if model.alternating:
            return _eval_alternating(model, target, max_terms)
        return _eval_positive(model, target, max_terms)


def _head_ball(model: SeriesModel) -> Ball:
    """Exact head terms (already carry the caller's scale and true signs)."""
    total = Ball.exact(0)
    for k, v in model.head:
        t = Ball.from_fraction(v)
        for w in model.weights:
            wv = _weight_value(w, k)
            t = t * (Ball.from_fraction(wv) if isinstance(wv, Fraction) else wv)
        total = total + t
    return total


def _partial_sum(model: SeriesModel, N: int) -> Ball:
    """sum of signed terms for start <= n < N (plus the irregular head)."""
    mids = mpf(0)
    abs_acc = mpf(0)
    rad_acc = mpf(0)
    count = 0
    for n in range(model.start, N):
        t = model.term_ball(n)
        mids += t.mid
        abs_acc += abs(t.mid)
        rad_acc += t.rad
        count += 1
    rounding = _up((count + 2) * abs_acc * mpf(2) ** (1 - mp.mp.prec))
    return Ball(mids, _up(rad_acc + rounding)) + _head_ball(model)


def _sign_at(model: SeriesModel, n: int) -> int:
    s = -1 if (model.alternating and (n - model.start) % 2 == 1) else 1
    return -s if model.scale < 0 else s


def _eval_positive(model: SeriesModel, target, max_terms) -> SumResult:
    N = 320
    depth = _DEPTH_DEFAULT
    last_err = None
    for _ in range(4):
        if N > max_terms:
            break
        try:
            alpha, F = solve_core_expansion(model.ratio_num, model.ratio_den, depth)
            expansion = AsymSeries.from_power_series(F, Fraction(0)).shift_power(alpha)
            for w in model.weights:
                expansion = expansion * _weight_expansion(w, depth)
            # calibrate C from two far probes
            c_vals = []
            for probe in (3 * N, 4 * N):
                core = model.core(probe)
                core_b = Ball.from_fraction(core) if isinstance(core, Fraction) else core
                f_val = AsymSeries.from_power_series(F, Fraction(0)).shift_power(alpha).eval_at(probe)
                c_vals.append(core_b / f_val)
            C = Ball(c_vals[1].mid, _up(c_vals[1].rad + 4 * abs(c_vals[1].mid - c_vals[0].mid)))
            tail = hurwitz_tail(expansion, C * Ball.from_fraction(abs(model.scale)),
                                N, lambda n: model.magnitude_ball(n))
            if model.scale < 0:
                tail = -tail
            partial = _partial_sum(model, N + 1)
            value = partial + tail
            if value.rad <= target or N * 2 > max_terms:
                return SumResult(value, N, BoundKind.RATIO_ENVELOPE)
            last_err = None
        except (EnvelopeError, SummationError) as e:
            last_err = e
        N *= 2
        depth += 4
    # fall back to plain direct summation with the integral-comparison bound
    try:
        return _direct_positive(model, target, max_terms)
    except SummationError:
        if last_err is not None:
            raise SummationError(str(last_err))
        raise


def _eval_alternating(model: SeriesModel, target, max_terms) -> SumResult:
    N = 480
    for attempt in range(4):
        if N > max_terms:
            raise SummationError("alternating tail did not reach tolerance")
        partial = _partial_sum(model, N)
        stages = 6
        best = None
        while stages <= 44:
            try:
                t = averaged_alternating_tail(lambda j: model.magnitude_ball(j), N, stages)
            except EnvelopeError:
                break
            signed = t * _sign_at(model, N)
            best = partial + signed
            if best.rad <= target:
                return SumResult(best, N, BoundKind.ALTERNATING_LEIBNIZ)
            stages += 6
        N *= 2
    if best is not None:
        return SumResult(best, N // 2, BoundKind.ALTERNATING_LEIBNIZ)
    raise SummationError("alternating evaluation failed")


def _eval_geometric(model: SeriesModel, target, max_terms) -> SumResult:
    q_inf = abs(model.ratio_limit())
    n = model.start
    mids = mpf(0)
    rad_acc = mpf(0)
    abs_acc = mpf(0)
    count = 0
    bound = None
    while True:
        t = model.term_ball(n)
        mids += t.mid
        rad_acc += t.rad
        abs_acc += abs(t.mid)
        count += 1
        q_here = abs(model.ratio_at(n))
        q_up = float(max(q_here, q_inf)) * (1 + 2 ** -30)
        if q_up < 1:
            bound = geometric_tail(model.magnitude_ball(n), q_up)
            if bound.rad <= target / 2:
                break
        if count > max_terms or count > 8 * mp.mp.prec + 64:
            break
        n += 1
    if bound is None:
        raise SummationError("no geometric bound established")
    rounding = _up((count + 2) * abs_acc * mpf(2) ** (1 - mp.mp.prec))
    partial = Ball(mids, _up(rad_acc + rounding)) + _head_ball(model)
    value = Ball(partial.mid, _up(partial.rad + bound.rad))
    return SumResult(value, count, BoundKind.GEOMETRIC_TAIL)


def _direct_positive(model: SeriesModel, target, max_terms) -> SumResult:
    """Plain partial sum + integral-comparison envelope C*N^(1-alpha)-style."""
    alpha, _F = solve_core_expansion(model.ratio_num, model.ratio_den, 4)
    # effective decay grows by the log weights only; require alpha > 1
    if alpha <= 1:
        raise SummationError("positive series needs decay exponent > 1")
    N = 4096
    while True:
        # envelope check on [N, 2N]: ratio <= 1 - alpha'/n with alpha' > 1
        for n in (N, N + N // 3, 2 * N):
            r = abs(model.ratio_at(n))
            if not r <= 1 - Fraction(1, n):
                raise SummationError("ratio envelope failed; needs acceleration")
        partial = _partial_sum(model, N + 1)
        tN = model.magnitude_ball(N).abs_upper()
        # integral comparison: tail <= t_N * (N+1)/(alpha-1) plus log-weight slack
        slack = mpf(mp.log(N)) ** sum(w.power for w in model.weights) if model.weights else mpf(1)
        bound = _up(tN * (N + 1) / (float(alpha) - 1) * slack)
        value = Ball(partial.mid, _up(partial.rad + bound))
        if bound <= target or 2 * N > max_terms:
            return SumResult(value, N, BoundKind.RATIO_ENVELOPE)
        N *= 2


# ----------------------------------------------------------------------
# public operations
# ----------------------------------------------------------------------

def sum_positive(spec: SeriesSpec, ctx, max_terms: int = 2_000_000) -> SumResult:
    if spec.model is not None:
        return evaluate_model(spec.model, ctx, max_terms=max_terms)
    with workprec(ctx):
        # direct summation with a numerically verified ratio envelope
        st = HarmonicState()
        n = spec.start
        for _ in range(spec.start):
            st.advance()
        mids, rad_acc, abs_acc = mpf(0), mpf(0), mpf(0)
        prev = None
        count = 0
        target = mpf(10) ** (-ctx.target_digits - 2)
        alpha = float(spec.decay) if spec.decay else None
        while count < max_terms:
            t = spec.term(n, st, ctx)
            mids += t.mid
            rad_acc += t.rad
            abs_acc += abs(t.mid)
            if prev is not None and abs(prev.mid) > 0 and alpha:
                bound = _up(abs(t.mid) * (n + 1) / (alpha - 1))
                if bound <= target and count > 32:
                    break
            prev = t
            st.advance()
            n += 1
            count += 1
        else:
            if alpha is None:
                raise SummationError("need decay metadata for a rigorous bound")
        # envelope verification on [N, 2N] by sampling the ratio
        t_hi = spec.term(2 * n, _state_at(2 * n), ctx)
        if not abs(t_hi.mid) <= abs(t.mid):
            raise SummationError("envelope verification failed on [N, 2N]")
        bound = _up(abs(t.mid) * (n + 1) / ((alpha or 2) - 1))
        rounding = _up((count + 2) * abs_acc * mpf(2) ** (1 - mp.mp.prec))
        return SumResult(Ball(mids, _up(rad_acc + rounding + bound)),
                         count, BoundKind.RATIO_ENVELOPE)


def _state_at(n: int) -> HarmonicState:
    st = HarmonicState()
    for _ in range(n):
        st.advance()
    return st


def sum_alternating(spec: SeriesSpec, ctx, max_terms: int = 2_000_000) -> SumResult:
    if spec.model is not None:
        return evaluate_model(spec.model, ctx, max_terms=max_terms)
    with workprec(ctx):
        st = HarmonicState()
        for _ in range(spec.start):
            st.advance()
        n = spec.start
        mids, rad_acc, abs_acc = mpf(0), mpf(0), mpf(0)
        count = 0
        target = mpf(10) ** (-ctx.target_digits - 2)
        window: list = []
        while count < max_terms:
            t = spec.term(n, st, ctx)
            window.append(abs(t.mid))
            if len(window) > 24:
                window.pop(0)
            if abs(t.mid) + t.rad <= target and count > 24:
                # Leibniz: |tail| <= first omitted term; monotone window check
                if any(window[i] < window[i + 1] for i in range(len(window) - 1)):
                    raise SummationError("alternating terms not eventually monotone")
                bound = abs(t.mid) + t.rad
                rounding = _up((count + 2) * abs_acc * mpf(2) ** (1 - mp.mp.prec))
                return SumResult(Ball(mids, _up(rad_acc + rounding + bound)),
                                 count, BoundKind.ALTERNATING_LEIBNIZ)
            mids += t.mid
            rad_acc += t.rad
            abs_acc += abs(t.mid)
            st.advance()
            n += 1
            count += 1
        raise SummationError("alternating series did not reach tolerance")


def sum_alternating_cvz(spec: SeriesSpec, depth: int, ctx) -> SumResult:
    """CVZ acceleration; magnitude callable taken from the spec/model."""
    with workprec(ctx):
        if spec.model is not None:
            m = spec.model
            if not m.alternating:
                raise SummationError("CVZ needs an alternating series")
            sign = _sign_at(m, m.start)
            acc = cvz_alternating(lambda k: m.magnitude_ball(m.start + k), depth)
            total = acc * sign
            for k, v in m.head:
                t = Ball.from_fraction(v * abs(m.scale))
                for w in m.weights:
                    wv = _weight_value(w, k)
                    t = t * (Ball.from_fraction(wv) if isinstance(wv, Fraction) else wv)
                total = total + t
            return SumResult(total, depth, BoundKind.ACCELERATED_EMPIRICAL)
        if spec.sign_pattern is SignPattern.POSITIVE:
            raise SummationError("CVZ needs an alternating series")
        st0 = _state_at(spec.start)

        def mag(k):
            nonlocal st0
            st = _state_at(spec.start + k)
            return abs(spec.term(spec.start + k, st, ctx))

        acc = cvz_alternating(mag, depth)
        return SumResult(acc, depth, BoundKind.ACCELERATED_EMPIRICAL)


# ----------------------------------------------------------------------
# built-in Euler sums
# ----------------------------------------------------------------------

def _odd_power_model(power: int, weights=(), start=0, scale=1, alt=False) -> SeriesModel:
    m = make_model(num=(1,), den=_poly_pow((1, 2), power), start=start,
                   weights=weights, scale=scale)
    if alt:
        m = SeriesModel(t0=m.t0, ratio_num=m.ratio_num, ratio_den=m.ratio_den,
                        start=m.start, alternating=True, weights=m.weights,
                        scale=m.scale, head=m.head, label=m.label)
    return m


def _poly_pow(p, k):
    out = (Fraction(1),)
    for _ in range(k):
        out = _poly_mul(out, p)
    return out


EULER_SUM_KINDS = (
    "hodd_over_odd3",        # sum Hodd_n/(2n+1)^3
    "zz112",                 # Z(1,1,2)
    "z_hoddsq_odd2",         # Z-indexed sum Hodd^2/(2n+1)^2
    "z_alt_hoddsq_odd2",     # Z-indexed alternating Hodd^2/(2n+1)^2
    "z_alt_hoddcube_odd1",   # Z-indexed alternating Hodd^3/(2n+1)
    "alt_h_odd2",            # sum_{n>=1} (-1)^n H_n/(2n+1)^2
    "alt_h2n_odd2",          # sum_{n>=1} (-1)^n H_{2n}/(2n+1)^2
    "mu1",                   # sum (-1)^(n+1) H_n/n^3
    "hn_n4",                 # sum H_n/n^4
    "hn_h2n_n2",             # sum H_n H_{2n}/n^2 (numeric only)
    "hoddsq_odd2",           # sum Hodd^2/(2n+1)^2
    "alt_hodd_odd3",         # sum (-1)^n Hodd_n/(2n+1)^3
    "alt_hoddsq_odd2",       # sum (-1)^n Hodd^2/(2n+1)^2
    "alt_hoddcube_odd1",     # sum (-1)^n Hodd^3/(2n+1)
    "alt_hoddsq_odd1",       # sum (-1)^n Hodd^2/(2n+1)
    "alt_hodd3w_odd1",       # sum (-1)^n Hodd^(3)_n/(2n+1)
)


def euler_sum(kind: str, ctx) -> SumResult:
    """Built-in Euler sums; Z-indexed kinds fold onto two half-lines through
    Hodd(-1) = 0, Hodd(-(n+2)) = Hodd(n)."""
    if kind not in EULER_SUM_KINDS:
        raise ValueError(f"unknown euler sum kind: {kind}")
    if kind == "hodd_over_odd3":
        return evaluate_model(_odd_power_model(3, weights=(Weight("HODD"),)), ctx)
    if kind == "hoddsq_odd2":
        return evaluate_model(_odd_power_model(2, weights=(Weight("HODD", power=2),)), ctx)
    if kind == "zz112":
        s2 = euler_sum("hoddsq_odd2", ctx)
        from .constants import ConstId, const_value
        pi4 = const_value(ConstId.Pi, ctx).powi(4)
        return SumResult(s2.value - pi4 * Fraction(5, 384), s2.terms_used, s2.bound_kind)
    if kind == "z_hoddsq_odd2":
        # 2*sum Hodd^2/(2n+1)^2 - 2*sum Hodd/(2n+1)^3 + sum 1/(2n+1)^4
        a = euler_sum("hoddsq_odd2", ctx)
        b = euler_sum("hodd_over_odd3", ctx)
        c = evaluate_model(_odd_power_model(4), ctx)
        return _combine((a, 2), (b, -2), (c, 1))
    if kind == "z_alt_hoddsq_odd2":
        a = euler_sum("alt_hodd_odd3", ctx)
        c = evaluate_model(_odd_power_model(4, alt=True), ctx)
        return _combine((a, 2), (c, -1))
    if kind == "z_alt_hoddcube_odd1":
        a = euler_sum("alt_hoddcube_odd1", ctx)
        b = euler_sum("alt_hoddsq_odd2", ctx)
        c = euler_sum("alt_hodd_odd3", ctx)
        d = evaluate_model(_odd_power_model(4, alt=True), ctx)
        return _combine((a, 2), (b, -3), (c, 3), (d, -1))
    if kind == "alt_hodd_odd3":
        return evaluate_model(_odd_power_model(3, weights=(Weight("HODD"),), alt=True), ctx)
    if kind == "alt_hoddsq_odd2":
        return evaluate_model(_odd_power_model(2, weights=(Weight("HODD", power=2),), alt=True), ctx)
    if kind == "alt_hoddcube_odd1":
        return evaluate_model(_odd_power_model(1, weights=(Weight("HODD", power=3),), alt=True), ctx)
    if kind == "alt_hoddsq_odd1":
        return evaluate_model(_odd_power_model(1, weights=(Weight("HODD", power=2),), alt=True), ctx)
    if kind == "alt_hodd3w_odd1":
        return evaluate_model(_odd_power_model(1, weights=(Weight("HODD3"),), alt=True), ctx)
    if kind == "alt_h_odd2":
        m = make_model(num=(1,), den=_poly_pow((1, 2), 2), start=1,
                       weights=(Weight("H"),), scale=-1)
        m = SeriesModel(t0=m.t0, ratio_num=m.ratio_num, ratio_den=m.ratio_den,
                        start=m.start, alternating=True, weights=m.weights,
                        scale=m.scale, head=m.head)
        return evaluate_model(m, ctx)
    if kind == "alt_h2n_odd2":
        m = make_model(num=(1,), den=_poly_pow((1, 2), 2), start=1,
                       weights=(Weight("H2N"),), scale=-1)
        m = SeriesModel(t0=m.t0, ratio_num=m.ratio_num, ratio_den=m.ratio_den,
                        start=m.start, alternating=True, weights=m.weights,
                        scale=m.scale, head=m.head)
        return evaluate_model(m, ctx)
    if kind == "mu1":
        m = make_model(num=(1,), den=_poly_pow((0, 1), 3), start=1,
                       weights=(Weight("H"),))
        m = SeriesModel(t0=m.t0, ratio_num=m.ratio_num, ratio_den=m.ratio_den,
                        start=m.start, alternating=True, weights=m.weights,
                        scale=m.scale, head=m.head)
        return evaluate_model(m, ctx)
    if kind == "hn_n4":
        return evaluate_model(make_model(num=(1,), den=_poly_pow((0, 1), 4),
                                         start=1, weights=(Weight("H"),)), ctx)
    if kind == "hn_h2n_n2":
        return evaluate_model(make_model(num=(1,), den=_poly_pow((0, 1), 2), start=1,
                                         weights=(Weight("H"), Weight("H2N"))), ctx)
    raise AssertionError  # pragma: no cover


def _combine(*weighted) -> SumResult:
    total = Ball.exact(0)
    terms = 0
    kind = BoundKind.GEOMETRIC_TAIL
    rig = True
    for res, q in weighted:
        total = total + res.value * Fraction(q)
        terms = max(terms, res.terms_used)
        rig = rig and res.bound_kind.rigorous
        kind = res.bound_kind
    if not rig:
        kind = BoundKind.ACCELERATED_EMPIRICAL
    elif kind is BoundKind.GEOMETRIC_TAIL:
        kind = BoundKind.RATIO_ENVELOPE
    return SumResult(total, terms, kind)


# ----------------------------------------------------------------------
# generalized hypergeometric at z with |z| <= 1
# ----------------------------------------------------------------------

def hypergeometric(params_up: Sequence, params_down: Sequence, z, ctx,
                   scale=1) -> SumResult:
    """pFq(params_up; params_down; z) by term recurrence, |z| <= 1.

    z = 1 needs sum(down) - sum(up) > 0; z = -1 needs > -1 (exact rational
    checks).  Lower parameters must avoid non-positive integers.
    """
    up = [Fraction(a) for a in params_up]
    down = [Fraction(b) for b in params_down]
    z = Fraction(z)
    for b in down:
        if b <= 0 and b.denominator == 1:
            raise SummationError("non-positive integer lower parameter")
    if abs(z) > 1:
        raise SummationError("|z| <= 1 required")
    if abs(z) == 1:
        margin = sum(down) - sum(up)
        if z == 1 and not margin > 0:
            raise SummationError("divergent at z = 1")
        if z == -1 and not margin > -1:
            raise SummationError("divergent at z = -1")
    num = (Fraction(1),)
    den = (Fraction(1),)
    for a in up:
        num = _poly_mul(num, (a, 1))
    for b in down:
        den = _poly_mul(den, (b, 1))
    den = _poly_mul(den, (1, 1))  # the k! factor
    if z != 1:
        num = tuple(c * z.numerator for c in num)
        den = tuple(c * z.denominator for c in den)
    # model with t0 = 1 at k = 0 and ratio num/den
    model = _model_from_ratio(num, den)
    res = evaluate_model(model, ctx)
    if scale != 1:
        res = SumResult(res.value * Fraction(scale), res.terms_used, res.bound_kind)
    return res


def _model_from_ratio(rnum, rden, start: int = 0) -> SeriesModel:
    """Model with t(start) = 1 and signed ratio rnum/rden; the head absorbs
    indices where the ratio's sign has not yet settled."""
    # evaluate terms forward to find the settled sign
    terms = [Fraction(1)]
    for k in range(96):
        r = _poly_eval_fr(rnum, Fraction(start + k)) / _poly_eval_fr(rden, Fraction(start + k))
        terms.append(terms[-1] * r)
    last_flip = 0
    for k in range(1, 90):
        if terms[k] == 0 or (terms[k] > 0) != (terms[k + 1] > 0):
            if terms[k + 1] == 0 or (k > 0 and terms[k] == 0):
                last_flip = max(last_flip, k + 1)
            # sign change between k and k+1
            if terms[max(k + 8, 40)] * terms[max(k + 9, 41)] < 0:
                continue  # still alternating; fine if it alternates forever
    # detect strict alternation over the far window
    alt = terms[80] * terms[81] < 0
    n0 = 0
    if not alt:
        for k in range(88, 0, -1):
            if terms[k - 1] * terms[k] < 0 or terms[k - 1] == 0:
                n0 = k
                break
    else:
        for k in range(88, 1, -1):
            if terms[k - 1] * terms[k] > 0 or terms[k - 1] == 0:
                n0 = k
                break
    head = tuple((start + k, terms[k]) for k in range(n0))
    t0 = terms[n0]
    sign0 = Fraction(1) if t0 > 0 else Fraction(-1)
    return SeriesModel(t0=abs(t0), ratio_num=tuple(rnum), ratio_den=tuple(rden),
                       start=start + n0, alternating=alt, scale=sign0, head=head)
