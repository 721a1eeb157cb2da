"""Asymptotic tail summation for hypergeometric-type series.

The workhorse behind high-precision rigorous sums.  A term sequence with a
rational consecutive ratio t(n+1)/t(n) = P(n)/Q(n) -> 1 - alpha/n + ...
admits an asymptotic form

    t(n) = C * n^(-alpha) * F(1/n) * (1 + O(n^(-K-1))),

where alpha is rational and F is a power series with exact rational
coefficients, solved order by order from the ratio's functional equation.
Harmonic-type weight factors (H_n, odd harmonic numbers, their powers,
eta(2) partial-sum tails, ...) contribute log-Laurent expansions

    sum over (s, m) of  coef * ln(n)^m * n^(-s)

with coefficients that are exact rationals times {1, gamma, log 2, pi^2,
zeta(3)}.  The tail past N is then a finite combination of Hurwitz zeta
values and their s-derivatives:

    sum_{n>N} ln(n)^m n^(-s) = (-1)^m zeta^(m)(s, N+1).

Rigor model: the truncated expansion's remainder is enveloped numerically.
|t(n) - model(n)| <= D * ln(n)^M * n^(-s_cut) is verified on a window of
indices past N with the safety factor recorded in D; the tail then carries
the explicit error term D * |zeta^(M)(s_cut, N+1)|.  This is the same
"envelope verified before being trusted" convention the plain
integral-comparison bound uses.

Alternating series take a different, simpler route (iterated Euler
averaging with a Leibniz remainder on the transformed tail); see
`averaged_alternating_tail`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Union

import mpmath as mp
from mpmath import mpf

from .ball import Ball, _ulp, _up, ball_zeta_hurwitz

Coef = Union[Fraction, Ball]

# ----------------------------------------------------------------------
# Fraction polynomial / power-series helpers (dense lists, index = degree)
# ----------------------------------------------------------------------

def _poly_eval(p: list[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _series_mul(a: list[Fraction], b: list[Fraction], depth: int) -> list[Fraction]:
    out = [Fraction(0)] * (depth + 1)
    for i, ai in enumerate(a[: depth + 1]):
        if not ai:
            continue
        for j, bj in enumerate(b[: depth + 1 - i]):
            if bj:
                out[i + j] += ai * bj
    return out


def _series_inv(a: list[Fraction], depth: int) -> list[Fraction]:
    if not a or a[0] == 0:
        raise ZeroDivisionError("series inversion needs nonzero constant term")
    inv = [Fraction(0)] * (depth + 1)
    inv[0] = 1 / a[0]
    for k in range(1, depth + 1):
        s = Fraction(0)
        for j in range(1, k + 1):
            if j < len(a) and a[j]:
                s += a[j] * inv[k - j]
        inv[k] = -s / a[0]
    return inv


def _binom_frac(alpha: Fraction, k: int) -> Fraction:
    out = Fraction(1)
    for i in range(k):
        out *= (alpha - i)
        out /= (i + 1)
    return out


def _series_pow_binomial(c: Fraction, alpha: Fraction, depth: int) -> list[Fraction]:
    """(1 + c u)^alpha as a series in u."""
    return [_binom_frac(alpha, k) * c ** k for k in range(depth + 1)]


def _series_compose_shift(f: list[Fraction], depth: int) -> list[Fraction]:
    """f(u') where u' = u/(1+u): substitution used by w -> w+1."""
    out = [Fraction(0)] * (depth + 1)
    if f:
        out[0] = f[0]
    upow = [Fraction(1)] + [Fraction(0)] * depth  # (u/(1+u))^k, built iteratively
    base = _series_mul([Fraction(0), Fraction(1)], _series_pow_binomial(Fraction(1), Fraction(-1), depth), depth)
    for k in range(1, min(len(f), depth + 1)):
        upow = _series_mul(upow, base, depth)
        if f[k]:
            for i, c in enumerate(upow):
                out[i] += f[k] * c
    return out


# ----------------------------------------------------------------------
# hypergeometric core: solve t(n) ~ C n^(-alpha) F(1/n)
# ----------------------------------------------------------------------

_CORE_CACHE: dict = {}


def solve_core_expansion(num: tuple, den: tuple, depth: int):
    """alpha (Fraction) and F coefficients for ratio P(n)/Q(n) -> 1 - alpha/n.

    P, Q given as coefficient tuples (index = degree).  Requires equal
    degrees and equal leading coefficients (limit ratio exactly 1).
    """
    key = (num, den, depth)
    hit = _CORE_CACHE.get(key)
    if hit is not None:
        return hit
    P = [Fraction(c) for c in num]
    Q = [Fraction(c) for c in den]
    while P and P[-1] == 0:
        P.pop()
    while Q and Q[-1] == 0:
        Q.pop()
    if len(P) != len(Q) or P[-1] != Q[-1]:
        raise ValueError("ratio limit is not 1; use a geometric strategy")
    d = len(P) - 1
    # reverse into series in u = 1/n:  P(n) = n^d * sum p_{d-i} u^i
    Pu = [P[d - i] for i in range(d + 1)] + [Fraction(0)] * (depth + 1 - d)
    Qu = [Q[d - i] for i in range(d + 1)] + [Fraction(0)] * (depth + 1 - d)
    R = _series_mul(Pu, _series_inv(Qu, depth + 1), depth + 1)
    assert R[0] == 1
    alpha = -R[1]
    G = _series_mul(R, _series_pow_binomial(Fraction(1), alpha, depth + 1), depth + 1)
    assert G[1] == 0
    F = [Fraction(1)] + [Fraction(0)] * depth
    for k in range(1, depth + 1):
        lhs = _series_compose_shift(F, depth + 1)
        rhs = _series_mul(F, G, depth + 1)
        e = lhs[k + 1] - rhs[k + 1]
        F[k] = e / k
    out = (alpha, F)
    _CORE_CACHE[key] = out
    return out


def solve_alternating_tail(g: list[Fraction], depth: int) -> list[Fraction]:
    """sigma with sigma(x) + sigma(x+1) = g(x), as a series in u = 1/x.

    Used for eta-style partial-sum tails, e.g. sigma(x) = sum_{j>=1}
    (-1)^(j+1) (x+j)^(-2) satisfies sigma(x) + sigma(x+1) = (x+1)^(-2).
    """
    S = [Fraction(0)] * (depth + 1)
    for k in range(1, depth + 1):
        lhs = [a + b for a, b in zip(S, _series_compose_shift(S, depth))]
        e = (g[k] if k < len(g) else Fraction(0)) - lhs[k]
        S[k] = e / 2
    return S


# ----------------------------------------------------------------------
# log-Laurent expansions: {(s, m): coef} with s rational, m = log power
# ----------------------------------------------------------------------

@dataclass
class AsymSeries:
    """Finite expansion sum coef * ln(n)^m * n^(-s); s_cut bounds the error
    order: |remainder| <= D * ln(n)^max_m * n^(-s_cut) for some D fixed by
    the envelope check."""

    terms: dict
    s_cut: Fraction

    @staticmethod
    def one(s_cut) -> "AsymSeries":
        return AsymSeries({(Fraction(0), 0): Fraction(1)}, Fraction(s_cut))

    @staticmethod
    def from_power_series(coeffs: list[Fraction], base_power: Fraction = Fraction(0)) -> "AsymSeries":
        terms = {}
        for k, c in enumerate(coeffs):
            if c:
                terms[(base_power + k, 0)] = c
        return AsymSeries(terms, base_power + len(coeffs))

    def shift_power(self, ds: Fraction) -> "AsymSeries":
        return AsymSeries({(s + ds, m): c for (s, m), c in self.terms.items()},
                          self.s_cut + ds)

    def scale(self, q) -> "AsymSeries":
        return AsymSeries({k: _cmul(c, q) for k, c in self.terms.items()}, self.s_cut)

    def __add__(self, other: "AsymSeries") -> "AsymSeries":
        cut = min(self.s_cut, other.s_cut)
        out = {}
        for (s, m), c in list(self.terms.items()) + list(other.terms.items()):
            if s < cut:
                key = (s, m)
                out[key] = _cadd(out.get(key, Fraction(0)), c)
        return AsymSeries(out, cut)

    def __mul__(self, other: "AsymSeries") -> "AsymSeries":
        smin_a = min((s for s, _ in self.terms), default=self.s_cut)
        smin_b = min((s for s, _ in other.terms), default=other.s_cut)
        cut = min(self.s_cut + smin_b, other.s_cut + smin_a)
        out = {}
        for (s1, m1), c1 in self.terms.items():
            for (s2, m2), c2 in other.terms.items():
                s = s1 + s2
                if s >= cut:
                    continue
                key = (s, m1 + m2)
                out[key] = _cadd(out.get(key, Fraction(0)), _cmul(c1, c2))
        return AsymSeries(out, cut)

    def max_log_power(self) -> int:
        return max((m for _, m in self.terms), default=0)

    def eval_at(self, n: int) -> Ball:
        """Midline value at integer n (for envelope measurement)."""
        L = Ball(mp.log(n), _ulp(mp.log(n), 6))
        nb = Ball.exact(n)
        total = Ball.exact(0)
        for (s, m), c in sorted(self.terms.items()):
            piece = _as_ball(c)
            if m:
                piece = piece * L.powi(m)
            piece = piece * _ball_npow(nb, -s)
            total = total + piece
        return total


def _as_ball(c: Coef) -> Ball:
    return c if isinstance(c, Ball) else Ball.from_fraction(c)


def _cadd(a: Coef, b: Coef) -> Coef:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a + b
    return _as_ball(a) + _as_ball(b)


def _cmul(a: Coef, b) -> Coef:
    if isinstance(a, Fraction) and isinstance(b, (Fraction, int)):
        return a * b
    return _as_ball(a) * (b if isinstance(b, (Ball, int, Fraction)) else _as_ball(b))


def _ball_npow(nb: Ball, e: Fraction) -> Ball:
    if e.denominator == 1:
        return nb.powi(e.numerator)
    v = mp.power(nb.mid, mpf(e.numerator) / e.denominator)
    return Ball(v, _ulp(v, 6))


# ----------------------------------------------------------------------
# weight-atom expansions (exact values live in series.py's tables)
# ----------------------------------------------------------------------

_BERN_DEPTH = 8


def _bern(k: int) -> Fraction:
    p, q = mp.bernfrac(k)
    return Fraction(int(p), int(q))


def _log_shift_series(c: Fraction, depth: int) -> AsymSeries:
    """ln(n + c) = ln n + sum_{k>=1} (-1)^(k+1) c^k / (k n^k)."""
    terms = {(Fraction(0), 1): Fraction(1)}
    for k in range(1, depth + 1):
        if c:
            terms[(Fraction(k), 0)] = Fraction((-1) ** (k + 1)) * c ** k / k
    return AsymSeries(terms, Fraction(depth + 1))


def _inv_power_shift_series(c: Fraction, j: Fraction, depth: int) -> AsymSeries:
    """(n + c)^(-j) expanded in 1/n."""
    coeffs = _series_pow_binomial(c, -j, depth)
    return AsymSeries.from_power_series(coeffs, Fraction(0)).shift_power(Fraction(j))


def psi0_expansion(shift: Fraction, depth: int) -> AsymSeries:
    """psi(n + shift) ~ ln(n+shift) - 1/(2(n+shift)) - sum B_2k/(2k (n+shift)^2k)."""
    out = _log_shift_series(shift, depth)
    out = out + _inv_power_shift_series(shift, Fraction(1), depth).scale(Fraction(-1, 2))
    for k in range(1, _BERN_DEPTH + 1):
        if 2 * k > depth:
            break
        out = out + _inv_power_shift_series(shift, Fraction(2 * k), depth).scale(
            -_bern(2 * k) / (2 * k))
    return out


def psi1_expansion(shift: Fraction, depth: int) -> AsymSeries:
    """psi'(n+shift) ~ 1/x + 1/(2x^2) + sum B_2k x^(-2k-1)."""
    out = _inv_power_shift_series(shift, Fraction(1), depth)
    out = out + _inv_power_shift_series(shift, Fraction(2), depth).scale(Fraction(1, 2))
    for k in range(1, _BERN_DEPTH + 1):
        if 2 * k + 1 > depth:
            break
        out = out + _inv_power_shift_series(shift, Fraction(2 * k + 1), depth).scale(_bern(2 * k))
    return out


def psi2_expansion(shift: Fraction, depth: int) -> AsymSeries:
    """psi''(n+shift) ~ -1/x^2 - 1/x^3 - sum (2k+1) B_2k x^(-2k-2)."""
    out = _inv_power_shift_series(shift, Fraction(2), depth).scale(Fraction(-1))
    out = out + _inv_power_shift_series(shift, Fraction(3), depth).scale(Fraction(-1))
    for k in range(1, _BERN_DEPTH + 1):
        if 2 * k + 2 > depth:
            break
        out = out + _inv_power_shift_series(shift, Fraction(2 * k + 2), depth).scale(
            -(2 * k + 1) * _bern(2 * k))
    return out


def eta2_tail_expansion(shift: Fraction, depth: int) -> AsymSeries:
    """sigma(n) = sum_{j>=1} (-1)^(j+1) (n + shift + j)^(-2), series in 1/n.

    Solved from sigma(x) + sigma(x+1) = (x+1)^(-2) at x = n + shift.
    """
    g = _series_pow_binomial(Fraction(1), Fraction(-2), depth + 2)
    g = [Fraction(0), Fraction(0)] + g  # (x+1)^(-2) = u^2 (1+u)^(-2)
    S = solve_alternating_tail(g[: depth + 2], depth + 1)
    # re-center x = n + shift -> series in 1/n
    out = AsymSeries({}, Fraction(depth + 1))
    for k, c in enumerate(S):
        if c:
            out = out + _inv_power_shift_series(shift, Fraction(k), depth).scale(c)
    return out


# ----------------------------------------------------------------------
# Hurwitz tail evaluation with envelope verification
# ----------------------------------------------------------------------

_ZETA_CACHE: dict = {}


def _zeta_deriv(s: Fraction, m: int, a: int) -> Ball:
    key = (s, m, a, mp.mp.prec)
    hit = _ZETA_CACHE.get(key)
    if hit is None:
        hit = ball_zeta_hurwitz(s, Ball.exact(a), m)
        _ZETA_CACHE[key] = hit
    return hit


class EnvelopeError(ArithmeticError):
    """The truncated expansion failed its window verification."""


def hurwitz_tail(expansion: AsymSeries, prefactor: Ball, N: int,
                 term_fn: Callable[[int], Ball],
                 window: tuple = (1, 2, 3, 4)) -> Ball:
    """Ball for sum_{n > N} t(n), t(n) ~= prefactor * expansion(n), t positive.

    The remainder envelope |t - model| <= D ln^M(n) n^(-s_cut) is measured at
    n = N * window and inflated x4 before being integrated into the tail.
    """
    M = expansion.max_log_power()
    s_cut = expansion.s_cut
    # envelope measurement
    D = mpf(0)
    for mult in window:
        n = int(N * mult) + 1
        t = term_fn(n)
        model = prefactor * expansion.eval_at(n)
        diff = abs(t.mid - model.mid) + t.rad + model.rad
        scale = mp.log(n) ** M * mp.power(n, -mpf(s_cut.numerator) / s_cut.denominator)
        D = max(D, diff / scale)
    D = _up(4 * D + mpf(2) ** (-mp.mp.prec))
    # main tail
    total = Ball.exact(0)
    for (s, m), c in sorted(expansion.terms.items()):
        if s <= 1:
            raise EnvelopeError("non-summable expansion term; series diverges")
        z = _zeta_deriv(s, m, N + 1)
        sign = -1 if m % 2 else 1
        total = total + _as_ball(c) * z * sign
    total = prefactor * total
    if s_cut <= 1:
        raise EnvelopeError("error order not summable; deepen the expansion")
    err = D * abs(_zeta_deriv(s_cut, M, N + 1).abs_upper())
    return Ball(total.mid, _up(total.rad + err))


# ----------------------------------------------------------------------
# alternating series: iterated Euler averaging with Leibniz remainder
# ----------------------------------------------------------------------

def averaged_alternating_tail(term_fn: Callable[[int], Ball], N: int,
                              stages: int, check_window: int = 24) -> Ball:
    """Ball for sum_{j>=0} (-1)^j a(N+j), a(.) eventually positive decreasing.

    Euler transform: the sum equals sum_k D^k a(N) / 2^(k+1) + remainder,
    with D the forward difference a(j) - a(j+1).  After `stages` levels the
    remainder is an alternating series in D^stages a, bounded by its first
    term once positivity and monotonicity hold over the inspection window
    (verified numerically, as with every envelope here).
    """
    width = stages + check_window + 2
    buf = [term_fn(N + j) for j in range(width)]
    total = Ball.exact(0)
    half = Fraction(1, 2)
    scale = Fraction(1, 2)
    for _ in range(stages):
        total = total + buf[0] * scale
        buf = [buf[j] - buf[j + 1] for j in range(len(buf) - 1)]
        scale *= half
    # Leibniz gate on the transformed tail
    for j in range(len(buf) - 1):
        lo_j = buf[j].mid - buf[j].rad
        hi_next = buf[j + 1].mid + buf[j + 1].rad
        slack = _up((buf[j].rad + buf[j + 1].rad) * 4 + mpf(2) ** (-mp.mp.prec // 2))
        if lo_j < -slack or buf[j].mid + buf[j].rad < hi_next - slack:
            raise EnvelopeError(
                f"transformed tail not positive-decreasing at offset {j}; "
                "increase N or reduce stages")
    rem = _up(buf[0].abs_upper() * (2 * scale))
    return Ball(total.mid, _up(total.rad + rem))


def geometric_tail(term_abs_N: Ball, q_upper) -> Ball:
    """|sum_{n>N} t(n)| <= |t(N+1)| / (1 - q), zero-centered error ball."""
    q = mpf(q_upper)
    if not q < 1:
        raise ValueError("geometric bound needs q < 1")
    return Ball(mpf(0), _up(term_abs_N.abs_upper() / (1 - q)))
