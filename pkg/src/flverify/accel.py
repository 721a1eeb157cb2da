"""Alternating-series acceleration (Cohen-Rodriguez Villegas-Zagier).

Chebyshev-polynomial weighting of the first `depth` terms of
sum (-1)^n a_n converges like (3+sqrt 8)^-depth for totally monotone a_n
and empirically just as well for the harmonically twisted sequences used
here.  The bound is not rigorous, so callers must treat results as
Accelerated-Empirical and size the radius from a depth/depth+8 agreement
run (`cvz_alternating` does both runs itself).
"""

from __future__ import annotations

import mpmath as mp
from mpmath import mpf

from .ball import Ball, _up


def _cvz_single(term, depth: int) -> mpf:
    d = (3 + mp.sqrt(8)) ** depth
    d = (d + 1 / d) / 2
    b, c, s = mpf(-1), -d, mpf(0)
    for k in range(depth):
        c = b - c
        a_k = term(k)
        a_k = a_k.mid if isinstance(a_k, Ball) else mpf(a_k)
        s += c * a_k
        b = (k + depth) * (k - depth) * b / ((k + mpf(1) / 2) * (k + 1))
    return s / d


def cvz_alternating(term, depth: int) -> Ball:
    """Empirical ball for sum_{n>=0} (-1)^n term(n), term(n) >= 0.

    Radius = |depth vs depth+8 difference| + theoretical decrement margin.
    """
    v1 = _cvz_single(term, depth)
    v2 = _cvz_single(term, depth + 8)
    diff = abs(v2 - v1)
    margin = abs(v2) * (3 + mp.sqrt(8)) ** (-depth - 8) + mpf(2) ** (-mp.mp.prec + 10)
    return Ball(v2, _up(4 * (diff + margin)))
