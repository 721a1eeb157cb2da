"""Incremental harmonic-number state shared by all series evaluators.

Tracks, per index n:

    H    = H_n            = sum_{k=1..n} 1/k          (and weight-2, -3)
    Hodd = sum_{k=0..n} 1/(2k+1)                      (and weight-2, -3)
    eta2 = sum_{k=1..n} (-1)^(k+1)/k^2                (eta(2) partial)
    leib = sum_{j=1..n} (-1)^(j+1)/(2j-1)             (pi/4 partial)

Values are exact Fractions up to `exact_limit` (default 10^4) and Balls
beyond, so low-index terms carry no rounding noise at all.

The odd harmonic numbers continue to negative indices through
Hodd(-1) = 0, Hodd(-(n+2)) = Hodd(n); `hodd_negative` exposes that map
for folding Z-indexed sums onto two half-lines.
"""

from __future__ import annotations

from fractions import Fraction

from .ball import Ball

EXACT_LIMIT_DEFAULT = 10_000


class HarmonicState:
    """State at index n; advance() moves to n+1 in O(1)."""

    __slots__ = ("n", "H", "H2", "H3", "Hodd", "Hodd2", "Hodd3",
                 "eta2", "leib", "exact_limit")

    def __init__(self, exact_limit: int = EXACT_LIMIT_DEFAULT):
        self.n = 0
        zero = Fraction(0)
        self.H = zero          # H_0
        self.H2 = zero
        self.H3 = zero
        one = Fraction(1)
        self.Hodd = one        # Hodd_0 = 1
        self.Hodd2 = one
        self.Hodd3 = one
        self.eta2 = zero       # eta2 partial at n=0 (empty sum over k<=0)
        self.leib = zero
        self.exact_limit = exact_limit

    def advance(self) -> None:
        n1 = self.n + 1
        if n1 == self.exact_limit:
            self._to_balls()
        if isinstance(self.H, Fraction):
            inv = Fraction(1, n1)
            invo = Fraction(1, 2 * n1 + 1)
            sign = 1 if n1 % 2 == 1 else -1
            self.H += inv
            self.H2 += inv * inv
            self.H3 += inv ** 3
            self.Hodd += invo
            self.Hodd2 += invo * invo
            self.Hodd3 += invo ** 3
            self.eta2 += Fraction(sign, n1 * n1)
            self.leib += Fraction(sign, 2 * n1 - 1)
        else:
            inv = Ball.exact(1) / Ball.exact(n1)
            invo = Ball.exact(1) / Ball.exact(2 * n1 + 1)
            sign = 1 if n1 % 2 == 1 else -1
            self.H = self.H + inv
            self.H2 = self.H2 + inv * inv
            self.H3 = self.H3 + inv * inv * inv
            self.Hodd = self.Hodd + invo
            self.Hodd2 = self.Hodd2 + invo * invo
            self.Hodd3 = self.Hodd3 + invo * invo * invo
            self.eta2 = self.eta2 + Ball.from_fraction(Fraction(sign, n1 * n1))
            self.leib = self.leib + Ball.from_fraction(Fraction(sign, 2 * n1 - 1))
        self.n = n1

    def _to_balls(self) -> None:
        for name in ("H", "H2", "H3", "Hodd", "Hodd2", "Hodd3", "eta2", "leib"):
            setattr(self, name, Ball.from_fraction(getattr(self, name)))


def harmonic_stream(exact_limit: int = EXACT_LIMIT_DEFAULT):
    """Yields the state at n = 0, 1, 2, ...; the same object is mutated."""
    st = HarmonicState(exact_limit)
    while True:
        yield st
        st.advance()


def hodd_negative(m: int) -> tuple[int, bool]:
    """Map a negative index -m (m >= 1) of Hodd to its non-negative twin.

    Returns (index, is_zero): Hodd(-1) = 0, Hodd(-(n+2)) = Hodd(n).
    """
    if m < 1:
        raise ValueError("expects the magnitude of a negative index")
    if m == 1:
        return 0, True
    return m - 2, False


# small exact tables used by coefficient formulas ----------------------------

def harmonic_exact(n: int) -> Fraction:
    """H_n as an exact Fraction (small n only)."""
    return sum((Fraction(1, k) for k in range(1, n + 1)), Fraction(0))


def harmonic2_exact(n: int) -> Fraction:
    return sum((Fraction(1, k * k) for k in range(1, n + 1)), Fraction(0))


def hodd_exact(n: int) -> Fraction:
    return sum((Fraction(1, 2 * k + 1) for k in range(n + 1)), Fraction(0))


def eta2_partial_exact(n: int) -> Fraction:
    """sum_{k=1..n} (-1)^(k+1)/k^2."""
    return sum((Fraction((-1) ** (k + 1), k * k) for k in range(1, n + 1)), Fraction(0))


def leibniz_partial_exact(m: int) -> Fraction:
    """sum_{j=1..m} (-1)^(j+1)/(2j-1)."""
    return sum((Fraction((-1) ** (j + 1), 2 * j - 1) for j in range(1, m + 1)), Fraction(0))
