"""Working-precision policy.

Everything downstream evaluates inside a PrecisionContext: binary working
precision sized from the requested decimal digits plus guard headroom, so
that accumulated rounding never eats into the digits the caller asked for.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

DEFAULT_GUARD_DIGITS = 15
_MIN_EXTRA_BITS = 32


@dataclass(frozen=True)
class PrecisionContext:
    """Immutable precision settings shared by a whole evaluation."""

    working_bits: int
    target_digits: int
    guard_digits: int = DEFAULT_GUARD_DIGITS

    def __post_init__(self):
        if self.target_digits < 1:
            raise ValueError("target_digits must be >= 1")
        if self.guard_digits < 0:
            raise ValueError("guard_digits must be >= 0")
        need = required_bits(self.target_digits, self.guard_digits)
        if self.working_bits < need:
            raise ValueError(
                f"working_bits={self.working_bits} below required {need}"
            )

    @property
    def tolerance_exponent(self) -> int:
        """Decimal exponent the caller cares about: 10**-target_digits."""
        return -self.target_digits

    def escalated(self) -> "PrecisionContext":
        """Context with doubled guard digits (radius-too-large retry)."""
        return make_context(self.target_digits, guard_digits=2 * max(self.guard_digits, 1))


def required_bits(target_digits: int, guard_digits: int) -> int:
    return math.ceil((target_digits + guard_digits) * math.log2(10)) + _MIN_EXTRA_BITS


def make_context(target_digits: int, guard_digits: int = DEFAULT_GUARD_DIGITS) -> PrecisionContext:
    """Context for `target_digits` requested decimal digits.

    One bit above the invariant floor: keeps the produced contexts strictly
    inside the feasible region even when (digits+guard)*log2(10) is a hair
    below an integer.
    """
    if target_digits < 1:
        raise ValueError("target_digits must be >= 1")
    return PrecisionContext(
        working_bits=required_bits(target_digits, guard_digits) + 1,
        target_digits=target_digits,
        guard_digits=guard_digits,
    )
