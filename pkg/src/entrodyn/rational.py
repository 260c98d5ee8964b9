"""Exact rational scalars and the few integer root/log helpers built on them.

All lattice arithmetic in this package runs over ``fractions.Fraction``,
which is always stored reduced with a positive denominator, exactly the
scalar contract the rest of the code relies on.
"""

from __future__ import annotations

import math
from fractions import Fraction

Rational = Fraction


def as_rational(value) -> Fraction:
    """Coerce an int, Fraction or exact string ("p/q", "3", "0.25") to Fraction.

    Floats are rejected: binary floats silently corrupt exactness guarantees.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rational scalars")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse rational from {value!r}") from exc
    raise TypeError(f"cannot coerce {type(value).__name__} to an exact rational")


def format_rational(value: Fraction) -> str:
    """Render as "p/q" (or "p" when the denominator is 1)."""
    return str(Fraction(value))


def log_rational(value: Fraction) -> float:
    """Natural log of a positive rational, safe for values far beyond float range."""
    if value <= 0:
        raise ValueError(f"log of non-positive rational {value}")
    return math.log(value.numerator) - math.log(value.denominator)


def integer_nth_root(n: int, r: int) -> int:
    """floor(n ** (1/r)) for n >= 0, r >= 1, by integer Newton iteration."""
    if n < 0:
        raise ValueError("negative radicand")
    if n < 2 or r == 1:
        return n
    x = 1 << ((n.bit_length() - 1) // r + 1)
    while True:
        y = ((r - 1) * x + n // x ** (r - 1)) // r
        if y >= x:
            return x
        x = y


_ROOT_SCALE_BITS = 64


def nth_root_lower(x: Fraction, r: int) -> Fraction:
    """A rational lower bound for x ** (1/r), within 2**-60 of the true root."""
    if x < 0:
        raise ValueError("negative radicand")
    scale = 1 << _ROOT_SCALE_BITS
    n = (x.numerator * scale**r) // x.denominator
    return Fraction(integer_nth_root(n, r), scale)


def nth_root_upper(x: Fraction, r: int) -> Fraction:
    """A rational upper bound for x ** (1/r), within 2**-60 of the true root."""
    if x < 0:
        raise ValueError("negative radicand")
    scale = 1 << _ROOT_SCALE_BITS
    n = -((-x.numerator * scale**r) // x.denominator)
    t = integer_nth_root(n, r)
    if t**r < n:
        t += 1
    return Fraction(t, scale)
