"""
Exact rational helpers: square-root comparisons and text round-trips.

Thresholds such as √δ·n are irrational in general; comparisons against them are
decided by squaring, never by floating point.
"""

import math
from fractions import Fraction
from typing import Optional, Union

from .errors import InvalidArgumentError

Rational = Union[Fraction, int]

SQRT_SCALE = 10**9


def at_least_sqrt_multiple(value: Rational, q: Rational, factor: Rational = 1) -> bool:
    """
    value >= factor·√q, for factor >= 0 and q >= 0.
    """
    if value < 0:
        return False
    return Fraction(value) ** 2 >= Fraction(factor) ** 2 * Fraction(q)


def above_sqrt_multiple(value: Rational, q: Rational, factor: Rational = 1) -> bool:
    """
    value > factor·√q, for factor >= 0 and q >= 0.
    """
    if value < 0:
        return False
    return Fraction(value) ** 2 > Fraction(factor) ** 2 * Fraction(q)


def at_most_sqrt_multiple(value: Rational, q: Rational, factor: Rational = 1) -> bool:
    return not above_sqrt_multiple(value, q, factor)


def sqrt_upper(q: Rational, scale: int = SQRT_SCALE) -> Fraction:
    """
    A rational r >= √q with r - √q <= 1/scale.
    """
    q = Fraction(q)
    if q < 0:
        raise InvalidArgumentError(f"Square root of negative {q}")
    a, b = q.numerator, q.denominator
    target = a * b * scale * scale
    root = math.isqrt(target)
    if root * root != target:
        root += 1
    return Fraction(root, b * scale)


def sqrt_lower(q: Rational, scale: int = SQRT_SCALE) -> Fraction:
    q = Fraction(q)
    if q < 0:
        raise InvalidArgumentError(f"Square root of negative {q}")
    a, b = q.numerator, q.denominator
    return Fraction(math.isqrt(a * b * scale * scale), b * scale)


def parse_fraction(text: str) -> Fraction:
    """
    Accepts "p/q", integers and finite decimals; decimals are read exactly.
    """
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as e:
        raise InvalidArgumentError(f"Not a rational number: {text!r}") from e


def format_fraction(value: Optional[Rational]) -> Optional[str]:
    if value is None:
        return None
    value = Fraction(value)
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
