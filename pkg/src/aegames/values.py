"""Extended rationals: exact `Fraction` values plus the two infinities.

Finite values are plain `fractions.Fraction`; the infinities are the float
infinities, which compare correctly against fractions.  No other floats ever
appear in payoffs.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

POS_INF = math.inf
NEG_INF = -math.inf

ExtRational = Union[Fraction, float]


def is_finite(x: ExtRational) -> bool:
    return not (isinstance(x, float) and math.isinf(x))


def ext(x) -> ExtRational:
    """Normalize ints/fractions/infinities to an ExtRational."""
    if isinstance(x, float):
        if math.isinf(x):
            return x
        raise TypeError("finite floats are not exact values")
    return Fraction(x)


def fmt(x: ExtRational) -> str:
    """Render as `p/q`, `+inf` or `-inf` (integers keep their `/1`)."""
    if x == POS_INF:
        return "+inf"
    if x == NEG_INF:
        return "-inf"
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_value(text: str) -> ExtRational:
    text = text.strip()
    if text in ("+inf", "inf"):
        return POS_INF
    if text == "-inf":
        return NEG_INF
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"not an exact rational: {text!r}") from None


def farey_candidates(max_den: int, bound: int) -> list[Fraction]:
    """Sorted distinct fractions p/q with 1 <= q <= max_den and |p/q| <= bound."""
    out = set()
    for q in range(1, max(1, max_den) + 1):
        for p in range(-bound * q, bound * q + 1):
            out.add(Fraction(p, q))
    return sorted(out)


def next_above(t: Fraction, max_den: int) -> Fraction:
    """Smallest fraction strictly above t whose denominator is at most max_den."""
    best = None
    for q in range(1, max(1, max_den) + 1):
        cand = Fraction(math.floor(t * q) + 1, q)
        if best is None or cand < best:
            best = cand
    return best


def next_below(t: Fraction, max_den: int) -> Fraction:
    """Largest fraction strictly below t whose denominator is at most max_den."""
    return -next_above(-t, max_den)
