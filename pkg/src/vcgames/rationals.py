"""Exact rational parsing and printing.

All quantities in this package are `fractions.Fraction`.  Interchange formats
(JSON, CSV, CLI output) carry rationals as strings: a plain decimal like
"2.503" when the denominator divides a power of ten, "num/den" otherwise.
Parsing and printing round-trip exactly; floats never enter the pipeline.
"""

from __future__ import annotations

from fractions import Fraction

__all__ = ["parse_rational", "format_rational"]


def parse_rational(text: str) -> Fraction:
    """Parse a decimal string ("2.503", "-4", "0.25") or a ratio ("11/6")."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational literal: {text!r}") from exc


def format_rational(q: Fraction) -> str:
    """Render exactly: finite decimal when possible, otherwise "num/den"."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    # A reduced fraction has a finite decimal expansion iff its denominator
    # factors as 2^a * 5^b.
    den = q.denominator
    twos = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    fives = 0
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{q.numerator}/{q.denominator}"
    digits = max(twos, fives)
    scaled = q.numerator * 10**digits // q.denominator
    sign = "-" if scaled < 0 else ""
    text = str(abs(scaled)).rjust(digits + 1, "0")
    whole, frac = text[:-digits], text[-digits:]
    frac = frac.rstrip("0")
    return f"{sign}{whole}.{frac}" if frac else f"{sign}{whole}"
