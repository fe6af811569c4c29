"""Rational token parsing and formatting shared by the file formats.

Tokens are `a` or `a/b` with decimal integers and b > 0. Output is always
in reduced form (`Fraction` reduces on construction). No floating point.
"""

from __future__ import annotations

import re
from fractions import Fraction

_TOKEN_RE = re.compile(r"^(-?\d+)(?:/(\d+))?$")


def parse_rational(token: str) -> Fraction:
    """Parse `a` or `a/b` into an exact Fraction. Raises ValueError on bad syntax."""
    m = _TOKEN_RE.match(token)
    if m is None:
        raise ValueError(f"not a rational token: {token!r}")
    num = int(m.group(1))
    if m.group(2) is None:
        return Fraction(num)
    den = int(m.group(2))
    if den == 0:
        raise ValueError(f"zero denominator in rational token: {token!r}")
    return Fraction(num, den)


def format_rational(value: Fraction) -> str:
    """Render a Fraction as `a` or `a/b` (reduced, b > 0)."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"
