"""Exact rational scalars used everywhere in the package.

The scalar type is gmpy2.mpq when available (roughly 10x faster) and
fractions.Fraction otherwise.  Both keep values in canonical form
(positive denominator, gcd(|num|, den) = 1), interoperate in comparisons
and hashing, and print as "p/q".  Construct values through :func:`rat`
and parse/format file text through :func:`parse_rational` and
:func:`format_rational`; never go through floats.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction

try:
    from gmpy2 import mpq as _scalar

    HAVE_GMPY2 = True
except ImportError:  # pragma: no cover - exercised only without gmpy2
    _scalar = Fraction
    HAVE_GMPY2 = False

# For annotations; at runtime the concrete scalar may be gmpy2.mpq.
Rational = Fraction

_RATIONAL_RE = re.compile(r"^[+-]?\d+(/[1-9]\d*)?$")


def rat(numerator, denominator=None) -> Rational:
    """Build an exact rational from ints, rationals, or a "p/q" string."""
    if denominator is None:
        if isinstance(numerator, float):
            raise TypeError("refusing to build an exact rational from a float")
        return _scalar(numerator)
    return _scalar(numerator) / _scalar(denominator)


def parse_rational(text) -> Rational:
    """Parse "p/q" or integer text; ints pass through; floats are rejected."""
    from .errors import NonRationalWeight

    if isinstance(text, bool):
        raise NonRationalWeight(f"not a rational: {text!r}")
    if isinstance(text, int):
        return _scalar(text)
    if isinstance(text, str):
        if not _RATIONAL_RE.match(text.strip()):
            raise NonRationalWeight(f"not a rational literal: {text!r}")
        num, _, den = text.strip().partition("/")
        return _scalar(int(num)) / _scalar(int(den)) if den else _scalar(int(num))
    raise NonRationalWeight(f"not a rational (floats are rejected): {text!r}")


def format_rational(q) -> str:
    """Render in canonical "p/q" (or plain integer) form."""
    num, den = q.numerator, q.denominator
    return str(num) if den == 1 else f"{num}/{den}"


def log2_rational(q) -> float:
    """log2 of a positive rational; exact for powers of two of any size."""
    num, den = int(q.numerator), int(q.denominator)
    if num <= 0:
        raise ValueError(f"log2 of non-positive rational {q}")
    return math.log2(num) - math.log2(den)
