"""Exact rational scalars.

All arithmetic in the package is exact.  ``Rat`` is ``gmpy2.mpq`` when
gmpy2 is importable (much faster on big operands) and
``fractions.Fraction`` otherwise; the two are interchangeable for every
operation used here.
"""

from __future__ import annotations

import re

try:
    from gmpy2 import mpq as Rat
except ImportError:  # pragma: no cover
    from fractions import Fraction as Rat

ZERO = Rat(0)
ONE = Rat(1)

_RAT_RE = re.compile(r"^(-?\d+)(?:/(\d+))?$")


def rat_num(x) -> int:
    return int(x.numerator)


def rat_den(x) -> int:
    return int(x.denominator)


def rat_floor(x) -> int:
    return rat_num(x) // rat_den(x)


def rat_ceil(x) -> int:
    return -((-rat_num(x)) // rat_den(x))


def as_int(x) -> int:
    """Convert an integral rational to int; raises if not integral."""
    n, d = rat_num(x), rat_den(x)
    if d != 1:
        raise ValueError(f"not an integer: {x}")
    return n


def rat_pow(x, e: int):
    if e == 0:
        return ONE
    return x ** e


def parse_rat(text: str):
    """Parse 'p' or 'p/q' (q > 0); anything else is rejected."""
    m = _RAT_RE.match(text.strip())
    if m is None:
        raise ValueError(f"bad rational literal: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) else 1
    if den == 0:
        raise ValueError(f"zero denominator: {text!r}")
    return Rat(num, den)


def format_rat(x) -> str:
    n, d = rat_num(x), rat_den(x)
    return str(n) if d == 1 else f"{n}/{d}"
