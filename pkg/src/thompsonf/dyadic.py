"""Exact dyadic rationals and the ``p/2^e`` text form used in every output."""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Union

from .errors import NonDyadic

Number = Union["Dyadic", Fraction, int, str]

_DYADIC_RE = re.compile(r"^\s*(-?\d+)\s*/\s*2\s*\^\s*(\d+)\s*$")
_RATIONAL_RE = re.compile(r"^\s*(-?\d+)\s*(?:/\s*(\d+))?\s*$")


def _trailing_zeros(n: int) -> int:
    return (n & -n).bit_length() - 1


class Dyadic:
    """The number ``num / 2**exp`` kept in lowest terms (``exp == 0`` or ``num`` odd)."""

    __slots__ = ("num", "exp")

    def __init__(self, num: int, exp: int = 0):
        if exp < 0:
            num <<= -exp
            exp = 0
        elif num == 0:
            exp = 0
        elif exp:
            tz = min(_trailing_zeros(num), exp)
            num >>= tz
            exp -= tz
        self.num = num
        self.exp = exp

    @classmethod
    def coerce(cls, value: Number) -> "Dyadic":
        if isinstance(value, Dyadic):
            return value
        if isinstance(value, str):
            return parse_dyadic(value)
        q = Fraction(value)
        d = q.denominator
        if d & (d - 1):
            raise NonDyadic(f"{q} is not a dyadic rational")
        return cls(q.numerator, d.bit_length() - 1)

    def as_fraction(self) -> Fraction:
        return Fraction(self.num, 1 << self.exp)

    def scaled(self, exp: int) -> int:
        """Numerator over ``2**exp``; ``exp`` must be at least ``self.exp``."""
        return self.num << (exp - self.exp)

    def _align(self, other: "Dyadic"):
        e = max(self.exp, other.exp)
        return self.scaled(e), other.scaled(e), e

    def __add__(self, other):
        other = Dyadic.coerce(other)
        a, b, e = self._align(other)
        return Dyadic(a + b, e)

    __radd__ = __add__

    def __sub__(self, other):
        other = Dyadic.coerce(other)
        a, b, e = self._align(other)
        return Dyadic(a - b, e)

    def __rsub__(self, other):
        return Dyadic.coerce(other) - self

    def __mul__(self, other):
        other = Dyadic.coerce(other)
        return Dyadic(self.num * other.num, self.exp + other.exp)

    __rmul__ = __mul__

    def __neg__(self):
        return Dyadic(-self.num, self.exp)

    def shift(self, k: int) -> "Dyadic":
        """Multiply by ``2**k`` (halving for negative ``k``)."""
        return Dyadic(self.num, self.exp - k)

    def half(self) -> "Dyadic":
        return self.shift(-1)

    def double(self) -> "Dyadic":
        return self.shift(1)

    def _cmp_key(self, other):
        if isinstance(other, Dyadic):
            a, b, _ = self._align(other)
            return a, b
        return self.as_fraction(), Fraction(other)

    def __eq__(self, other):
        if isinstance(other, Dyadic):
            return self.num == other.num and self.exp == other.exp
        if isinstance(other, (int, Fraction)):
            return self.as_fraction() == other
        return NotImplemented

    def __hash__(self):
        return hash(self.as_fraction())

    def __lt__(self, other):
        a, b = self._cmp_key(other)
        return a < b

    def __le__(self, other):
        a, b = self._cmp_key(other)
        return a <= b

    def __gt__(self, other):
        a, b = self._cmp_key(other)
        return a > b

    def __ge__(self, other):
        a, b = self._cmp_key(other)
        return a >= b

    def __repr__(self):
        return f"Dyadic({self.num}, {self.exp})"

    def __str__(self):
        return f"{self.num}/2^{self.exp}"


def parse_dyadic(text: str) -> Dyadic:
    """Accepts ``p/2^e``, ``p/q`` with ``q`` a power of two, or an integer."""
    m = _DYADIC_RE.match(text)
    if m:
        return Dyadic(int(m.group(1)), int(m.group(2)))
    return Dyadic.coerce(parse_rational(text))


def parse_rational(text: str) -> Fraction:
    m = _DYADIC_RE.match(text)
    if m:
        return Fraction(int(m.group(1)), 1 << int(m.group(2)))
    m = _RATIONAL_RE.match(text)
    if not m or (m.group(2) is not None and int(m.group(2)) == 0):
        raise ValueError(f"cannot parse number {text!r}")
    return Fraction(int(m.group(1)), int(m.group(2) or 1))


def format_number(q) -> str:
    """``p/2^e`` for dyadic values, ``p/q`` otherwise."""
    q = Fraction(q.as_fraction() if isinstance(q, Dyadic) else q)
    d = q.denominator
    if d & (d - 1) == 0:
        return f"{q.numerator}/2^{d.bit_length() - 1}"
    return f"{q.numerator}/{d}"
