"""Exact scalars: rationals and Gaussian rationals.

Rational numbers are plain ``fractions.Fraction``; this module adds the
complex extension Q(i), string round-tripping in the ``num/den`` wire
format, and rational reconstruction from residues (used by the modular
fast path in :mod:`albert.linalg`).
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import Union

Rat = Fraction
Scalar = Union[int, Fraction, "QI"]

__all__ = [
    "QI",
    "Rat",
    "format_rat",
    "parse_rat",
    "format_qi",
    "parse_qi",
    "rational_reconstruction",
]


def format_rat(x: Fraction) -> str:
    """Render a rational as ``num/den`` (``den`` omitted when 1)."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return "%d/%d" % (x.numerator, x.denominator)


def parse_rat(s: str) -> Fraction:
    return Fraction(s.strip())


class QI:
    """Gaussian rational a + b*i with exact Fraction parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other):
        other = _as_qi(other)
        if other is NotImplemented:
            return NotImplemented
        return QI(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_qi(other)
        if other is NotImplemented:
            return NotImplemented
        return QI(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = _as_qi(other)
        if other is NotImplemented:
            return NotImplemented
        return QI(other.re - self.re, other.im - self.im)

    def __mul__(self, other):
        other = _as_qi(other)
        if other is NotImplemented:
            return NotImplemented
        return QI(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_qi(other)
        if other is NotImplemented:
            return NotImplemented
        n = other.re * other.re + other.im * other.im
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return QI(
            (self.re * other.re + self.im * other.im) / n,
            (self.im * other.re - self.re * other.im) / n,
        )

    def __rtruediv__(self, other):
        return _as_qi(other) / self

    def __neg__(self):
        return QI(-self.re, -self.im)

    def __pos__(self):
        return self

    # -- structure ----------------------------------------------------
    def conj(self) -> "QI":
        return QI(self.re, -self.im)

    def norm2(self) -> Fraction:
        """Squared modulus; a rational number."""
        return self.re * self.re + self.im * self.im

    def is_real(self) -> bool:
        return self.im == 0

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def __eq__(self, other):
        other = _as_qi(other)
        if other is NotImplemented:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return "QI(%s, %s)" % (self.re, self.im)

    def __str__(self):
        return format_qi(self)


QI_ZERO = QI(0, 0)
QI_ONE = QI(1, 0)
QI_I = QI(0, 1)


def _as_qi(x):
    if isinstance(x, QI):
        return x
    if isinstance(x, (int, Fraction)):
        return QI(x, 0)
    return NotImplemented


def format_qi(z: QI) -> str:
    """Render a Gaussian rational as ``a/b+c/d i``.

    The imaginary part is kept even when zero so the format is uniform
    and positionally parseable.
    """
    im = format_rat(z.im)
    sign = "+"
    if z.im < 0:
        sign = "-"
        im = format_rat(-z.im)
    return "%s%s%s i" % (format_rat(z.re), sign, im)


def parse_qi(s: str) -> QI:
    """Parse ``a/b+c/d i`` (and tolerant variants like ``3``, ``-1/2 i``)."""
    t = s.strip()
    if not t.endswith("i"):
        return QI(parse_rat(t), 0)
    t = t[:-1].strip()
    # split at the last top-level +/- that separates real and imaginary parts
    for k in range(len(t) - 1, 0, -1):
        if t[k] in "+-" and t[k - 1] not in "+-/":
            re_part, im_part = t[:k], t[k:]
            im_part = im_part.replace(" ", "")
            if im_part in ("+", "-"):
                im_part += "1"
            return QI(parse_rat(re_part), parse_rat(im_part))
    # pure imaginary
    t = t.replace(" ", "")
    if t in ("", "+"):
        t = "1"
    elif t == "-":
        t = "-1"
    return QI(0, parse_rat(t))


def rational_reconstruction(a: int, m: int) -> Fraction | None:
    """Recover n/d with a*d = n (mod m), |n| <= B, 0 < d <= B, B = isqrt(m//2).

    Standard half-extended Euclidean scheme; returns None when no
    representative exists within the bound.
    """
    a %= m
    bound = isqrt(m // 2)
    r0, r1 = m, a
    t0, t1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    if r1 > bound or t1 == 0 or abs(t1) > bound:
        return None
    if t1 < 0:
        r1, t1 = -r1, -t1
    from math import gcd

    if gcd(r1, t1) != 1:
        return None
    return Fraction(r1, t1)
