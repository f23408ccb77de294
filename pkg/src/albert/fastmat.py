"""Exact scaled-integer matrices on numpy for the hot loops.

An IMat holds an integer matrix A (int64 when it fits, Python-int object
array otherwise) plus a positive denominator d, representing A/d
exactly.  int64 arithmetic is used only when a conservative magnitude
bound proves no overflow is possible; otherwise the operation silently
promotes to object dtype, which keeps exactness at some speed cost.
Nothing here ever rounds.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

import numpy as np

__all__ = ["IMat", "imat_from_fractions", "ivec_from_fractions"]

_INT64_SAFE = 2**62


def _max_abs(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    if a.dtype == object:
        return max((abs(int(x)) for x in a.flat), default=0)
    return int(np.abs(a).max())


def _to_object(a: np.ndarray) -> np.ndarray:
    if a.dtype == object:
        return a
    return a.astype(object)


def _maybe_int64(a: np.ndarray) -> np.ndarray:
    """Demote an object array back to int64 when every entry fits."""
    if a.dtype != object:
        return a
    if _max_abs(a) < _INT64_SAFE:
        return a.astype(np.int64)
    return a


class IMat:
    """Exact rational matrix A/den with integer numpy storage."""

    __slots__ = ("a", "den")

    def __init__(self, a: np.ndarray, den: int = 1, normalize: bool = False):
        if den == 0:
            raise ZeroDivisionError("denominator must be nonzero")
        if den < 0:
            a = -a
            den = -den
        self.a = a
        self.den = int(den)
        if normalize:
            self._normalize()

    def _normalize(self):
        g = self.den
        for x in self.a.flat:
            g = gcd(g, int(x))
            if g == 1:
                return
        if g > 1:
            if self.a.dtype == object:
                self.a = np.array([int(x) // g for x in self.a.flat], dtype=object).reshape(
                    self.a.shape
                )
            else:
                self.a = self.a // g
            self.den //= g

    # -- constructors ---------------------------------------------------
    @classmethod
    def zeros(cls, shape) -> "IMat":
        return cls(np.zeros(shape, dtype=np.int64), 1)

    @classmethod
    def eye(cls, n: int) -> "IMat":
        return cls(np.eye(n, dtype=np.int64), 1)

    @property
    def shape(self):
        return self.a.shape

    # -- ring operations --------------------------------------------------
    def _common(self, other: "IMat"):
        d = self.den * other.den // gcd(self.den, other.den)
        fa, fb = d // self.den, d // other.den
        a, b = self.a, other.a
        if a.dtype != object and (_max_abs(a) * fa >= _INT64_SAFE or _max_abs(b) * fb >= _INT64_SAFE):
            a, b = _to_object(a), _to_object(b)
        elif a.dtype == object or b.dtype == object:
            a, b = _to_object(a), _to_object(b)
        return a * fa, b * fb, d

    def __add__(self, other):
        a, b, d = self._common(other)
        s = a + b
        if s.dtype != object and _max_abs(a) + _max_abs(b) >= _INT64_SAFE:
            s = _to_object(a) + _to_object(b)
        return IMat(s, d)

    def __sub__(self, other):
        a, b, d = self._common(other)
        if a.dtype != object and _max_abs(a) + _max_abs(b) >= _INT64_SAFE:
            a, b = _to_object(a), _to_object(b)
        return IMat(a - b, d)

    def __neg__(self):
        return IMat(-self.a, self.den)

    def __matmul__(self, other: "IMat") -> "IMat":
        a, b = self.a, other.a
        k = a.shape[-1]
        bound = _max_abs(a) * _max_abs(b) * max(k, 1)
        if a.dtype == object or b.dtype == object or bound >= _INT64_SAFE:
            out = np.dot(_to_object(a), _to_object(b))
            out = _maybe_int64(out)
        else:
            out = a @ b
        return IMat(out, self.den * other.den)

    def scale(self, q) -> "IMat":
        """Multiply by an exact scalar (int or Fraction)."""
        q = Fraction(q)
        num, den = q.numerator, q.denominator
        a = self.a
        if a.dtype != object and _max_abs(a) * abs(num) >= _INT64_SAFE:
            a = _to_object(a)
        return IMat(a * num, self.den * den)

    def kron(self, other: "IMat") -> "IMat":
        a, b = self.a, other.a
        if a.dtype == object or b.dtype == object or _max_abs(a) * _max_abs(b) >= _INT64_SAFE:
            out = np.kron(_to_object(a), _to_object(b))
        else:
            out = np.kron(a, b)
        return IMat(out, self.den * other.den)

    def transpose(self) -> "IMat":
        return IMat(self.a.T.copy(), self.den)

    def trace(self) -> Fraction:
        return Fraction(int(np.trace(self.a)), self.den)

    # -- predicates -------------------------------------------------------
    def is_zero(self) -> bool:
        if self.a.dtype == object:
            return all(int(x) == 0 for x in self.a.flat)
        return not self.a.any()

    def __eq__(self, other):
        if not isinstance(other, IMat):
            return NotImplemented
        return (self - other).is_zero()

    def __repr__(self):
        return "IMat(shape=%r, den=%d, dtype=%s)" % (self.shape, self.den, self.a.dtype)

    # -- conversion -------------------------------------------------------
    def fraction(self, *idx) -> Fraction:
        return Fraction(int(self.a[idx]), self.den)

    def to_fractions(self) -> list:
        d = self.den
        if self.a.ndim == 1:
            return [Fraction(int(x), d) for x in self.a]
        return [[Fraction(int(x), d) for x in row] for row in self.a]

    def commutator(self, other: "IMat") -> "IMat":
        return (self @ other) - (other @ self)


def imat_from_fractions(rows: Iterable[Sequence]) -> IMat:
    rows = [list(r) for r in rows]
    den = 1
    for r in rows:
        for x in r:
            f = Fraction(x)
            den = den * f.denominator // gcd(den, f.denominator)
    ints = [[int(Fraction(x) * den) for x in r] for r in rows]
    big = max((abs(v) for r in ints for v in r), default=0)
    dtype = object if big >= _INT64_SAFE else np.int64
    return IMat(np.array(ints, dtype=dtype), den)


def ivec_from_fractions(vec: Iterable) -> IMat:
    vec = [Fraction(x) for x in vec]
    den = 1
    for x in vec:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in vec]
    big = max((abs(v) for v in ints), default=0)
    dtype = object if big >= _INT64_SAFE else np.int64
    return IMat(np.array(ints, dtype=dtype), den)
