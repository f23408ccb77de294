"""Exact univariate polynomials over Q with Sturm-chain root isolation.

Polynomials are value objects holding a trimmed coefficient tuple in
ascending degree order.  Real roots are isolated into disjoint rational
intervals by sign-variation counting along a Sturm chain, then refined
by bisection to a requested width (default 2**-40).  All arithmetic is
Fraction-exact; no floating point enters the isolation path.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

__all__ = ["PolyQ", "sturm_chain", "isolate_real_roots", "refine_root"]

DEFAULT_ROOT_WIDTH = Fraction(1, 2**40)


class PolyQ:
    """Polynomial over Q, coefficients ascending: coeffs[k] * X**k."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    # -- basic structure ----------------------------------------------
    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> Fraction:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def monic(self) -> "PolyQ":
        lc = self.leading()
        return PolyQ(c / lc for c in self.coeffs)

    def __eq__(self, other):
        return isinstance(other, PolyQ) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return "PolyQ(%r)" % (list(self.coeffs),)

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other):
        other = _as_poly(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] += c
        return PolyQ(out)

    __radd__ = __add__

    def __neg__(self):
        return PolyQ(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) + (-self)

    def __mul__(self, other):
        other = _as_poly(other)
        if self.is_zero() or other.is_zero():
            return PolyQ(())
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return PolyQ(out)

    __rmul__ = __mul__

    def divmod(self, other: "PolyQ"):
        """Exact polynomial division with remainder."""
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        q = [Fraction(0)] * max(0, len(rem) - len(other.coeffs) + 1)
        d = other.degree
        lc = other.leading()
        while len(rem) - 1 >= d and rem:
            k = len(rem) - 1 - d
            f = rem[-1] / lc
            q[k] = f
            for j, c in enumerate(other.coeffs):
                rem[k + j] -= f * c
            while rem and rem[-1] == 0:
                rem.pop()
        return PolyQ(q), PolyQ(rem)

    def __mod__(self, other):
        return self.divmod(other)[1]

    def derivative(self) -> "PolyQ":
        return PolyQ(k * c for k, c in enumerate(self.coeffs) if k > 0)

    def __call__(self, x):
        """Horner evaluation; exact for Fraction input."""
        acc = Fraction(0) if not isinstance(x, float) else 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def gcd(self, other: "PolyQ") -> "PolyQ":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        if a.is_zero():
            return a
        return a.monic()

    def squarefree_part(self) -> "PolyQ":
        g = self.gcd(self.derivative())
        if g.degree <= 0:
            return self.monic()
        return self.divmod(g)[0].monic()

    def is_squarefree(self) -> bool:
        return self.gcd(self.derivative()).degree <= 0

    # -- bounds ---------------------------------------------------------
    def cauchy_root_bound(self) -> Fraction:
        """B with every real root in (-B, B)."""
        lc = abs(self.leading())
        m = max((abs(c) for c in self.coeffs[:-1]), default=Fraction(0))
        return Fraction(1) + m / lc


def _as_poly(x) -> PolyQ:
    if isinstance(x, PolyQ):
        return x
    return PolyQ((Fraction(x),))


def sturm_chain(p: PolyQ) -> list[PolyQ]:
    """Sturm chain of p: p, p', then negated euclidean remainders."""
    chain = [p, p.derivative()]
    while not chain[-1].is_zero() and chain[-1].degree > 0:
        chain.append(-(chain[-2] % chain[-1]))
    if chain[-1].is_zero():
        chain.pop()
    return chain


def _variations(chain: Sequence[PolyQ], x: Fraction) -> int:
    signs = []
    for q in chain:
        v = q(x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots_in(chain: Sequence[PolyQ], a: Fraction, b: Fraction) -> int:
    """Number of distinct real roots in (a, b], endpoints must avoid roots of p."""
    return _variations(chain, a) - _variations(chain, b)


def isolate_real_roots(p: PolyQ) -> list[tuple[Fraction, Fraction]]:
    """Disjoint rational intervals (a, b], one distinct real root each.

    Works on the squarefree part, so multiplicities collapse.  Intervals
    come back sorted left to right.
    """
    if p.is_zero():
        raise ValueError("zero polynomial has every point as a root")
    p = p.squarefree_part()
    if p.degree <= 0:
        return []
    chain = sturm_chain(p)
    bound = p.cauchy_root_bound()
    lo, hi = -bound, bound
    # endpoints of the initial box are non-roots by the strict Cauchy bound
    out: list[tuple[Fraction, Fraction]] = []
    stack = [(lo, hi, _variations(chain, lo), _variations(chain, hi))]
    while stack:
        a, b, va, vb = stack.pop()
        n = va - vb
        if n == 0:
            continue
        if n == 1:
            out.append((a, b))
            continue
        mid = (a + b) / 2
        while p(mid) == 0:
            # nudge the cut so interval endpoints stay off the root set
            mid += (b - a) / 64
        vm = _variations(chain, mid)
        stack.append((a, mid, va, vm))
        stack.append((mid, b, vm, vb))
    out.sort()
    return out


def refine_root(
    p: PolyQ, interval: tuple[Fraction, Fraction], width: Fraction = DEFAULT_ROOT_WIDTH
) -> tuple[Fraction, Fraction]:
    """Bisect an isolating interval of squarefree p down to the given width.

    The sign change at the endpoints is preserved at every step, so the
    root never escapes the shrinking interval.
    """
    a, b = Fraction(interval[0]), Fraction(interval[1])
    pa = p(a)
    pb = p(b)
    if pa == 0:
        return (a, a)
    if pb == 0:
        return (b, b)
    if (pa > 0) == (pb > 0):
        raise ValueError("interval endpoints do not bracket a sign change")
    while b - a > width:
        mid = (a + b) / 2
        pm = p(mid)
        if pm == 0:
            return (mid, mid)
        if (pm > 0) == (pa > 0):
            a, pa = mid, pm
        else:
            b, pb = mid, pm
    return (a, b)
