"""Structure-constant algebras and the Euclidean Jordan algebra toolkit.

An AlgebraSC is a finite-dimensional real algebra given by exact
structure constants; Elem is a coordinate vector over it.  The module
provides the classification constructors (spin factors, hermitian
matrix algebras over R, C, H and the octonions, direct sums,
symmetrization of associative algebras), exact verifiers for the Jordan
identity and power associativity, the trace form with an exact
positivity test, exact spectral resolutions driven by Sturm isolation,
and spin-factor recognition.

The Jordan identity (x^2 y) x = x^2 (y x) is checked two ways: in fully
linearized element form on all basis 4-tuples for small algebras, and
in the equivalent operator form

    [L_x, L_{yz}] + [L_y, L_{zx}] + [L_z, L_{xy}] = 0

on all basis triples for larger ones (over Q the polarized identity on
a basis is equivalent to the original identity for all elements).
"""

from __future__ import annotations

import random
from fractions import Fraction
from math import gcd
from typing import Sequence

import numpy as np

from .checks import CheckResult, failed, passed
from .fastmat import IMat
from .linalg import (
    MatrixQ,
    SpanQ,
    is_positive_definite,
    leading_principal_minors,
    nullspace,
    solve,
)
from .octonion import OCT_BASIS, oct_mul
from .polyq import PolyQ, isolate_real_roots, refine_root
from .rationals import format_rat, parse_rat

__all__ = [
    "AlgebraSC",
    "Elem",
    "SpectralError",
    "JordanConstructionError",
    "composition_table",
    "make_jspin",
    "make_spin_factor",
    "make_hermitian",
    "jordanize",
    "full_matrix_algebra",
    "octonion_algebra",
    "direct_sum",
    "restrict",
    "verify_jordan",
    "verify_power_assoc",
    "trace_form",
    "euclidean_check",
    "spectral_resolution",
    "SpectralResolution",
    "poly_calculus",
    "capacity_estimate",
    "jspin_recognize",
    "center_basis",
    "random_elem",
]

_INT64_SAFE = 2**62
ROOT_WIDTH = Fraction(1, 2**40)


class SpectralError(ValueError):
    """Raised when spectral data contradicts formal reality."""


class JordanConstructionError(ValueError):
    """Raised by constructors whose output would not be a Jordan algebra."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


# ---------------------------------------------------------------------------
# elements


def _vec_to_scaled(coords) -> tuple[np.ndarray, int]:
    fr = [Fraction(c) for c in coords]
    den = 1
    for c in fr:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in fr]
    big = max((abs(v) for v in ints), default=0)
    arr = np.array(ints, dtype=object if big >= _INT64_SAFE else np.int64)
    return arr, den


def _normalize_scaled(num: np.ndarray, den: int):
    g = den
    for x in num.flat:
        g = gcd(g, int(x))
        if g == 1:
            break
    if g > 1:
        if num.dtype == object:
            num = np.array([int(x) // g for x in num.flat], dtype=object)
        else:
            num = num // g
        den //= g
    if num.dtype == object:
        big = max((abs(int(x)) for x in num.flat), default=0)
        if big < _INT64_SAFE:
            num = num.astype(np.int64)
    return num, den


class Elem:
    """Element of an AlgebraSC: exact coordinates stored as ints over a denominator."""

    __slots__ = ("algebra", "num", "den")

    def __init__(self, algebra: "AlgebraSC", num: np.ndarray, den: int = 1):
        self.algebra = algebra
        if den < 0:
            num, den = -num, -den
        self.num, self.den = _normalize_scaled(num, den)

    @classmethod
    def from_coords(cls, algebra: "AlgebraSC", coords) -> "Elem":
        num, den = _vec_to_scaled(coords)
        return cls(algebra, num, den)

    @property
    def coords(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(int(x), self.den) for x in self.num)

    def __add__(self, other):
        self._check(other)
        d = self.den * other.den // gcd(self.den, other.den)
        a = _safe_scale(self.num, d // self.den)
        b = _safe_scale(other.num, d // other.den)
        return Elem(self.algebra, _safe_add(a, b), d)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return Elem(self.algebra, -self.num, self.den)

    def __mul__(self, other):
        if isinstance(other, Elem):
            self._check(other)
            return self.algebra.mul(self, other)
        q = Fraction(other)
        return Elem(self.algebra, _safe_scale(self.num, q.numerator),
                    self.den * q.denominator)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Elem):
            return NotImplemented
        return self.den == other.den and bool(
            np.array_equal(self.num, other.num)
        )

    def is_zero(self) -> bool:
        if self.num.dtype == object:
            return all(int(x) == 0 for x in self.num.flat)
        return not self.num.any()

    def power(self, k: int) -> "Elem":
        """x**k with x**0 = unit and x**(m+1) = x * x**m."""
        if k < 0:
            raise ValueError("negative powers undefined")
        if k == 0:
            return self.algebra.unit_elem()
        out = self
        for _ in range(k - 1):
            out = self * out
        return out

    def max_abs_coord(self) -> Fraction:
        return max((abs(c) for c in self.coords), default=Fraction(0))

    def floats(self) -> np.ndarray:
        return self.num.astype(float) / self.den

    def to_json(self) -> dict:
        return {"coords": [format_rat(c) for c in self.coords]}

    def __repr__(self):
        return "Elem(%s, [%s])" % (
            self.algebra.name,
            ", ".join(format_rat(c) for c in self.coords),
        )

    def _check(self, other):
        if other.algebra is not self.algebra:
            raise ValueError("elements of different algebras")


def _safe_add(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.dtype != object and b.dtype != object:
        bound = (int(np.abs(a).max(initial=0)) + int(np.abs(b).max(initial=0)))
        if bound < _INT64_SAFE:
            return a + b
    return a.astype(object) + b.astype(object)


def _safe_scale(a: np.ndarray, k: int) -> np.ndarray:
    if k == 1:
        return a
    if a.dtype != object:
        m = int(np.abs(a).max(initial=0))
        if m == 0:
            return a  # zero stays zero; avoids scalar conversion of huge k
        if m * abs(k) < _INT64_SAFE:
            return a * k
        a = a.astype(object)
    return a * k


# ---------------------------------------------------------------------------
# the algebra container


class AlgebraSC:
    """Real algebra from exact structure constants sc[i, j, k] = coeff of e_k in e_i e_j."""

    def __init__(self, sc_rows, name: str = "A", commutative: bool | None = None,
                 unit_coords=None, basis_labels=None):
        # sc_rows: nested (n, n, n) of Fractions, or (num ndarray, den)
        if isinstance(sc_rows, tuple) and len(sc_rows) == 2 and isinstance(sc_rows[0], np.ndarray):
            self.sc_num, self.sc_den = sc_rows
        else:
            flat = []
            den = 1
            n = len(sc_rows)
            for i in range(n):
                for j in range(n):
                    for k in range(n):
                        f = Fraction(sc_rows[i][j][k])
                        flat.append(f)
                        den = den * f.denominator // gcd(den, f.denominator)
            ints = [int(f * den) for f in flat]
            big = max((abs(v) for v in ints), default=0)
            arr = np.array(ints, dtype=object if big >= _INT64_SAFE else np.int64)
            self.sc_num = arr.reshape((n, n, n))
            self.sc_den = den
        self.dim = self.sc_num.shape[0]
        self.name = name
        self.basis_labels = list(basis_labels) if basis_labels else None
        if commutative is None:
            commutative = bool(
                np.array_equal(self.sc_num, np.swapaxes(self.sc_num, 0, 1))
            )
        else:
            if commutative and not np.array_equal(
                self.sc_num, np.swapaxes(self.sc_num, 0, 1)
            ):
                raise ValueError("structure constants are not symmetric")
        self.commutative = commutative
        self._unit = None
        if unit_coords is not None:
            u = Elem.from_coords(self, unit_coords)
            if not self._is_unit(u):
                raise ValueError("declared unit fails 1*x = x on the basis")
            self._unit = u
        self._L_cache: list[IMat] | None = None
        self._sc_float = None

    # -- basic API ------------------------------------------------------
    def zero(self) -> Elem:
        return Elem(self, np.zeros(self.dim, dtype=np.int64), 1)

    def basis_elem(self, i: int) -> Elem:
        v = np.zeros(self.dim, dtype=np.int64)
        v[i] = 1
        return Elem(self, v, 1)

    def basis(self) -> list[Elem]:
        return [self.basis_elem(i) for i in range(self.dim)]

    def from_coords(self, coords) -> Elem:
        return Elem.from_coords(self, coords)

    def mul(self, u: Elem, v: Elem) -> Elem:
        num = _contract(u.num, v.num, self.sc_num)
        return Elem(self, num, u.den * v.den * self.sc_den)

    def mul_coords(self, u_coords, v_coords) -> Elem:
        return self.mul(self.from_coords(u_coords), self.from_coords(v_coords))

    def L_op(self, u: Elem) -> IMat:
        """Left multiplication operator as an exact matrix (acts on coordinates)."""
        t = _tensordot_first(u.num, self.sc_num)  # shape (j, k)
        return IMat(t.T.copy(), u.den * self.sc_den)

    def L_basis(self) -> list[IMat]:
        if self._L_cache is None:
            self._L_cache = [self.L_op(self.basis_elem(i)) for i in range(self.dim)]
        return self._L_cache

    def sc_fraction(self, i: int, j: int, k: int) -> Fraction:
        return Fraction(int(self.sc_num[i, j, k]), self.sc_den)

    def sc_float(self) -> np.ndarray:
        if self._sc_float is None:
            self._sc_float = self.sc_num.astype(float) / self.sc_den
        return self._sc_float

    def _is_unit(self, u: Elem) -> bool:
        for i in range(self.dim):
            b = self.basis_elem(i)
            if self.mul(u, b) != b or self.mul(b, u) != b:
                return False
        return True

    def unit_elem(self) -> Elem:
        if self._unit is None:
            u = self._solve_unit()
            if u is None:
                raise ValueError("algebra %s has no unit" % self.name)
            self._unit = u
        return self._unit

    def has_unit(self) -> bool:
        try:
            self.unit_elem()
            return True
        except ValueError:
            return False

    def _solve_unit(self):
        # u with u * e_j = e_j for all j: sum_i u_i sc[i,j,k] = delta_jk
        n = self.dim
        rows = []
        rhs = []
        for j in range(n):
            for k in range(n):
                rows.append(
                    {i: self.sc_fraction(i, j, k) for i in range(n) if self.sc_num[i, j, k]}
                )
                rhs.append(Fraction(1 if j == k else 0))
        m = MatrixQ.from_entries(
            len(rows), n, {(r, i): x for r, row in enumerate(rows) for i, x in row.items()}
        )
        sol = solve(m, rhs)
        if sol is None:
            return None
        u = self.from_coords(sol[0])
        return u if self._is_unit(u) else None

    def label(self, i: int) -> str:
        if self.basis_labels:
            return self.basis_labels[i]
        return "e%d" % i

    def __repr__(self):
        return "AlgebraSC(%s, dim=%d%s)" % (
            self.name,
            self.dim,
            ", commutative" if self.commutative else "",
        )

    def to_json(self) -> dict:
        ent = []
        n = self.dim
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    v = self.sc_num[i, j, k]
                    if v:
                        ent.append([i, j, k, format_rat(Fraction(int(v), self.sc_den))])
        return {
            "name": self.name,
            "dim": self.dim,
            "commutative": self.commutative,
            "sc": ent,
            "labels": self.basis_labels,
        }

    @classmethod
    def from_json(cls, data: dict) -> "AlgebraSC":
        n = data["dim"]
        sc = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
        for i, j, k, s in data["sc"]:
            sc[i][j][k] = parse_rat(s)
        return cls(
            sc,
            name=data.get("name", "A"),
            basis_labels=data.get("labels"),
        )


def _tensordot_first(u: np.ndarray, sc: np.ndarray) -> np.ndarray:
    if u.dtype == object or sc.dtype == object:
        return np.tensordot(u.astype(object), sc.astype(object), axes=(0, 0))
    bound = int(np.abs(u).max(initial=0)) * int(np.abs(sc).max(initial=0)) * u.shape[0]
    if bound >= _INT64_SAFE:
        return np.tensordot(u.astype(object), sc.astype(object), axes=(0, 0))
    return np.tensordot(u, sc, axes=(0, 0))


def _contract(u: np.ndarray, v: np.ndarray, sc: np.ndarray) -> np.ndarray:
    t = _tensordot_first(u, sc)  # (j, k)
    if t.dtype == object or v.dtype == object:
        return np.tensordot(v.astype(object), t.astype(object), axes=(0, 0))
    bound = int(np.abs(v).max(initial=0)) * int(np.abs(t).max(initial=0)) * v.shape[0]
    if bound >= _INT64_SAFE:
        return np.tensordot(v.astype(object), t.astype(object), axes=(0, 0))
    return np.tensordot(v, t, axes=(0, 0))


def random_elem(a: AlgebraSC, rng: random.Random, span: int = 5, den: int = 3) -> Elem:
    return a.from_coords(
        [Fraction(rng.randint(-span, span), rng.randint(1, den)) for _ in range(a.dim)]
    )


# ---------------------------------------------------------------------------
# composition algebras as real multiplication tables


class CompositionTable:
    """Real multiplication table of R, C, H or O with conjugation signs."""

    def __init__(self, tag: str, dim: int, table, conj_signs, labels):
        self.tag = tag
        self.dim = dim
        self.table = table  # table[i][j] = tuple of Fractions
        self.conj_signs = conj_signs
        self.labels = labels

    def mul(self, a: Sequence[Fraction], b: Sequence[Fraction]):
        out = [Fraction(0)] * self.dim
        for i, ai in enumerate(a):
            if not ai:
                continue
            for j, bj in enumerate(b):
                if not bj:
                    continue
                f = ai * bj
                for k, t in enumerate(self.table[i][j]):
                    if t:
                        out[k] += f * t
        return tuple(out)

    def conj(self, a: Sequence[Fraction]):
        return tuple(s * x for s, x in zip(self.conj_signs, a))

    def unit(self):
        return tuple(Fraction(1 if k == 0 else 0) for k in range(self.dim))


def _build_tables():
    tables = {}
    tables["R"] = CompositionTable(
        "R", 1, [[(Fraction(1),)]], (Fraction(1),), ["1"]
    )
    # C on basis (1, i)
    c_table = [
        [(Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))],
        [(Fraction(0), Fraction(1)), (Fraction(-1), Fraction(0))],
    ]
    tables["C"] = CompositionTable("C", 2, c_table, (Fraction(1), Fraction(-1)), ["1", "i"])
    # H via pairs (z1, z2) on basis (1, i, j, ij): coords (re z1, im z1, re z2, im z2)
    from .octonion import quat_mul
    from .rationals import QI

    def q_from(k):
        c = [Fraction(0)] * 4
        c[k] = Fraction(1)
        return (QI(c[0], c[1]), QI(c[2], c[3]))

    h_table = []
    for i in range(4):
        row = []
        for j in range(4):
            p = quat_mul(q_from(i), q_from(j))
            row.append((p[0].re, p[0].im, p[1].re, p[1].im))
        h_table.append(row)
    tables["H"] = CompositionTable(
        "H", 4, h_table, (Fraction(1), Fraction(-1), Fraction(-1), Fraction(-1)),
        ["1", "i", "j", "ij"],
    )
    # O via the C + C^3 model
    o_table = []
    for x in OCT_BASIS:
        row = []
        for y in OCT_BASIS:
            row.append(oct_mul(x, y).real_coords())
        o_table.append(row)
    tables["O"] = CompositionTable(
        "O", 8, o_table,
        tuple(Fraction(1 if k == 0 else -1) for k in range(8)),
        ["1", "i", "e1", "ie1", "e2", "ie2", "e3", "ie3"],
    )
    return tables


_TABLES = None


def composition_table(tag: str) -> CompositionTable:
    global _TABLES
    if _TABLES is None:
        _TABLES = _build_tables()
    if tag not in _TABLES:
        raise ValueError("unknown composition algebra %r" % tag)
    return _TABLES[tag]


# ---------------------------------------------------------------------------
# constructors


def make_jspin(n: int) -> AlgebraSC:
    """Spin factor R 1 + R^n: (r, v)(r', v') = (r r' + <v, v'>, r v' + r' v)."""
    return make_spin_factor([Fraction(1)] * n)


def make_spin_factor(squares: Sequence) -> AlgebraSC:
    """Spin factor with v_k * v_k = squares[k] * 1 (diagonal bilinear form)."""
    q = [Fraction(x) for x in squares]
    n = len(q)
    dim = n + 1
    den = 1
    for x in q:
        den = den * x.denominator // gcd(den, x.denominator)
    sc = np.zeros((dim, dim, dim), dtype=np.int64)
    sc[0, 0, 0] = den
    for k in range(1, dim):
        sc[0, k, k] = den
        sc[k, 0, k] = den
        sc[k, k, 0] = int(q[k - 1] * den)
    labels = ["1"] + ["v%d" % k for k in range(1, dim)]
    name = "JSpin_%d" % n if all(x == 1 for x in q) else "Spin(%s)" % ",".join(map(str, q))
    a = AlgebraSC((sc, den), name=name, commutative=True, basis_labels=labels)
    a._unit = a.basis_elem(0)
    return a


def _hermitian_basis(tag: str, n: int):
    """Basis description: ('diag', i) then ('off', i, j, alpha) with i < j."""
    K = composition_table(tag)
    desc = [("diag", i) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            for alpha in range(K.dim):
                desc.append(("off", i, j, alpha))
    return K, desc


def _hermitian_matrix_of(K: CompositionTable, n: int, desc, coords):
    zero = tuple(Fraction(0) for _ in range(K.dim))
    m = [[list(zero) for _ in range(n)] for _ in range(n)]
    for c, d in zip(coords, desc):
        if not c:
            continue
        if d[0] == "diag":
            m[d[1]][d[1]][0] += c
        else:
            _, i, j, alpha = d
            m[i][j][alpha] += c
            m[j][i][alpha] += c * K.conj_signs[alpha]
    return m


def make_hermitian(tag: str, n: int, require_jordan: bool = True) -> AlgebraSC:
    """Hermitian n x n matrices over R, C, H or O with the symmetrized product.

    dim = n + d n(n-1)/2.  For the octonions and n >= 4 the symmetrized
    product violates the Jordan identity; construction raises with an
    explicit witness triple unless require_jordan=False asks for the raw
    commutative algebra anyway.
    """
    if n < 1:
        raise ValueError("n >= 1 required")
    K, desc = _hermitian_basis(tag, n)
    dim = len(desc)

    def kmat_mul(A, B):
        out = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                acc = [Fraction(0)] * K.dim
                for r in range(n):
                    p = K.mul(A[i][r], B[r][j])
                    for k in range(K.dim):
                        acc[k] += p[k]
                out[i][j] = tuple(acc)
        return out

    basis_mats = [
        _hermitian_matrix_of(K, n, desc, [Fraction(1 if t == s else 0) for t in range(dim)])
        for s in range(dim)
    ]
    half = Fraction(1, 2)
    sc = [[[Fraction(0)] * dim for _ in range(dim)] for _ in range(dim)]
    for a in range(dim):
        for b in range(a, dim):
            AB = kmat_mul(basis_mats[a], basis_mats[b])
            BA = kmat_mul(basis_mats[b], basis_mats[a])
            coords = _decompose_hermitian(K, n, desc, AB, BA, half)
            sc[a][b] = coords
            sc[b][a] = list(coords)
    labels = []
    for d in desc:
        if d[0] == "diag":
            labels.append("E%d%d" % (d[1] + 1, d[1] + 1))
        else:
            labels.append("F%d%d(%s)" % (d[1] + 1, d[2] + 1, K.labels[d[3]]))
    name = "H_%d(%s)" % (n, tag)
    alg = AlgebraSC(sc, name=name, commutative=True, basis_labels=labels)
    alg._unit = alg.from_coords(
        [Fraction(1) if d[0] == "diag" else Fraction(0) for d in desc]
    )
    if not alg._is_unit(alg._unit):
        raise AssertionError("hermitian unit failed validation")
    if require_jordan and tag == "O" and n >= 4:
        witness = _find_jordan_witness(alg)
        if witness is None:
            raise AssertionError("expected Jordan failure for H_%d(O)" % n)
        raise JordanConstructionError(
            "hermitian %dx%d octonion matrices do not satisfy the Jordan identity" % (n, n),
            witness=witness,
        )
    return alg


def _decompose_hermitian(K, n, desc, AB, BA, half):
    coords = []
    herm = [[tuple(half * (x + y) for x, y in zip(AB[i][j], BA[i][j])) for j in range(n)]
            for i in range(n)]
    for d in desc:
        if d[0] == "diag":
            i = d[1]
            entry = herm[i][i]
            if any(entry[k] for k in range(1, K.dim)):
                raise AssertionError("non-real diagonal in hermitian product")
            coords.append(entry[0])
        else:
            _, i, j, alpha = d
            coords.append(herm[i][j][alpha])
    # validate hermitian symmetry of the product exactly
    for i in range(n):
        for j in range(i + 1, n):
            if herm[j][i] != K.conj(herm[i][j]):
                raise AssertionError("product lost hermitian symmetry")
    return coords


def full_matrix_algebra(tag: str, n: int) -> AlgebraSC:
    """Associative algebra of all n x n matrices over K as a real algebra."""
    K = composition_table(tag)
    desc = [(i, j, alpha) for i in range(n) for j in range(n) for alpha in range(K.dim)]
    dim = len(desc)
    index = {d: t for t, d in enumerate(desc)}
    sc = [[[Fraction(0)] * dim for _ in range(dim)] for _ in range(dim)]
    for t1, (i, j, a) in enumerate(desc):
        ua = tuple(Fraction(1 if k == a else 0) for k in range(K.dim))
        for t2, (k, l, b) in enumerate(desc):
            if j != k:
                continue
            ub = tuple(Fraction(1 if m == b else 0) for m in range(K.dim))
            prod = K.mul(ua, ub)
            for m, c in enumerate(prod):
                if c:
                    sc[t1][t2][index[(i, l, m)]] += c
    labels = ["%sE%d%d" % (K.labels[a], i + 1, j + 1) for (i, j, a) in desc]
    alg = AlgebraSC(sc, name="M_%d(%s)" % (n, tag), commutative=False, basis_labels=labels)
    unit = [Fraction(0)] * dim
    for i in range(n):
        unit[index[(i, i, 0)]] = Fraction(1)
    alg._unit = alg.from_coords(unit)
    return alg


def octonion_algebra() -> AlgebraSC:
    """The octonions as an 8-dim real (noncommutative) structure-constant algebra."""
    K = composition_table("O")
    sc = [[list(K.table[i][j]) for j in range(8)] for i in range(8)]
    alg = AlgebraSC(sc, name="O", commutative=False, basis_labels=list(K.labels))
    alg._unit = alg.basis_elem(0)
    return alg


def hermitian_subspace_in_full(tag: str, n: int) -> list[tuple[Fraction, ...]]:
    """Coordinates of the hermitian basis inside full_matrix_algebra(tag, n)."""
    K = composition_table(tag)
    desc = [(i, j, alpha) for i in range(n) for j in range(n) for alpha in range(K.dim)]
    index = {d: t for t, d in enumerate(desc)}
    dim = len(desc)
    out = []
    for i in range(n):
        v = [Fraction(0)] * dim
        v[index[(i, i, 0)]] = Fraction(1)
        out.append(tuple(v))
    for i in range(n):
        for j in range(i + 1, n):
            for alpha in range(K.dim):
                v = [Fraction(0)] * dim
                v[index[(i, j, alpha)]] = Fraction(1)
                v[index[(j, i, alpha)]] = K.conj_signs[alpha]
                out.append(tuple(v))
    return out


def jordanize(a: AlgebraSC, check_associative: bool = True) -> AlgebraSC:
    """Symmetrized product x . y = (xy + yx) / 2 of an associative algebra."""
    if check_associative and not _is_associative(a):
        raise ValueError("jordanize requires an associative algebra")
    num = a.sc_num if a.sc_num.dtype == object else a.sc_num.astype(object)
    sym = num + np.swapaxes(num, 0, 1)
    big = max((abs(int(x)) for x in sym.flat), default=0)
    if big < _INT64_SAFE:
        sym = sym.astype(np.int64)
    out = AlgebraSC(
        (sym, a.sc_den * 2),
        name="jord(%s)" % a.name,
        commutative=True,
        basis_labels=a.basis_labels,
    )
    if a._unit is not None:
        out._unit = out.from_coords(a._unit.coords)
    return out


def _is_associative(a: AlgebraSC) -> bool:
    s = a.sc_num
    big = max((abs(int(x)) for x in s.flat), default=0)
    if s.dtype == object or big * big * a.dim >= _INT64_SAFE:
        sm = s.astype(object)
        left = np.tensordot(sm, sm, axes=([2], [0]))  # i j k l
        right = np.tensordot(sm, sm, axes=([2], [1])).transpose(2, 0, 1, 3)
        return bool(np.array_equal(left, right))
    left = np.einsum("ijm,mkl->ijkl", s, s)
    right = np.einsum("jkm,iml->ijkl", s, s)
    return bool(np.array_equal(left, right))


def direct_sum(parts: Sequence[AlgebraSC], name: str | None = None) -> AlgebraSC:
    """Orthogonal direct sum; products across summands vanish."""
    dims = [p.dim for p in parts]
    total = sum(dims)
    den = 1
    for p in parts:
        den = den * p.sc_den // gcd(den, p.sc_den)
    num = np.zeros((total, total, total), dtype=object)
    off = 0
    for p, d in zip(parts, dims):
        scale = den // p.sc_den
        blk = p.sc_num.astype(object) * scale
        num[off : off + d, off : off + d, off : off + d] = blk
        off += d
    big = max((abs(int(x)) for x in num.flat), default=0)
    if big < _INT64_SAFE:
        num = num.astype(np.int64)
    labels = []
    for t, p in enumerate(parts):
        labels.extend("%s#%d" % (p.label(i), t) for i in range(p.dim))
    alg = AlgebraSC(
        (num, den),
        name=name or ("+".join(p.name for p in parts)),
        commutative=all(p.commutative for p in parts),
        basis_labels=labels,
    )
    unit = []
    for p in parts:
        unit.extend(p.unit_elem().coords)
    alg._unit = alg.from_coords(unit)
    return alg


def restrict(a: AlgebraSC, vectors: Sequence[Sequence], name: str | None = None) -> AlgebraSC:
    """Subalgebra on the given basis vectors; raises if products escape the span."""
    span = SpanQ(vectors, a.dim)
    basis = [a.from_coords(v) for v in vectors]
    if span.dimension != len(basis):
        raise ValueError("restriction basis is linearly dependent")
    m = len(basis)
    solve_m = MatrixQ.from_rows(
        [[Fraction(v[r]) for v in vectors] for r in range(a.dim)]
    )
    sc = [[[Fraction(0)] * m for _ in range(m)] for _ in range(m)]
    for i in range(m):
        for j in range(m):
            p = a.mul(basis[i], basis[j])
            sol = solve(solve_m, list(p.coords))
            if sol is None:
                raise ValueError(
                    "subspace not closed under product (basis pair %d, %d)" % (i, j)
                )
            sc[i][j] = list(sol[0])
    return AlgebraSC(sc, name=name or ("%s|sub" % a.name))


# ---------------------------------------------------------------------------
# verifiers


def _pairs_L(a: AlgebraSC):
    """L operators of all basis products e_b e_c, as IMat with uniform denominator."""
    n = a.dim
    sc = a.sc_num
    out = {}
    for b in range(n):
        for c in range(b if a.commutative else 0, n):
            u = sc[b, c]  # scaled by sc_den
            t = _tensordot_first(u, sc)
            out[(b, c)] = IMat(t.T.copy(), a.sc_den * a.sc_den)
    return out


def _pair_lookup(a: AlgebraSC, pair_L, b, c):
    if a.commutative and b > c:
        b, c = c, b
    return pair_L[(b, c)]


def _find_jordan_witness(a: AlgebraSC):
    """First basis triple violating the polarized operator identity, or None.

    Assumes commutativity (checked by the caller); distinct-index triples
    are scanned first since they carry the interesting failures.
    """
    n = a.dim
    L = a.L_basis()
    pair_L = _pairs_L(a)
    triples = []
    for x in range(n):
        for y in range(x, n):
            for z in range(y, n):
                triples.append((x, y, z))
    triples.sort(key=lambda t: (len({*t}) != 3, t))
    for (x, y, z) in triples:
        m = (
            L[x].commutator(pair_L[(y, z)])
            + L[y].commutator(pair_L[(x, z)])
            + L[z].commutator(pair_L[(x, y)])
        )
        if not m.is_zero():
            return (x, y, z)
    return None


def verify_jordan(a: AlgebraSC, trials: int = 50, seed: int = 0) -> CheckResult:
    """Exact Jordan-identity verification.

    Checks commutativity and unit, then the fully linearized identity on
    all basis 4-tuples (dim <= 12) or the equivalent operator form on
    all basis triples (larger dims), plus (x^2 y) x = x^2 (y x) on
    seeded random exact elements.
    """
    name = "jordan-identity(%s)" % a.name
    sym = np.array_equal(a.sc_num, np.swapaxes(a.sc_num, 0, 1))
    if not sym:
        diff = a.sc_num - np.swapaxes(a.sc_num, 0, 1)
        idx = next(zip(*np.nonzero(diff)))
        return failed(name, witness={"commutativity": [int(t) for t in idx]})
    if not a.has_unit():
        return failed(name, witness={"unit": "missing"})
    if a.dim <= 12:
        w = _linearized_element_witness(a)
        if w is not None:
            return failed(name, witness={"basis-4-tuple": w})
        mode = "element-4-tuples"
    else:
        w = _find_jordan_witness(a)
        if w is not None:
            return failed(name, witness={"basis-triple": w})
        mode = "operator-triples"
    rng = random.Random(seed)
    for t in range(trials):
        x = random_elem(a, rng)
        y = random_elem(a, rng)
        x2 = x * x
        if (x2 * y) * x != x2 * (y * x):
            return failed(name, witness={"random-trial": t})
    return passed(name, mode=mode, trials=trials)


def _linearized_element_witness(a: AlgebraSC):
    """Full linearization of (x^2 y) x - x^2 (y x) on all basis 4-tuples.

    Returns the first violating (a, b, d, c) as indices, None if clean.
    Tensor form: sum over permutations s of (a, b, c) of
    ((e_sa e_sb) e_d) e_sc - (e_sa e_sb)(e_d e_sc).
    """
    s = a.sc_num
    bound = 12 * int(np.abs(s.astype(object)).max()) ** 3 * a.dim * a.dim
    if s.dtype == object or bound >= _INT64_SAFE:
        so = s.astype(object)
        # q[a,b,d,k] = (e_a e_b) e_d; r1 chains a second product on the right
        q = np.tensordot(so, so, axes=([2], [0]))
        r1 = np.tensordot(q, so, axes=([3], [0]))
        # u[d,c,m,k] = e_m (e_d e_c); r2[a,b,d,c,k] = (e_a e_b)(e_d e_c)
        u = np.tensordot(so, so, axes=([2], [1]))
        r2 = np.tensordot(so, u, axes=([2], [2]))
    else:
        # q[a,b,d,k] = (e_a e_b) e_d
        q = np.einsum("abm,mdk->abdk", s, s)
        # r1[a,b,d,c,k] = ((e_a e_b) e_d) e_c
        r1 = np.einsum("abdm,mck->abdck", q, s)
        # r2[a,b,d,c,k] = (e_a e_b)(e_d e_c)
        r2 = np.einsum("abm,dcl,mlk->abdck", s, s, s)
    diff = r1 - r2
    total = (
        diff
        + diff.transpose(1, 0, 2, 3, 4)  # swap a, b
        + diff.transpose(0, 3, 2, 1, 4)  # c in second slot variants
        + diff.transpose(3, 1, 2, 0, 4)
        + diff.transpose(1, 3, 2, 0, 4)
        + diff.transpose(3, 0, 2, 1, 4)
    )
    nz = np.nonzero(total)
    if nz[0].size == 0:
        return None
    return tuple(int(t[0]) for t in nz)[:4]


def verify_power_assoc(a: AlgebraSC, max_power: int = 6, trials: int = 30,
                       seed: int = 0) -> CheckResult:
    """x^r x^s = x^(r+s) for r + s <= max_power, basis and random exact elements."""
    name = "power-associativity(%s)" % a.name
    samples = a.basis()
    rng = random.Random(seed)
    samples += [random_elem(a, rng) for _ in range(trials)]
    unit = a.unit_elem()
    for t, x in enumerate(samples):
        pows = [unit, x]
        for k in range(2, max_power + 1):
            pows.append(x * pows[-1])
        if x.power(0) != unit:
            return failed(name, witness={"convention": "x^0 != unit"})
        for r in range(1, max_power):
            for s in range(1, max_power - r + 1):
                if pows[r] * pows[s] != pows[r + s]:
                    return failed(
                        name, witness={"sample": t, "r": r, "s": s}
                    )
    return passed(name, max_power=max_power, samples=len(samples))


# ---------------------------------------------------------------------------
# trace form and formal reality


def trace_form(a: AlgebraSC) -> MatrixQ:
    """B(x, y) = trace L_{x y} as an exact symmetric matrix on the basis."""
    n = a.dim
    sc = a.sc_num
    big = max((abs(int(x)) for x in sc.flat), default=0)
    if sc.dtype == object or big * big * n * n >= _INT64_SAFE:
        sco = sc.astype(object)
        tvec = np.array(
            [sum(int(sco[i, k, k]) for k in range(n)) for i in range(n)], dtype=object
        )
        b = np.tensordot(sco, tvec, axes=([2], [0]))
    else:
        tvec = np.einsum("ikk->i", sc)
        b = np.tensordot(sc, tvec, axes=([2], [0]))
    den = a.sc_den * a.sc_den
    return MatrixQ.from_rows(
        [[Fraction(int(b[i, j]), den) for j in range(n)] for i in range(n)]
    )


def euclidean_check(a: AlgebraSC) -> CheckResult:
    """Exact positive-definiteness of the trace form (Sylvester minors)."""
    name = "euclidean(%s)" % a.name
    b = trace_form(a)
    if b.transpose() != b:
        return failed(name, witness={"trace-form": "asymmetric"})
    minors = leading_principal_minors(b)
    for k, d in enumerate(minors):
        if d <= 0:
            return failed(
                name,
                witness={"minor-index": k + 1, "minor": format_rat(d)},
            )
    return passed(name, dim=a.dim)


# ---------------------------------------------------------------------------
# spectral resolution


class SpectralResolution:
    """Eigenvalue intervals, rational nodes and exact idempotent candidates."""

    def __init__(self, algebra, element, minpoly, intervals, nodes, idempotents):
        self.algebra = algebra
        self.element = element
        self.minpoly = minpoly
        self.intervals = intervals
        self.nodes = nodes  # rational midpoints, width-certified
        self.idempotents = idempotents

    @property
    def card(self) -> int:
        return len(self.nodes)

    def eigenvalues_float(self) -> list[float]:
        return [float(x) for x in self.nodes]

    def residuals(self) -> dict:
        """Exact residuals (returned as floats) of the spectral identities."""
        out = {}
        worst_idem = Fraction(0)
        for e in self.idempotents:
            d = (e * e) - e
            worst_idem = max(worst_idem, d.max_abs_coord())
        out["idempotency"] = float(worst_idem)
        worst_orth = Fraction(0)
        for i in range(len(self.idempotents)):
            for j in range(i + 1, len(self.idempotents)):
                p = self.idempotents[i] * self.idempotents[j]
                worst_orth = max(worst_orth, p.max_abs_coord())
        out["orthogonality"] = float(worst_orth)
        s = self.algebra.zero()
        for e in self.idempotents:
            s = s + e
        unit_defect = (s - self.algebra.unit_elem()).max_abs_coord()
        out["unit_sum"] = float(unit_defect)
        out["unit_sum_exact_zero"] = unit_defect == 0
        recon = self.algebra.zero()
        for lam, e in zip(self.nodes, self.idempotents):
            recon = recon + lam * e
        out["reconstruction"] = float((recon - self.element).max_abs_coord())
        return out

    def to_json(self) -> dict:
        return {
            "card": self.card,
            "eigenvalues": [
                {
                    "interval": [format_rat(x) for x in iv],
                    "approx": float(node),
                    "node": format_rat(node),
                }
                for iv, node in zip(self.intervals, self.nodes)
            ],
            "minpoly": [format_rat(c) for c in self.minpoly.coeffs],
            "idempotents": [e.to_json() for e in self.idempotents],
            "residuals": self.residuals(),
        }


def minimal_polynomial(a: AlgebraSC, x: Elem) -> PolyQ:
    """Monic minimal polynomial of x via exact linear dependence of powers."""
    vectors = [a.unit_elem().coords]
    cur = x
    while True:
        m = MatrixQ.from_rows([[v[r] for v in vectors] for r in range(a.dim)])
        sol = solve(m, list(cur.coords))
        if sol is not None:
            coeffs = list(sol[0]) + [Fraction(-1)]
            return PolyQ([-c for c in coeffs]).monic()
        vectors.append(cur.coords)
        cur = x * cur
        if len(vectors) > a.dim + 1:
            raise AssertionError("power chain failed to close")


def spectral_resolution(a: AlgebraSC, x: Elem, width: Fraction = ROOT_WIDTH) -> SpectralResolution:
    """Spectral data of x in a Euclidean algebra.

    The minimal polynomial is exact; roots are isolated by Sturm chains
    and refined to the given width; idempotents are built by Lagrange
    interpolation at the rational interval midpoints, so the energies
    sum to the unit *exactly* while idempotency and reconstruction hold
    within a width-controlled residual.  Raises SpectralError when the
    minimal polynomial has a repeated or non-real root (a formal-reality
    violation).
    """
    p = minimal_polynomial(a, x)
    if not p.is_squarefree():
        raise SpectralError("minimal polynomial has a repeated root: %r" % p)
    ivals = isolate_real_roots(p)
    if len(ivals) != p.degree:
        raise SpectralError(
            "minimal polynomial has %d real roots but degree %d"
            % (len(ivals), p.degree)
        )
    refined = [refine_root(p, iv, width) for iv in ivals]
    nodes = [(lo + hi) / 2 for lo, hi in refined]
    # powers of x once
    pows = [a.unit_elem()]
    for _ in range(p.degree - 1):
        pows.append(x * pows[-1])
    idems = []
    for r, lr in enumerate(nodes):
        poly = PolyQ([1])
        denom = Fraction(1)
        for s, ls in enumerate(nodes):
            if s == r:
                continue
            poly = poly * PolyQ([-ls, 1])
            denom *= lr - ls
        e = a.zero()
        for k, c in enumerate(poly.coeffs):
            if c:
                e = e + (c / denom) * pows[k]
        idems.append(e)
    return SpectralResolution(a, x, p, refined, nodes, idems)


def poly_calculus(a: AlgebraSC, x: Elem, poly: PolyQ,
                  resolution: SpectralResolution | None = None):
    """P(x) two ways: spectral sum of P(node) e_r versus exact Horner.

    Returns (spectral_elem, horner_elem, residual_float).
    """
    if resolution is None:
        resolution = spectral_resolution(a, x)
    spec = a.zero()
    for lam, e in zip(resolution.nodes, resolution.idempotents):
        spec = spec + poly(lam) * e
    horner = a.zero()
    for c in reversed(poly.coeffs):
        horner = x * horner
        horner = horner + c * a.unit_elem()
    resid = (spec - horner).max_abs_coord()
    return spec, horner, float(resid)


def capacity_estimate(a: AlgebraSC, trials: int = 20, seed: int = 0) -> int:
    """Max cardinality of spectral resolutions over seeded random elements.

    A sampling lower bound for the capacity; equality holds when some
    sample is generic, which the random model makes overwhelmingly
    likely already at small trial counts.
    """
    rng = random.Random(seed)
    best = 0
    for _ in range(trials):
        x = random_elem(a, rng)
        best = max(best, spectral_resolution(a, x).card)
    return best


# ---------------------------------------------------------------------------
# spin-factor recognition


def jspin_recognize(a: AlgebraSC):
    """Certificate that a is a spin factor R 1 + V, or None.

    The certificate carries a trace-orthogonal rational basis of V with
    v_r v_s = q_r delta_rs 1 exactly and all q_r > 0; over the reals the
    rescaled basis v_r / sqrt(q_r) then satisfies the standard spin
    relations, which pins the isomorphism class JSpin_dim(V).
    """
    if not a.commutative or not a.has_unit():
        return None
    unit = a.unit_elem()
    b = trace_form(a)
    # V = orthogonal complement of the unit under the trace form
    uc = unit.coords
    row = {
        j: sum(b[j, i] * uc[i] for i in range(a.dim))
        for j in range(a.dim)
    }
    comp = nullspace(
        MatrixQ.from_entries(1, a.dim, {(0, j): v for j, v in row.items() if v}),
    )
    if len(comp) != a.dim - 1:
        return None
    vs = [a.from_coords(v) for v in comp]
    unit_span = SpanQ([unit.coords], a.dim)

    def unit_coeff(e: Elem):
        if not unit_span.contains(e.coords):
            return None
        for i in range(a.dim):
            if uc[i]:
                return e.coords[i] / uc[i]
        return None

    m = len(vs)
    gram = [[None] * m for _ in range(m)]
    for r in range(m):
        for s in range(m):
            c = unit_coeff(vs[r] * vs[s])
            if c is None:
                return None
            gram[r][s] = c
    gm = MatrixQ.from_rows(gram)
    if not is_positive_definite(gm):
        return None
    # rational Gram-Schmidt: orthogonal basis with positive square scalars
    ortho: list[Elem] = []
    squares: list[Fraction] = []

    def form(u: Elem, v: Elem) -> Fraction:
        return unit_coeff(u * v)

    for v in vs:
        w = v
        for o, q in zip(ortho, squares):
            w = w - (form(v, o) / q) * o
        q = form(w, w)
        if q <= 0:
            return None
        ortho.append(w)
        squares.append(q)
    # exact law check on the orthogonal basis
    for r in range(m):
        for s in range(m):
            expect = squares[r] * unit if r == s else a.zero()
            if ortho[r] * ortho[s] != expect:
                return None
    return {
        "n": m,
        "target": "JSpin_%d" % m,
        "unit": unit,
        "orthogonal_basis": ortho,
        "squares": squares,
    }


# ---------------------------------------------------------------------------
# center


def center_basis(a: AlgebraSC) -> list[tuple[Fraction, ...]]:
    """Basis of {z : [x, y, z] = [x, z, y] = 0 for all x, y} (associator center)."""
    n = a.dim
    L = a.L_basis()
    pair = _pairs_L(a)
    rows = []
    # [e_i, e_j, z] = (e_i e_j) z - e_i (e_j z): rows of L_{e_i e_j} - L_i L_j
    for i in range(n):
        for j in range(n):
            p = _pair_lookup(a, pair, i, j)
            d1 = p - (L[i] @ L[j])
            fr = d1.to_fractions()
            for r in range(n):
                row = {c: fr[r][c] for c in range(n) if fr[r][c]}
                rows.append(row)
    basis = nullspace(rows, n, method="exact")
    # intersect with the second associator condition [x, z, y] = 0
    out = []
    for v in basis:
        ve = a.from_coords(v)
        ok = True
        for i in range(n):
            for j in range(n):
                ei, ej = a.basis_elem(i), a.basis_elem(j)
                if (ei * ve) * ej != ei * (ve * ej):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(v)
    return out
