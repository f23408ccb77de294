"""Octonions realized on C + C^3, quaternions on C + C, and SU(3) actions.

The octonion product used throughout is

    (z, Z) (z', Z') = (z z' - <Z, Z'>,  conj(z) Z' + z' Z + i Z x Z')

with the hermitian pairing <Z, Z'> = sum conj(Z^k) Z'^k (antilinear on
the left) and the antilinear cross product
(Z1 x Z2)^k = eps_klm conj(Z1^l) conj(Z2^m).  Conjugation is
(z, Z) -> (conj z, -Z), so conj(x) * x = |x|^2 * 1 exactly.

Charge conjugation is exposed in two variants because the naive
componentwise candidate (z, Z) -> (conj z, conj Z) fails to be an
automorphism: on pure-vector pairs it reverses the sign of the cross
term.  The sign-flipped variant (z, Z) -> (conj z, -conj Z) passes the
full 64-pair basis table and is the canonical choice; see
``charge_conj_table``.
"""

from __future__ import annotations

import random
from fractions import Fraction

import numpy as np

from .rationals import QI, format_qi, parse_qi

__all__ = [
    "Octonion",
    "Quaternion",
    "vartimes",
    "scal",
    "vol",
    "oct_mul",
    "oct_conj",
    "OCT_BASIS",
    "oct_basis_element",
    "random_octonion",
    "SU3Matrix",
    "su3_apply",
    "apply_vector_map",
    "automorphism_table",
    "CC_COMPONENTWISE",
    "CC_VECTOR_FLIP",
    "charge_conj",
    "charge_conj_table",
    "canonical_charge_conj_variant",
    "quat_mul",
    "quat_conj",
    "u1_action",
    "su2_check",
    "jinv_check",
]

_EPS = ((0, 1, 2, 1), (0, 2, 1, -1), (1, 2, 0, 1), (1, 0, 2, -1), (2, 0, 1, 1), (2, 1, 0, -1))


def scal(Z1, Z2) -> QI:
    """Hermitian pairing, antilinear in the first slot."""
    out = QI(0, 0)
    for a, b in zip(Z1, Z2):
        out = out + a.conj() * b
    return out


def vartimes(Z1, Z2):
    """Antilinear cross product (Z1 x Z2)^k = eps_klm conj(Z1^l) conj(Z2^m)."""
    c1 = [a.conj() for a in Z1]
    c2 = [b.conj() for b in Z2]
    return (
        c1[1] * c2[2] - c1[2] * c2[1],
        c1[2] * c2[0] - c1[0] * c2[2],
        c1[0] * c2[1] - c1[1] * c2[0],
    )


def vol(Z1, Z2, Z3) -> QI:
    """Trilinear volume form eps_klm Z1^k Z2^l Z3^m (no conjugation)."""
    out = QI(0, 0)
    for k, l, m, s in _EPS:
        out = out + s * (Z1[k] * Z2[l] * Z3[m])
    return out


class Octonion:
    """Octonion as a complex scalar and a complex 3-vector."""

    __slots__ = ("z", "Z")

    def __init__(self, z=QI(0, 0), Z=(QI(0, 0), QI(0, 0), QI(0, 0))):
        self.z = z if isinstance(z, QI) else QI(z)
        self.Z = tuple(w if isinstance(w, QI) else QI(w) for w in Z)
        if len(self.Z) != 3:
            raise ValueError("vector part must have three components")

    def __mul__(self, other):
        if isinstance(other, Octonion):
            return oct_mul(self, other)
        if isinstance(other, (int, Fraction, QI)):
            return Octonion(self.z * other, tuple(w * other for w in self.Z))
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, QI)):
            return Octonion(other * self.z, tuple(other * w for w in self.Z))
        return NotImplemented

    def __add__(self, other):
        if not isinstance(other, Octonion):
            return NotImplemented
        return Octonion(self.z + other.z, tuple(a + b for a, b in zip(self.Z, other.Z)))

    def __sub__(self, other):
        if not isinstance(other, Octonion):
            return NotImplemented
        return Octonion(self.z - other.z, tuple(a - b for a, b in zip(self.Z, other.Z)))

    def __neg__(self):
        return Octonion(-self.z, tuple(-w for w in self.Z))

    def __eq__(self, other):
        if not isinstance(other, Octonion):
            return NotImplemented
        return self.z == other.z and self.Z == other.Z

    def __hash__(self):
        return hash((self.z, self.Z))

    def conj(self) -> "Octonion":
        return oct_conj(self)

    def norm2(self) -> Fraction:
        return self.z.norm2() + sum((w.norm2() for w in self.Z), Fraction(0))

    def real_coords(self) -> tuple[Fraction, ...]:
        """Coordinates on the 8-dim real basis (1, i, e1, i e1, e2, i e2, e3, i e3)."""
        out = [self.z.re, self.z.im]
        for w in self.Z:
            out.extend((w.re, w.im))
        return tuple(out)

    @classmethod
    def from_real_coords(cls, c) -> "Octonion":
        c = list(c)
        if len(c) != 8:
            raise ValueError("eight real coordinates required")
        return cls(QI(c[0], c[1]), (QI(c[2], c[3]), QI(c[4], c[5]), QI(c[6], c[7])))

    def to_json(self) -> dict:
        return {"z": format_qi(self.z), "Z": [format_qi(w) for w in self.Z]}

    @classmethod
    def from_json(cls, data: dict) -> "Octonion":
        return cls(parse_qi(data["z"]), tuple(parse_qi(s) for s in data["Z"]))

    def __repr__(self):
        return "Octonion(%s, %r)" % (self.z, [str(w) for w in self.Z])


OCT_ONE = Octonion(QI(1, 0))


def oct_mul(x: Octonion, y: Octonion) -> Octonion:
    zc = x.z * y.z - scal(x.Z, y.Z)
    cross = vartimes(x.Z, y.Z)
    Z = tuple(
        x.z.conj() * b + y.z * a + QI(0, 1) * c for a, b, c in zip(x.Z, y.Z, cross)
    )
    return Octonion(zc, Z)


def oct_conj(x: Octonion) -> Octonion:
    return Octonion(x.z.conj(), tuple(-w for w in x.Z))


def _basis():
    out = []
    for k in range(8):
        c = [Fraction(0)] * 8
        c[k] = Fraction(1)
        out.append(Octonion.from_real_coords(c))
    return tuple(out)


OCT_BASIS = _basis()


def oct_basis_element(k: int) -> Octonion:
    return OCT_BASIS[k]


def random_octonion(rng: random.Random, span: int = 6, den: int = 4) -> Octonion:
    coords = [
        Fraction(rng.randint(-span, span), rng.randint(1, den)) for _ in range(8)
    ]
    return Octonion.from_real_coords(coords)


# ---------------------------------------------------------------------------
# SU(3) on the vector part

SU3_FLOAT_TOLERANCE = 1e-12


class SU3Matrix:
    """3x3 special unitary matrix, exact (QI entries) or floating (tagged).

    Exact instances verify U* U = 1 and det U = 1 with rational
    arithmetic; floating instances verify both within the tag tolerance.
    """

    __slots__ = ("entries", "exact")

    def __init__(self, entries, exact: bool | None = None, _skip_check: bool = False):
        if exact is None:
            exact = not isinstance(entries, np.ndarray)
        self.exact = exact
        if exact:
            self.entries = tuple(
                tuple(w if isinstance(w, QI) else QI(w) for w in row) for row in entries
            )
            if len(self.entries) != 3 or any(len(r) != 3 for r in self.entries):
                raise ValueError("3x3 matrix required")
            if not _skip_check:
                if not self._exact_special_unitary():
                    raise ValueError("not an exact special unitary matrix")
        else:
            self.entries = np.asarray(entries, dtype=complex)
            if self.entries.shape != (3, 3):
                raise ValueError("3x3 matrix required")
            if not _skip_check:
                err = np.abs(self.entries.conj().T @ self.entries - np.eye(3)).max()
                derr = abs(np.linalg.det(self.entries) - 1.0)
                if err > SU3_FLOAT_TOLERANCE or derr > SU3_FLOAT_TOLERANCE:
                    raise ValueError(
                        "not special unitary within tolerance (unitarity %.3g, det %.3g)"
                        % (err, derr)
                    )

    def _exact_special_unitary(self) -> bool:
        e = self.entries
        for i in range(3):
            for j in range(3):
                s = QI(0, 0)
                for k in range(3):
                    s = s + e[k][i].conj() * e[k][j]
                if s != (QI(1, 0) if i == j else QI(0, 0)):
                    return False
        det = (
            e[0][0] * (e[1][1] * e[2][2] - e[1][2] * e[2][1])
            - e[0][1] * (e[1][0] * e[2][2] - e[1][2] * e[2][0])
            + e[0][2] * (e[1][0] * e[2][1] - e[1][1] * e[2][0])
        )
        return det == QI(1, 0)

    @classmethod
    def random_float(cls, rng: random.Random) -> "SU3Matrix":
        """Haar-ish floating sample: QR of a complex Gaussian, det fixed to 1."""
        g = np.array(
            [[complex(rng.gauss(0, 1), rng.gauss(0, 1)) for _ in range(3)] for _ in range(3)]
        )
        q, r = np.linalg.qr(g)
        q = q * (np.diag(r) / np.abs(np.diag(r)))
        det = np.linalg.det(q)
        q = q / det ** (1.0 / 3.0)
        return cls(q, exact=False)


def apply_vector_map(g, x: Octonion):
    """Apply a 3x3 matrix to the vector part: (z, Z) -> (z, g Z).

    Accepts exact QI matrices (exact result) or complex ndarrays
    (floating result as a plain complex 8-vector is avoided; returns a
    pair (z complex, Z complex array)).
    """
    if isinstance(g, SU3Matrix):
        g = g.entries
    if isinstance(g, np.ndarray):
        Z = np.array([complex(w) for w in x.Z])
        return complex(x.z), g @ Z
    Z = tuple(
        g[k][0] * x.Z[0] + g[k][1] * x.Z[1] + g[k][2] * x.Z[2] for k in range(3)
    )
    return Octonion(x.z, Z)


def su3_apply(g: SU3Matrix, x: Octonion):
    """SU(3) action fixing the complex scalar slot."""
    if not isinstance(g, SU3Matrix):
        g = SU3Matrix(g)
    return apply_vector_map(g, x)


def automorphism_table(transform) -> tuple[bool, tuple | None]:
    """Check transform(x*y) = transform(x)*transform(y) on all 64 basis pairs.

    Returns (ok, witness) where witness is the first failing (i, j).
    The transform must map Octonion -> Octonion exactly.
    """
    for i, a in enumerate(OCT_BASIS):
        for j, b in enumerate(OCT_BASIS):
            if transform(oct_mul(a, b)) != oct_mul(transform(a), transform(b)):
                return False, (i, j)
    return True, None


# ---------------------------------------------------------------------------
# charge conjugation variants

CC_COMPONENTWISE = "componentwise"
CC_VECTOR_FLIP = "vector-flip"


def charge_conj(x: Octonion, variant: str = CC_VECTOR_FLIP) -> Octonion:
    """Charge conjugation candidates.

    'componentwise' conjugates every complex coordinate in place;
    'vector-flip' additionally negates the vector part.  Only the latter
    is an algebra automorphism; the former is kept so the discrepancy
    stays visible and testable.
    """
    if variant == CC_COMPONENTWISE:
        return Octonion(x.z.conj(), tuple(w.conj() for w in x.Z))
    if variant == CC_VECTOR_FLIP:
        return Octonion(x.z.conj(), tuple(-w.conj() for w in x.Z))
    raise ValueError("unknown charge conjugation variant %r" % variant)


def charge_conj_table() -> dict:
    """Automorphism verdict for both variants over all 64 basis pairs."""
    out = {}
    for variant in (CC_COMPONENTWISE, CC_VECTOR_FLIP):
        ok, witness = automorphism_table(lambda t, v=variant: charge_conj(t, v))
        out[variant] = {"automorphism": ok, "witness": witness}
    return out


def canonical_charge_conj_variant() -> str:
    """The unique variant passing the automorphism table."""
    table = charge_conj_table()
    passing = [v for v, rec in table.items() if rec["automorphism"]]
    if len(passing) != 1:
        raise AssertionError("expected exactly one automorphism variant, got %r" % passing)
    return passing[0]


# ---------------------------------------------------------------------------
# quaternions as C + C

Quaternion = tuple  # (z1, z2) of QI; kept structural on purpose


def quat_mul(q: tuple[QI, QI], w: tuple[QI, QI]) -> tuple[QI, QI]:
    """(z1 + z2 j)(w1 + w2 j) with j z = conj(z) j and j^2 = -1."""
    z1, z2 = q
    w1, w2 = w
    return (z1 * w1 - z2 * w2.conj(), z1 * w2 + z2 * w1.conj())


def quat_conj(q: tuple[QI, QI]) -> tuple[QI, QI]:
    z1, z2 = q
    return (z1.conj(), -z2)


def quat_norm2(q: tuple[QI, QI]) -> Fraction:
    return q[0].norm2() + q[1].norm2()


def u1_action(c: QI, q: tuple[QI, QI]) -> tuple[QI, QI]:
    """z1 + z2 j -> z1 + (c z2) j for unit-circle c; exact for rational points."""
    if c.norm2() != 1:
        raise ValueError("U(1) parameter must lie on the unit circle exactly")
    return (q[0], c * q[1])


# ---------------------------------------------------------------------------
# SU(2) and the antidiagonal j-matrix invariance


def su2_check(U) -> bool:
    """Exact test that a 2x2 QI matrix is special unitary."""
    (a, b), (c, d) = U
    unit = (
        a.conj() * a + c.conj() * c == QI(1, 0)
        and b.conj() * b + d.conj() * d == QI(1, 0)
        and a.conj() * b + c.conj() * d == QI(0, 0)
    )
    return unit and (a * d - b * c) == QI(1, 0)


def _quat_mat_mul(A, B):
    n = len(A)
    m = len(B[0])
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = (QI(0, 0), QI(0, 0))
            for k in range(len(B)):
                p = quat_mul(A[i][k], B[k][j])
                acc = (acc[0] + p[0], acc[1] + p[1])
            row.append(acc)
        out.append(row)
    return out


def jinv_check(U) -> bool:
    """U * antidiag(j, -j) * U^dagger = antidiag(j, -j) for exact SU(2) U."""
    if not su2_check(U):
        raise ValueError("exact SU(2) matrix required")
    j = (QI(0, 0), QI(1, 0))
    zero = (QI(0, 0), QI(0, 0))
    J = [[zero, j], [(-j[0], -j[1]), zero]]
    Uq = [[(w, QI(0, 0)) for w in row] for row in U]
    Udag = [[(U[j_][i_].conj(), QI(0, 0)) for j_ in range(2)] for i_ in range(2)]
    return _quat_mat_mul(_quat_mat_mul(Uq, J), Udag) == J
