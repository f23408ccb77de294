"""Hermitian 3x3 octonionic matrices in element form and pair form.

The 27-dimensional exceptional algebra stores an element as three real
diagonal entries plus three octonions sitting in the off-diagonal slots.
Writing each octonion as a complex scalar plus a complex 3-vector
splits the element into a complex hermitian 3x3 matrix H together with
a full complex 3x3 matrix M collecting the vector parts.  This module
owns that translation and everything built on top of it: the
SU(3)xSU(3) action on the pair picture, charge conjugation, the
particle slot tables for the two fermion families, the quaternionic
rank-two companion algebra with its U(1)xSU(2) action, and the
three-block direct sum.

Layout conventions are load-bearing and certified at build time: the
vector parts enter M as *columns*, and the second group factor acts on
M through its complex conjugate (M -> U M V^T).  The certificate checks
that the tangent action pulled back to the 27 coordinates consists of
derivations; the row layout and the unconjugated second factor both
fail that test and are rejected with explicit witnesses.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .checks import CheckResult, failed, passed
from .derivations import apply_mat
from .fastmat import IMat, imat_from_fractions
from .jordan import AlgebraSC, Elem, direct_sum, make_hermitian
from .octonion import (
    Octonion,
    SU3Matrix,
    canonical_charge_conj_variant,
    charge_conj,
    jinv_check,
    oct_mul,
    su2_check,
)
from .rationals import QI, format_qi, format_rat, parse_qi, parse_rat

__all__ = [
    "AlbertElem",
    "PairHM",
    "FermionSlot",
    "COMPLEX_SLOTS",
    "VECTOR_SLOTS",
    "albert_algebra",
    "to_pair",
    "from_pair",
    "albert_product",
    "su3_generators",
    "pair_tangent",
    "su3su3_derivation",
    "infinitesimal_action_basis",
    "convention_certificate",
    "su3xsu3_act",
    "su3xsu3_pullback",
    "pair_action_float",
    "float_automorphism_residual",
    "jordan_automorphism_check",
    "charge_conj_albert",
    "charge_conj_matrix",
    "fermion_assign",
    "fermion_table",
    "j42_sector",
    "u1su2_act",
    "u1su2_matrix",
    "u1su2_check",
    "jinv_check",
    "jtent_direct_sum",
    "jtent_blocks",
]


# ---------------------------------------------------------------------------
# basis layout of the 27-dim algebra
#
# make_hermitian("O", 3) orders the basis as the three diagonal slots
# followed by 8 octonion coordinates per off-diagonal entry, entries in
# the order (1,2), (1,3), (2,3).  The element form puts x3 in (1,2),
# the conjugate of x2 in (1,3) and x1 in (2,3), so the three generation
# blocks start at these offsets:

_GEN_BASE = (19, 11, 3)  # x1, x2, x3
_GEN_CONJUGATED = (False, True, False)  # the (1,3) slot stores conj(x2)

COMPLEX_SLOTS = (0, 1, 2, 3, 4, 11, 12, 19, 20)
VECTOR_SLOTS = tuple(t for t in range(27) if t not in COMPLEX_SLOTS)

_H3O = None


def albert_algebra() -> AlgebraSC:
    """The 27-dim algebra by structure constants (cached)."""
    global _H3O
    if _H3O is None:
        _H3O = make_hermitian("O", 3)
    return _H3O


class AlbertElem:
    """Element form: real diagonal (zeta1..3) plus octonions (x1..3).

    The full hermitian matrix reads
        [zeta1,    x3,       conj(x2)]
        [conj(x3), zeta2,    x1      ]
        [x2,       conj(x1), zeta3   ]
    """

    __slots__ = ("zeta", "x")

    def __init__(self, zeta, x):
        self.zeta = tuple(Fraction(t) for t in zeta)
        self.x = tuple(x)
        if len(self.zeta) != 3 or len(self.x) != 3:
            raise ValueError("three diagonal reals and three octonions required")
        if not all(isinstance(w, Octonion) for w in self.x):
            raise ValueError("off-diagonal entries must be octonions")

    def __add__(self, other):
        if not isinstance(other, AlbertElem):
            return NotImplemented
        return AlbertElem(
            tuple(a + b for a, b in zip(self.zeta, other.zeta)),
            tuple(a + b for a, b in zip(self.x, other.x)),
        )

    def __sub__(self, other):
        if not isinstance(other, AlbertElem):
            return NotImplemented
        return AlbertElem(
            tuple(a - b for a, b in zip(self.zeta, other.zeta)),
            tuple(a - b for a, b in zip(self.x, other.x)),
        )

    def __neg__(self):
        return AlbertElem(tuple(-t for t in self.zeta), tuple(-w for w in self.x))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            f = Fraction(other)
            return AlbertElem(
                tuple(t * f for t in self.zeta), tuple(w * f for w in self.x)
            )
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, AlbertElem):
            return NotImplemented
        return self.zeta == other.zeta and self.x == other.x

    __hash__ = None

    def to_coords(self) -> tuple[Fraction, ...]:
        """Coordinates on the 27-dim structure-constant basis."""
        c = [Fraction(0)] * 27
        c[0:3] = self.zeta
        for w, base, conj in zip(self.x, _GEN_BASE, _GEN_CONJUGATED):
            stored = w.conj() if conj else w
            for a, v in enumerate(stored.real_coords()):
                c[base + a] = v
        return tuple(c)

    @classmethod
    def from_coords(cls, coords) -> "AlbertElem":
        c = [Fraction(t) for t in coords]
        if len(c) != 27:
            raise ValueError("27 coordinates required")
        xs = []
        for base, conj in zip(_GEN_BASE, _GEN_CONJUGATED):
            w = Octonion.from_real_coords(c[base : base + 8])
            xs.append(w.conj() if conj else w)
        return cls(c[0:3], xs)

    def matrix(self) -> list[list[Octonion]]:
        """Full 3x3 hermitian octonionic matrix."""
        d = [Octonion(QI(t)) for t in self.zeta]
        x1, x2, x3 = self.x
        return [
            [d[0], x3, x2.conj()],
            [x3.conj(), d[1], x1],
            [x2, x1.conj(), d[2]],
        ]

    @classmethod
    def random(cls, rng: random.Random, span: int = 4, den: int = 3) -> "AlbertElem":
        from .octonion import random_octonion

        zeta = [Fraction(rng.randint(-span, span), rng.randint(1, den)) for _ in range(3)]
        xs = [random_octonion(rng, span=span, den=den) for _ in range(3)]
        return cls(zeta, xs)

    def to_json(self) -> dict:
        return {
            "zeta": [format_rat(t) for t in self.zeta],
            "x": [w.to_json() for w in self.x],
        }

    @classmethod
    def from_json(cls, data: dict) -> "AlbertElem":
        return cls(
            [parse_rat(s) for s in data["zeta"]],
            [Octonion.from_json(d) for d in data["x"]],
        )

    def __repr__(self):
        return "AlbertElem(zeta=%r)" % ([str(t) for t in self.zeta],)


def _elem_from_matrix(P) -> AlbertElem:
    """Read an element back from a full 3x3 octonionic matrix (validating)."""
    zero = (QI(0, 0), QI(0, 0), QI(0, 0))
    for i in range(3):
        d = P[i][i]
        if d.z.im != 0 or d.Z != zero:
            raise ValueError("diagonal entry %d is not real" % i)
        for j in range(i + 1, 3):
            if P[j][i] != P[i][j].conj():
                raise ValueError("matrix is not hermitian at (%d, %d)" % (i, j))
    zeta = (P[0][0].z.re, P[1][1].z.re, P[2][2].z.re)
    return AlbertElem(zeta, (P[1][2], P[2][0], P[0][1]))


def albert_product(a: AlbertElem, b: AlbertElem) -> AlbertElem:
    """Entrywise symmetrized matrix product (AB + BA) / 2.

    Computed directly on the octonionic matrices; independent of the
    structure constants that make_hermitian tabulates, which is what
    makes the exact agreement between the two worth checking.
    """
    A = a.matrix()
    B = b.matrix()
    half = Fraction(1, 2)
    P = []
    for i in range(3):
        row = []
        for j in range(3):
            acc = Octonion()
            for r in range(3):
                acc = acc + oct_mul(A[i][r], B[r][j]) + oct_mul(B[i][r], A[r][j])
            row.append(acc * half)
        P.append(row)
    return _elem_from_matrix(P)


# ---------------------------------------------------------------------------
# pair form


class PairHM:
    """Pair form: hermitian complex H plus unconstrained complex M.

    H carries the diagonal and the complex scalars of the octonion
    entries in the same slots; column i of M is the complex 3-vector
    part of x_{i+1}.
    """

    __slots__ = ("H", "M")

    def __init__(self, H, M):
        self.H = tuple(
            tuple(w if isinstance(w, QI) else QI(w) for w in row) for row in H
        )
        self.M = tuple(
            tuple(w if isinstance(w, QI) else QI(w) for w in row) for row in M
        )
        if len(self.H) != 3 or any(len(r) != 3 for r in self.H):
            raise ValueError("H must be 3x3")
        if len(self.M) != 3 or any(len(r) != 3 for r in self.M):
            raise ValueError("M must be 3x3")
        for i in range(3):
            for j in range(i, 3):
                if self.H[j][i] != self.H[i][j].conj():
                    raise ValueError("H is not hermitian at (%d, %d)" % (i, j))

    def __eq__(self, other):
        if not isinstance(other, PairHM):
            return NotImplemented
        return self.H == other.H and self.M == other.M

    __hash__ = None

    def __add__(self, other):
        if not isinstance(other, PairHM):
            return NotImplemented
        return PairHM(
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.H, other.H)),
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.M, other.M)),
        )

    def to_json(self) -> dict:
        # hermitian H as 3 reals + 3 upper entries, M row-major
        return {
            "H_diag": [format_rat(self.H[i][i].re) for i in range(3)],
            "H_upper": [
                format_qi(self.H[0][1]),
                format_qi(self.H[0][2]),
                format_qi(self.H[1][2]),
            ],
            "M": [format_qi(w) for row in self.M for w in row],
        }

    @classmethod
    def from_json(cls, data: dict) -> "PairHM":
        d = [parse_rat(s) for s in data["H_diag"]]
        u = [parse_qi(s) for s in data["H_upper"]]
        H = [
            [QI(d[0]), u[0], u[1]],
            [u[0].conj(), QI(d[1]), u[2]],
            [u[1].conj(), u[2].conj(), QI(d[2])],
        ]
        m = [parse_qi(s) for s in data["M"]]
        M = [m[0:3], m[3:6], m[6:9]]
        return cls(H, M)

    def __repr__(self):
        return "PairHM(H_diag=%r)" % ([str(self.H[i][i].re) for i in range(3)],)


def to_pair(a: AlbertElem) -> PairHM:
    """Split each octonion entry into scalar and vector parts."""
    x1, x2, x3 = a.x
    H = [
        [QI(a.zeta[0]), x3.z, x2.z.conj()],
        [x3.z.conj(), QI(a.zeta[1]), x1.z],
        [x2.z, x1.z.conj(), QI(a.zeta[2])],
    ]
    # column i of M carries the vector part of x_{i+1}
    M = [[x1.Z[r], x2.Z[r], x3.Z[r]] for r in range(3)]
    return PairHM(H, M)


def from_pair(p: PairHM) -> AlbertElem:
    zeta = (p.H[0][0].re, p.H[1][1].re, p.H[2][2].re)
    zs = (p.H[1][2], p.H[2][0], p.H[0][1])
    xs = tuple(
        Octonion(z, (p.M[0][i], p.M[1][i], p.M[2][i])) for i, z in enumerate(zs)
    )
    return AlbertElem(zeta, xs)


# ---------------------------------------------------------------------------
# 3x3 complex matrix helpers (tuples of QI rows, exact)

_Q_ZERO = QI(0, 0)
_Q3_ZERO = ((_Q_ZERO,) * 3,) * 3


def _qmul(A, B):
    return tuple(
        tuple(sum((A[i][k] * B[k][j] for k in range(3)), _Q_ZERO) for j in range(3))
        for i in range(3)
    )


def _qsub(A, B):
    return tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(A, B))


def _qdagger(A):
    return tuple(tuple(A[j][i].conj() for j in range(3)) for i in range(3))


def _qtranspose(A):
    return tuple(tuple(A[j][i] for j in range(3)) for i in range(3))


def _qconj(A):
    return tuple(tuple(w.conj() for w in row) for row in A)


def su3_generators():
    """Basis of the trace-free anti-hermitian complex 3x3 matrices (8)."""
    i_ = QI(0, 1)
    one = QI(1, 0)

    def mat(entries):
        return tuple(
            tuple(entries.get((r, c), _Q_ZERO) for c in range(3)) for r in range(3)
        )

    gens = [
        mat({(0, 0): i_, (1, 1): -i_}),
        mat({(1, 1): i_, (2, 2): -i_}),
    ]
    for j, k in ((0, 1), (0, 2), (1, 2)):
        gens.append(mat({(j, k): one, (k, j): -one}))
        gens.append(mat({(j, k): i_, (k, j): i_}))
    return gens


def pair_tangent(u, v, p: PairHM) -> PairHM:
    """Tangent action H -> vH - Hv, M -> uM - M conj(v).

    u, v anti-hermitian trace-free.  The second factor reaches M only
    through its complex conjugate; with the column layout of M that is
    the variant whose pullback consists of derivations (the build-time
    certificate rejects the unconjugated form).
    """
    dH = _qsub(_qmul(v, p.H), _qmul(p.H, v))
    dM = _qsub(_qmul(u, p.M), _qmul(p.M, _qconj(v)))
    return PairHM(dH, dM)


def _action_matrix(u, v, transpose_m: bool = False,
                   literal_v: bool = False) -> IMat:
    """Pulled-back 27x27 matrix of the tangent action.

    transpose_m reinterprets the stored M with the vector parts as rows
    instead of columns; literal_v drops the conjugation on the second
    factor.  Both knobs exist so the rejected variants stay expressible
    for the certificate.
    """
    cols = []
    for t in range(27):
        unit = [Fraction(0)] * 27
        unit[t] = Fraction(1)
        p = to_pair(AlbertElem.from_coords(unit))
        if transpose_m:
            p = PairHM(p.H, _qtranspose(p.M))
        if literal_v:
            dH = _qsub(_qmul(v, p.H), _qmul(p.H, v))
            dM = _qsub(_qmul(u, p.M), _qmul(p.M, v))
            q = PairHM(dH, dM)
        else:
            q = pair_tangent(u, v, p)
        if transpose_m:
            q = PairHM(q.H, _qtranspose(q.M))
        cols.append(from_pair(q).to_coords())
    return imat_from_fractions(
        [[cols[c][r] for c in range(27)] for r in range(27)]
    )


def _leibniz_defect(alg: AlgebraSC, D: IMat):
    """First basis index where [D, L_i] != L_{D e_i}, or None."""
    L = alg.L_basis()
    for i in range(alg.dim):
        if D.commutator(L[i]) != alg.L_op(apply_mat(D, alg.basis_elem(i))):
            return i
    return None


_CONVENTION_CERT = None


def convention_certificate() -> dict:
    """Certify the layout and conjugation conventions of the pair action.

    For every generator pair (u, 0) and (0, v) the pulled-back tangent
    map must be a derivation of the 27-dim algebra.  Two rival
    conventions must fail that test somewhere: the row layout of M, and
    the unconjugated second factor (M -> uM - Mv).  Computed once and
    cached; raises if the shipped convention ever fails, so downstream
    maps cannot run on a bad one.
    """
    global _CONVENTION_CERT
    if _CONVENTION_CERT is None:
        alg = albert_algebra()
        gens = su3_generators()
        sides = [(g, _Q3_ZERO) for g in gens] + [(_Q3_ZERO, g) for g in gens]
        for t, (u, v) in enumerate(sides):
            bad = _leibniz_defect(alg, _action_matrix(u, v))
            if bad is not None:
                raise AssertionError(
                    "column layout generator %d fails Leibniz at basis %d" % (t, bad)
                )

        def first_defect(**kw):
            for t, (u, v) in enumerate(sides):
                bad = _leibniz_defect(alg, _action_matrix(u, v, **kw))
                if bad is not None:
                    return {"generator": t, "basis": bad}
            return None

        rows = first_defect(transpose_m=True)
        literal = first_defect(literal_v=True)
        if rows is None or literal is None:
            raise AssertionError("a rejected convention passed the derivation test")
        _CONVENTION_CERT = {
            "layout": "columns",
            "second_factor": "conjugated",
            "rejected": {"rows": rows, "unconjugated": literal},
            "generators": len(sides),
        }
    return _CONVENTION_CERT


def su3su3_derivation(u, v) -> IMat:
    """Exact pulled-back tangent map of the two-factor action."""
    convention_certificate()
    return _action_matrix(u, v)


def infinitesimal_action_basis() -> list[IMat]:
    """The 16 tangent maps: (u, 0) over the basis, then (0, v)."""
    convention_certificate()
    gens = su3_generators()
    out = [_action_matrix(g, _Q3_ZERO) for g in gens]
    out.extend(_action_matrix(_Q3_ZERO, g) for g in gens)
    return out


# ---------------------------------------------------------------------------
# group-level action


def _as_su3(g) -> SU3Matrix:
    return g if isinstance(g, SU3Matrix) else SU3Matrix(g)


def su3xsu3_act(U, V, p: PairHM) -> PairHM:
    """Group action on the pair form: H -> V H V*, M -> U M V^T.

    The second factor reaches M through its complex conjugate, the
    group form of the certified tangent convention.  Exact group
    elements only; sampled floating elements go through
    pair_action_float instead.
    """
    U = _as_su3(U)
    V = _as_su3(V)
    if not (U.exact and V.exact):
        raise ValueError("exact special unitary matrices required here")
    convention_certificate()
    H = _qmul(_qmul(V.entries, p.H), _qdagger(V.entries))
    M = _qmul(_qmul(U.entries, p.M), _qtranspose(V.entries))
    return PairHM(H, M)


def su3xsu3_pullback(U, V) -> IMat:
    """Exact 27x27 matrix of the group action through the pair form."""
    cols = []
    for t in range(27):
        unit = [Fraction(0)] * 27
        unit[t] = Fraction(1)
        q = su3xsu3_act(U, V, to_pair(AlbertElem.from_coords(unit)))
        cols.append(from_pair(q).to_coords())
    return imat_from_fractions(
        [[cols[c][r] for c in range(27)] for r in range(27)]
    )


def _complex_entries(rows) -> np.ndarray:
    return np.array(
        [[complex(w.re, w.im) for w in row] for row in rows], dtype=complex
    )


def _coords_from_float_pair(H: np.ndarray, M: np.ndarray) -> np.ndarray:
    c = np.zeros(27)
    c[0], c[1], c[2] = H[0, 0].real, H[1, 1].real, H[2, 2].real
    zs = (H[1, 2], H[2, 0], H[0, 1])
    for gen, (base, conj) in enumerate(zip(_GEN_BASE, _GEN_CONJUGATED)):
        z = zs[gen]
        Z = M[:, gen]
        if conj:  # the slot stores the octonionic conjugate
            z = z.conjugate()
            Z = -Z
        c[base], c[base + 1] = z.real, z.imag
        for r in range(3):
            c[base + 2 + 2 * r] = Z[r].real
            c[base + 3 + 2 * r] = Z[r].imag
    return c


def pair_action_float(U, V) -> np.ndarray:
    """Floating 27x27 matrix of the group action for sampled (U, V)."""
    U = _as_su3(U)
    V = _as_su3(V)
    Uf = U.entries if not U.exact else _complex_entries(U.entries)
    Vf = V.entries if not V.exact else _complex_entries(V.entries)
    cols = []
    for t in range(27):
        unit = [Fraction(0)] * 27
        unit[t] = Fraction(1)
        p = to_pair(AlbertElem.from_coords(unit))
        H = _complex_entries(p.H)
        M = _complex_entries(p.M)
        H = Vf @ H @ Vf.conj().T
        M = Uf @ M @ Vf.T
        cols.append(_coords_from_float_pair(H, M))
    return np.array(cols).T


def float_automorphism_residual(T: np.ndarray, rng: random.Random,
                                trials: int = 4) -> float:
    """Worst |T(xy) - T(x)T(y)| over random floating elements."""
    sc = albert_algebra().sc_float()
    worst = 0.0
    for _ in range(trials):
        x = np.array([rng.uniform(-1, 1) for _ in range(27)])
        y = np.array([rng.uniform(-1, 1) for _ in range(27)])
        xy = np.einsum("a,b,abk->k", x, y, sc)
        lhs = T @ xy
        rhs = np.einsum("a,b,abk->k", T @ x, T @ y, sc)
        worst = max(worst, float(np.abs(lhs - rhs).max()))
    return worst


def jordan_automorphism_check(alg: AlgebraSC, T: IMat,
                              name: str = "automorphism") -> CheckResult:
    """Exact T(e_i e_j) = T(e_i) T(e_j) over all basis pairs."""
    images = [apply_mat(T, alg.basis_elem(i)) for i in range(alg.dim)]
    for i in range(alg.dim):
        for j in range(i, alg.dim):
            lhs = apply_mat(T, alg.mul(alg.basis_elem(i), alg.basis_elem(j)))
            if lhs != alg.mul(images[i], images[j]):
                return failed(name, witness={"pair": (i, j)})
    return passed(name, dim=alg.dim)


# ---------------------------------------------------------------------------
# charge conjugation

_CC_MATRIX = None


def charge_conj_albert(a: AlbertElem) -> AlbertElem:
    """Entrywise charge conjugation; the real diagonal is untouched.

    Uses the unique conjugation variant that certifies as an octonion
    algebra automorphism, so the induced map is an automorphism here
    as well (checked exactly in the suite).
    """
    v = canonical_charge_conj_variant()
    return AlbertElem(a.zeta, tuple(charge_conj(w, v) for w in a.x))


def charge_conj_matrix() -> IMat:
    """The induced 27x27 coordinate matrix (cached)."""
    global _CC_MATRIX
    if _CC_MATRIX is None:
        cols = []
        for t in range(27):
            unit = [Fraction(0)] * 27
            unit[t] = Fraction(1)
            b = charge_conj_albert(AlbertElem.from_coords(unit))
            cols.append(b.to_coords())
        _CC_MATRIX = imat_from_fractions(
            [[cols[c][r] for c in range(27)] for r in range(27)]
        )
    return _CC_MATRIX


# ---------------------------------------------------------------------------
# fermion slot tables


@dataclass(frozen=True)
class FermionSlot:
    """One particle label with its coordinate block.

    algebra_coords indexes the 27-dim basis; module_coords indexes the
    rank-2 free carrier where the up family is copy 0 and the down
    family copy 1 (carrier index = 2 * algebra index + copy).
    """

    label: str
    family: str
    kind: str  # "diagonal", "lepton" or "quark"
    algebra_coords: tuple[int, ...]
    module_coords: tuple[int, ...]


_FAMILY_COPY = {"up": 0, "down": 1}
_LEPTONS = {"up": ("nu_e", "nu_mu", "nu_tau"), "down": ("e", "mu", "tau")}
_QUARKS = {"up": ("u", "c", "t"), "down": ("d", "s", "b")}
_DIAG_PREFIX = {"up": "alpha", "down": "beta"}


def fermion_assign(family: str) -> list[FermionSlot]:
    """Slot table for one family.

    Generation i sits in the octonion entry x_i: its lepton takes the
    complex scalar slots and its quark the complex 3-vector slots; the
    diagonal reals are standalone labels.  Coordinate counts per family:
    3 + 3*2 + 3*6 = 27.
    """
    if family not in _FAMILY_COPY:
        raise ValueError("family must be 'up' or 'down', got %r" % family)
    copy = _FAMILY_COPY[family]

    def slot(label, kind, algebra_coords):
        return FermionSlot(
            label,
            family,
            kind,
            tuple(algebra_coords),
            tuple(2 * t + copy for t in algebra_coords),
        )

    out = []
    for k in range(3):
        out.append(slot("%s_%d" % (_DIAG_PREFIX[family], k + 1), "diagonal", (k,)))
    for gen in range(3):
        base = _GEN_BASE[gen]
        out.append(slot(_LEPTONS[family][gen], "lepton", (base, base + 1)))
        out.append(slot(_QUARKS[family][gen], "quark", range(base + 2, base + 8)))
    return out


def fermion_table(family: str) -> dict:
    """JSON-ready slot table for one family."""
    slots = fermion_assign(family)
    return {
        "family": family,
        "algebra_dim": 27,
        "module_rank": 2,
        "carrier_dim": 54,
        "slots": [
            {
                "label": s.label,
                "kind": s.kind,
                "algebra_coords": list(s.algebra_coords),
                "module_coords": list(s.module_coords),
            }
            for s in slots
        ],
    }


# ---------------------------------------------------------------------------
# quaternionic rank-two sector

_J42 = None


def j42_sector() -> AlgebraSC:
    """Hermitian quaternionic 2x2 algebra (dim 6, cached).

    Basis: two diagonal reals, then the off-diagonal quaternion on
    (1, i, j, ij), i.e. coordinates (xi1, xi2, re z1, im z1, re z2,
    im z2) for the off-diagonal entry z1 + z2 j.
    """
    global _J42
    if _J42 is None:
        _J42 = make_hermitian("H", 2)
    return _J42


def u1su2_act(c: QI, U, x: Elem) -> Elem:
    """Automorphism of the rank-two sector from (c, U) in U(1)xSU(2).

    The complex hermitian block [[xi1, z1], [conj z1, xi2]] is
    conjugated by U; the remaining j-part z2 is rotated by the unit
    complex number c.  Both factors are exact.
    """
    alg = j42_sector()
    if x.algebra is not alg:
        raise ValueError("element of the rank-two sector required")
    if c.norm2() != 1:
        raise ValueError("U(1) parameter must lie on the unit circle exactly")
    if not su2_check(U):
        raise ValueError("exact SU(2) matrix required")
    xi1, xi2, a, b, p, q = x.coords
    z1 = QI(a, b)
    z2 = QI(p, q)
    B = ((QI(xi1), z1), (z1.conj(), QI(xi2)))
    (u00, u01), (u10, u11) = U
    Ud = ((u00.conj(), u10.conj()), (u01.conj(), u11.conj()))
    rows = []
    for i in range(2):
        row = []
        for j in range(2):
            acc = QI(0, 0)
            for r in range(2):
                for s in range(2):
                    acc = acc + U[i][r] * B[r][s] * Ud[s][j]
            row.append(acc)
        rows.append(row)
    if rows[0][0].im != 0 or rows[1][1].im != 0:
        raise AssertionError("conjugated block lost its real diagonal")
    w = c * z2
    return alg.from_coords(
        [rows[0][0].re, rows[1][1].re, rows[0][1].re, rows[0][1].im, w.re, w.im]
    )


def u1su2_matrix(c: QI, U) -> IMat:
    """Exact 6x6 coordinate matrix of the sector automorphism."""
    alg = j42_sector()
    cols = [u1su2_act(c, U, alg.basis_elem(t)).coords for t in range(6)]
    return imat_from_fractions([[cols[t][r] for t in range(6)] for r in range(6)])


def u1su2_check(c: QI, U) -> CheckResult:
    """Automorphism plus block-split preservation for one (c, U)."""
    T = u1su2_matrix(c, U)
    autm = jordan_automorphism_check(j42_sector(), T, name="u1su2-automorphism")
    if not autm.ok:
        return autm
    # the complex block (coords 0..3) and the j-part (coords 4, 5) must
    # not mix: that is the structure the action is required to preserve
    for r in range(6):
        for s in range(6):
            if (r < 4) != (s < 4) and T.fraction(r, s) != 0:
                return failed("u1su2-split", witness={"entry": (r, s)})
    return passed("u1su2-automorphism", dim=6, split="preserved")


# ---------------------------------------------------------------------------
# three-block direct sum

_JTENT = None


def jtent_direct_sum() -> AlgebraSC:
    """Orthogonal sum of the rank 1, 2, 3 blocks: dim 1 + 6 + 27 = 34.

    The blocks are the reals, the hermitian quaternionic 2x2 algebra
    and the hermitian octonionic 3x3 algebra; block capacities 1, 2, 3
    add up to capacity 6.
    """
    global _JTENT
    if _JTENT is None:
        _JTENT = direct_sum(
            [make_hermitian("C", 1), j42_sector(), albert_algebra()],
            name="R+H2(H)+H3(O)",
        )
    return _JTENT


def jtent_blocks() -> tuple[tuple[int, int], ...]:
    """Half-open coordinate ranges of the three blocks."""
    return ((0, 1), (1, 7), (7, 34))
