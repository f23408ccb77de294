"""Derivation Lie algebras of structure-constant algebras.

A derivation D of A satisfies D(xy) = (Dx)y + x(Dy); on a basis this is
a sparse homogeneous linear system over the matrix entries of D, solved
exactly.  DerBasis wraps a canonical (RREF) basis of any subspace of
derivations with bracket structure constants, exact closure and Leibniz
verification, stabilizer construction and Killing-form diagnostics.

The Leibniz equation for the pair (e_i, e_j), component l:

    sum_k c_ij^k D_lk - sum_m c_mj^l D_mi - sum_m c_im^l D_mj = 0

with unknowns D_lk indexed l*n + k.  For commutative algebras the pairs
i <= j suffice.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .checks import CheckResult, failed, passed
from .fastmat import IMat, imat_from_fractions
from .jordan import AlgebraSC, Elem, random_elem
from .linalg import (
    MatrixQ,
    SpanQ,
    det_bareiss,
    is_negative_definite,
    nullspace,
)
from .rationals import format_rat

__all__ = [
    "DerBasis",
    "LieDiagnostics",
    "derivation_algebra",
    "inner_derivations",
    "stabilizer",
    "lie_diagnostics",
    "exp_derivation_float",
    "automorphism_spot_check",
]


def leibniz_rows(a: AlgebraSC) -> list[dict[int, Fraction]]:
    """Sparse rows of the derivation system of a (n^2 unknowns)."""
    n = a.dim
    sc = a.sc_num
    rows = []
    for i in range(n):
        j_start = i if a.commutative else 0
        for j in range(j_start, n):
            prod_col = sc[i, j]   # c_ij^k, scaled ints
            left = sc[:, j, :]    # c_mj^l over (m, l)
            right = sc[i, :, :]   # c_im^l over (m, l)
            for l in range(n):
                row: dict[int, int] = {}
                for k in range(n):
                    v = int(prod_col[k])
                    if v:
                        row[l * n + k] = row.get(l * n + k, 0) + v
                for m in range(n):
                    v = int(left[m, l])
                    if v:
                        idx = m * n + i
                        row[idx] = row.get(idx, 0) - v
                for m in range(n):
                    v = int(right[m, l])
                    if v:
                        idx = m * n + j
                        row[idx] = row.get(idx, 0) - v
                frow = {c: Fraction(v) for c, v in row.items() if v}
                if frow:
                    rows.append(frow)
    return rows


class DerBasis:
    """Canonical exact basis of a space of derivations of an algebra.

    The basis is stored in RREF form over flattened matrices, so exact
    coordinates of any member are read off at the pivot columns.
    """

    def __init__(self, algebra: AlgebraSC, vectors: Sequence[Sequence], name: str = "Der"):
        self.algebra = algebra
        self.name = name
        n = algebra.dim
        self._span = SpanQ(vectors, n * n)
        self.mats = [
            imat_from_fractions(_unflatten_dict(row, n))
            for row in self._span.pivot_rows
        ]
        self._bracket_sc = None

    @property
    def dim(self) -> int:
        return len(self.mats)

    def element(self, coeffs: Sequence) -> IMat:
        """Exact linear combination of the basis matrices."""
        n = self.algebra.dim
        out = IMat.zeros((n, n))
        for c, m in zip(coeffs, self.mats):
            c = Fraction(c)
            if c:
                out = out + m.scale(c)
        return out

    def coordinates(self, mat: IMat):
        """Exact coordinates of mat in this basis, or None if outside."""
        flat = _flatten_imat(mat)
        return self._span.coordinates(flat)

    def contains(self, mat: IMat) -> bool:
        return self.coordinates(mat) is not None

    def apply(self, index: int, x: Elem) -> Elem:
        """Image of x under the index-th basis derivation."""
        return apply_mat(self.mats[index], x)

    def bracket_sc(self):
        """Structure constants of the commutator in this basis (checks closure)."""
        if self._bracket_sc is None:
            m = self.dim
            sc = [[None] * m for _ in range(m)]
            zero = tuple(Fraction(0) for _ in range(m))
            for a in range(m):
                sc[a][a] = zero
            for a in range(m):
                for b in range(a + 1, m):
                    br = self.mats[a].commutator(self.mats[b])
                    coords = self.coordinates(br)
                    if coords is None:
                        raise ValueError(
                            "bracket of basis elements %d, %d escapes the span" % (a, b)
                        )
                    sc[a][b] = coords
                    sc[b][a] = tuple(-c for c in coords)
            self._bracket_sc = sc
        return self._bracket_sc

    def verify_closure(self) -> CheckResult:
        name = "bracket-closure(%s)" % self.name
        try:
            self.bracket_sc()
        except ValueError as e:
            return failed(name, witness=str(e))
        return passed(name, dim=self.dim)

    def verify_leibniz(self, trials: int = 10, seed: int = 0) -> CheckResult:
        """Exact operator-form Leibniz check: [D, L_x] = L_{Dx} on the basis.

        The x-column of this operator identity is D(x y) = (Dx) y + x (Dy)
        for basis y, so it covers all basis pairs; random exact elements
        are re-checked element-wise on top.
        """
        name = "leibniz(%s)" % self.name
        alg = self.algebra
        L = alg.L_basis()
        for t, d in enumerate(self.mats):
            for i in range(alg.dim):
                dx = apply_mat(d, alg.basis_elem(i))
                if d.commutator(L[i]) != alg.L_op(dx):
                    return failed(name, witness={"derivation": t, "basis": i})
        rng = random.Random(seed)
        for t in range(trials):
            if not self.mats:
                break
            d = self.element(
                [Fraction(rng.randint(-3, 3), rng.randint(1, 2)) for _ in range(self.dim)]
            )
            x = random_elem(alg, rng)
            y = random_elem(alg, rng)
            lhs = apply_mat(d, x * y)
            rhs = apply_mat(d, x) * y + x * apply_mat(d, y)
            if lhs != rhs:
                return failed(name, witness={"random-trial": t})
        return passed(name, dim=self.dim, trials=trials)

    def to_json(self) -> dict:
        return {
            "algebra": self.algebra.name,
            "name": self.name,
            "dim": self.dim,
            "basis": [
                [[format_rat(m.fraction(i, j)) for j in range(self.algebra.dim)]
                 for i in range(self.algebra.dim)]
                for m in self.mats
            ],
        }

    def __repr__(self):
        return "DerBasis(%s, dim=%d)" % (self.name, self.dim)


def _unflatten_dict(row: dict[int, Fraction], n: int):
    out = [[Fraction(0)] * n for _ in range(n)]
    for idx, v in row.items():
        out[idx // n][idx % n] = v
    return out


def apply_mat(m: IMat, x: Elem) -> Elem:
    """Apply an exact matrix to an element's coordinates."""
    a = m.a
    v = x.num
    if a.dtype == object or v.dtype == object:
        num = a.astype(object) @ v.astype(object)
    else:
        bound = int(np.abs(a).max(initial=0)) * int(np.abs(v).max(initial=0)) * a.shape[1]
        if bound >= 2**62:
            num = a.astype(object) @ v.astype(object)
        else:
            num = a @ v
    return Elem(x.algebra, num, m.den * x.den)


def derivation_algebra(a: AlgebraSC, method: str = "auto") -> DerBasis:
    """Exact basis of Der(a) from the Leibniz nullspace."""
    rows = leibniz_rows(a)
    kernel = nullspace(rows, a.dim * a.dim, method=method)
    return DerBasis(a, kernel, name="Der(%s)" % a.name)


def inner_derivations(j: AlgebraSC) -> DerBasis:
    """Span of the operators [L_x, L_y] over basis pairs of a Jordan algebra."""
    if not j.commutative:
        raise ValueError("inner derivations in this sense require a Jordan algebra")
    L = j.L_basis()
    vectors = []
    for x in range(j.dim):
        for y in range(x + 1, j.dim):
            br = L[x].commutator(L[y])
            vectors.append(_flatten_imat(br))
    return DerBasis(j, vectors, name="Inner(%s)" % j.name)


def _flatten_imat(m: IMat) -> list[Fraction]:
    fr = m.to_fractions()
    return [v for row in fr for v in row]


def stabilizer(d: DerBasis, fixed: Sequence[Elem] = (),
               preserved: Sequence[Sequence[Sequence]] = (),
               name: str | None = None) -> DerBasis:
    """Subalgebra of d annihilating each fixed element and preserving each subspace.

    Subspace preservation D(W) subseteq W is encoded through the exact
    quotient map: the RREF reduction of D(w) modulo W must vanish.
    """
    n = d.algebra.dim
    rows: list[dict[int, Fraction]] = []
    for v in fixed:
        images = [d.apply(a, v).coords for a in range(d.dim)]
        for r in range(n):
            row = {a: images[a][r] for a in range(d.dim) if images[a][r]}
            if row:
                rows.append(row)
    for w_basis in preserved:
        spanw = SpanQ(w_basis, n)
        for w in w_basis:
            we = d.algebra.from_coords(w)
            residues = [spanw.reduce(d.apply(a, we).coords) for a in range(d.dim)]
            cols = sorted({c for res in residues for c in res})
            for c in cols:
                row = {a: residues[a][c] for a in range(d.dim) if residues[a].get(c)}
                if row:
                    rows.append(row)
    coeff_kernel = nullspace(rows, d.dim, method="exact")
    vectors = []
    for coeffs in coeff_kernel:
        mat = d.element(coeffs)
        vectors.append(_flatten_imat(mat))
    return DerBasis(d.algebra, vectors, name=name or ("stab(%s)" % d.name))


@dataclass
class LieDiagnostics:
    dimension: int
    killing: MatrixQ
    semisimple: bool
    compact: bool
    derived_dim: int
    center_dim: int

    def to_json(self) -> dict:
        return {
            "dimension": self.dimension,
            "semisimple": self.semisimple,
            "compact": self.compact,
            "derived_dim": self.derived_dim,
            "center_dim": self.center_dim,
            "killing": self.killing.to_json(),
        }


def lie_diagnostics(d: DerBasis) -> LieDiagnostics:
    """Killing form, semisimplicity, compactness, derived and center dims; all exact."""
    sc = d.bracket_sc()
    m = d.dim
    if m == 0:
        k = MatrixQ.from_rows([])
        return LieDiagnostics(0, k, True, True, 0, 0)
    ad = []
    for a in range(m):
        rows = [[sc[a][b][c] for b in range(m)] for c in range(m)]
        ad.append(imat_from_fractions(rows))
    killing_rows = [[Fraction(0)] * m for _ in range(m)]
    for a in range(m):
        for b in range(a, m):
            t = (ad[a] @ ad[b]).trace()
            killing_rows[a][b] = t
            killing_rows[b][a] = t
    killing = MatrixQ.from_rows(killing_rows)
    semisimple = det_bareiss(killing) != 0
    compact = semisimple and is_negative_definite(killing)
    derived_dim = SpanQ(
        [sc[a][b] for a in range(m) for b in range(a + 1, m)], m
    ).dimension
    # center: z with sum_b sc[a][b][c] z_b = 0 for all a, c
    crows = []
    for a in range(m):
        for c in range(m):
            row = {b: sc[a][b][c] for b in range(m) if sc[a][b][c]}
            if row:
                crows.append(row)
    center_dim = len(nullspace(crows, m, method="exact"))
    return LieDiagnostics(m, killing, semisimple, compact, derived_dim, center_dim)


# ---------------------------------------------------------------------------
# floating spot checks at group level


def exp_derivation_float(d: IMat, t: float = 1.0) -> np.ndarray:
    """Floating matrix exponential exp(t d) by scaling and squaring."""
    a = d.a.astype(float) / d.den * t
    norm = np.abs(a).sum(axis=1).max()
    s = max(0, int(np.ceil(np.log2(norm))) + 1) if norm > 0 else 0
    b = a / (2.0**s)
    n = a.shape[0]
    term = np.eye(n)
    out = np.eye(n)
    for k in range(1, 24):
        term = term @ b / k
        out = out + term
    for _ in range(s):
        out = out @ out
    return out


def automorphism_spot_check(a: AlgebraSC, phi: np.ndarray, trials: int = 20,
                            tol: float = 1e-8, seed: int = 0) -> CheckResult:
    """Floating check that phi(x y) = phi(x) phi(y) on random vectors."""
    name = "automorphism-float(%s)" % a.name
    scf = a.sc_float()
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        x = rng.uniform(-1, 1, a.dim)
        y = rng.uniform(-1, 1, a.dim)
        lhs = phi @ np.einsum("i,j,ijk->k", x, y, scf)
        rhs = np.einsum("i,j,ijk->k", phi @ x, phi @ y, scf)
        worst = max(worst, float(np.abs(lhs - rhs).max()))
    if worst > tol:
        return failed(name, residual=worst)
    return passed(name, residual=worst, trials=trials)
