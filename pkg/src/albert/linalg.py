"""Exact linear algebra over Q (and generic exact fields such as Q(i)).

Everything here returns certified exact answers.  The workhorse is a
sparse reduced-row-echelon form over Fraction with a deterministic
pivot rule.  For large integer systems there is a modular fast path:
eliminate mod a fixed 31-bit prime with numpy, reconstruct the kernel
rationally, then *verify every kernel vector exactly* against the
original rows.  Since a nonzero minor mod p stays nonzero over Q, the
modular rank bounds the exact rank from below; exhibiting that many
exactly-verified independent kernel vectors therefore pins the kernel
dimension with no trust left in the prime.  Any reconstruction or
verification failure falls back to the pure exact path.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

import numpy as np

from .rationals import format_rat, parse_rat, rational_reconstruction

__all__ = [
    "MatrixQ",
    "nullspace",
    "rank",
    "solve",
    "rref_sparse",
    "det_bareiss",
    "leading_principal_minors",
    "is_positive_definite",
    "is_negative_definite",
    "span_dimension",
    "span_contains",
    "spans_equal",
]

SPARSE_DENSITY_THRESHOLD = 0.25
HYBRID_CELL_THRESHOLD = 120_000
MOD_PRIME = 2_147_483_647  # 2**31 - 1, Mersenne prime; products fit int64


# ---------------------------------------------------------------------------
# matrix container


class MatrixQ:
    """Exact rational matrix with dense or sparse backing storage.

    Storage is chosen at construction: below the density threshold the
    entries live in a dict keyed by (row, col); otherwise in row tuples.
    Both backends expose identical behaviour.
    """

    __slots__ = ("nrows", "ncols", "_rows", "_entries")

    def __init__(self, nrows, ncols, rows=None, entries=None):
        self.nrows = int(nrows)
        self.ncols = int(ncols)
        self._rows = rows
        self._entries = entries

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], threshold: float = SPARSE_DENSITY_THRESHOLD):
        rows = [tuple(Fraction(x) for x in r) for r in rows]
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        nnz = sum(1 for r in rows for x in r if x)
        if nrows * ncols and nnz / (nrows * ncols) < threshold:
            entries = {
                (i, j): x for i, r in enumerate(rows) for j, x in enumerate(r) if x
            }
            return cls(nrows, ncols, entries=entries)
        return cls(nrows, ncols, rows=tuple(rows))

    @classmethod
    def from_entries(cls, nrows: int, ncols: int, entries: dict,
                     threshold: float = SPARSE_DENSITY_THRESHOLD):
        clean = {}
        for (i, j), x in entries.items():
            if not (0 <= i < nrows and 0 <= j < ncols):
                raise IndexError("entry out of bounds")
            x = Fraction(x)
            if x:
                clean[(i, j)] = x
        if nrows * ncols and len(clean) / (nrows * ncols) >= threshold:
            rows = [[Fraction(0)] * ncols for _ in range(nrows)]
            for (i, j), x in clean.items():
                rows[i][j] = x
            return cls(nrows, ncols, rows=tuple(tuple(r) for r in rows))
        return cls(nrows, ncols, entries=clean)

    @classmethod
    def identity(cls, n: int):
        return cls.from_entries(n, n, {(i, i): Fraction(1) for i in range(n)})

    @property
    def is_sparse(self) -> bool:
        return self._entries is not None

    @property
    def density(self) -> float:
        if self.nrows * self.ncols == 0:
            return 0.0
        return self.nnz / (self.nrows * self.ncols)

    @property
    def nnz(self) -> int:
        if self._entries is not None:
            return len(self._entries)
        return sum(1 for r in self._rows for x in r if x)

    def __getitem__(self, key):
        i, j = key
        if self._entries is not None:
            return self._entries.get((i, j), Fraction(0))
        return self._rows[i][j]

    def sparse_rows(self) -> list[dict[int, Fraction]]:
        """Rows as {col: value} dicts (zero entries omitted)."""
        out = [dict() for _ in range(self.nrows)]
        if self._entries is not None:
            for (i, j), x in self._entries.items():
                out[i][j] = x
        else:
            for i, r in enumerate(self._rows):
                for j, x in enumerate(r):
                    if x:
                        out[i][j] = x
        return out

    def dense_rows(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * self.ncols for _ in range(self.nrows)]
        if self._entries is not None:
            for (i, j), x in self._entries.items():
                out[i][j] = x
        else:
            for i, r in enumerate(self._rows):
                out[i] = list(r)
        return out

    def transpose(self) -> "MatrixQ":
        return MatrixQ.from_entries(
            self.ncols,
            self.nrows,
            {(j, i): x for i, row in enumerate(self.sparse_rows()) for j, x in row.items()},
        )

    def mul_vec(self, v: Sequence[Fraction]) -> tuple[Fraction, ...]:
        if len(v) != self.ncols:
            raise ValueError("dimension mismatch")
        out = [Fraction(0)] * self.nrows
        for i, row in enumerate(self.sparse_rows()):
            out[i] = sum((x * v[j] for j, x in row.items()), Fraction(0))
        return tuple(out)

    def __eq__(self, other):
        if not isinstance(other, MatrixQ):
            return NotImplemented
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            return False
        return self.dense_rows() == other.dense_rows()

    def __repr__(self):
        return "MatrixQ(%d x %d, %s, nnz=%d)" % (
            self.nrows,
            self.ncols,
            "sparse" if self.is_sparse else "dense",
            self.nnz,
        )

    # -- JSON wire format: dense array of num/den strings ------------------
    def to_json(self) -> list[list[str]]:
        return [[format_rat(x) for x in row] for row in self.dense_rows()]

    @classmethod
    def from_json(cls, data: Sequence[Sequence[str]]) -> "MatrixQ":
        return cls.from_rows([[parse_rat(x) for x in row] for row in data])


def vector_to_json(v: Iterable[Fraction]) -> list[str]:
    return [format_rat(x) for x in v]


def vector_from_json(data: Iterable[str]) -> tuple[Fraction, ...]:
    return tuple(parse_rat(x) for x in data)


# ---------------------------------------------------------------------------
# sparse exact RREF (generic over any exact field: Fraction, QI, ...)


def rref_sparse(rows: Iterable[dict], ncols: int):
    """Reduced row echelon form of sparse rows over an exact field.

    Pivot rule: rows are consumed in the given order; the pivot of a
    reduced nonzero row is its smallest-index nonzero column.  Returns
    (pivot_rows, pivot_of_row) where each pivot row is normalized and
    fully back-substituted, sorted by pivot column.
    """
    pivots: dict[int, dict] = {}  # pivot col -> row dict
    for raw in rows:
        row = {j: x for j, x in raw.items() if x}
        # one pass is enough: pivot rows have zeros at all other pivot
        # columns, so eliminating never reintroduces a pivot column
        for c in sorted(c for c in row if c in pivots):
            f = row.get(c)
            if not f:
                continue
            for j, x in pivots[c].items():
                v = row.get(j, 0) - f * x
                if v:
                    row[j] = v
                elif j in row:
                    del row[j]
        if not row:
            continue
        pc = min(row)
        inv = row[pc]
        row = {j: x / inv for j, x in row.items()}
        # back-substitute into existing pivot rows
        for c, prow in pivots.items():
            f = prow.get(pc)
            if f:
                for j, x in row.items():
                    v = prow.get(j, 0) - f * x
                    if v:
                        prow[j] = v
                    elif j in prow:
                        del prow[j]
        pivots[pc] = row
    cols = sorted(pivots)
    return [pivots[c] for c in cols], cols


def _kernel_from_rref(pivot_rows: list[dict], pivot_cols: list[int], ncols: int, one, zero):
    """Standard kernel basis: one vector per free column, unit at that column."""
    pivot_set = set(pivot_cols)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for f in free:
        v = [zero] * ncols
        v[f] = one
        for prow, pc in zip(pivot_rows, pivot_cols):
            x = prow.get(f)
            if x:
                v[pc] = -x
        basis.append(tuple(v))
    return basis


def nullspace_exact(rows: Iterable[dict], ncols: int, one=Fraction(1), zero=Fraction(0)):
    pivot_rows, pivot_cols = rref_sparse(rows, ncols)
    return _kernel_from_rref(pivot_rows, pivot_cols, ncols, one, zero)


# ---------------------------------------------------------------------------
# modular fast path


def _integer_rows(rows: list[dict[int, Fraction]]):
    """Clear denominators and content row by row; drops zero rows, dedups."""
    seen = set()
    out = []
    for row in rows:
        if not row:
            continue
        den = 1
        for x in row.values():
            den = den * x.denominator // gcd(den, x.denominator)
        ints = {j: int(x * den) for j, x in row.items()}
        g = 0
        for v in ints.values():
            g = gcd(g, v)
        if g > 1:
            ints = {j: v // g for j, v in ints.items()}
        key = tuple(sorted(ints.items()))
        lead = ints[min(ints)]
        if lead < 0:
            key = tuple((j, -v) for j, v in key)
            ints = {j: -v for j, v in ints.items()}
        if key in seen:
            continue
        seen.add(key)
        out.append(ints)
    return out


def _modp_rref(int_rows: list[dict[int, int]], ncols: int, p: int = MOD_PRIME):
    """Dense RREF mod p with numpy; returns (matrix, pivot_cols, pivot_src_rows)."""
    m = np.zeros((len(int_rows), ncols), dtype=np.int64)
    for i, row in enumerate(int_rows):
        for j, v in row.items():
            m[i, j] = v % p
    src = np.arange(len(int_rows))
    r = 0
    pivot_cols = []
    for c in range(ncols):
        if r >= m.shape[0]:
            break
        col = m[r:, c]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            m[[r, k]] = m[[k, r]]
            src[[r, k]] = src[[k, r]]
        inv = pow(int(m[r, c]), p - 2, p)
        m[r] = (m[r] * inv) % p
        hit = np.nonzero(m[:, c])[0]
        hit = hit[hit != r]
        if hit.size:
            m[hit] = (m[hit] - m[hit, c][:, None] * m[r]) % p
        pivot_cols.append(c)
        r += 1
    return m[:r], pivot_cols, [int(s) for s in src[:r]]


def _verify_kernel_int(int_rows: list[dict[int, int]], basis: list[tuple[Fraction, ...]]):
    if not basis:
        return True
    n = len(basis[0])
    den = 1
    for v in basis:
        for x in v:
            den = den * x.denominator // gcd(den, x.denominator)
    cols = np.zeros((n, len(basis)), dtype=object)
    for k, v in enumerate(basis):
        for j, x in enumerate(v):
            cols[j, k] = int(x * den)
    for row in int_rows:
        acc = np.zeros(len(basis), dtype=object)
        for j, a in row.items():
            acc = acc + a * cols[j]
        if any(x != 0 for x in acc):
            return False
    return True


def nullspace_hybrid(rows: list[dict[int, Fraction]], ncols: int):
    """Modular kernel with exact certification; None when it cannot certify."""
    int_rows = _integer_rows(rows)
    if not int_rows:
        return [
            tuple(Fraction(1 if i == j else 0) for i in range(ncols))
            for j in range(ncols)
        ]
    m, pivot_cols, _ = _modp_rref(int_rows, ncols, MOD_PRIME)
    pivot_set = set(pivot_cols)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        ok = True
        for i, pc in enumerate(pivot_cols):
            a = int(m[i, f])
            if a:
                x = rational_reconstruction(a, MOD_PRIME)
                if x is None:
                    ok = False
                    break
                v[pc] = -x
        if not ok:
            return None
        basis.append(tuple(v))
    if not _verify_kernel_int(int_rows, basis):
        return None
    return basis


# ---------------------------------------------------------------------------
# public entry points


def nullspace(m, ncols: int | None = None, method: str = "auto"):
    """Certified exact kernel basis of a MatrixQ (or sparse rows).

    method: 'exact' forces the sparse Fraction RREF; 'hybrid' forces the
    modular path (with exact fallback); 'auto' switches on problem size.
    Every returned vector v satisfies m @ v = 0 exactly; the basis is
    deterministic for a fixed method.
    """
    if isinstance(m, MatrixQ):
        rows = m.sparse_rows()
        ncols = m.ncols
    else:
        rows = [dict(r) for r in m]
        if ncols is None:
            raise ValueError("ncols required when passing raw rows")
    if method not in ("auto", "exact", "hybrid"):
        raise ValueError("unknown method %r" % method)
    if method == "auto":
        method = "hybrid" if len(rows) * ncols > HYBRID_CELL_THRESHOLD else "exact"
    if method == "hybrid":
        basis = nullspace_hybrid(rows, ncols)
        if basis is not None:
            return basis
    return nullspace_exact(rows, ncols)


def rank(m, ncols: int | None = None, method: str = "auto") -> int:
    """Exact rank via rank + nullity = ncols."""
    if isinstance(m, MatrixQ):
        ncols = m.ncols
    return ncols - len(nullspace(m, ncols, method=method))


def solve(m: MatrixQ, b: Sequence[Fraction]):
    """One exact solution of m x = b, or None when inconsistent.

    Returns (particular, kernel_basis).
    """
    rows = m.sparse_rows()
    aug = []
    for i, row in enumerate(rows):
        r = dict(row)
        if b[i]:
            r[m.ncols] = Fraction(b[i])
        aug.append(r)
    pivot_rows, pivot_cols = rref_sparse(aug, m.ncols + 1)
    if m.ncols in pivot_cols:
        return None
    x = [Fraction(0)] * m.ncols
    for prow, pc in zip(pivot_rows, pivot_cols):
        x[pc] = prow.get(m.ncols, Fraction(0))
    kernel = _kernel_from_rref(pivot_rows, pivot_cols, m.ncols, Fraction(1), Fraction(0))
    return tuple(x), kernel


# ---------------------------------------------------------------------------
# determinants and definiteness (fraction-free Bareiss)


def _bareiss_minors(int_rows: list[list[int]]):
    """Leading principal minors d_1..d_n of a square integer matrix.

    No row exchanges: a zero pivot reports the corresponding minor as 0
    and stops (sufficient for definiteness tests).
    """
    a = [list(r) for r in int_rows]
    n = len(a)
    minors = []
    prev = 1
    for k in range(n):
        piv = a[k][k]
        minors.append(piv)
        if piv == 0:
            minors.extend([0] * (n - k - 1))
            break
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * piv - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = piv
    return minors


def _scaled_int_square(m: MatrixQ):
    den = 1
    rows = m.dense_rows()
    for r in rows:
        for x in r:
            den = den * x.denominator // gcd(den, x.denominator)
    return [[int(x * den) for x in r] for r in rows], den


def leading_principal_minors(m: MatrixQ) -> list[Fraction]:
    """Exact leading principal minors (all n of them)."""
    if m.nrows != m.ncols:
        raise ValueError("square matrix required")
    ints, den = _scaled_int_square(m)
    raw = _bareiss_minors(ints)
    return [Fraction(v, den ** (k + 1)) for k, v in enumerate(raw)]


def det_bareiss(m: MatrixQ) -> Fraction:
    """Exact determinant; handles zero pivots by expansion fallback."""
    if m.nrows != m.ncols:
        raise ValueError("square matrix required")
    n = m.nrows
    if n == 0:
        return Fraction(1)
    ints, den = _scaled_int_square(m)
    # Bareiss with row swaps
    a = [list(r) for r in ints]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        piv = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * piv - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = piv
    return Fraction(sign * a[n - 1][n - 1], den**n)


def is_positive_definite(m: MatrixQ) -> bool:
    """Sylvester criterion on exact minors; m must be symmetric."""
    if m.transpose() != m:
        raise ValueError("symmetric matrix required")
    return all(d > 0 for d in leading_principal_minors(m))


def is_negative_definite(m: MatrixQ) -> bool:
    if m.transpose() != m:
        raise ValueError("symmetric matrix required")
    minors = leading_principal_minors(m)
    return all((d > 0) if (k % 2) else (d < 0) for k, d in enumerate(minors))


# ---------------------------------------------------------------------------
# span utilities


def span_dimension(vectors: Iterable[Sequence], ncols: int) -> int:
    rows = [
        {j: Fraction(x) for j, x in enumerate(v) if x} for v in vectors
    ]
    pivot_rows, _ = rref_sparse(rows, ncols)
    return len(pivot_rows)


class SpanQ:
    """Row span in RREF form supporting exact membership tests."""

    def __init__(self, vectors: Iterable[Sequence], ncols: int):
        rows = [{j: Fraction(x) for j, x in enumerate(v) if x} for v in vectors]
        self.ncols = ncols
        self.pivot_rows, self.pivot_cols = rref_sparse(rows, ncols)

    @property
    def dimension(self) -> int:
        return len(self.pivot_rows)

    def reduce(self, v: Sequence) -> dict:
        """Residue of v modulo the span (empty dict means membership)."""
        row = {j: Fraction(x) for j, x in enumerate(v) if x}
        for prow, pc in zip(self.pivot_rows, self.pivot_cols):
            f = row.get(pc)
            if f:
                for j, x in prow.items():
                    val = row.get(j, Fraction(0)) - f * x
                    if val:
                        row[j] = val
                    elif j in row:
                        del row[j]
        return row

    def contains(self, v: Sequence) -> bool:
        return not self.reduce(v)

    def coordinates(self, v: Sequence):
        """Coefficients on the RREF basis, or None if v is outside the span."""
        row = self.reduce(v)
        if row:
            return None
        coeffs = []
        vv = {j: Fraction(x) for j, x in enumerate(v) if x}
        for pc in self.pivot_cols:
            coeffs.append(vv.get(pc, Fraction(0)))
        return tuple(coeffs)


def span_contains(vectors: Iterable[Sequence], ncols: int, v: Sequence) -> bool:
    return SpanQ(vectors, ncols).contains(v)


def spans_equal(a: Iterable[Sequence], b: Iterable[Sequence], ncols: int) -> bool:
    sa = SpanQ(a, ncols)
    sb = SpanQ(b, ncols)
    if sa.dimension != sb.dimension:
        return False
    return sa.pivot_rows == sb.pivot_rows and sa.pivot_cols == sb.pivot_cols
