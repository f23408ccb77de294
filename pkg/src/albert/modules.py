"""Jordan modules as families of exact left-action operators.

A module over a Jordan algebra J is given by one carrier-space matrix
L_i per J-basis element (extended linearly); the bimodule conditions in
operator form are

    [L_x, L_{x^2}] = 0
    L_{x^3} - 3 L_{x^2} L_x + 2 L_x^3 = 0
    [[L_x, L_y], L_z] + L_{[x,z,y]} = 0      ([x,z,y] the associator)

with L_1 = I for unital modules.  The third is multilinear and checked
exactly on all basis triples; the first two are checked on random exact
elements always, and through their full linearizations on basis triples
when dim J <= 12.  The split-null extension J + M (with M M = 0) turns
the whole axiom set into a single Jordan-identity check, which is used
as an independent gate.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .checks import CheckResult, failed, passed
from .fastmat import IMat
from .jordan import AlgebraSC, Elem, random_elem, verify_jordan
from .jordan import _pairs_L as _jordan_pairs_L
from .linalg import MatrixQ, nullspace
from .rationals import format_rat, parse_rat

__all__ = [
    "ModuleRep",
    "PierceSplit",
    "regular_module",
    "free_module",
    "check_module_axioms",
    "pierce_decompose",
    "module_commutant",
    "split_null_extension",
    "verify_split_null",
]

_INT64_SAFE = 2**62


def _lcm(a: int, b: int) -> int:
    from math import gcd
    return a * b // gcd(a, b)


class ModuleRep:
    """Left action of an AlgebraSC on a finite-dimensional carrier."""

    def __init__(self, algebra: AlgebraSC, mats: Sequence[IMat], name: str = "M",
                 free_rank: int | None = None, base: "ModuleRep" | None = None):
        if len(mats) != algebra.dim:
            raise ValueError("need one action matrix per basis element")
        self.algebra = algebra
        self.mats = list(mats)
        self.name = name
        self.carrier_dim = mats[0].shape[0] if mats else 0
        for m in self.mats:
            if m.shape != (self.carrier_dim, self.carrier_dim):
                raise ValueError("action matrices must be square of equal size")
        self.free_rank = free_rank
        self.base = base
        # stacked action tensor over a common denominator for fast L_of
        den = 1
        for m in self.mats:
            den = _lcm(den, m.den)
        arrs = []
        big = 0
        for m in self.mats:
            f = den // m.den
            a = m.a.astype(object) * f
            arrs.append(a)
            cur = max((abs(int(x)) for x in a.flat), default=0)
            big = max(big, cur)
        stack = np.array([a.tolist() for a in arrs],
                         dtype=object if big >= _INT64_SAFE else np.int64)
        self._lt = stack  # (n, m, m)
        self._lt_den = den

    def L_of(self, x: Elem) -> IMat:
        """Exact action operator of an algebra element."""
        if x.algebra is not self.algebra:
            raise ValueError("element of a different algebra")
        lt = self._lt
        v = x.num
        if lt.dtype == object or v.dtype == object:
            num = np.tensordot(v.astype(object), lt.astype(object), axes=(0, 0))
        else:
            bound = int(np.abs(v).max(initial=0)) * int(np.abs(lt).max(initial=0)) * v.shape[0]
            if bound >= _INT64_SAFE:
                num = np.tensordot(v.astype(object), lt.astype(object), axes=(0, 0))
            else:
                num = np.tensordot(v, lt, axes=(0, 0))
        return IMat(num, x.den * self._lt_den)

    def act(self, x: Elem, phi: Sequence) -> tuple[Fraction, ...]:
        """x . phi with phi a carrier coordinate vector."""
        l = self.L_of(x)
        fr = l.to_fractions()
        v = [Fraction(c) for c in phi]
        return tuple(
            sum(fr[r][s] * v[s] for s in range(self.carrier_dim))
            for r in range(self.carrier_dim)
        )

    def is_unital(self) -> bool:
        if not self.algebra.has_unit():
            return False
        return self.L_of(self.algebra.unit_elem()) == IMat.eye(self.carrier_dim)

    def to_json(self) -> dict:
        return {
            "algebra": self.algebra.name,
            "name": self.name,
            "carrier_dim": self.carrier_dim,
            "mats": [
                [[format_rat(m.fraction(i, j)) for j in range(self.carrier_dim)]
                 for i in range(self.carrier_dim)]
                for m in self.mats
            ],
        }

    @classmethod
    def from_json(cls, algebra: AlgebraSC, data: dict) -> "ModuleRep":
        from .fastmat import imat_from_fractions
        mats = [
            imat_from_fractions([[parse_rat(s) for s in row] for row in m])
            for m in data["mats"]
        ]
        return cls(algebra, mats, name=data.get("name", "M"))

    def __repr__(self):
        return "ModuleRep(%s over %s, carrier=%d)" % (
            self.name, self.algebra.name, self.carrier_dim
        )


def regular_module(j: AlgebraSC) -> ModuleRep:
    """J acting on itself by left multiplication."""
    return ModuleRep(j, j.L_basis(), name="reg(%s)" % j.name)


def free_module(j: AlgebraSC, k: int) -> ModuleRep:
    """J tensor R^k: the regular action repeated blockwise k times."""
    if k < 1:
        raise ValueError("rank must be positive")
    if not j.has_unit():
        raise ValueError("free modules require a unital algebra")
    base = regular_module(j)
    if k == 1:
        return base
    eye = IMat.eye(k)
    mats = [m.kron(eye) for m in base.mats]
    return ModuleRep(j, mats, name="%s@R^%d" % (j.name, k), free_rank=k, base=base)


# ---------------------------------------------------------------------------
# axiom verification


def check_module_axioms(r: ModuleRep, trials: int = 20, seed: int = 0) -> CheckResult:
    """Exact module-axiom verification; see the module docstring for the split."""
    name = "module-axioms(%s)" % r.name
    alg = r.algebra
    n = alg.dim
    mats = r.mats
    if alg.has_unit() and not r.is_unital():
        return failed(name, witness={"axiom": "L1"})
    # associator operators on J: A_ik = L_{e_i e_k} - L_i L_k (column j = [e_i, e_k, e_j])
    jl = alg.L_basis()
    jpairs = _jordan_pairs_L(alg)

    def jpair(i, k):
        if alg.commutative and i > k:
            i, k = k, i
        return jpairs[(i, k)]

    assoc_ops = [[jpair(i, k) - (jl[i] @ jl[k]) for k in range(n)] for i in range(n)]
    # (intder) on all basis triples, using antisymmetry in the outer pair
    for i in range(n):
        for j in range(i + 1, n):
            c_ij = mats[i].commutator(mats[j])
            for k in range(n):
                a = assoc_ops[i][k]
                col = a.a[:, j]
                assoc_elem = Elem(alg, col.copy(), a.den)
                t = c_ij.commutator(mats[k]) + r.L_of(assoc_elem)
                if not t.is_zero():
                    return failed(name, witness={"axiom": "intder", "triple": (i, j, k)})
    if n <= 12:
        w = _linearized_module_witness(r)
        if w is not None:
            return failed(name, witness=w)
    rng = random.Random(seed)
    for t in range(trials):
        x = random_elem(alg, rng, span=4, den=3)
        lx = r.L_of(x)
        lx2 = r.L_of(x * x)
        if not lx.commutator(lx2).is_zero():
            return failed(name, witness={"axiom": "Lxx2", "trial": t})
        lx3 = r.L_of(x * (x * x))
        rem = lx3 - (lx2 @ lx).scale(3) + (lx @ lx @ lx).scale(2)
        if not rem.is_zero():
            return failed(name, witness={"axiom": "Lx3", "trial": t})
    return passed(name, carrier=r.carrier_dim, trials=trials,
                  linearized=n <= 12)


def _linearized_module_witness(r: ModuleRep):
    """Full linearizations of the two non-multilinear axioms on basis triples."""
    alg = r.algebra
    n = alg.dim
    mats = r.mats
    pair_op = {}
    triple_op = {}
    for b in range(n):
        for c in range(b, n):
            pair_op[(b, c)] = r.L_of(alg.basis_elem(b) * alg.basis_elem(c))

    def pop(b, c):
        return pair_op[(b, c) if b <= c else (c, b)]

    def top(a, b, c):
        key = (a, b, c)
        if key not in triple_op:
            e = alg.basis_elem(a) * (alg.basis_elem(b) * alg.basis_elem(c))
            triple_op[key] = r.L_of(e)
        return triple_op[key]

    for a in range(n):
        for b in range(a, n):
            for c in range(b, n):
                t1 = mats[a].commutator(pop(b, c)) \
                    + mats[b].commutator(pop(a, c)) \
                    + mats[c].commutator(pop(a, b))
                if not t1.is_zero():
                    return {"axiom": "Lxx2-linearized", "triple": (a, b, c)}
                acc = None
                for (p, q, s) in itertools.permutations((a, b, c)):
                    term = top(p, q, s) - (pop(p, q) @ mats[s]).scale(3) \
                        + (mats[p] @ mats[q] @ mats[s]).scale(2)
                    acc = term if acc is None else acc + term
                if not acc.is_zero():
                    return {"axiom": "Lx3-linearized", "triple": (a, b, c)}
    return None


# ---------------------------------------------------------------------------
# Pierce decomposition


@dataclass
class PierceSplit:
    idempotent: Elem
    bases: dict  # Fraction eigenvalue -> list of coordinate tuples

    @property
    def dims(self) -> tuple[int, int, int]:
        return (
            len(self.bases[Fraction(0)]),
            len(self.bases[Fraction(1, 2)]),
            len(self.bases[Fraction(1)]),
        )

    def to_json(self) -> dict:
        return {
            "idempotent": self.idempotent.to_json(),
            "dims": list(self.dims),
            "bases": {
                format_rat(ev): [[format_rat(c) for c in v] for v in vs]
                for ev, vs in self.bases.items()
            },
        }


def pierce_decompose(r: ModuleRep, p: Elem) -> PierceSplit:
    """Exact eigenspace split of L_p for an idempotent p (eigenvalues 0, 1/2, 1)."""
    if p * p != p:
        raise ValueError("p is not idempotent")
    lp = r.L_of(p)
    m = r.carrier_dim
    eye = IMat.eye(m)
    ident = lp @ (lp - eye.scale(Fraction(1, 2))) @ (lp - eye)
    if not ident.is_zero():
        raise ValueError("operator identity L_p(L_p - 1/2)(L_p - 1) = 0 fails; not a module")
    fr = lp.to_fractions()
    bases = {}
    for ev in (Fraction(0), Fraction(1, 2), Fraction(1)):
        rows = [
            [fr[i][j] - (ev if i == j else 0) for j in range(m)]
            for i in range(m)
        ]
        basis = nullspace(MatrixQ.from_rows(rows))
        for v in basis:
            img = _mat_vec_frac(fr, v)
            if tuple(img) != tuple(ev * c for c in v):
                raise AssertionError("eigenvector certificate failed")
        bases[ev] = list(basis)
    if sum(len(b) for b in bases.values()) != m:
        raise AssertionError("Pierce eigenspaces do not fill the carrier")
    return PierceSplit(idempotent=p, bases=bases)


def _mat_vec_frac(fr, v):
    m = len(fr)
    return [sum(fr[i][j] * v[j] for j in range(m)) for i in range(m)]


# ---------------------------------------------------------------------------
# commutant


def module_commutant(r: ModuleRep, method: str = "auto") -> int:
    """Exact dimension of {T : [T, L_x] = 0 for all x}.

    Free modules decouple blockwise: the commutant of {A kron I_k} is
    (commutant of {A}) kron M_k, so the dimension is the base commutant
    dimension times k^2; method='direct' forces the full nullspace.
    """
    if method != "direct" and r.free_rank is not None and r.base is not None:
        return module_commutant(r.base, method=method) * r.free_rank**2
    m = r.carrier_dim
    rows: list[dict[int, Fraction]] = []
    for lmat in r.mats:
        a = lmat.a
        for rr in range(m):
            for cc in range(m):
                row: dict[int, int] = {}
                for s in range(m):
                    v = int(a[s, cc])
                    if v:
                        row[rr * m + s] = row.get(rr * m + s, 0) + v
                for s in range(m):
                    v = int(a[rr, s])
                    if v:
                        row[s * m + cc] = row.get(s * m + cc, 0) - v
                frow = {c: Fraction(v) for c, v in row.items() if v}
                if frow:
                    rows.append(frow)
    kernel = nullspace(rows, m * m, method="auto" if method == "direct" else method)
    return len(kernel)


# ---------------------------------------------------------------------------
# split-null extension


def split_null_extension(r: ModuleRep, name: str | None = None) -> AlgebraSC:
    """The Jordan algebra J + M with (x + F)(x' + F') = xx' + (xF' + F x').

    M M = 0; r is a Jordan module exactly when this algebra satisfies the
    Jordan identity, which makes verify_jordan an independent axiom gate.
    """
    alg = r.algebra
    n = alg.dim
    m = r.carrier_dim
    total = n + m
    den_j = alg.sc_den
    den_m = r._lt_den
    den = _lcm(den_j, den_m)
    sc = np.zeros((total, total, total), dtype=object)
    sc[:n, :n, :n] = alg.sc_num.astype(object) * (den // den_j)
    lt = r._lt.astype(object) * (den // den_m)
    # e_i . phi_a has carrier coordinates column a of L_i
    for i in range(n):
        for a in range(m):
            for b in range(m):
                v = lt[i, b, a]
                if v:
                    sc[i, n + a, n + b] = v
                    sc[n + a, i, n + b] = v
    big = max((abs(int(x)) for x in sc.flat), default=0)
    if big < _INT64_SAFE:
        sc = sc.astype(np.int64)
    ext = AlgebraSC((sc, den), name=name or ("%s+%s" % (alg.name, r.name)),
                    commutative=alg.commutative)
    if alg.has_unit() and r.is_unital():
        unit = list(alg.unit_elem().coords) + [Fraction(0)] * m
        ext._unit = ext.from_coords(unit)
    return ext


def verify_split_null(r: ModuleRep, trials: int = 20, seed: int = 0) -> CheckResult:
    """Module gate through the split-null extension's Jordan identity."""
    ext = split_null_extension(r)
    res = verify_jordan(ext, trials=trials, seed=seed)
    out = CheckResult(
        name="split-null(%s)" % r.name,
        ok=res.ok,
        witness=res.witness,
        residual=res.residual,
        details=dict(res.details, extension_dim=ext.dim),
    )
    return out
