"""Derivation-based differential forms over a Jordan algebra.

For a bracket-closed Lie subalgebra g of Der(J) the graded space
J (x) Lambda g* carries the coefficientwise Jordan product and the
Chevalley-Eilenberg differential, making it a differential graded Jordan
algebra: graded-commutative, satisfying the graded Jordan identity, with d
an antiderivation of square zero.  verify_dga checks all of that exactly on
random forms.

A degree-n form is stored as a map from strictly increasing n-tuples of
g-basis indices to algebra elements.  Multilinear antisymmetric evaluation
on arbitrary derivation tuples is kept alongside as the independent oracle:
the coefficientwise differential has to agree with a direct, term-by-term
evaluation of the Chevalley-Eilenberg formula (ce_evaluate).

The construction needs 1-forms to be plain linear maps g -> J, which holds
when the associator center of J is spanned by the unit; the context verifies
that instead of assuming it.  Degrees are capped (default 3): every identity
of interest lives in degrees <= 3, while the full exterior algebra is
already astronomically large for the big derivation algebras.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

from .checks import CheckResult, failed, passed
from .derivations import DerBasis, apply_mat
from .fastmat import IMat
from .jordan import AlgebraSC, Elem, center_basis, random_elem

__all__ = [
    "CalcContext",
    "DegreeError",
    "GForm",
    "UniversalFactorization",
    "ce_differential",
    "ce_evaluate",
    "gproduct",
    "random_form",
    "restrict_form",
    "universal_factorization",
    "verify_dga",
]


class DegreeError(ValueError):
    """An operation would leave the capped exterior degree range."""


def _sort_signed(indices):
    """(sign, sorted tuple) of an index tuple; sign 0 if an index repeats."""
    idx = list(indices)
    if len(set(idx)) != len(idx):
        return 0, None
    sign = 1
    # insertion sort counting swaps; tuples here have length <= 4
    for i in range(1, len(idx)):
        j = i
        while j > 0 and idx[j - 1] > idx[j]:
            idx[j - 1], idx[j] = idx[j], idx[j - 1]
            sign = -sign
            j -= 1
    return sign, tuple(idx)


def _merge_signed(k1, k2):
    """Sign and index set of theta^k1 ^ theta^k2 for increasing tuples."""
    inv = 0
    for i in k1:
        for j in k2:
            if i == j:
                return 0, None
            if i > j:
                inv += 1
    return (-1) ** inv, tuple(sorted(k1 + k2))


class CalcContext:
    """J (x) Lambda g* for a bracket-closed derivation basis g over J.

    Building the context verifies that the bracket table closes and that the
    associator center of J is one-dimensional (hence R.1, as J is unital).
    """

    def __init__(self, algebra: AlgebraSC, der: DerBasis, degree_cap: int = 3,
                 name: str | None = None):
        if not algebra.has_unit():
            raise ValueError("forms are defined over unital algebras")
        if der.algebra is not algebra:
            raise ValueError("derivation basis belongs to a different algebra")
        z = center_basis(algebra)
        if len(z) != 1:
            raise ValueError(
                "associator center has dimension %d; need center R.1" % len(z)
            )
        self.algebra = algebra
        self.der = der
        self.degree_cap = min(degree_cap, der.dim)
        self.name = name or "Omega(%s;%s)" % (algebra.name, der.name)
        sc = der.bracket_sc()
        # nonzero bracket expansion terms, both index orders
        self._bracket = {}
        for r in range(der.dim):
            for s in range(der.dim):
                terms = tuple((m, c) for m, c in enumerate(sc[r][s]) if c)
                if terms:
                    self._bracket[(r, s)] = terms

    @property
    def p(self) -> int:
        return self.der.dim

    def action_mat(self, k: int) -> IMat:
        return self.der.mats[k]

    def apply(self, k: int, x: Elem) -> Elem:
        return apply_mat(self.der.mats[k], x)

    def act(self, vector, x: Elem) -> Elem:
        """Action on x of the derivation with the given g-basis coordinates."""
        out = self.algebra.zero()
        for k, c in enumerate(vector):
            if c:
                out = out + self.apply(k, x) * Fraction(c)
        return out

    def bracket_terms(self, r: int, s: int):
        return self._bracket.get((r, s), ())

    def bracket_vector(self, v, w):
        """g-coordinates of [V, W] for V, W given by g-coordinates."""
        out = [Fraction(0)] * self.p
        for r, cr in enumerate(v):
            if not cr:
                continue
            for s, cs in enumerate(w):
                if not cs:
                    continue
                f = Fraction(cr) * Fraction(cs)
                for m, c in self.bracket_terms(r, s):
                    out[m] += f * c
        return tuple(out)

    # -- form constructors

    def form(self, degree: int, coeffs) -> "GForm":
        if degree < 0 or degree > self.degree_cap:
            raise DegreeError(
                "degree %d outside [0, %d]" % (degree, self.degree_cap)
            )
        clean = {}
        for key, x in coeffs.items():
            key = tuple(key)
            if len(key) != degree or any(
                not (0 <= k < self.p) for k in key
            ) or list(key) != sorted(set(key)):
                raise ValueError(
                    "key %r is not a strictly increasing %d-tuple" % (key, degree)
                )
            if not isinstance(x, Elem) or x.algebra is not self.algebra:
                raise ValueError("coefficients must be elements of %s" % self.algebra.name)
            if not x.is_zero():
                clean[key] = x
        return GForm(self, degree, clean)

    def zero_form(self, degree: int = 0) -> "GForm":
        return self.form(degree, {})

    def scalar_form(self, x: Elem) -> "GForm":
        """The inclusion of J as the degree-0 part."""
        return self.form(0, {(): x})

    def monomial(self, x: Elem, indices) -> "GForm":
        """x (x) theta^{i_1} ^ ... ^ theta^{i_n}, indices in any order."""
        indices = tuple(indices)
        sign, key = _sort_signed(indices)
        if sign == 0:
            return self.zero_form(len(indices))
        return self.form(len(key), {key: x if sign > 0 else -x})

    def __repr__(self):
        return "CalcContext(%s, p=%d, cap=%d)" % (self.name, self.p, self.degree_cap)


class GForm:
    """Homogeneous form; coefficients keyed by increasing g-index tuples."""

    __slots__ = ("context", "degree", "coeffs")

    def __init__(self, context: CalcContext, degree: int, coeffs: dict):
        # built through CalcContext.form in user code; zero coefficients pruned
        self.context = context
        self.degree = degree
        self.coeffs = coeffs

    def is_zero(self) -> bool:
        return not self.coeffs

    def _like(self, other):
        if (
            not isinstance(other, GForm)
            or other.context is not self.context
            or other.degree != self.degree
        ):
            raise ValueError("forms live in different graded components")

    def __add__(self, other: "GForm") -> "GForm":
        self._like(other)
        out = dict(self.coeffs)
        for k, x in other.coeffs.items():
            y = out.get(k)
            s = x if y is None else x + y
            if s.is_zero():
                out.pop(k, None)
            else:
                out[k] = s
        return GForm(self.context, self.degree, out)

    def __neg__(self) -> "GForm":
        return GForm(self.context, self.degree,
                     {k: -x for k, x in self.coeffs.items()})

    def __sub__(self, other: "GForm") -> "GForm":
        return self + (-other)

    def scale(self, c) -> "GForm":
        c = Fraction(c)
        if not c:
            return GForm(self.context, self.degree, {})
        return GForm(self.context, self.degree,
                     {k: x * c for k, x in self.coeffs.items()})

    def __eq__(self, other):
        return (
            isinstance(other, GForm)
            and self.context is other.context
            and self.degree == other.degree
            and self.coeffs == other.coeffs
        )

    __hash__ = None

    def evaluate(self, indices) -> Elem:
        """Value on a tuple of basis derivations; antisymmetric in the indices."""
        sign, key = _sort_signed(tuple(indices))
        if sign == 0:
            return self.context.algebra.zero()
        x = self.coeffs.get(key)
        if x is None:
            return self.context.algebra.zero()
        return x if sign > 0 else -x

    def evaluate_on(self, vectors) -> Elem:
        """Multilinear evaluation on derivations given by g-coordinates."""
        if len(vectors) != self.degree:
            raise ValueError("need %d derivation arguments" % self.degree)
        out = self.context.algebra.zero()
        if not self.coeffs:
            return out
        supports = [
            [(k, Fraction(c)) for k, c in enumerate(v) if c] for v in vectors
        ]
        for combo in itertools.product(*supports):
            val = self.evaluate(tuple(k for k, _ in combo))
            if val.is_zero():
                continue
            coef = Fraction(1)
            for _, c in combo:
                coef *= c
            out = out + val * coef
        return out

    def to_json(self) -> dict:
        return {
            "context": self.context.name,
            "degree": self.degree,
            "terms": [
                {"indices": list(k), "coeff": x.to_json()}
                for k, x in sorted(self.coeffs.items())
            ],
        }

    def __repr__(self):
        return "GForm(deg=%d, %d terms)" % (self.degree, len(self.coeffs))


def gproduct(a: GForm, b: GForm) -> GForm:
    """Coefficientwise Jordan product with the exterior shuffle sign."""
    if a.context is not b.context:
        raise ValueError("forms from different contexts")
    ctx = a.context
    deg = a.degree + b.degree
    if deg > ctx.degree_cap:
        raise DegreeError("product degree %d exceeds cap %d" % (deg, ctx.degree_cap))
    acc = {}
    for k1, x in a.coeffs.items():
        for k2, y in b.coeffs.items():
            sign, merged = _merge_signed(k1, k2)
            if sign == 0:
                continue
            term = x * y
            if sign < 0:
                term = -term
            cur = acc.get(merged)
            term = term if cur is None else cur + term
            if term.is_zero():
                acc.pop(merged, None)
            else:
                acc[merged] = term
    return GForm(ctx, deg, acc)


def ce_differential(a: GForm) -> GForm:
    """Chevalley-Eilenberg differential, coefficientwise.

    For an increasing target tuple T = (t_0 < ... < t_n) the coefficient is

        sum_k (-1)^k D_{t_k}( a(..., t_k dropped, ...) )
      + sum_{r<s} (-1)^{r+s} a([D_{t_r}, D_{t_s}], ..., t_r, t_s dropped, ...)

    with the bracket expanded over the g-basis.  On degree 0 this is
    d(x)(D) = D(x).
    """
    ctx = a.context
    n = a.degree
    if n + 1 > ctx.degree_cap:
        raise DegreeError("differential exceeds degree cap %d" % ctx.degree_cap)
    acc = {}
    if a.is_zero():
        return GForm(ctx, n + 1, acc)
    for t in itertools.combinations(range(ctx.p), n + 1):
        val = None
        for k in range(n + 1):
            c = a.coeffs.get(t[:k] + t[k + 1:])
            if c is None:
                continue
            term = ctx.apply(t[k], c)
            if k % 2:
                term = -term
            val = term if val is None else val + term
        for r in range(n + 1):
            for s in range(r + 1, n + 1):
                rest = t[:r] + t[r + 1:s] + t[s + 1:]
                for m, cf in ctx.bracket_terms(t[r], t[s]):
                    sign, key = _sort_signed((m,) + rest)
                    if sign == 0:
                        continue
                    c = a.coeffs.get(key)
                    if c is None:
                        continue
                    term = c * (cf if sign > 0 else -cf)
                    if (r + s) % 2:
                        term = -term
                    val = term if val is None else val + term
        if val is not None and not val.is_zero():
            acc[t] = val
    return GForm(ctx, n + 1, acc)


def ce_evaluate(a: GForm, vectors) -> Elem:
    """Direct evaluation of the Chevalley-Eilenberg formula on derivations.

    vectors are deg(a)+1 g-coordinate tuples.  Actions and brackets are taken
    on the given linear combinations themselves, independently of the
    coefficientwise route, so this serves as the oracle for ce_differential:

        ce_differential(a).evaluate_on(vs) == ce_evaluate(a, vs)
    """
    ctx = a.context
    n = a.degree
    if len(vectors) != n + 1:
        raise ValueError("need %d derivation arguments" % (n + 1))
    vecs = [tuple(Fraction(c) for c in v) for v in vectors]
    out = ctx.algebra.zero()
    for k in range(n + 1):
        inner = a.evaluate_on(vecs[:k] + vecs[k + 1:])
        term = ctx.act(vecs[k], inner)
        out = out + term if k % 2 == 0 else out - term
    for r in range(n + 1):
        for s in range(r + 1, n + 1):
            br = ctx.bracket_vector(vecs[r], vecs[s])
            rest = [br] + [vecs[i] for i in range(n + 1) if i not in (r, s)]
            term = a.evaluate_on(rest)
            out = out + term if (r + s) % 2 == 0 else out - term
    return out


def random_form(ctx: CalcContext, degree: int, rng: random.Random,
                terms: int = 3, span: int = 4, den: int = 3) -> GForm:
    """Sparse random form with exact rational coefficients."""
    if degree > ctx.degree_cap:
        raise DegreeError("degree %d exceeds cap %d" % (degree, ctx.degree_cap))
    coeffs = {}
    for _ in range(terms):
        key = tuple(sorted(rng.sample(range(ctx.p), degree)))
        coeffs[key] = random_elem(ctx.algebra, rng, span=span, den=den)
    return ctx.form(degree, coeffs)


def _minor_det(cols, bigkey, key):
    # determinant of the (row = bigkey, column = key) minor, sizes <= 4 here
    n = len(key)
    if n == 0:
        return Fraction(1)
    det = Fraction(0)
    for perm in itertools.permutations(range(n)):
        inv = sum(
            1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j]
        )
        prod = Fraction(1 if inv % 2 == 0 else -1)
        for i in range(n):
            prod *= cols[key[perm[i]]][bigkey[i]]
            if not prod:
                break
        det += prod
    return det


def restrict_form(a: GForm, sub: CalcContext) -> GForm:
    """Pull a form back along an inclusion of derivation subalgebras.

    sub must be over the same Jordan algebra, with every basis derivation
    inside the span of a's context.  Coefficientwise this is the minor
    expansion of the coordinate matrix; restriction commutes with the
    differential.
    """
    big = a.context
    if sub.algebra is not big.algebra:
        raise ValueError("contexts over different algebras")
    n = a.degree
    if n > sub.degree_cap:
        raise DegreeError("degree %d exceeds sub cap %d" % (n, sub.degree_cap))
    cols = []
    for m in sub.der.mats:
        c = big.der.coordinates(m)
        if c is None:
            raise ValueError("sub-basis derivation escapes the ambient span")
        cols.append(c)
    acc = {}
    for bigkey, x in a.coeffs.items():
        for key in itertools.combinations(range(sub.p), n):
            d = _minor_det(cols, bigkey, key)
            if not d:
                continue
            term = x * d
            cur = acc.get(key)
            term = term if cur is None else cur + term
            if term.is_zero():
                acc.pop(key, None)
            else:
                acc[key] = term
    return GForm(sub, n, acc)


def _graded_jordan_residual(a: GForm, b: GForm, c: GForm, t: GForm) -> GForm:
    """Graded Jordan identity, as operators on the test form t.

    (-1)^{|a||c|}[L_{ab}, L_c] + (-1)^{|b||a|}[L_{bc}, L_a]
      + (-1)^{|c||b|}[L_{ca}, L_b] = 0  with graded commutators.
    """

    def braided(u, v, w):
        uv = gproduct(u, v)
        t1 = gproduct(uv, gproduct(w, t))
        t2 = gproduct(w, gproduct(uv, t))
        s2 = -1 if ((u.degree + v.degree) * w.degree) % 2 else 1
        s1 = -1 if (u.degree * w.degree) % 2 else 1
        return (t1 - t2.scale(s2)).scale(s1)

    return braided(a, b, c) + braided(b, c, a) + braided(c, a, b)


def verify_dga(ctx: CalcContext, trials: int = 3, seed: int = 0) -> CheckResult:
    """Exact verification of the differential graded structure on random forms.

    Per trial: d.d = 0 in every degree under the cap; graded commutativity
    and the graded Leibniz rule d(ab) = d(a)b + (-1)^{|a|} a d(b) for all
    degree pairs that fit; the graded Jordan identity applied to a fourth
    random form for all degree patterns that fit.
    """
    name = "dga(%s)" % ctx.name
    N = ctx.degree_cap
    rng = random.Random(seed)
    for t in range(trials):
        for n in range(max(N - 1, 0)):
            w = random_form(ctx, n, rng)
            if not ce_differential(ce_differential(w)).is_zero():
                return failed(name, witness={"identity": "d2", "degree": n, "trial": t})
        for da in range(N + 1):
            for db in range(N + 1 - da):
                x = random_form(ctx, da, rng)
                y = random_form(ctx, db, rng)
                sgn = -1 if (da * db) % 2 else 1
                if gproduct(x, y) != gproduct(y, x).scale(sgn):
                    return failed(name, witness={
                        "identity": "graded-commutativity",
                        "degrees": (da, db), "trial": t,
                    })
                if da + db + 1 <= N:
                    lhs = ce_differential(gproduct(x, y))
                    rhs = gproduct(ce_differential(x), y) \
                        + gproduct(x, ce_differential(y)).scale(-1 if da % 2 else 1)
                    if lhs != rhs:
                        return failed(name, witness={
                            "identity": "graded-leibniz",
                            "degrees": (da, db), "trial": t,
                        })
        for degs in itertools.product(range(N + 1), repeat=4):
            if sum(degs) > N:
                continue
            fa, fb, fc, ft = (random_form(ctx, d, rng, terms=2) for d in degs)
            if not _graded_jordan_residual(fa, fb, fc, ft).is_zero():
                return failed(name, witness={
                    "identity": "graded-jordan", "degrees": degs, "trial": t,
                })
    return passed(name, trials=trials, degree_cap=N)


# ---------------------------------------------------------------------------
# Universal factorization of first-order calculi


@dataclass
class UniversalFactorization:
    """Factorization d = i_d . d_base of a first-order calculus.

    The calculus is d(x) = sum_alpha X_alpha(x) (x) e^alpha.  cmatrix[k][alpha]
    are the coordinates of X_alpha on the derivation basis, so the module
    homomorphism out of the derivation-based calculus is

        i_d(x (x) theta^k) = sum_alpha cmatrix[k][alpha] . x (x) e^alpha.
    """

    der: DerBasis
    cmatrix: tuple
    targets: tuple

    @property
    def e_dim(self) -> int:
        return len(self.targets)

    def i_d(self, x: Elem, k: int) -> list[Elem]:
        """Components on the e-basis of i_d(x (x) theta^k)."""
        return [x * self.cmatrix[k][alpha] for alpha in range(self.e_dim)]

    def d(self, x: Elem) -> list[Elem]:
        """The calculus differential, reconstructed through i_d . d_base."""
        comps = [self.der.algebra.zero() for _ in range(self.e_dim)]
        for k in range(self.der.dim):
            dx = self.der.apply(k, x)
            if dx.is_zero():
                continue
            for alpha in range(self.e_dim):
                c = self.cmatrix[k][alpha]
                if c:
                    comps[alpha] = comps[alpha] + dx * c
        return comps

    def verify(self) -> CheckResult:
        """d = i_d . d_base, exactly, on every basis element."""
        name = "universal-factorization"
        alg = self.der.algebra
        for i in range(alg.dim):
            x = alg.basis_elem(i)
            rec = self.d(x)
            for alpha, m in enumerate(self.targets):
                if apply_mat(m, x) != rec[alpha]:
                    return failed(name, witness={"basis": i, "component": alpha})
        return passed(name, e_dim=self.e_dim, der_dim=self.der.dim)

    def to_json(self) -> dict:
        from .rationals import format_rat

        return {
            "der": self.der.name,
            "e_dim": self.e_dim,
            "cmatrix": [[format_rat(c) for c in row] for row in self.cmatrix],
        }


def universal_factorization(der: DerBasis, targets,
                            e_dim: int | None = None) -> UniversalFactorization:
    """Factor a first-order calculus d(x) = sum_alpha X_alpha(x) (x) e^alpha.

    targets: pairs (X, alpha) with X an endomorphism matrix of the algebra
    and alpha the e-basis index it is attached to.  Each X must lie in the
    span of der, i.e. actually be a derivation; the coordinate matrix C then
    determines the unique module homomorphism i_d with d = i_d . d_base.
    """
    pairs = list(targets)
    if e_dim is None:
        e_dim = 1 + max((alpha for _, alpha in pairs), default=-1)
    n = der.algebra.dim
    mats = [None] * e_dim
    cmatrix = [[Fraction(0)] * e_dim for _ in range(der.dim)]
    for x_mat, alpha in pairs:
        if not 0 <= alpha < e_dim:
            raise ValueError("target index %d outside e-basis" % alpha)
        if mats[alpha] is not None:
            raise ValueError("duplicate target index %d" % alpha)
        coords = der.coordinates(x_mat)
        if coords is None:
            raise ValueError(
                "target %d is not a derivation in the given span" % alpha
            )
        for k in range(der.dim):
            cmatrix[k][alpha] = coords[k]
        mats[alpha] = x_mat
    for alpha in range(e_dim):
        if mats[alpha] is None:
            mats[alpha] = IMat.zeros((n, n))
    return UniversalFactorization(
        der=der,
        cmatrix=tuple(tuple(row) for row in cmatrix),
        targets=tuple(mats),
    )
