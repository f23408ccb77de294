"""Universal forms over small *-algebras, the contracting homotopy and
the first higher product of the hermitian graded Jordan calculus."""

import random
from fractions import Fraction

import pytest

from albert.homotopy import (
    HomotopyK,
    StarAlgebra,
    build_K,
    calculus_context,
    calculus_from_json,
    cohomology_check,
    dga_star_check,
    graded_associator,
    homotopy_assoc_check,
    m3,
    matrix_algebra,
    random_form,
    random_hermitian,
    two_points,
)
from albert.rationals import QI

I_ = QI(0, 1)


@pytest.fixture(scope="module")
def ctx2():
    return calculus_context(two_points(), 3)


@pytest.fixture(scope="module")
def ctxm():
    return calculus_context(matrix_algebra(2), 3)


@pytest.fixture(scope="module")
def k2(ctx2):
    return build_K(ctx2)


@pytest.fixture(scope="module")
def km(ctxm):
    return build_K(ctxm)


class TestStarAlgebra:
    def test_instances(self):
        a = two_points()
        assert a.dim == 2
        m = matrix_algebra(2)
        assert m.dim == 4
        # conjugate transpose swaps the off-diagonal units
        e01 = m.basis(1)
        assert m.star(e01) == m.basis(2)
        assert m.mul(m.basis(1), m.basis(2)) == m.basis(0)

    def test_bad_tables_rejected(self):
        a = two_points()
        with pytest.raises(ValueError):
            StarAlgebra("broken-unit", a.sc, a.basis(0), a.star_images)
        bad_star = (tuple(QI(1) if i in (0, 1) else QI(0) for i in range(2)),
                    a.star_images[1])
        with pytest.raises(ValueError):
            StarAlgebra("broken-star", a.sc, a.unit, bad_star)
        m = matrix_algebra(2)
        sc = [[list(cell) for cell in line] for line in m.sc]
        sc[1][2] = list(m.basis(3))  # e01 e10 must be e00
        with pytest.raises(ValueError):
            StarAlgebra("broken-product", sc, m.unit, m.star_images)

    def test_hermitian_fixed_space(self):
        for a, dim in ((two_points(), 2), (matrix_algebra(2), 4)):
            basis = a.hermitian_coords()
            assert len(basis) == dim
            for h in basis:
                assert a.star(h) == h

    def test_json_round_trip(self):
        m = matrix_algebra(2)
        r = StarAlgebra.from_json(m.to_json())
        assert r.sc == m.sc and r.unit == m.unit
        assert r.star_images == m.star_images


class TestContextBasics:
    def test_graded_dimensions(self, ctx2, ctxm):
        assert [ctx2.dim_c(n) for n in range(4)] == [2, 2, 2, 2]
        assert [ctxm.dim_c(n) for n in range(4)] == [4, 12, 36, 108]
        scal = calculus_context(matrix_algebra(1), 3)
        assert [scal.dim_c(n) for n in range(4)] == [1, 0, 0, 0]

    def test_cap_validation(self):
        with pytest.raises(ValueError):
            calculus_context(two_points(), 1)

    def test_reduction_conventions(self, ctxm):
        assert not any(ctxm.reduce(ctxm.algebra.unit))
        for k in range(ctxm.nbar):
            red = ctxm.reduce(ctxm.lift(k))
            assert red == tuple(
                QI(1) if j == k else QI(0) for j in range(ctxm.nbar)
            )

    def test_real_coordinates_round_trip(self, ctxm):
        rng = random.Random(3)
        for n in range(4):
            w = random_form(ctxm, n, rng)
            assert ctxm.from_real(n, ctxm.to_real(w)) == w

    def test_form_arithmetic(self, ctxm):
        rng = random.Random(4)
        x = random_form(ctxm, 1, rng)
        y = random_form(ctxm, 1, rng)
        assert (x + y) - y == x
        assert x.scale(Fraction(3, 2)).scale(Fraction(2, 3)) == x
        assert (x.scale(I_)).scale(I_) == -x
        with pytest.raises(ValueError):
            x + random_form(ctxm, 2, rng)
        doc = x.to_json()
        assert doc["degree"] == 1 and doc["terms"]

    def test_context_json_round_trip(self, ctxm):
        r = calculus_from_json(ctxm.to_json())
        assert r.N == ctxm.N and r.algebra.sc == ctxm.algebra.sc


class TestCalculusLaws:
    def test_d_squared_vanishes_on_basis(self, ctx2, ctxm):
        for ctx in (ctx2, ctxm):
            for n in range(ctx.N):
                for key in ctx.keys(n):
                    for i in range(ctx.algebra.dim):
                        w = ctx.basis_form(n, key, i)
                        assert ctx.d(ctx.d(w)).is_zero()

    def test_dga_star_suite(self, ctx2, ctxm):
        assert dga_star_check(ctx2, trials=2, seed=1).ok
        assert dga_star_check(ctxm, trials=1, seed=2).ok

    def test_associativity_random(self, ctxm):
        rng = random.Random(7)
        for degs in ((0, 1, 1), (1, 1, 1), (0, 0, 2), (2, 1, 0)):
            x, y, z = (random_form(ctxm, d, rng) for d in degs)
            assert ctxm.mul(ctxm.mul(x, y), z) == ctxm.mul(x, ctxm.mul(y, z))

    def test_leibniz_random(self, ctxm):
        rng = random.Random(8)
        for da, db in ((0, 0), (0, 1), (1, 0), (1, 1), (2, 0)):
            x = random_form(ctxm, da, rng)
            y = random_form(ctxm, db, rng)
            lhs = ctxm.d(ctxm.mul(x, y))
            rhs = ctxm.mul(ctxm.d(x), y) + ctxm.mul(x, ctxm.d(y)).scale(
                -1 if da % 2 else 1
            )
            assert lhs == rhs

    def test_star_axioms_random(self, ctxm):
        rng = random.Random(9)
        for da, db in ((0, 1), (1, 1), (1, 2), (0, 2)):
            x = random_form(ctxm, da, rng)
            y = random_form(ctxm, db, rng)
            sgn = -1 if (da * db) % 2 else 1
            assert ctxm.star(ctxm.mul(x, y)) == ctxm.mul(
                ctxm.star(y), ctxm.star(x)
            ).scale(sgn)
            assert ctxm.star(ctxm.star(x)) == x
            assert ctxm.d(ctxm.star(x)) == ctxm.star(ctxm.d(x))

    def test_truncation_is_consistent(self, ctxm):
        rng = random.Random(10)
        x = random_form(ctxm, 2, rng)
        y = random_form(ctxm, 2, rng)
        assert ctxm.mul(x, y).is_zero() and ctxm.mul(x, y).degree == 4
        z = random_form(ctxm, 3, rng)
        assert ctxm.d(z).is_zero() and ctxm.d(z).degree == 4

    def test_hermitian_subcomplex(self, ctxm):
        rng = random.Random(11)
        for n in range(3):
            basis = ctxm.hermitian_basis(n)
            assert len(basis) == ctxm.dim_c(n)
            for h in basis[:4]:
                assert ctxm.star(h) == h
        a = random_hermitian(ctxm, 1, rng)
        b = random_hermitian(ctxm, 1, rng)
        j = ctxm.jordan(a, b)
        assert ctxm.star(j) == j
        assert ctxm.star(ctxm.d(a)) == ctxm.d(a)

    def test_graded_commutativity(self, ctxm):
        rng = random.Random(12)
        for da, db in ((1, 1), (1, 2), (0, 1)):
            x = random_form(ctxm, da, rng)
            y = random_form(ctxm, db, rng)
            sgn = -1 if (da * db) % 2 else 1
            assert ctxm.jordan(x, y) == ctxm.jordan(y, x).scale(sgn)


class TestCohomology:
    def test_trivial_above_zero(self, ctx2, ctxm):
        assert cohomology_check(ctx2).ok
        assert cohomology_check(ctxm).ok
        assert cohomology_check(calculus_context(matrix_algebra(1), 3)).ok

    def test_closed_scalars_are_multiples_of_unit(self, ctxm):
        assert ctxm.d(ctxm.unit_form()).is_zero()
        assert ctxm.d(ctxm.unit_form().scale(I_)).is_zero()
        for i in range(ctxm.algebra.dim):
            w = ctxm.scalar_form(ctxm.algebra.basis(i))
            if any(ctxm.reduce(ctxm.algebra.basis(i))):
                assert not ctxm.d(w).is_zero()


class TestHomotopy:
    def test_identity_and_star(self, k2, km):
        for K in (k2, km):
            assert K.identity_check().ok
            assert K.star_check().ok

    def test_identity_on_random_forms(self, ctxm, km):
        rng = random.Random(13)
        for n in (1, 2):
            for _ in range(6):
                w = random_form(ctxm, n, rng)
                back = ctxm.d(km.apply(w)) + km.apply(ctxm.d(w))
                assert back == w

    def test_complex_linearity_and_star(self, ctxm, km):
        rng = random.Random(14)
        for n in (1, 2, 3):
            w = random_form(ctxm, n, rng)
            assert km.apply(w.scale(I_)) == km.apply(w).scale(I_)
            assert km.apply(ctxm.star(w)) == ctxm.star(km.apply(w))

    def test_top_degree_exact_forms(self, ctxm, km):
        rng = random.Random(15)
        for _ in range(4):
            w = ctxm.d(random_form(ctxm, 2, rng))
            assert w.degree == 3
            assert ctxm.d(km.apply(w)) == w

    def test_input_validation(self, ctxm, km):
        with pytest.raises(ValueError):
            km.apply(ctxm.unit_form())
        with pytest.raises(ValueError):
            build_K(ctxm, tuple(QI(1) for _ in range(4)))

    def test_omega_changes_K_not_the_property(self, ctxm, km):
        om = tuple(QI(1) if i == 3 else QI(0) for i in range(4))
        other = build_K(ctxm, om)
        assert other.identity_check().ok and other.star_check().ok
        assert any(other.mats[n] != km.mats[n] for n in (1, 2, 3))

    def test_scalar_algebra_degenerates(self):
        ctx = calculus_context(matrix_algebra(1), 3)
        K = build_K(ctx)
        assert K.identity_check().ok


class TestHigherProduct:
    def test_degree_zero_rejected(self, ctxm, km):
        h = ctxm.scalar_form(ctxm.algebra.basis(0))
        with pytest.raises(ValueError):
            m3(ctxm, km, h, h, h)
        with pytest.raises(ValueError):
            homotopy_assoc_check(ctxm, km, [(h, h, h)])

    def test_commutative_scalars_associate(self, ctx2):
        rng = random.Random(16)
        for _ in range(5):
            x, y, z = (random_hermitian(ctx2, 0, rng) for _ in range(3))
            assert graded_associator(ctx2, x, y, z).is_zero()

    def test_matrix_scalars_do_not_associate(self, ctxm):
        rng = random.Random(17)
        assert any(
            not graded_associator(
                ctxm,
                random_hermitian(ctxm, 0, rng, terms=2),
                random_hermitian(ctxm, 0, rng, terms=2),
                random_hermitian(ctxm, 0, rng, terms=2),
            ).is_zero()
            for _ in range(20)
        )

    def test_nonzero_m3_exists(self, ctxm, km):
        rng = random.Random(18)
        found = False
        for _ in range(10):
            x = random_hermitian(ctxm, 0, rng, terms=2)
            y = random_hermitian(ctxm, 0, rng, terms=2)
            z = random_hermitian(ctxm, 1, rng, terms=2)
            w = m3(ctxm, km, x, y, z)
            if not w.is_zero():
                assert w.degree == 0
                found = True
                break
        assert found

    def test_m3_is_hermitian(self, ctxm, km):
        rng = random.Random(19)
        for degs in ((0, 0, 1), (0, 1, 1)):
            x, y, z = (random_hermitian(ctxm, d, rng) for d in degs)
            w = m3(ctxm, km, x, y, z)
            assert ctxm.star(w) == w

    def test_fifty_random_triples_resolve(self, ctxm, km):
        rng = random.Random(20)
        degs = [(0, 0, 1), (0, 1, 0), (1, 0, 0), (0, 1, 1), (1, 1, 0),
                (1, 0, 1), (0, 0, 2), (0, 2, 0), (2, 0, 0)]
        triples = [
            tuple(random_hermitian(ctxm, d, rng) for d in degs[k % len(degs)])
            for k in range(50)
        ]
        res = homotopy_assoc_check(ctxm, km, triples)
        assert res.ok
        recs = res.details["records"]
        assert len(recs) == 50
        assert all(r["resolved"] and r["leibniz_expansion"] for r in recs)
        assert any(not r["associator_zero"] for r in recs)
        # the bare d(m3) shorthand is not the general statement
        assert any(not r["d_m3_alone"] for r in recs if not r["associator_zero"])

    def test_closed_triples_hit_the_shorthand(self, ctxm, km):
        rng = random.Random(21)
        nonzero = 0
        for _ in range(6):
            hs = [random_hermitian(ctxm, 0, rng) for _ in range(3)]
            triple = tuple(ctxm.d(h) for h in hs)
            res = homotopy_assoc_check(ctxm, km, [triple])
            assert res.ok
            rec = res.details["records"][0]
            assert rec["total"] == 3
            assert rec["d_associator_zero"] and rec["d_m3_alone"]
            if not rec["associator_zero"]:
                nonzero += 1
        assert nonzero

    def test_two_point_calculus_resolves_too(self, ctx2, k2):
        rng = random.Random(22)
        triples = [
            tuple(random_hermitian(ctx2, d, rng) for d in degs)
            for degs in ((0, 0, 1), (0, 1, 1), (1, 0, 1), (0, 0, 2))
        ]
        assert homotopy_assoc_check(ctx2, k2, triples).ok

    def test_resolution_with_other_omega(self, ctxm):
        om = tuple(QI(1) if i == 3 else QI(0) for i in range(4))
        K = build_K(ctxm, om)
        rng = random.Random(23)
        triples = [
            tuple(random_hermitian(ctxm, d, rng) for d in (0, 0, 1))
            for _ in range(5)
        ]
        assert homotopy_assoc_check(ctxm, K, triples).ok
