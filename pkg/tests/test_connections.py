"""Connections on free Jordan modules: Leibniz, curvature, covariant calculus."""

import random
from fractions import Fraction

import pytest

from albert.connections import (
    Connection,
    ConnectionError,
    ModuleForm,
    ZeroActionContext,
    cov_evaluate,
    covariant_differential,
    module_product,
    random_module_form,
    verify_connection_laws,
)
from albert.derivations import derivation_algebra
from albert.fastmat import IMat, imat_from_fractions
from albert.forms import CalcContext, DegreeError, ce_differential, random_form
from albert.jordan import make_hermitian
from albert.modules import ModuleRep, free_module, regular_module


@pytest.fixture(scope="module")
def ctx8(h3o, su3_color):
    return CalcContext(h3o, su3_color, degree_cap=4)


@pytest.fixture(scope="module")
def reg27(h3o):
    return regular_module(h3o)


@pytest.fixture(scope="module")
def ctx3():
    j = make_hermitian("R", 3)
    return CalcContext(j, derivation_algebra(j), degree_cap=3)


@pytest.fixture(scope="module")
def free3x2(ctx3):
    return free_module(ctx3.algebra, 2)


def block_scalar(n, entries):
    """kron(I_n, 2x2): acts on the rank leg only, so commutes with L."""
    small = imat_from_fractions([[Fraction(c) for c in row] for row in entries])
    return IMat.eye(n).kron(small)


def random_block_conn(ctx, module, rng):
    n = ctx.algebra.dim
    gam = [
        block_scalar(n, [[rng.randint(-2, 2), rng.randint(-2, 2)],
                         [rng.randint(-2, 2), rng.randint(-2, 2)]])
        for _ in range(ctx.p)
    ]
    return Connection(ctx, module, gam)


class TestConstruction:
    def test_reference_connection(self, ctx8, reg27):
        c = Connection(ctx8, reg27)
        for k in range(ctx8.p):
            assert c.op(k) == ctx8.action_mat(k)

    def test_block_scalar_gammas_pass(self, ctx3, free3x2):
        rng = random.Random(0)
        c = random_block_conn(ctx3, free3x2, rng)
        assert c.rank == 2

    def test_left_multiplication_gamma_rejected(self, ctx8, reg27, h3o):
        bad = [h3o.L_basis()[5]] + [IMat.zeros((27, 27))] * (ctx8.p - 1)
        with pytest.raises(ConnectionError) as e:
            Connection(ctx8, reg27, bad)
        assert set(e.value.witness) == {"gamma", "basis"}

    def test_gamma_count_checked(self, ctx3, free3x2):
        with pytest.raises(ValueError):
            Connection(ctx3, free3x2, [IMat.zeros((12, 12))])

    def test_non_free_module_rejected(self, ctx3):
        j = ctx3.algebra
        mats = [m.scale(2) for m in j.L_basis()]
        with pytest.raises(ValueError):
            Connection(ctx3, ModuleRep(j, mats, name="scaled"))

    def test_json(self, ctx3, free3x2):
        c = random_block_conn(ctx3, free3x2, random.Random(1))
        data = c.to_json()
        assert data["rank"] == 2 and len(data["gamma"]) == ctx3.p


class TestCurvature:
    def test_reference_is_flat(self, ctx8, reg27):
        c = Connection(ctx8, reg27)
        for r in range(ctx8.p):
            for s in range(r + 1, ctx8.p):
                assert c.curvature(r, s).is_zero()

    def test_antisymmetry_and_endomorphism(self, ctx3, free3x2):
        c = random_block_conn(ctx3, free3x2, random.Random(2))
        for r in range(ctx3.p):
            for s in range(ctx3.p):
                rm = c.curvature(r, s)
                assert rm == c.curvature(s, r).scale(-1)
                for lm in free3x2.mats:
                    assert rm.commutator(lm).is_zero()

    def test_bilinearity(self, ctx3, free3x2):
        c = random_block_conn(ctx3, free3x2, random.Random(3))
        rng = random.Random(4)
        v = tuple(Fraction(rng.randint(-3, 3), 2) for _ in range(ctx3.p))
        w = tuple(Fraction(rng.randint(-3, 3), 2) for _ in range(ctx3.p))
        direct = c.op_along(v).commutator(c.op_along(w)) - c.op_along(
            ctx3.bracket_vector(v, w)
        )
        m = free3x2.carrier_dim
        expand = IMat.zeros((m, m))
        for r in range(ctx3.p):
            for s in range(ctx3.p):
                if v[r] and w[s]:
                    expand = expand + c.curvature(r, s).scale(v[r] * w[s])
        assert direct == expand

    def test_pure_gauge_commutator(self):
        # trivial action of a 2-dim abelian g on J = R: R_{01} = [A, B]
        r1 = make_hermitian("R", 1)
        zctx = ZeroActionContext(r1, 2)
        mod = free_module(r1, 2)
        a = imat_from_fractions([[0, 1], [0, 0]])
        b = imat_from_fractions([[0, 0], [1, 0]])
        c = Connection(zctx, mod, [a, b])
        assert c.curvature(0, 1) == a.commutator(b)
        assert not c.curvature(0, 1).is_zero()

    def test_constant_scalar_gamma(self, ctx8, reg27):
        rng = random.Random(5)
        gam = [IMat.eye(27).scale(Fraction(rng.randint(-3, 3), 2))
               for _ in range(ctx8.p)]
        c = Connection(ctx8, reg27, gam)
        for r in range(ctx8.p):
            for s in range(r + 1, ctx8.p):
                expect = IMat.zeros((27, 27))
                for m_idx, cf in ctx8.bracket_terms(r, s):
                    expect = expect - gam[m_idx].scale(cf)
                assert c.curvature(r, s) == expect

    def test_difference_of_connections_is_endomorphism(self, ctx3, free3x2):
        c1 = random_block_conn(ctx3, free3x2, random.Random(6))
        c2 = random_block_conn(ctx3, free3x2, random.Random(7))
        for k in range(ctx3.p):
            d = c1.op(k) - c2.op(k)
            for lm in free3x2.mats:
                assert d.commutator(lm).is_zero()


class TestModuleForm:
    def test_arithmetic(self, ctx3, free3x2):
        rng = random.Random(8)
        a = random_module_form(ctx3, free3x2, 1, rng)
        b = random_module_form(ctx3, free3x2, 1, rng)
        assert (a + b) - b == a
        assert a.scale(3) - a - a == a
        assert (a - a).is_zero()

    def test_evaluate_antisymmetry(self, ctx3, free3x2):
        w = random_module_form(ctx3, free3x2, 2, random.Random(9))
        minus = tuple(-c for c in w.evaluate((0, 1)))
        assert w.evaluate((1, 0)) == minus
        assert not any(w.evaluate((1, 1)))

    def test_module_product_signs(self, ctx3, free3x2):
        rng = random.Random(10)
        omega = random_form(ctx3, 1, rng)
        phi = random_module_form(ctx3, free3x2, 1, rng)
        prod = module_product(omega, phi)
        assert prod.degree == 2
        # evaluation form: product of evaluations, antisymmetrized
        u = tuple(Fraction(rng.randint(-2, 2)) for _ in range(ctx3.p))
        v = tuple(Fraction(rng.randint(-2, 2)) for _ in range(ctx3.p))
        direct = prod.evaluate_on([u, v])
        xw = free3x2.act(omega.evaluate_on([u]), phi.evaluate_on([v]))
        wx = free3x2.act(omega.evaluate_on([v]), phi.evaluate_on([u]))
        assert direct == tuple(a - b for a, b in zip(xw, wx))

    def test_degree_zero_product_is_action(self, ctx3, free3x2):
        rng = random.Random(11)
        from albert.jordan import random_elem

        x = random_elem(ctx3.algebra, rng)
        phi = random_module_form(ctx3, free3x2, 0, rng)
        prod = module_product(ctx3.scalar_form(x), phi)
        assert prod.evaluate(()) == free3x2.act(x, phi.evaluate(()))

    def test_key_validation(self, ctx3, free3x2):
        with pytest.raises(ValueError):
            ModuleForm(ctx3, free3x2, 2, {(1, 0): (Fraction(1),) * 12})
        with pytest.raises(DegreeError):
            ModuleForm(ctx3, free3x2, 9, {})

    def test_json(self, ctx3, free3x2):
        w = random_module_form(ctx3, free3x2, 1, random.Random(12), terms=2)
        data = w.to_json()
        assert data["degree"] == 1
        assert all(len(t["coeff"]) == 12 for t in data["terms"])


class TestCovariantDifferential:
    def test_degree_zero_rule(self, ctx3, free3x2):
        rng = random.Random(13)
        c = random_block_conn(ctx3, free3x2, rng)
        phi = random_module_form(ctx3, free3x2, 0, rng)
        base = phi.evaluate(())
        dphi = covariant_differential(c, phi)
        for k in range(ctx3.p):
            assert dphi.evaluate((k,)) == c.apply(k, base)

    def test_reference_reduces_to_derivation_action(self, ctx8, reg27, h3o):
        rng = random.Random(14)
        c = Connection(ctx8, reg27)
        phi = random_module_form(ctx8, reg27, 0, rng)
        base = phi.evaluate(())
        x = h3o.from_coords(base)
        dphi = covariant_differential(c, phi)
        for k in range(ctx8.p):
            assert dphi.evaluate((k,)) == ctx8.apply(k, x).coords

    def test_matches_direct_evaluation(self, ctx3, free3x2):
        rng = random.Random(15)
        c = random_block_conn(ctx3, free3x2, rng)
        for deg in (0, 1, 2):
            w = random_module_form(ctx3, free3x2, deg, rng, terms=2)
            dw = covariant_differential(c, w)
            for _ in range(3):
                vecs = [
                    tuple(Fraction(rng.randint(-2, 2), rng.randint(1, 2))
                          for _ in range(ctx3.p))
                    for _ in range(deg + 1)
                ]
                assert dw.evaluate_on(vecs) == cov_evaluate(c, w, vecs)

    def test_squared_differential_is_curvature(self, ctx3, free3x2):
        rng = random.Random(16)
        c = random_block_conn(ctx3, free3x2, rng)
        phi = random_module_form(ctx3, free3x2, 0, rng)
        base = phi.evaluate(())
        dd = covariant_differential(c, covariant_differential(c, phi))
        for r in range(ctx3.p):
            for s in range(r + 1, ctx3.p):
                rows = c.curvature(r, s).to_fractions()
                want = tuple(
                    sum(row[j] * base[j] for j in range(len(base))) for row in rows
                )
                assert dd.evaluate((r, s)) == want

    def test_graded_leibniz(self, ctx3, free3x2):
        rng = random.Random(17)
        c = random_block_conn(ctx3, free3x2, rng)
        for da, db in [(0, 0), (0, 1), (1, 0), (1, 1)]:
            omega = random_form(ctx3, da, rng, terms=2)
            phi = random_module_form(ctx3, free3x2, db, rng, terms=2)
            lhs = covariant_differential(c, module_product(omega, phi))
            cross = module_product(omega, covariant_differential(c, phi))
            rhs = module_product(ce_differential(omega), phi) + (
                cross if da % 2 == 0 else -cross
            )
            assert lhs == rhs

    def test_degree_overflow(self, ctx3, free3x2):
        c = Connection(ctx3, free3x2)
        w = random_module_form(ctx3, free3x2, 3, random.Random(18))
        with pytest.raises(DegreeError):
            covariant_differential(c, w)


class TestLawSuite:
    def test_reference_on_su3_context(self, ctx8, reg27):
        r = verify_connection_laws(Connection(ctx8, reg27), trials=1)
        assert r.ok, r.witness
        assert r.details["center_linear"]

    def test_random_block_connection(self, ctx3, free3x2):
        c = random_block_conn(ctx3, free3x2, random.Random(19))
        r = verify_connection_laws(c, trials=2)
        assert r.ok, r.witness

    def test_corrupted_gamma_detected(self, ctx3, free3x2):
        c = Connection(ctx3, free3x2)
        # force a non-endomorphism past the constructor
        bad = free3x2.mats[3]
        c.gamma = list(c.gamma)
        c.gamma[1] = bad
        c._ops = list(c._ops)
        c._ops[1] = c._ops[1] + bad
        c._op_rows = [op.to_fractions() for op in c._ops]
        r = verify_connection_laws(c, trials=1)
        assert not r.ok
        assert r.witness["law"] in (
            "curvature-endomorphism", "covcurv", "leibniz", "second-differential",
        )
