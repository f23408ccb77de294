"""Octonion and quaternion laws, SU(3) action, charge conjugation."""

import random
from fractions import Fraction

import pytest

from albert.octonion import (
    CC_COMPONENTWISE,
    CC_VECTOR_FLIP,
    OCT_BASIS,
    Octonion,
    SU3Matrix,
    automorphism_table,
    canonical_charge_conj_variant,
    charge_conj,
    charge_conj_table,
    jinv_check,
    oct_conj,
    oct_mul,
    quat_conj,
    quat_mul,
    quat_norm2,
    random_octonion,
    scal,
    su2_check,
    su3_apply,
    u1_action,
    vartimes,
    vol,
)
from albert.rationals import QI

F = Fraction
I = QI(0, 1)


def _e(k):
    Z = [QI(0, 0)] * 3
    Z[k] = QI(1, 0)
    return tuple(Z)


class TestVectorAlgebra:
    def test_vartimes_antilinear_example(self):
        # (i e1) x e2 = conj(i) (e1 x e2) = -i e3
        Z1 = (I, QI(0, 0), QI(0, 0))
        out = vartimes(Z1, _e(1))
        assert out == (QI(0, 0), QI(0, 0), QI(0, -1))

    def test_vectp_pairing_vs_volume(self):
        # <Z1 x Z2, Z3> = vol(Z1, Z2, Z3) on random exact vectors
        rng = random.Random(3)
        for _ in range(50):
            Zs = [
                tuple(QI(F(rng.randint(-5, 5), rng.randint(1, 3)), F(rng.randint(-5, 5), 2)) for _ in range(3))
                for _ in range(3)
            ]
            assert scal(vartimes(Zs[0], Zs[1]), Zs[2]) == vol(*Zs)

    def test_cross_self_vanishes(self):
        rng = random.Random(4)
        for _ in range(20):
            Z = tuple(QI(rng.randint(-4, 4), F(rng.randint(-4, 4), 2)) for _ in range(3))
            assert vartimes(Z, Z) == (QI(0, 0), QI(0, 0), QI(0, 0))


class TestOctonionProduct:
    def test_unit(self):
        one = OCT_BASIS[0]
        rng = random.Random(0)
        for _ in range(10):
            x = random_octonion(rng)
            assert oct_mul(one, x) == x
            assert oct_mul(x, one) == x

    def test_basis_product_example(self):
        # (0, e1)(0, e2) = (0, i e3)
        x = Octonion(QI(0, 0), _e(0))
        y = Octonion(QI(0, 0), _e(1))
        out = oct_mul(x, y)
        assert out.z == QI(0, 0)
        assert out.Z == (QI(0, 0), QI(0, 0), I)

    def test_conj_times_self_is_norm(self):
        rng = random.Random(1)
        for _ in range(50):
            x = random_octonion(rng)
            n = oct_mul(oct_conj(x), x)
            assert n.z == QI(x.norm2(), 0)
            assert n.Z == (QI(0, 0), QI(0, 0), QI(0, 0))

    def test_norm_multiplicative_exact(self):
        rng = random.Random(2)
        for _ in range(100):
            x, y = random_octonion(rng), random_octonion(rng)
            assert oct_mul(x, y).norm2() == x.norm2() * y.norm2()

    def test_alternative_laws(self):
        rng = random.Random(7)
        for _ in range(60):
            x, y = random_octonion(rng), random_octonion(rng)
            assert oct_mul(x, oct_mul(x, y)) == oct_mul(oct_mul(x, x), y)
            assert oct_mul(oct_mul(y, x), x) == oct_mul(y, oct_mul(x, x))

    def test_nonassociativity_witness(self):
        # frozen witness: ((0,e1)(0,e2))(0,e3) = (i, 0) but (0,e1)((0,e2)(0,e3)) = (-i, 0)
        e1, e2, e3 = (Octonion(QI(0, 0), _e(k)) for k in range(3))
        left = oct_mul(oct_mul(e1, e2), e3)
        right = oct_mul(e1, oct_mul(e2, e3))
        assert left == Octonion(I)
        assert right == Octonion(-I)
        assert left != right

    def test_real_coords_round_trip(self):
        rng = random.Random(9)
        x = random_octonion(rng)
        assert Octonion.from_real_coords(x.real_coords()) == x

    def test_json_round_trip(self):
        x = Octonion(QI(F(1, 2), F(-3, 4)), (QI(1), QI(0, -2), QI(F(5, 7))))
        d = x.to_json()
        assert d["z"] == "1/2-3/4 i"
        assert Octonion.from_json(d) == x

    def test_zero_divisor_free_on_samples(self):
        rng = random.Random(12)
        for _ in range(40):
            x, y = random_octonion(rng), random_octonion(rng)
            if x.norm2() != 0 and y.norm2() != 0:
                assert oct_mul(x, y).norm2() != 0


class TestSU3:
    def test_exact_cyclic_permutation_automorphism(self):
        g = SU3Matrix(
            [[QI(0), QI(0), QI(1)], [QI(1), QI(0), QI(0)], [QI(0), QI(1), QI(0)]]
        )
        ok, witness = automorphism_table(lambda t: su3_apply(g, t))
        assert ok, witness

    def test_exact_phase_matrix_automorphism(self):
        # diag(i, i, -1) has det 1 and is unitary
        g = SU3Matrix(
            [[QI(0, 1), QI(0), QI(0)], [QI(0), QI(0, 1), QI(0)], [QI(0), QI(0), QI(-1)]]
        )
        ok, _ = automorphism_table(lambda t: su3_apply(g, t))
        assert ok

    def test_rational_circle_entries(self):
        g = SU3Matrix(
            [
                [QI(F(3, 5), F(4, 5)), QI(0), QI(0)],
                [QI(0), QI(F(3, 5), F(-4, 5)), QI(0)],
                [QI(0), QI(0), QI(1)],
            ]
        )
        ok, _ = automorphism_table(lambda t: su3_apply(g, t))
        assert ok

    def test_unitary_not_special_fails(self):
        # diag(i,1,1) is unitary with det i != 1: must admit a counterexample pair
        bad = [[QI(0, 1), QI(0), QI(0)], [QI(0), QI(1), QI(0)], [QI(0), QI(0), QI(1)]]
        with pytest.raises(ValueError):
            SU3Matrix(bad)
        from albert.octonion import apply_vector_map

        ok, witness = automorphism_table(lambda t: apply_vector_map(bad, t))
        assert not ok and witness is not None

    def test_float_sampling_tagged(self):
        rng = random.Random(42)
        g = SU3Matrix.random_float(rng)
        assert not g.exact
        import numpy as np

        assert abs(np.linalg.det(g.entries) - 1) < 1e-10

    def test_float_rejects_sloppy(self):
        import numpy as np

        with pytest.raises(ValueError):
            SU3Matrix(np.eye(3) * 1.001, exact=False)


class TestChargeConjugation:
    def test_componentwise_fails_with_vector_witness(self):
        table = charge_conj_table()
        rec = table[CC_COMPONENTWISE]
        assert not rec["automorphism"]
        i, j = rec["witness"]
        # the failure must occur on a pair with nonvanishing cross term
        a, b = OCT_BASIS[i], OCT_BASIS[j]
        from albert.octonion import vartimes as vt

        assert any(w for w in vt(a.Z, b.Z))

    def test_vector_flip_passes(self):
        table = charge_conj_table()
        assert table[CC_VECTOR_FLIP]["automorphism"]
        assert table[CC_VECTOR_FLIP]["witness"] is None

    def test_exactly_one_variant_canonical(self):
        assert canonical_charge_conj_variant() == CC_VECTOR_FLIP

    def test_canonical_is_involution_fixing_reals(self):
        rng = random.Random(21)
        for _ in range(20):
            x = random_octonion(rng)
            assert charge_conj(charge_conj(x)) == x
        one = OCT_BASIS[0]
        assert charge_conj(one) == one

    def test_componentwise_cross_term_sign(self):
        # on pure vectors the componentwise candidate flips the cross term sign
        x = Octonion(QI(0, 0), _e(0))
        y = Octonion(QI(0, 0), _e(1))
        lhs = charge_conj(oct_mul(x, y), CC_COMPONENTWISE)
        rhs = oct_mul(
            charge_conj(x, CC_COMPONENTWISE), charge_conj(y, CC_COMPONENTWISE)
        )
        assert lhs == Octonion(QI(0, 0), (QI(0), QI(0), QI(0, -1)))
        assert rhs == Octonion(QI(0, 0), (QI(0), QI(0), QI(0, 1)))


class TestQuaternions:
    def test_product_and_norm(self):
        rng = random.Random(5)
        for _ in range(50):
            q = (QI(F(rng.randint(-4, 4), 2), rng.randint(-3, 3)), QI(rng.randint(-3, 3), F(rng.randint(-4, 4), 3)))
            w = (QI(rng.randint(-3, 3), rng.randint(-3, 3)), QI(rng.randint(-3, 3), rng.randint(-3, 3)))
            assert quat_norm2(quat_mul(q, w)) == quat_norm2(q) * quat_norm2(w)
            n = quat_mul(q, quat_conj(q))
            assert n == (QI(quat_norm2(q), 0), QI(0, 0))

    def test_j_relations(self):
        j = (QI(0), QI(1))
        z = (QI(0, 1), QI(0))  # the complex unit embedded
        assert quat_mul(j, j) == (QI(-1), QI(0))
        # j z = conj(z) j
        assert quat_mul(j, z) == (QI(0), QI(0, -1))
        assert quat_mul(z, j) == (QI(0), QI(0, 1))
        assert quat_mul(j, z) != quat_mul(z, j)

    def test_associative(self):
        rng = random.Random(6)
        for _ in range(40):
            qs = [
                (QI(rng.randint(-3, 3), rng.randint(-3, 3)), QI(rng.randint(-3, 3), rng.randint(-3, 3)))
                for _ in range(3)
            ]
            assert quat_mul(quat_mul(qs[0], qs[1]), qs[2]) == quat_mul(
                qs[0], quat_mul(qs[1], qs[2])
            )

    def test_quaternions_embed_in_octonions(self):
        # (z1, z2) -> (z1, (conj z2, 0, 0)) is an exact algebra embedding
        def emb(q):
            return Octonion(q[0], (q[1].conj(), QI(0), QI(0)))

        rng = random.Random(8)
        for _ in range(40):
            q = (QI(rng.randint(-3, 3), rng.randint(-3, 3)), QI(rng.randint(-3, 3), rng.randint(-3, 3)))
            w = (QI(rng.randint(-3, 3), rng.randint(-3, 3)), QI(rng.randint(-3, 3), rng.randint(-3, 3)))
            assert emb(quat_mul(q, w)) == oct_mul(emb(q), emb(w))

    def test_u1_action_is_automorphism(self):
        c = QI(F(3, 5), F(4, 5))
        rng = random.Random(10)
        for _ in range(30):
            q = (QI(rng.randint(-3, 3), rng.randint(-3, 3)), QI(rng.randint(-3, 3), rng.randint(-3, 3)))
            w = (QI(rng.randint(-3, 3), rng.randint(-3, 3)), QI(rng.randint(-3, 3), rng.randint(-3, 3)))
            assert u1_action(c, quat_mul(q, w)) == quat_mul(u1_action(c, q), u1_action(c, w))

    def test_u1_rejects_off_circle(self):
        with pytest.raises(ValueError):
            u1_action(QI(F(1, 2), 0), (QI(1), QI(0)))


class TestSU2Invariance:
    def su2_samples(self):
        c, s = QI(F(3, 5)), QI(F(4, 5))
        yield [[c, s], [-s, c]]
        yield [[QI(F(3, 5), F(4, 5)), QI(0)], [QI(0), QI(F(3, 5), F(-4, 5))]]
        yield [[QI(0), QI(0, 1)], [QI(0, 1), QI(0)]]
        yield [[QI(F(5, 13), F(12, 13)), QI(0)], [QI(0), QI(F(5, 13), F(-12, 13))]]

    def test_jinv_on_exact_su2(self):
        for U in self.su2_samples():
            assert su2_check(U)
            assert jinv_check(U)

    def test_jinv_rejects_non_su2(self):
        with pytest.raises(ValueError):
            jinv_check([[QI(2), QI(0)], [QI(0), QI(1)]])
