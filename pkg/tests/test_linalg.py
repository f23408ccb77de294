"""Exact kernel: scalars, polynomials, matrices, nullspaces, Sturm."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from albert.linalg import (
    MatrixQ,
    SpanQ,
    det_bareiss,
    is_negative_definite,
    is_positive_definite,
    leading_principal_minors,
    nullspace,
    nullspace_exact,
    nullspace_hybrid,
    rank,
    solve,
    spans_equal,
)
from albert.polyq import (
    PolyQ,
    isolate_real_roots,
    refine_root,
    sturm_chain,
)
from albert.rationals import (
    QI,
    format_qi,
    format_rat,
    parse_qi,
    parse_rat,
    rational_reconstruction,
)

F = Fraction

rationals = st.fractions(
    min_value=-20, max_value=20, max_denominator=12
)


# ---------------------------------------------------------------------------
# scalars


class TestQI:
    def test_field_ops(self):
        a = QI(F(1, 2), F(-3))
        b = QI(2, F(1, 3))
        assert a + b == QI(F(5, 2), F(-8, 3))
        assert a * b == QI(F(1, 2) * 2 - F(-3) * F(1, 3), F(1, 2) * F(1, 3) + F(-3) * 2)
        assert (a / b) * b == a
        assert a - a == QI(0, 0)
        assert not QI(0, 0)

    def test_conjugation_norm(self):
        z = QI(F(3, 5), F(4, 5))
        assert z.conj() == QI(F(3, 5), F(-4, 5))
        assert (z * z.conj()).re == z.norm2() == F(1)

    @given(rationals, rationals, rationals, rationals)
    def test_mul_norm_multiplicative(self, a, b, c, d):
        z, w = QI(a, b), QI(c, d)
        assert (z * w).norm2() == z.norm2() * w.norm2()

    @given(rationals, rationals)
    def test_string_round_trip(self, a, b):
        z = QI(a, b)
        assert parse_qi(format_qi(z)) == z

    def test_wire_format_shape(self):
        assert format_qi(QI(F(1, 2), F(-3, 4))) == "1/2-3/4 i"
        assert parse_qi("-2/3+5 i") == QI(F(-2, 3), 5)
        assert parse_qi("7") == QI(7, 0)
        assert parse_rat(format_rat(F(-9, 12))) == F(-3, 4)


class TestRationalReconstruction:
    @given(
        st.integers(min_value=-30000, max_value=30000),
        st.integers(min_value=1, max_value=30000),
    )
    def test_round_trip(self, n, d):
        p = 2_147_483_647
        from math import gcd

        if gcd(d, p) != 1:
            return
        g = gcd(abs(n), d)
        if g:
            n, d = (n // g if g else n), (d // g if g else d)
        a = n * pow(d, p - 2, p) % p
        x = rational_reconstruction(a, p)
        assert x == Fraction(n, d)


# ---------------------------------------------------------------------------
# polynomials and Sturm isolation


class TestPolyQ:
    def test_arithmetic(self):
        p = PolyQ([1, 2, 1])  # (X+1)^2
        q = PolyQ([1, 1])
        quo, rem = p.divmod(q)
        assert quo == q and rem.is_zero()
        assert p.derivative() == PolyQ([2, 2])
        assert p(F(1, 2)) == F(9, 4)
        assert (q * q) == p

    def test_gcd_squarefree(self):
        p = PolyQ([1, 1]) * PolyQ([1, 1]) * PolyQ([-2, 0, 1])
        sqf = p.squarefree_part()
        assert sqf == (PolyQ([1, 1]) * PolyQ([-2, 0, 1])).monic()
        assert not p.is_squarefree()
        assert sqf.is_squarefree()

    def test_sturm_chain_sign_counts(self):
        # hand oracle: X^2 - 2 has chain [X^2-2, 2X, 2]; roots +-sqrt(2)
        p = PolyQ([-2, 0, 1])
        chain = sturm_chain(p)
        assert len(chain) == 3
        roots = isolate_real_roots(p)
        assert len(roots) == 2
        (a1, b1), (a2, b2) = roots
        assert b1 <= a2  # disjoint, ordered
        # each interval brackets its root of X^2-2 by an exact sign change
        assert p(a1) > 0 > p(b1)  # contains -sqrt(2)
        assert p(a2) < 0 < p(b2)  # contains +sqrt(2)

    def test_isolate_cubic(self):
        # X^3 - X: roots -1, 0, 1, each in its own interval
        p = PolyQ([0, -1, 0, 1])
        ivals = isolate_real_roots(p)
        assert len(ivals) == 3
        for (a, b), r in zip(ivals, [-1, 0, 1]):
            assert a < r <= b

    def test_no_real_roots(self):
        assert isolate_real_roots(PolyQ([1, 0, 1])) == []

    def test_multiplicity_collapses(self):
        p = PolyQ([1, 1]) * PolyQ([1, 1])
        ivals = isolate_real_roots(p)
        assert len(ivals) == 1

    def test_refine_width_and_containment(self):
        p = PolyQ([-2, 0, 1])
        (a, b) = isolate_real_roots(p)[1]
        w = F(1, 2**40)
        ra, rb = refine_root(p, (a, b), w)
        assert rb - ra <= w
        assert p(ra) * p(rb) < 0  # still brackets sqrt(2)
        assert ra < F(1414213562373095049, 10**18) < rb  # sqrt(2) approx

    @settings(max_examples=40)
    @given(st.lists(st.integers(-6, 6), min_size=3, max_size=6), st.integers(0, 30))
    def test_refine_never_loses_sign_change(self, coeffs, steps):
        p = PolyQ(coeffs)
        if p.degree < 1:
            return
        p = p.squarefree_part()
        for ival in isolate_real_roots(p):
            a, b = refine_root(p, ival, F(1, 2**steps))
            assert b - a <= F(1, 2**steps) or a == b
            if a != b:
                assert p(a) * p(b) < 0

    def test_root_count_matches_squarefree_degree_bound(self):
        p = PolyQ([-6, 11, -6, 1])  # (X-1)(X-2)(X-3)
        ivals = isolate_real_roots(p)
        assert len(ivals) == 3


# ---------------------------------------------------------------------------
# matrices


class TestMatrixQ:
    def test_storage_agreement(self):
        rows = [[1, 0, 0, 0], [0, 0, 0, 2]]
        sparse = MatrixQ.from_rows(rows, threshold=0.9)
        dense = MatrixQ.from_rows(rows, threshold=0.0)
        assert sparse.is_sparse and not dense.is_sparse
        assert sparse == dense
        assert sparse[1, 3] == F(2) and dense[0, 1] == 0

    def test_json_round_trip(self):
        m = MatrixQ.from_rows([[F(1, 2), -3], [0, F(7, 5)]])
        assert MatrixQ.from_json(m.to_json()) == m
        assert m.to_json() == [["1/2", "-3"], ["0", "7/5"]]

    def test_mul_vec(self):
        m = MatrixQ.from_rows([[1, 2], [3, 4]])
        assert m.mul_vec((F(1), F(1))) == (F(3), F(7))


class TestNullspace:
    def test_hand_oracle_rank_one(self):
        # hand elimination: [[1,1],[2,2]] -> x + y = 0 -> kernel (1,-1)
        m = MatrixQ.from_rows([[1, 1], [2, 2]])
        basis = nullspace(m)
        assert len(basis) == 1
        v = basis[0]
        assert v[0] * 1 + v[1] * 1 == 0
        assert spans_equal(basis, [(F(1), F(-1))], 2)
        assert rank(m) == 1

    def test_identity_kernel_trivial(self):
        assert nullspace(MatrixQ.identity(4)) == []
        assert rank(MatrixQ.identity(4)) == 4

    def test_exact_verification_property(self):
        rng = random.Random(11)
        for _ in range(25):
            nr, nc = rng.randint(1, 6), rng.randint(1, 6)
            m = MatrixQ.from_rows(
                [[F(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(nc)] for _ in range(nr)]
            )
            basis = nullspace(m)
            assert rank(m) + len(basis) == nc
            for v in basis:
                assert all(x == 0 for x in m.mul_vec(v))

    def test_hybrid_agrees_with_exact(self):
        rng = random.Random(5)
        for _ in range(20):
            nr, nc = rng.randint(2, 8), rng.randint(2, 8)
            rows = [
                {j: F(rng.randint(-9, 9)) for j in range(nc) if rng.random() < 0.5}
                for _ in range(nr)
            ]
            exact = nullspace_exact(rows, nc)
            hybrid = nullspace_hybrid([dict(r) for r in rows], nc)
            assert hybrid is not None
            assert len(exact) == len(hybrid)
            assert spans_equal(exact, hybrid, nc)

    def test_solve(self):
        m = MatrixQ.from_rows([[1, 1], [1, -1]])
        x, hom = solve(m, (F(3), F(1)))
        assert x == (F(2), F(1)) and hom == []
        assert solve(MatrixQ.from_rows([[1, 1], [2, 2]]), (F(1), F(3))) is None

    def test_span_membership(self):
        s = SpanQ([(1, 0, 1), (0, 1, 1)], 3)
        assert s.contains((1, 1, 2))
        assert not s.contains((1, 1, 1))
        assert s.coordinates((2, 3, 5)) == (F(2), F(3))


class TestDeterminants:
    def test_det_oracle(self):
        # cofactor hand-expansion oracle
        m = MatrixQ.from_rows([[2, 0, 1], [1, 3, -1], [0, 5, 4]])
        assert det_bareiss(m) == F(2 * (12 + 5) - 0 + 1 * 5)
        assert det_bareiss(MatrixQ.from_rows([[1, 2], [2, 4]])) == 0

    def test_det_rational_scaling(self):
        m = MatrixQ.from_rows([[F(1, 2), 0], [0, F(1, 3)]])
        assert det_bareiss(m) == F(1, 6)

    def test_minors_and_definiteness(self):
        assert leading_principal_minors(MatrixQ.identity(3)) == [1, 1, 1]
        assert is_positive_definite(MatrixQ.identity(3))
        assert not is_positive_definite(MatrixQ.from_rows([[1, 0], [0, -1]]))
        assert is_negative_definite(MatrixQ.from_rows([[-2, 1], [1, -2]]))
        assert not is_negative_definite(MatrixQ.from_rows([[-1, 0], [0, 1]]))
        with pytest.raises(ValueError):
            is_positive_definite(MatrixQ.from_rows([[0, 1], [0, 0]]))

    def test_zero_pivot_paths(self):
        m = MatrixQ.from_rows([[0, 1], [1, 0]])
        assert det_bareiss(m) == -1
        assert leading_principal_minors(m)[0] == 0
