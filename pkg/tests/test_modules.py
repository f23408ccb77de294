"""Jordan modules: axioms, free modules, Pierce splits, commutants."""

import random
from fractions import Fraction

import pytest

from albert.fastmat import IMat
from albert.jordan import (
    direct_sum,
    make_hermitian,
    make_jspin,
    random_elem,
    verify_jordan,
)
from albert.linalg import SpanQ
from albert.modules import (
    ModuleRep,
    check_module_axioms,
    free_module,
    module_commutant,
    pierce_decompose,
    regular_module,
    split_null_extension,
    verify_split_null,
)


@pytest.fixture(scope="module")
def reg_j83(h3o):
    return regular_module(h3o)


def perturbed_regular(j, i=1, r=0, c=2):
    mats = list(regular_module(j).mats)
    arr = mats[i].a.copy()
    arr[r, c] += mats[i].den
    mats[i] = IMat(arr, mats[i].den)
    return ModuleRep(j, mats, name="perturbed")


class TestModuleRep:
    def test_regular_action_is_multiplication(self):
        j = make_jspin(3)
        r = regular_module(j)
        rng = random.Random(0)
        for _ in range(10):
            x = random_elem(j, rng)
            y = random_elem(j, rng)
            assert r.act(x, y.coords) == (x * y).coords

    def test_unital_flag(self, reg_j83):
        assert reg_j83.is_unital()

    def test_free_module_carrier(self, h3o):
        assert free_module(h3o, 2).carrier_dim == 54
        assert free_module(make_jspin(2), 3).carrier_dim == 9

    def test_free_rank_one_is_regular(self):
        j = make_jspin(2)
        assert free_module(j, 1).mats == regular_module(j).mats

    def test_json_round_trip(self):
        j = make_jspin(2)
        r = regular_module(j)
        back = ModuleRep.from_json(j, r.to_json())
        assert back.mats == r.mats

    def test_bad_shapes_rejected(self):
        j = make_jspin(2)
        with pytest.raises(ValueError):
            ModuleRep(j, [IMat.eye(2)] * 2)  # wrong count
        with pytest.raises(ValueError):
            ModuleRep(j, [IMat.eye(2), IMat.eye(3), IMat.eye(2)])


class TestAxioms:
    def test_regular_modules_pass(self, reg_j83):
        for j in (make_jspin(4), make_hermitian("C", 2), make_hermitian("H", 2)):
            assert check_module_axioms(regular_module(j), trials=8)
        assert check_module_axioms(reg_j83, trials=5)

    def test_free_modules_pass(self, h3o):
        assert check_module_axioms(free_module(make_jspin(2), 3), trials=8)
        assert check_module_axioms(free_module(h3o, 2), trials=3)

    def test_small_dims_use_linearized_forms(self):
        r = check_module_axioms(regular_module(make_jspin(3)), trials=5)
        assert r.ok and r.details["linearized"]

    def test_perturbed_fails_with_witness(self):
        bad = perturbed_regular(make_jspin(3))
        r = check_module_axioms(bad, trials=5)
        assert not r.ok
        assert r.witness["axiom"] in ("L1", "intder", "Lxx2-linearized", "Lx3-linearized")

    def test_nonunital_action_flagged(self):
        j = make_jspin(2)
        mats = [m.scale(2) for m in regular_module(j).mats]
        r = check_module_axioms(ModuleRep(j, mats, name="scaled"), trials=3)
        assert not r.ok and r.witness["axiom"] == "L1"


class TestSplitNull:
    def test_extension_structure(self):
        j = make_jspin(2)
        ext = split_null_extension(regular_module(j))
        assert ext.dim == 6
        # M . M = 0 block
        phi = ext.basis_elem(3)
        psi = ext.basis_elem(4)
        assert (phi * psi).is_zero()
        # J action block matches multiplication
        x = ext.basis_elem(1)
        assert not (x * phi).is_zero()
        assert verify_jordan(ext, trials=10)

    def test_extension_unit(self):
        j = make_hermitian("C", 2)
        ext = split_null_extension(regular_module(j))
        u = ext.unit_elem()
        assert u.coords[: j.dim] == j.unit_elem().coords

    def test_gate_passes_for_modules(self, reg_j83):
        assert verify_split_null(regular_module(make_jspin(3)), trials=5)
        assert verify_split_null(free_module(make_hermitian("R", 2), 2), trials=5)

    def test_gate_fails_for_non_module(self):
        bad = perturbed_regular(make_jspin(3))
        assert not verify_split_null(bad, trials=5).ok


class TestPierce:
    def test_rejects_non_idempotent(self):
        j = make_jspin(2)
        r = regular_module(j)
        with pytest.raises(ValueError):
            pierce_decompose(r, 2 * j.unit_elem())

    def test_unit_idempotent(self):
        j = make_jspin(3)
        split = pierce_decompose(regular_module(j), j.unit_elem())
        assert split.dims == (0, 0, 4)

    def test_h2r_primitive_idempotent(self):
        j = make_hermitian("R", 2)
        split = pierce_decompose(regular_module(j), j.basis_elem(0))
        assert split.dims == (1, 1, 1)

    def test_j83_primitive_idempotent(self, reg_j83, h3o):
        split = pierce_decompose(reg_j83, h3o.basis_elem(0))
        assert split.dims == (10, 16, 1)

    def test_eigenbases_span_and_act_exactly(self, reg_j83, h3o):
        split = pierce_decompose(reg_j83, h3o.basis_elem(0))
        all_vecs = []
        for ev, vecs in split.bases.items():
            for v in vecs:
                img = reg_j83.act(h3o.basis_elem(0), v)
                assert img == tuple(ev * c for c in v)
                all_vecs.append(v)
        assert SpanQ(all_vecs, 27).dimension == 27

    def test_spin_factor_idempotent(self):
        # p = (1 + v)/2 with v a unit spin vector is idempotent
        j = make_jspin(3)
        p = j.from_coords([Fraction(1, 2), Fraction(1, 2), 0, 0])
        assert p * p == p
        split = pierce_decompose(regular_module(j), p)
        assert split.dims == (1, 2, 1)


class TestCommutant:
    def test_regular_exceptional_is_irreducible(self, reg_j83):
        assert module_commutant(reg_j83) == 1

    def test_free_module_multiplicity(self, h3o):
        assert module_commutant(free_module(h3o, 2)) == 4
        assert module_commutant(free_module(h3o, 3)) == 9

    def test_direct_sum_algebra(self):
        rr = direct_sum([make_hermitian("R", 1), make_hermitian("R", 1)])
        assert module_commutant(regular_module(rr)) == 2

    def test_shortcut_matches_direct(self):
        f = free_module(make_jspin(2), 3)
        assert module_commutant(f) == module_commutant(f, method="direct") == 9

    def test_regular_spin_factor(self):
        assert module_commutant(regular_module(make_jspin(4))) == 1
