from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import forms
from nilkilling import catalog
from nilkilling.exterior import ExteriorForm, wedge
from nilkilling.killing import nabla_form
from nilkilling.liealg import (
    MetricLieAlgebra,
    NonRationalNormError,
    NotTwoStepError,
    TwoStepData,
    ad_star,
    center,
    check_effective,
    commutator_ideal,
    is_two_step,
    levi_civita,
    lie_differential,
    nilpotency_class,
    orthonormalize,
    two_step_data,
    validate,
)
from nilkilling.linalg import as_matrix, block_diag, identity, is_skew, zeros

E = ExteriorForm.basis
H = Fraction(1, 2)


def h3():
    return catalog.h3()


def all_catalog():
    return [e.algebra() for e in catalog.all_entries()] + [
        catalog.free_two_step(2), catalog.random_two_step(4, 2, 0), catalog.random_two_step(4, 1, 3),
    ]


class TestValidate:
    def test_abelian(self):
        assert validate(catalog.abelian(3)) == []

    def test_heisenberg(self):
        assert validate(h3()) == []

    def test_broken_antisymmetry(self):
        alg = MetricLieAlgebra(["e1", "e2", "z1"], {(0, 1): {2: 1}, (1, 0): {2: 1}})
        kinds = [v.kind for v in validate(alg)]
        assert "antisymmetry" in kinds

    def test_consistent_both_orderings(self):
        alg = MetricLieAlgebra(["e1", "e2", "z1"], {(0, 1): {2: 1}, (1, 0): {2: -1}})
        assert validate(alg) == []

    def test_jacobi_names_triple(self):
        alg = MetricLieAlgebra(["a", "b", "c"], {(0, 1): {2: 1}, (0, 2): {0: 1}})
        (v,) = validate(alg)
        assert v.kind == "jacobi" and "(a, b, c)" in v.detail

    def test_gram_checks(self):
        alg = MetricLieAlgebra(["x", "y"], {}, gram=[[1, 2], [2, 1]])
        assert [v.kind for v in validate(alg)] == ["gram-positivity"]
        alg = MetricLieAlgebra(["x", "y"], {}, gram=[[1, 0], [1, 1]])
        assert [v.kind for v in validate(alg)] == ["gram-symmetry"]

    @pytest.mark.parametrize("alg", all_catalog(), ids=lambda a: a.name)
    def test_catalog_valid(self, alg):
        assert validate(alg) == []


class TestStructure:
    def test_heisenberg_center_commutator(self):
        z = (0, 0, 1)
        assert center(h3()) == [z]
        assert commutator_ideal(h3()) == [z]

    def test_abelian(self):
        assert commutator_ideal(catalog.abelian(3)) == []
        assert len(center(catalog.abelian(3))) == 3

    def test_heisenberg_plus_line(self):
        alg = catalog.sum_of(h3(), catalog.abelian(1))
        assert len(center(alg)) == 2 and len(commutator_ideal(alg)) == 1

    def test_classes(self):
        assert nilpotency_class(h3()) == 2 and is_two_step(h3())
        assert nilpotency_class(catalog.abelian(4)) == 1 and not is_two_step(catalog.abelian(4))
        assert nilpotency_class(catalog.free_three_step()) == 3
        assert not is_two_step(catalog.free_three_step())

    def test_not_nilpotent(self):
        so3 = MetricLieAlgebra(["a", "b", "c"], {(0, 1): {2: 1}, (1, 2): {0: 1}, (2, 0): {1: 1}})
        assert validate(so3) == []
        assert nilpotency_class(so3) is None


class TestOrthonormalize:
    def test_identity_unchanged(self):
        alg, p = orthonormalize(h3())
        assert alg is h3() or alg.brackets == h3().brackets
        assert np.array_equal(p, identity(3))

    def test_rescaled_gram(self):
        alg = MetricLieAlgebra(["e1", "e2", "z1"], {(0, 1): {2: 1}}, gram=np.diag([4, 1, 1]))
        out, p = orthonormalize(alg)
        assert out.is_orthonormal()
        assert p[0, 0] == H
        assert out.bracket_basis(0, 1) == {2: H}

    def test_irrational_norm(self):
        alg = MetricLieAlgebra(["e1", "e2", "z1"], {(0, 1): {2: 1}}, gram=np.diag([2, 1, 1]))
        with pytest.raises(NonRationalNormError):
            orthonormalize(alg)


class TestAdStar:
    def test_abelian(self):
        assert not any(ad_star(catalog.abelian(3), (1, 2, 3)).flat)

    def test_heisenberg(self):
        m = ad_star(h3(), (1, 0, 0))
        assert tuple(m[:, 2]) == (0, 1, 0)

    def test_defining_identity(self):
        g = as_matrix([[2, 1, 0], [1, 2, 0], [0, 0, 1]])
        alg = MetricLieAlgebra(["e1", "e2", "z1"], {(0, 1): {2: 1}}, gram=g)
        for x in [(1, 2, 3), (0, -1, 5)]:
            assert np.array_equal(ad_star(alg, x).T.dot(g), g.dot(alg.ad(x)))


class TestConnection:
    def test_heisenberg_values(self):
        conn = levi_civita(h3())
        assert conn.vector(0, 1) == (0, 0, H)
        assert conn.vector(0, 2) == (0, -H, 0)
        assert conn.vector(2, 0) == (0, -H, 0)

    def test_abelian(self):
        conn = levi_civita(catalog.abelian(3))
        assert not any(conn.table.flat)

    @pytest.mark.parametrize("alg", all_catalog(), ids=lambda a: a.name)
    def test_torsion_and_metric(self, alg):
        conn = levi_civita(alg)
        assert conn.torsion_violations() == []
        assert conn.metric_violations() == []

    def test_non_orthonormal_gram(self):
        g = as_matrix([[2, 1, 0], [1, 2, 0], [0, 0, 3]])
        alg = MetricLieAlgebra(["e1", "e2", "z1"], {(0, 1): {2: 1}}, gram=g)
        conn = levi_civita(alg)
        assert conn.torsion_violations() == [] and conn.metric_violations() == []

    @pytest.mark.parametrize("alg", [catalog.h5(), catalog.quaternionic(), catalog.random_two_step(4, 2, 1)],
                             ids=lambda a: a.name)
    def test_two_step_closed_formulas(self, alg):
        data = two_step_data(alg)
        conn = levi_civita(data.algebra)
        c = data.algebra.structure
        for a in data.v_idx:
            for b in data.v_idx:
                assert conn.vector(a, b) == tuple(H * c[a, b])
            for t, z in enumerate(data.z_idx):
                jx = tuple(-H * data.jmap_full(t)[:, a])
                assert conn.vector(a, z) == jx and conn.vector(z, a) == jx
        for z in data.z_idx:
            for w in data.z_idx:
                assert not any(conn.vector(z, w))

    @given(st.data())
    def test_leibniz_on_forms(self, data):
        alg = data.draw(st.sampled_from([h3(), catalog.h5(), catalog.free_three_step()]))
        conn = levi_civita(alg)
        a = data.draw(forms(alg.dim))
        b = data.draw(forms(alg.dim))
        y = data.draw(forms(alg.dim, degree=1)).to_vector()
        lhs = nabla_form(conn, y, wedge(a, b))
        rhs = wedge(nabla_form(conn, y, a), b) + wedge(a, nabla_form(conn, y, b))
        assert lhs == rhs


class TestTwoStepData:
    def test_heisenberg(self):
        data = two_step_data(h3())
        assert np.array_equal(data.jmaps[0], as_matrix([[0, -1], [1, 0]]))
        assert check_effective(data)

    def test_h5_round_trip(self):
        a = block_diag(catalog.J(), 2 * catalog.J())
        assert np.array_equal(two_step_data(catalog.h5()).jmaps[0], a)

    def test_quaternionic_anticommute(self):
        j1, j2 = two_step_data(catalog.quaternionic()).jmaps
        for j in (j1, j2):
            assert is_skew(j) and np.array_equal(j.dot(j), -identity(4))
        assert not any((j1.dot(j2) + j2.dot(j1)).flat)

    def test_dead_direction(self):
        j = block_diag(catalog.J(), zeros(1))
        alg = h3()
        data = TwoStepData(alg, [0, 1], [2], [catalog.J()])
        dead = TwoStepData(alg, [0, 1, 2], [], [j])
        assert check_effective(data)
        assert not check_effective(dead)

    @pytest.mark.parametrize("seed", range(4))
    def test_random_effective(self, seed):
        alg = catalog.random_two_step(4, 2, seed)
        data = two_step_data(alg)
        assert check_effective(data) and all(is_skew(j) for j in data.jmaps)

    def test_rotated_center_rebased(self):
        alg = catalog.rotated(catalog.quaternionic(), 2)
        data = two_step_data(alg)
        assert data.basis_change is not None
        assert data.dim_z == 2 and check_effective(data)

    def test_not_two_step(self):
        with pytest.raises(NotTwoStepError):
            two_step_data(catalog.free_three_step())


class TestDifferential:
    def test_heisenberg(self):
        alg = h3()
        assert lie_differential(alg, E(3, 2)) == -E(3, 0, 1)
        assert lie_differential(alg, E(3, 0)).is_zero()

    @given(st.data())
    def test_square_zero(self, data):
        alg = data.draw(st.sampled_from(all_catalog()))
        a = data.draw(forms(alg.dim))
        assert lie_differential(alg, lie_differential(alg, a)).is_zero()

    def test_square_zero_detects_broken_jacobi(self):
        bad = MetricLieAlgebra(["a", "b", "c"], {(0, 1): {2: 1}, (0, 2): {0: 1}})
        assert validate(bad)
        assert any(not lie_differential(bad, lie_differential(bad, E(3, i))).is_zero() for i in range(3))
