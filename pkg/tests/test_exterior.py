from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import forms, skew_matrices
from nilkilling.exterior import (
    ExteriorForm,
    bidegree_split,
    contract,
    contract_basis,
    derivation_extend,
    endo_from_form,
    form_from_endo,
    format_form,
    inner_product,
    monomials,
    wedge,
    wedge_power,
)
from nilkilling.linalg import as_matrix, commutator, zeros

E = ExteriorForm.basis
J = as_matrix([[0, -1], [1, 0]])


def vec(n, i):
    return ExteriorForm.vector(n, {i: 1})


class TestWedge:
    def test_basis_product(self):
        assert wedge(vec(4, 0), vec(4, 1)) == E(4, 0, 1)
        assert wedge(vec(4, 0), vec(4, 1)).coeffs == {0b11: 1}

    def test_alternation(self):
        assert wedge(vec(4, 0), vec(4, 0)).is_zero()

    def test_disjoint(self):
        assert wedge(E(4, 0, 1), E(4, 2, 3)) == E(4, 0, 1, 2, 3)

    def test_reordered_basis_sign(self):
        assert E(3, 1, 0) == -E(3, 0, 1)
        assert E(3, 2, 0, 1) == E(3, 0, 1, 2)

    def test_overflow_degree_is_zero(self):
        out = wedge(E(3, 0, 1), E(3, 1, 2))
        assert out.is_zero() and out.degree == 4

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            wedge(vec(3, 0), vec(4, 0))

    @given(forms(5), forms(5))
    def test_graded_commutative(self, a, b):
        sign = -1 if a.degree * b.degree % 2 else 1
        assert wedge(a, b) == sign * wedge(b, a)

    @given(forms(5), forms(5), forms(5))
    def test_associative(self, a, b, c):
        assert wedge(wedge(a, b), c) == wedge(a, wedge(b, c))


class TestContract:
    def test_sign_anchor(self):
        assert contract(vec(3, 0), E(3, 0, 1)) == vec(3, 1)
        assert contract(vec(3, 1), E(3, 0, 1)) == -vec(3, 0)
        assert contract(vec(3, 2), E(3, 0, 1)).is_zero()

    def test_degree_zero_gives_zero(self):
        out = contract(vec(3, 0), ExteriorForm.scalar(3, 5))
        assert out.is_zero() and out.degree == 0

    def test_needs_vector(self):
        with pytest.raises(ValueError):
            contract(E(3, 0, 1), E(3, 0, 1))

    @given(forms(5), forms(5), forms(5, degree=1))
    def test_antiderivation(self, a, b, x):
        sign = -1 if a.degree % 2 else 1
        lhs = contract(x, wedge(a, b))
        rhs = sign * wedge(a, contract(x, b)) if b.degree else ExteriorForm.zero(5, lhs.degree)
        if a.degree:
            # x _| (scalar) is stored as the degree-0 zero form, so that term is skipped
            rhs = rhs + wedge(contract(x, a), b) if b.degree else wedge(contract(x, a), b)
        if a.degree + b.degree == 0:
            assert lhs.is_zero()
        else:
            assert lhs == rhs

    @given(forms(5), forms(5, degree=1))
    def test_square_zero(self, a, x):
        assert contract(x, contract(x, a)).is_zero()


class TestDerivation:
    def test_rotation_kills_area(self):
        assert derivation_extend(J, E(2, 0, 1)).is_zero()

    def test_degree_one_is_the_map(self):
        assert derivation_extend(J, vec(2, 0)) == vec(2, 1)

    def test_rejects_non_skew(self):
        with pytest.raises(ValueError):
            derivation_extend(as_matrix([[1, 0], [0, 0]]), vec(2, 0))

    @given(skew_matrices(4), skew_matrices(4))
    def test_two_forms_commutator(self, a, b):
        assert derivation_extend(a, form_from_endo(b)) == form_from_endo(commutator(a, b))

    @given(skew_matrices(5), forms(5), forms(5))
    def test_leibniz(self, a, f, g):
        lhs = derivation_extend(a, wedge(f, g))
        rhs = wedge(derivation_extend(a, f), g) + wedge(f, derivation_extend(a, g))
        assert lhs == rhs

    @given(skew_matrices(5), st.integers(0, 5), st.data())
    def test_skew_on_forms(self, a, k, data):
        f = data.draw(forms(5, degree=k))
        g = data.draw(forms(5, degree=k))
        assert inner_product(derivation_extend(a, f), g) + inner_product(f, derivation_extend(a, g)) == 0


class TestEndoForms:
    def test_rotation(self):
        assert form_from_endo(J) == E(2, 0, 1)

    def test_zero(self):
        assert form_from_endo(zeros(3)).is_zero()

    def test_rejects_non_skew(self):
        with pytest.raises(ValueError):
            form_from_endo(as_matrix([[0, 1], [1, 0]]))

    @given(skew_matrices(6))
    def test_round_trip(self, b):
        assert np.array_equal(endo_from_form(form_from_endo(b)), b)

    @given(skew_matrices(4), forms(4, degree=1))
    def test_endo_is_contraction(self, b, x):
        w = form_from_endo(b)
        bx = ExteriorForm.vector(4, tuple(endo_from_form(w).dot(np.array(x.to_vector(), dtype=object))))
        assert bx == contract(x, w)


class TestInnerProduct:
    def test_examples(self):
        assert inner_product(E(4, 0, 1), E(4, 0, 1)) == 1
        assert inner_product(E(4, 0, 1), E(4, 0, 2)) == 0
        assert inner_product(2 * E(4, 0, 1) + E(4, 2, 3), E(4, 2, 3)) == 1

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            inner_product(E(4, 0, 1), vec(4, 0))

    @given(forms(5))
    def test_positive(self, a):
        assert inner_product(a, a) > 0 or a.is_zero()


class TestBidegree:
    def test_example(self):
        a = E(3, 0, 1) + E(3, 0, 2)
        parts = bidegree_split(a, [0, 1])
        assert parts[2] == E(3, 0, 1)
        assert parts[1] == E(3, 0, 2)
        assert parts[0].is_zero()

    def test_pure_v_form(self):
        a = E(5, 0, 1, 2)
        parts = bidegree_split(a, [0, 1, 2])
        assert parts[3] == a and all(p.is_zero() for p in parts[:3])

    def test_bad_partition(self):
        with pytest.raises(ValueError):
            bidegree_split(E(3, 0, 1), [0, 1], [1, 2])

    @given(forms(5, degree=3))
    def test_reassembly(self, a):
        parts = bidegree_split(a, [0, 1, 2])
        total = ExteriorForm.zero(5, 3)
        for l, p in enumerate(parts):
            total = total + p
            assert all(bin(m & 0b111).count("1") == l for m in p.coeffs)
        assert total == a


class TestStorage:
    def test_zero_pruned(self):
        assert ExteriorForm(3, 1, {1: 0, 2: Fraction(1, 2)}).coeffs == {2: Fraction(1, 2)}

    def test_degree_checked(self):
        with pytest.raises(ValueError):
            ExteriorForm(3, 2, {0b1: 1})

    def test_addition_shape_checked(self):
        with pytest.raises(ValueError):
            E(3, 0, 1) + vec(3, 0)

    def test_floats_rejected(self):
        with pytest.raises(TypeError):
            ExteriorForm(3, 1, {1: 0.5})

    def test_monomial_order(self):
        assert monomials(3, 2) == [0b011, 0b101, 0b110]

    def test_coordinates_round_trip(self):
        a = E(4, 0, 2) - Fraction(1, 2) * E(4, 1, 3)
        assert ExteriorForm.from_coordinates(4, 2, a.coordinates()) == a


def test_format():
    a = E(4, 0, 1) - Fraction(1, 2) * E(4, 2, 3)
    assert format_form(a) == "e1^e2 - 1/2 e3^e4"
    assert format_form(ExteriorForm.zero(3, 2)) == "0"
    assert format_form(-E(3, 0, 1, 2), ["a", "b", "z"]) == "-a^b^z"
    assert format_form(ExteriorForm.scalar(3, 2)) == "2"


def test_powers_of_symplectic_form():
    w = E(4, 0, 1) + E(4, 2, 3)
    assert wedge_power(w, 2) == 2 * E(4, 0, 1, 2, 3)
    assert wedge_power(w, 0) == ExteriorForm.scalar(4)


def test_contract_basis_matches_contract():
    a = E(4, 0, 2, 3) + 3 * E(4, 1, 2, 3)
    for i in range(4):
        assert contract_basis(i, a) == contract(vec(4, i), a)
