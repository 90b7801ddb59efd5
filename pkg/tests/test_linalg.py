from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import rationals
from nilkilling import kernels, linalg
from nilkilling.linalg import PRIME, PRIMES, nullspace, rational_reconstruct


def dense(rows, n):
    return [[Fraction(r.get(j, 0)) for j in range(n)] for r in rows]


def brute_nullspace_dim(rows, n):
    return n - linalg.rank(dense(rows, n)) if rows else n


def test_frac_rejects_floats():
    with pytest.raises(TypeError):
        linalg.frac(0.5)
    assert linalg.frac("3/4") == Fraction(3, 4)


def test_rational_reconstruct():
    for q in (Fraction(3, 7), Fraction(-22, 5), Fraction(1000, 1)):
        a = q.numerator * pow(q.denominator, -1, PRIME) % PRIME
        assert rational_reconstruct(a) == q


def test_nullspace_standard_basis():
    # x0 + x1 = 0, x2 = 2 x3
    rows = [{0: 1, 1: 1}, {2: 1, 3: -2}]
    assert nullspace(rows, 4) == [
        (Fraction(-1), Fraction(1), Fraction(0), Fraction(0)),
        (Fraction(0), Fraction(0), Fraction(2), Fraction(1)),
    ]


def test_nullspace_empty_system():
    assert len(nullspace([], 3)) == 3
    assert nullspace([{0: 0}], 2) == [(1, 0), (0, 1)]


def test_large_denominators_need_several_primes():
    big = Fraction(10**40 + 7, 3**50)
    basis = nullspace([{0: 1, 1: -big}], 2)
    assert basis == [(big, Fraction(1))]
    assert len(PRIMES) > 1


@given(st.lists(st.dictionaries(st.integers(0, 6), rationals, max_size=4), max_size=8))
def test_nullspace_matches_exact_rank(rows):
    basis = nullspace(rows, 7)
    assert len(basis) == brute_nullspace_dim(rows, 7)
    for v in basis:
        for r in rows:
            assert sum(c * v[j] for j, c in r.items()) == 0


@pytest.mark.parametrize("name", kernels.available_backends())
def test_backends_agree(name):
    rng = np.random.default_rng(1)
    mat = rng.integers(0, 9, size=(30, 12), dtype=np.int64)
    mat[:, 8:] = mat[:, :4] * 2
    ref, piv_ref = kernels.get_backend("python").rref_mod_p(mat.copy(), PRIME)
    out, piv = kernels.get_backend(name).rref_mod_p(mat.copy(), PRIME)
    assert piv == piv_ref == list(range(8))
    assert np.array_equal(out, ref)


def test_backend_choice_in_nullspace():
    rows = [{0: 2, 1: 3, 2: -1}, {1: 1, 3: 5}]
    results = {b: nullspace(rows, 4, backend=b) for b in kernels.available_backends()}
    assert len({tuple(r) for r in results.values()}) == 1


def test_unknown_backend():
    with pytest.raises(ValueError):
        kernels.get_backend("fortran")


def test_rref_and_spans():
    rows, piv = linalg.rref([(2, 4, 0), (1, 2, 1)])
    assert piv == [0, 2]
    assert rows == [(1, 2, 0), (0, 0, 1)]
    assert linalg.same_span([(1, 0), (0, 1)], [(1, 1), (1, -1)])
    assert not linalg.contains_span([(1, 0)], [(0, 1)])


def test_inverse_and_det():
    m = linalg.as_matrix([[2, 1], [1, 1]])
    assert linalg.det(m) == 1
    assert np.array_equal(linalg.inverse(m).dot(m), linalg.identity(2))
    with pytest.raises(ZeroDivisionError):
        linalg.inverse(linalg.as_matrix([[1, 2], [2, 4]]))


def test_rational_sqrt():
    assert linalg.rational_sqrt(Fraction(9, 4)) == Fraction(3, 2)
    with pytest.raises(ValueError):
        linalg.rational_sqrt(2)
