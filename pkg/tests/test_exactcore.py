import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from stabletwist.exactcore import NoSolution, NotPrime, Reducible, make_field

FIELDS = [(2, 1), (3, 1), (2, 2), (3, 2), (5, 1)]


def naive_matmul(F, a, b):
    out = np.zeros((a.shape[0], b.shape[1]), np.uint8)
    for i in range(a.shape[0]):
        for j in range(b.shape[1]):
            acc = 0
            for k in range(a.shape[1]):
                acc = int(F.add(acc, F.mul(a[i, k], b[k, j])))
            out[i, j] = acc
    return out


def test_prime_field_gf2():
    F = make_field(2, 1, [0, 1])
    assert F.q == 2 and F.poly == (0, 1)
    assert F.mul(1, 1) == 1 and F.add(1, 1) == 0


def test_gf4_generator_is_cube_root_of_unity():
    F = make_field(2, 2, [1, 1, 1])
    w = F.gen
    w2 = F.mul(w, w)
    assert F.add(F.add(w2, w), 1) == 0
    assert F.power(w, 3) == 1 and w != 1


def test_reducible_polynomial_rejected():
    with pytest.raises(Reducible):
        make_field(2, 2, [1, 0, 1])


def test_non_prime_rejected():
    with pytest.raises(NotPrime):
        make_field(4)


def test_poly_must_be_monic_of_right_degree():
    with pytest.raises(ValueError):
        make_field(2, 2, [1, 1])


@pytest.mark.parametrize("p,m", [(2, 1), (3, 1), (2, 2)])
def test_field_axioms_exhaustive(p, m):
    F = make_field(p, m)
    E = F.elements
    for a, b, c in itertools.product(E, repeat=3):
        assert F.add(F.add(a, b), c) == F.add(a, F.add(b, c))
        assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    for a in E:
        assert F.add(a, F.neg(a)) == 0
        assert F.mul(a, 1) == a
        if a:
            assert F.mul(a, F.inv(a)) == 1
    with pytest.raises(ZeroDivisionError):
        F.inv(0)


def test_kernel_examples():
    F = make_field(2)
    assert F.kernel_basis(F.eye(3)).shape == (0, 3)
    assert np.array_equal(F.kernel_basis(F.zeros(2, 3)), F.eye(3))
    assert F.kernel_basis(np.array([[1, 1], [1, 1]], np.uint8)).tolist() == [[1, 1]]


def test_solve_right_examples():
    F = make_field(2)
    B = np.array([[1, 0], [1, 1]], np.uint8)
    assert np.array_equal(F.solve_right(F.eye(2), B), B)
    with pytest.raises(NoSolution):
        F.solve_right(F.zeros(2, 2), B)
    X = F.solve_right(np.array([[1, 1], [0, 0]], np.uint8), np.array([[1], [0]], np.uint8))
    assert X.tolist() == [[1], [0]]


def _matrices(q, max_rows=12, max_cols=12):
    return st.tuples(st.integers(1, max_rows), st.integers(1, max_cols)).flatmap(
        lambda s: arrays(np.uint8, s, elements=st.integers(0, q - 1))
    )


@pytest.mark.parametrize("p,m", FIELDS)
def test_matmul_matches_naive(p, m):
    F = make_field(p, m)
    rng = np.random.default_rng(p * 10 + m)
    for _ in range(5):
        a = F.random(rng, (4, 7))
        b = F.random(rng, (7, 3))
        assert np.array_equal(F.matmul(a, b), naive_matmul(F, a, b))


@given(_matrices(2, 64, 64))
def test_rank_nullity_gf2(M):
    F = make_field(2)
    K = F.kernel_basis(M)
    assert F.rank(M) + K.shape[0] == M.shape[1]
    assert not F.matmul(M, K.T).any()


@given(_matrices(4, 64, 64))
def test_rank_nullity_gf4(M):
    F = make_field(2, 2)
    K = F.kernel_basis(M)
    assert F.rank(M) + K.shape[0] == M.shape[1]
    assert not F.matmul(M, K.T).any()


@given(_matrices(9, 10, 10))
def test_rank_nullity_gf9(M):
    F = make_field(3, 2)
    K = F.kernel_basis(M)
    assert F.rank(M) + K.shape[0] == M.shape[1]
    assert not F.matmul(M, K.T).any()


@given(_matrices(4, 10, 10), st.integers(0, 2**32 - 1))
def test_solve_right_reproduces(A, seed):
    F = make_field(2, 2)
    rng = np.random.default_rng(seed)
    B = F.matmul(A, F.random(rng, (A.shape[1], 3)))
    X = F.solve_right(A, B)
    assert np.array_equal(F.matmul(A, X), B)
    C = F.random(rng, (A.shape[0], 2))
    try:
        Y = F.solve_right(A, C)
    except NoSolution:
        assert F.rank(np.hstack([A, C])) > F.rank(A)
    else:
        assert np.array_equal(F.matmul(A, Y), C)


@given(_matrices(3, 10, 10))
def test_rref_is_reduced(M):
    F = make_field(3)
    red, piv = F.rref(M)
    assert len(piv) == red.shape[0] == F.rank(M)
    for i, c in enumerate(piv):
        assert red[i, c] == 1
        assert np.count_nonzero(red[:, c]) == 1
        assert not red[i, :c].any()
    assert list(piv) == sorted(piv)


def test_inverse_and_span_helpers():
    F = make_field(3)
    rng = np.random.default_rng(1)
    while True:
        M = F.random(rng, (5, 5))
        if F.is_invertible(M):
            break
    assert np.array_equal(F.matmul(M, F.inverse(M)), F.eye(5))
    U = F.span(np.array([[1, 0, 0], [0, 1, 0]], np.uint8))
    V = F.span(np.array([[0, 1, 0], [0, 0, 1]], np.uint8))
    assert F.intersect(U, V).tolist() == [[0, 1, 0]]
    assert F.in_span(U, np.array([[2, 1, 0]], np.uint8))
    assert not F.in_span(U, np.array([[0, 0, 1]], np.uint8))
